#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace censpl {

// Root of every exception thrown by the library. The CLI maps these to exit
// code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (d < d0, sigma <= 0,
// non-finite input, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class DegenerateDesign : public Error {
 public:
  using Error::Error;
};

class TooFewSamples : public Error {
 public:
  using Error::Error;
};

// Every sample sits at the censoring level; the likelihood has no interior
// maximum.
class AllCensored : public Error {
 public:
  using Error::Error;
};

class NonFinite : public Error {
 public:
  using Error::Error;
};

class NonFiniteObjective : public Error {
 public:
  using Error::Error;
};

class SingularInformation : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class MissingMetadata : public Error {
 public:
  explicit MissingMetadata(const std::string& key)
      : Error("missing required metadata '" + key + "'"), key_(key) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

class MissingCensorLevel : public MissingMetadata {
 public:
  MissingCensorLevel() : MissingMetadata("c") {}
};

class InvariantError : public Error {
 public:
  using Error::Error;
};

class WriteError : public Error {
 public:
  using Error::Error;
};

class SpecError : public Error {
 public:
  using Error::Error;
};

class AllReplicatesFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace censpl
