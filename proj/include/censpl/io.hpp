#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "censpl/avar.hpp"
#include "censpl/model.hpp"
#include "censpl/montecarlo.hpp"
#include "censpl/ols.hpp"
#include "censpl/tobit.hpp"

namespace censpl::io {

inline constexpr const char* kToolName = "censpl";
inline constexpr const char* kToolVersion = "0.1.0";

// Values that beat the file's '# key = value' metadata.
struct IngestOverrides {
  std::optional<double> d0;
  std::optional<double> c;
  std::optional<double> frequency_hz;
};

// Measurement CSV:
//
//   # d0 = 10
//   # c = 140
//   # frequency_hz = 5.6e9
//   distance_m,pathloss_db[,censored]
//   10,67.2,0
//
// Without a censored column, rows with pathloss >= c are censored and stored
// at c. With one, censored=1 rows must have pathloss >= c and are stored at c;
// censored=0 rows must be below c. Errors carry the 1-based line number.
Dataset parse_dataset(std::istream& in, const IngestOverrides& overrides = {});
Dataset read_dataset(const std::filesystem::path& path, const IngestOverrides& overrides = {});

void format_dataset(std::ostream& out, const Dataset& dataset);
// Writes through a temporary file and renames, so a failure leaves no partial
// output.
void write_dataset(const Dataset& dataset, const std::filesystem::path& path);

// 64-bit FNV-1a of the raw bytes, as 16 hex digits.
std::string fnv1a_digest(const std::string& bytes);
std::string file_digest(const std::filesystem::path& path);

struct FitReport {
  std::string input_path;
  std::string input_digest;
  // Dataset summary
  std::size_t count = 0;
  std::size_t n_censored = 0;
  double d0 = 0.0;
  double c = 0.0;
  std::optional<double> frequency_hz;

  std::optional<OlsFit> ols;
  std::optional<TobitFit> tobit;
  std::optional<TobitStandardErrors> tobit_se;
  std::optional<std::string> tobit_se_error;
};

FitReport make_fit_report(const Dataset& dataset, std::string input_path = {},
                          std::string input_digest = {});

// Stable key order. Non-finite numbers are written as null. The OLS block has
// no se_sigma_sq key.
nlohmann::ordered_json result_to_json(const FitReport& report);
void write_result(const FitReport& report, const std::filesystem::path& path);

struct PlotCurve {
  std::string name;
  PathlossParams params;
};

// Long-format CSV with columns series,distance_m,pathloss_db,censored:
// one 'sample' row per measurement, 200 log-spaced rows per curve from d0 to
// the largest distance, and two 'censoring_level' rows when c is finite.
void emit_plot_data(const Dataset& dataset, const std::vector<PlotCurve>& curves,
                    const std::filesystem::path& csv_path);
void format_plot_data(std::ostream& out, const Dataset& dataset,
                      const std::vector<PlotCurve>& curves);

// Static SVG: log-distance x axis, one circle per sample (hollow when
// censored), one polyline per curve and a dashed censoring line.
void emit_svg(const Dataset& dataset, const std::vector<PlotCurve>& curves,
              const std::filesystem::path& svg_path);
std::string render_svg(const Dataset& dataset, const std::vector<PlotCurve>& curves);

std::vector<double> curve_distances(const Dataset& dataset, std::size_t points = 200);

// Experiment configuration (JSON). "c" may be a number, "inf", or
// {"censored_fraction": f}, which solves for the level with
// censoring_level_for_fraction. Throws SpecError.
ExperimentSpec experiment_spec_from_json(const nlohmann::json& j);
ExperimentSpec read_experiment_spec(const std::filesystem::path& path);

nlohmann::ordered_json report_to_json(const ExperimentReport& report, bool include_records = true);
void write_json(const nlohmann::ordered_json& j, const std::filesystem::path& path);

// Parameter blocks of a result file written by write_result, keyed "ols" and
// "tobit" when present.
std::vector<PlotCurve> curves_from_result(const nlohmann::json& result);

}  // namespace censpl::io
