#include "censpl/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "censpl/errors.hpp"

namespace censpl::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || std::isnan(v)) return std::nullopt;
  return v;
}

double parse_number(std::string_view s, std::size_t line, std::string_view what) {
  const auto v = to_double(s);
  if (!v) {
    throw ParseError(line, "cannot parse " + std::string(what) + " '" + std::string(s) + "'");
  }
  return *v;
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Writes `body` to a sibling temporary file, then renames it over `path`.
template <typename Body>
void atomic_write(const std::filesystem::path& path, Body&& body) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw WriteError("cannot open '" + tmp.string() + "' for writing");
    body(out);
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw WriteError("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw WriteError("cannot move output into place at '" + path.string() + "': " + ec.message());
  }
}

nlohmann::ordered_json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
  if (!v) return nullptr;
  return number_or_null(*v);
}

nlohmann::ordered_json params_json(const PathlossParams& p) {
  nlohmann::ordered_json j;
  j["pl_d0"] = number_or_null(p.pl_d0);
  j["n"] = number_or_null(p.n);
  j["sigma"] = number_or_null(p.sigma);
  return j;
}

}  // namespace

Dataset parse_dataset(std::istream& in, const IngestOverrides& overrides) {
  std::map<std::string, double, std::less<>> meta;
  struct Row {
    double distance;
    double value;
    std::optional<bool> censored;
    std::size_t line;
  };
  std::vector<Row> rows;
  std::optional<std::size_t> columns;

  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    const auto s = trim(text);
    if (s.empty()) continue;
    if (s.front() == '#') {
      const auto body = s.substr(1);
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) continue;
      const auto key = trim(body.substr(0, eq));
      const auto value = trim(body.substr(eq + 1));
      if (key == "d0" || key == "c" || key == "frequency_hz") {
        meta[std::string(key)] = parse_number(value, line, key);
      }
      continue;
    }
    const auto fields = split(s, ',');
    if (!columns) {
      if (fields.size() >= 2 && fields[0] == "distance_m" && fields[1] == "pathloss_db" &&
          (fields.size() == 2 || (fields.size() == 3 && fields[2] == "censored"))) {
        columns = fields.size();
        continue;
      }
      throw ParseError(line, "expected header 'distance_m,pathloss_db[,censored]'");
    }
    if (fields.size() != *columns) {
      throw ParseError(line, "expected " + std::to_string(*columns) + " fields, got " +
                                 std::to_string(fields.size()));
    }
    Row row{parse_number(fields[0], line, "distance"), parse_number(fields[1], line, "pathloss"),
            std::nullopt, line};
    if (*columns == 3) {
      if (fields[2] == "0") {
        row.censored = false;
      } else if (fields[2] == "1") {
        row.censored = true;
      } else {
        throw ParseError(line, "censored flag must be 0 or 1, got '" + std::string(fields[2]) + "'");
      }
    }
    rows.push_back(row);
  }
  if (!columns) throw ParseError(line, "missing header 'distance_m,pathloss_db[,censored]'");
  if (rows.empty()) throw InvariantError("dataset has no rows");

  auto lookup = [&](const std::optional<double>& over, const char* key) -> std::optional<double> {
    if (over) return over;
    if (auto it = meta.find(key); it != meta.end()) return it->second;
    return std::nullopt;
  };
  const auto c = lookup(overrides.c, "c");
  if (!c) throw MissingCensorLevel();
  const auto d0 = lookup(overrides.d0, "d0");
  if (!d0) throw MissingMetadata("d0");
  if (!(*d0 > 0.0) || !std::isfinite(*d0)) throw InvariantError("d0 must be positive and finite");
  const auto frequency = lookup(overrides.frequency_hz, "frequency_hz");
  if (frequency && !(*frequency > 0.0)) throw InvariantError("frequency_hz must be positive");

  std::vector<CensoredSample> samples;
  samples.reserve(rows.size());
  for (const auto& r : rows) {
    const std::string where = "line " + std::to_string(r.line) + ": ";
    if (!std::isfinite(r.distance) || r.distance < *d0) {
      throw InvariantError(where + "distance must be finite and >= d0");
    }
    if (!std::isfinite(r.value) && !(r.censored.value_or(true) && r.value == *c)) {
      throw InvariantError(where + "pathloss must be finite");
    }
    const bool above = r.value >= *c;
    if (r.censored.has_value() && *r.censored != above) {
      throw InvariantError(where + (above ? "value at or above c is marked uncensored"
                                          : "value below c is marked censored"));
    }
    samples.push_back(above ? CensoredSample{r.distance, *c, true}
                            : CensoredSample{r.distance, r.value, false});
  }
  return Dataset(std::move(samples), *d0, *c, frequency);
}

Dataset read_dataset(const std::filesystem::path& path, const IngestOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return parse_dataset(in, overrides);
}

void format_dataset(std::ostream& out, const Dataset& dataset) {
  out << "# " << kToolName << " measurement file\n";
  out << "# d0 = " << format_number(dataset.d0()) << '\n';
  out << "# c = " << format_number(dataset.c()) << '\n';
  if (dataset.frequency_hz()) {
    out << "# frequency_hz = " << format_number(*dataset.frequency_hz()) << '\n';
  }
  out << "distance_m,pathloss_db,censored\n";
  for (const auto& s : dataset.samples()) {
    out << format_number(s.distance) << ',' << format_number(s.value) << ','
        << (s.censored ? '1' : '0') << '\n';
  }
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  atomic_write(path, [&](std::ostream& out) { format_dataset(out, dataset); });
}

std::string fnv1a_digest(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return fnv1a_digest(os.str());
}

FitReport make_fit_report(const Dataset& dataset, std::string input_path, std::string input_digest) {
  FitReport r;
  r.input_path = std::move(input_path);
  r.input_digest = std::move(input_digest);
  r.count = dataset.size();
  r.n_censored = dataset.censored_count();
  r.d0 = dataset.d0();
  r.c = dataset.c();
  r.frequency_hz = dataset.frequency_hz();
  return r;
}

nlohmann::ordered_json result_to_json(const FitReport& report) {
  nlohmann::ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["input"] = {{"path", report.input_path}, {"digest_fnv1a64", report.input_digest}};
  j["dataset"] = {
      {"count", report.count},
      {"n_censored", report.n_censored},
      {"n_uncensored", report.count - report.n_censored},
      {"censored_fraction",
       report.count ? static_cast<double>(report.n_censored) / static_cast<double>(report.count)
                    : 0.0},
      {"d0", number_or_null(report.d0)},
      {"c", number_or_null(report.c)},
      {"frequency_hz", optional_number(report.frequency_hz)},
  };
  if (report.ols) {
    const auto& f = *report.ols;
    nlohmann::ordered_json o;
    o["censored_mode"] = std::string(to_string(f.mode));
    o["count"] = f.count;
    o["pl_d0"] = number_or_null(f.params.pl_d0);
    o["n"] = number_or_null(f.params.n);
    o["sigma"] = number_or_null(f.params.sigma);
    o["sigma_sq"] = number_or_null(f.sigma_sq_hat);
    o["se_pl_d0"] = number_or_null(f.se_pl_d0);
    o["se_n"] = number_or_null(f.se_n);
    o["x_bar"] = number_or_null(f.x_bar);
    o["s_xx"] = number_or_null(f.s_xx);
    j["ols"] = std::move(o);
  }
  if (report.tobit) {
    const auto& f = *report.tobit;
    nlohmann::ordered_json t;
    t["pl_d0"] = number_or_null(f.params.pl_d0);
    t["n"] = number_or_null(f.params.n);
    t["sigma"] = number_or_null(f.params.sigma);
    t["sigma_sq"] = number_or_null(f.params.sigma * f.params.sigma);
    if (report.tobit_se) {
      t["se_pl_d0"] = optional_number(report.tobit_se->se_pl_d0);
      t["se_n"] = number_or_null(report.tobit_se->se_n);
      t["se_sigma_sq"] = number_or_null(report.tobit_se->se_sigma_sq);
    } else {
      t["se_pl_d0"] = nullptr;
      t["se_n"] = nullptr;
      t["se_sigma_sq"] = nullptr;
    }
    if (report.tobit_se_error) t["se_error"] = *report.tobit_se_error;
    t["nll"] = number_or_null(f.nll);
    t["converged"] = f.converged;
    t["iterations"] = f.iterations;
    t["restarts"] = f.restarts;
    t["n_censored"] = f.n_censored;
    t["n_uncensored"] = f.n_uncensored;
    t["fixed_pl_d0"] = optional_number(f.fixed_pl_d0);
    t["init"] = params_json(f.init);
    t["warnings"] = f.warnings;
    j["tobit"] = std::move(t);
  }
  return j;
}

void write_json(const nlohmann::ordered_json& j, const std::filesystem::path& path) {
  atomic_write(path, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
}

void write_result(const FitReport& report, const std::filesystem::path& path) {
  write_json(result_to_json(report), path);
}

std::vector<double> curve_distances(const Dataset& dataset, std::size_t points) {
  double d_max = dataset.d0();
  for (const auto& s : dataset.samples()) d_max = std::max(d_max, s.distance);
  if (d_max <= dataset.d0()) d_max = 10.0 * dataset.d0();
  DistanceGrid grid{Spacing::Log, dataset.d0(), d_max, points};
  return grid.distances();
}

void format_plot_data(std::ostream& out, const Dataset& dataset,
                      const std::vector<PlotCurve>& curves) {
  if (curves.empty()) throw WriteError("plot data needs at least one fit");
  out << "series,distance_m,pathloss_db,censored\n";
  for (const auto& s : dataset.samples()) {
    out << "sample," << format_number(s.distance) << ',' << format_number(s.value) << ','
        << (s.censored ? '1' : '0') << '\n';
  }
  const auto distances = curve_distances(dataset);
  for (const auto& curve : curves) {
    for (double d : distances) {
      out << curve.name << ',' << format_number(d) << ','
          << format_number(mean_pathloss(curve.params, d, dataset.d0())) << ",\n";
    }
  }
  if (std::isfinite(dataset.c())) {
    out << "censoring_level," << format_number(distances.front()) << ','
        << format_number(dataset.c()) << ",\n";
    out << "censoring_level," << format_number(distances.back()) << ','
        << format_number(dataset.c()) << ",\n";
  }
}

void emit_plot_data(const Dataset& dataset, const std::vector<PlotCurve>& curves,
                    const std::filesystem::path& csv_path) {
  if (curves.empty()) throw WriteError("plot data needs at least one fit");
  atomic_write(csv_path, [&](std::ostream& out) { format_plot_data(out, dataset, curves); });
}

std::string render_svg(const Dataset& dataset, const std::vector<PlotCurve>& curves) {
  constexpr double kWidth = 800.0;
  constexpr double kHeight = 500.0;
  constexpr double kLeft = 70.0;
  constexpr double kRight = 20.0;
  constexpr double kTop = 20.0;
  constexpr double kBottom = 50.0;
  static const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e"};

  const auto distances = curve_distances(dataset);
  const double lx_min = std::log10(distances.front());
  const double lx_max = std::log10(distances.back());
  double y_min = std::numeric_limits<double>::infinity();
  double y_max = -y_min;
  auto extend = [&](double y) {
    if (!std::isfinite(y)) return;
    y_min = std::min(y_min, y);
    y_max = std::max(y_max, y);
  };
  for (const auto& s : dataset.samples()) extend(s.value);
  for (const auto& curve : curves) {
    extend(mean_pathloss(curve.params, distances.front(), dataset.d0()));
    extend(mean_pathloss(curve.params, distances.back(), dataset.d0()));
  }
  extend(dataset.c());
  if (!(y_max > y_min)) {
    y_min -= 1.0;
    y_max += 1.0;
  }
  const double pad = 0.05 * (y_max - y_min);
  y_min -= pad;
  y_max += pad;

  auto px = [&](double d) {
    return kLeft + (std::log10(d) - lx_min) / (lx_max - lx_min) * (kWidth - kLeft - kRight);
  };
  auto py = [&](double y) {
    return kTop + (y_max - y) / (y_max - y_min) * (kHeight - kTop - kBottom);
  };

  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
     << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" fill=\"white\"/>\n";
  os << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << kWidth - kRight
     << "\" y2=\"" << kHeight - kBottom << "\"/>\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
     << kHeight - kBottom << "\"/>\n";
  os << "</g>\n";
  os << "<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int e = static_cast<int>(std::ceil(lx_min - 1e-12));
       e <= static_cast<int>(std::floor(lx_max + 1e-12)); ++e) {
    const double x = px(std::pow(10.0, e));
    os << "<line x1=\"" << x << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << x << "\" y2=\""
       << kHeight - kBottom + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << x << "\" y=\"" << kHeight - kBottom + 18
       << "\" text-anchor=\"middle\">1e" << e << "</text>\n";
  }
  os << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 8
     << "\" text-anchor=\"middle\">distance (m)</text>\n";
  os << "<text x=\"15\" y=\"" << (kTop + kHeight - kBottom) / 2
     << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 " << (kTop + kHeight - kBottom) / 2
     << ")\">pathloss (dB)</text>\n";
  os << "</g>\n";

  os << "<g class=\"samples\">\n";
  for (const auto& s : dataset.samples()) {
    os << "<circle class=\"sample\" cx=\"" << px(s.distance) << "\" cy=\"" << py(s.value)
       << "\" r=\"2.5\" stroke=\"#444444\" fill=\"" << (s.censored ? "none" : "#444444")
       << "\"/>\n";
  }
  os << "</g>\n";

  if (std::isfinite(dataset.c())) {
    os << "<line class=\"censoring-level\" x1=\"" << px(distances.front()) << "\" y1=\""
       << py(dataset.c()) << "\" x2=\"" << px(distances.back()) << "\" y2=\"" << py(dataset.c())
       << "\" stroke=\"black\" stroke-dasharray=\"6 4\"/>\n";
  }

  for (std::size_t k = 0; k < curves.size(); ++k) {
    const char* color = kPalette[k % std::size(kPalette)];
    os << "<polyline class=\"fit\" fill=\"none\" stroke-width=\"2\" stroke=\"" << color
       << "\" points=\"";
    for (double d : distances) {
      os << px(d) << ',' << py(mean_pathloss(curves[k].params, d, dataset.d0())) << ' ';
    }
    os << "\"/>\n";
    os << "<text font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color << "\" x=\""
       << kLeft + 10 << "\" y=\"" << kTop + 15 + 15 * static_cast<double>(k) << "\">";
    std::ostringstream label;
    label << std::setprecision(4) << curves[k].name << ": PL(d0)=" << curves[k].params.pl_d0
          << " dB, n=" << curves[k].params.n << ", sigma=" << curves[k].params.sigma << " dB";
    os << label.str() << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void emit_svg(const Dataset& dataset, const std::vector<PlotCurve>& curves,
              const std::filesystem::path& svg_path) {
  const auto svg = render_svg(dataset, curves);
  atomic_write(svg_path, [&](std::ostream& out) { out << svg; });
}

namespace {

double spec_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw SpecError(std::string("missing key '") + key + "'");
  const auto& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    if (auto d = to_double(v.get<std::string>())) return *d;
  }
  throw SpecError(std::string("key '") + key + "' must be a number");
}

template <typename T>
T spec_integer(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<T>();
  throw SpecError(std::string("key '") + key + "' must be a non-negative integer");
}

}  // namespace

ExperimentSpec experiment_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SpecError("experiment spec must be a JSON object");
  ExperimentSpec spec;
  try {
    if (!j.contains("true_params")) throw SpecError("missing key 'true_params'");
    const auto& p = j.at("true_params");
    spec.true_params = {spec_number(p, "pl_d0"), spec_number(p, "n"), spec_number(p, "sigma")};
    spec.d0 = spec_number(j, "d0");
    if (!j.contains("distances")) throw SpecError("missing key 'distances'");
    const auto& g = j.at("distances");
    spec.grid.spacing = spacing_from_string(g.value("spacing", std::string("log")));
    spec.grid.d_min = spec_number(g, "d_min");
    spec.grid.d_max = spec_number(g, "d_max");
    spec.grid.count = spec_integer<std::size_t>(g, "count", 0);
    spec.replicates = spec_integer<std::size_t>(j, "replicates", 0);
    spec.seed = spec_integer<std::uint64_t>(j, "seed", spec.seed);
    spec.threads = spec_integer<unsigned>(j, "threads", 1);
    if (j.contains("estimators")) {
      spec.estimators.clear();
      for (const auto& e : j.at("estimators")) {
        spec.estimators.push_back(estimator_from_string(e.get<std::string>()));
      }
    }
    if (j.contains("fixed_pl_d0") && !j.at("fixed_pl_d0").is_null()) {
      spec.fit_options.fixed_pl_d0 = spec_number(j, "fixed_pl_d0");
    }
    if (!j.contains("c")) throw SpecError("missing key 'c'");
    const auto& c = j.at("c");
    if (c.is_object()) {
      spec.validate();
      spec.c = censoring_level_for_fraction(spec.true_params, spec.d0, spec.grid.distances(),
                                            spec_number(c, "censored_fraction"));
    } else {
      spec.c = spec_number(j, "c");
    }
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("malformed experiment spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

ExperimentSpec read_experiment_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("invalid JSON in experiment spec: ") + e.what());
  }
  return experiment_spec_from_json(j);
}

nlohmann::ordered_json report_to_json(const ExperimentReport& report, bool include_records) {
  const auto& spec = report.spec;
  nlohmann::ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  nlohmann::ordered_json s;
  s["true_params"] = params_json(spec.true_params);
  s["d0"] = spec.d0;
  s["distances"] = {{"spacing", std::string(to_string(spec.grid.spacing))},
                    {"d_min", spec.grid.d_min},
                    {"d_max", spec.grid.d_max},
                    {"count", spec.grid.count}};
  // Written in a form experiment_spec_from_json accepts.
  if (std::isinf(spec.c)) {
    s["c"] = "inf";
  } else {
    s["c"] = spec.c;
  }
  s["replicates"] = spec.replicates;
  s["seed"] = spec.seed;
  s["estimators"] = nlohmann::ordered_json::array();
  for (auto e : spec.estimators) s["estimators"].push_back(std::string(to_string(e)));
  s["fixed_pl_d0"] = optional_number(spec.fit_options.fixed_pl_d0);
  j["spec"] = std::move(s);
  j["mean_censored_fraction"] = report.mean_censored_fraction;

  auto moments_json = [](const Moments& m) {
    nlohmann::ordered_json o;
    o["mean"] = number_or_null(m.mean);
    o["std"] = number_or_null(m.std);
    o["bias"] = number_or_null(m.bias);
    o["se_of_mean"] = number_or_null(m.se_of_mean);
    return o;
  };
  nlohmann::ordered_json summaries = nlohmann::ordered_json::object();
  for (const auto& sum : report.summaries) {
    nlohmann::ordered_json o;
    o["fits"] = sum.fits;
    o["failures"] = sum.failures;
    o["not_converged"] = sum.not_converged;
    o["pl_d0"] = moments_json(sum.pl_d0);
    o["n"] = moments_json(sum.n);
    o["sigma"] = moments_json(sum.sigma);
    o["mean_se_pl_d0"] = optional_number(sum.mean_se_pl_d0);
    o["mean_se_n"] = optional_number(sum.mean_se_n);
    o["mean_se_sigma_sq"] = optional_number(sum.mean_se_sigma_sq);
    o["calibration_pl_d0"] = optional_number(sum.calibration_pl_d0);
    o["calibration_n"] = optional_number(sum.calibration_n);
    summaries[std::string(to_string(sum.estimator))] = std::move(o);
  }
  j["summaries"] = std::move(summaries);

  if (include_records) {
    auto records = nlohmann::ordered_json::array();
    for (const auto& r : report.records) {
      nlohmann::ordered_json o;
      o["replicate"] = r.replicate;
      o["estimator"] = std::string(to_string(r.estimator));
      o["ok"] = r.ok;
      if (r.ok) {
        o["estimate"] = params_json(r.estimate);
        o["converged"] = r.converged;
        o["se_pl_d0"] = optional_number(r.se_pl_d0);
        o["se_n"] = optional_number(r.se_n);
        o["se_sigma_sq"] = optional_number(r.se_sigma_sq);
      } else {
        o["error"] = r.error;
      }
      records.push_back(std::move(o));
    }
    j["records"] = std::move(records);
  }
  return j;
}

std::vector<PlotCurve> curves_from_result(const nlohmann::json& result) {
  std::vector<PlotCurve> curves;
  for (const char* key : {"ols", "tobit"}) {
    if (!result.contains(key)) continue;
    const auto& b = result.at(key);
    try {
      curves.push_back({key, {b.at("pl_d0").get<double>(), b.at("n").get<double>(),
                              b.at("sigma").get<double>()}});
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(0, std::string("result block '") + key + "' is incomplete: " + e.what());
    }
  }
  return curves;
}

}  // namespace censpl::io
