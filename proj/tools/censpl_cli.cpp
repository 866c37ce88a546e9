// censpl: simulate censored pathloss data, fit OLS and Tobit models, run
// Monte-Carlo experiments and emit plot data.
//
// Exit codes: 0 success, 2 input/spec/usage error, 3 a fit ran but did not
// converge.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "censpl/avar.hpp"
#include "censpl/errors.hpp"
#include "censpl/io.hpp"
#include "censpl/model.hpp"
#include "censpl/montecarlo.hpp"
#include "censpl/ols.hpp"
#include "censpl/tobit.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNotConverged = 3;
constexpr std::uint64_t kDefaultSeed = 1;

double parse_level(const std::string& text, const char* flag) {
  std::string s = text;
  if (!s.empty() && s.front() == '+') s.erase(0, 1);
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size() && !std::isnan(v)) return v;
  } catch (const std::exception&) {
  }
  throw censpl::DomainError(std::string(flag) + ": cannot parse '" + text + "'");
}

struct SimulateArgs {
  double n = 2.0;
  double sigma = 4.0;
  std::optional<double> pl_d0;
  std::optional<double> frequency_hz;
  double d0 = 10.0;
  double d_min = 10.0;
  double d_max = 1000.0;
  std::size_t count = 500;
  std::string spacing = "log";
  std::string c = "inf";
  std::uint64_t seed = kDefaultSeed;
  std::string output;
};

int cmd_simulate(const SimulateArgs& a) {
  double pl_d0 = 0.0;
  if (a.pl_d0) {
    pl_d0 = *a.pl_d0;
  } else if (a.frequency_hz) {
    pl_d0 = censpl::fspl_reference(*a.frequency_hz, a.d0);
  } else {
    throw censpl::DomainError("either --pl-d0 or --frequency is required");
  }
  const censpl::PathlossParams params{pl_d0, a.n, a.sigma};
  params.validate();
  if (a.count < 1) throw censpl::DomainError("--count must be at least 1");
  if (!(a.d_min >= a.d0) || !(a.d_max >= a.d_min)) {
    throw censpl::DomainError("distances must satisfy d0 <= dmin <= dmax");
  }
  const censpl::DistanceGrid grid{censpl::spacing_from_string(a.spacing), a.d_min, a.d_max,
                                  a.count};
  const double c = parse_level(a.c, "--c");
  const auto raw = censpl::generate_synthetic(params, grid.distances(), a.d0, a.seed);
  const auto dataset = censpl::apply_censoring(raw, c, a.d0, a.frequency_hz);
  censpl::io::write_dataset(dataset, a.output);
  std::cout << "wrote " << dataset.size() << " samples to " << a.output << "; censored fraction "
            << dataset.censored_fraction() << " (" << dataset.censored_count() << " of "
            << dataset.size() << ")\n";
  return kExitOk;
}

struct Overrides {
  std::optional<double> d0;
  std::optional<std::string> c;
  std::optional<double> frequency_hz;

  censpl::io::IngestOverrides resolve() const {
    censpl::io::IngestOverrides o;
    o.d0 = d0;
    if (c) o.c = parse_level(*c, "--c");
    o.frequency_hz = frequency_hz;
    return o;
  }
};

struct FitArgs {
  std::string input;
  std::string output;
  std::string estimator = "both";
  std::string censored_mode = "substitute";
  std::optional<std::string> fix_pl_d0;
  std::string plot;
  std::string svg;
  int max_iterations = 2000;
  double x_tolerance = 1e-8;
  double f_tolerance = 1e-10;
  Overrides overrides;
};

std::vector<censpl::io::PlotCurve> curves_of(const censpl::io::FitReport& report) {
  std::vector<censpl::io::PlotCurve> curves;
  if (report.ols) curves.push_back({"ols", report.ols->params});
  if (report.tobit) curves.push_back({"tobit", report.tobit->params});
  return curves;
}

int cmd_fit(const FitArgs& a) {
  const auto dataset = censpl::io::read_dataset(a.input, a.overrides.resolve());
  auto report =
      censpl::io::make_fit_report(dataset, a.input, censpl::io::file_digest(a.input));
  const bool run_ols = a.estimator == "both" || a.estimator == "ols";
  const bool run_tobit = a.estimator == "both" || a.estimator == "tobit";

  if (run_ols) {
    report.ols = censpl::ols_fit(dataset, censpl::censored_handling_from_string(a.censored_mode));
  }
  if (run_tobit) {
    censpl::FitOptions options;
    options.optimizer.max_iterations = a.max_iterations;
    options.optimizer.x_tolerance = a.x_tolerance;
    options.optimizer.f_tolerance = a.f_tolerance;
    if (a.fix_pl_d0) {
      if (*a.fix_pl_d0 == "fspl") {
        if (!dataset.frequency_hz()) throw censpl::MissingMetadata("frequency_hz");
        options.fixed_pl_d0 = censpl::fspl_reference(*dataset.frequency_hz(), dataset.d0());
      } else {
        options.fixed_pl_d0 = parse_level(*a.fix_pl_d0, "--fix-pl-d0");
      }
    }
    report.tobit = censpl::tobit_fit(dataset, options);
    try {
      report.tobit_se = censpl::estimate_standard_errors(*report.tobit, dataset);
    } catch (const censpl::SingularInformation& e) {
      report.tobit_se_error = e.what();
    }
  }

  const auto json = censpl::io::result_to_json(report);
  if (a.output.empty()) {
    std::cout << json.dump(2) << '\n';
  } else {
    censpl::io::write_json(json, a.output);
  }
  if (!a.plot.empty()) censpl::io::emit_plot_data(dataset, curves_of(report), a.plot);
  if (!a.svg.empty()) censpl::io::emit_svg(dataset, curves_of(report), a.svg);

  if (report.tobit) {
    for (const auto& w : report.tobit->warnings) std::cerr << "warning: " << w << '\n';
  }
  if (!a.output.empty()) {
    if (report.ols) {
      std::cerr << "ols   (" << censpl::to_string(report.ols->mode)
                << "): PL(d0)=" << report.ols->params.pl_d0 << " dB  n=" << report.ols->params.n
                << "  sigma=" << report.ols->params.sigma << " dB\n";
    }
    if (report.tobit) {
      std::cerr << "tobit: PL(d0)=" << report.tobit->params.pl_d0
                << " dB  n=" << report.tobit->params.n
                << "  sigma=" << report.tobit->params.sigma << " dB  converged="
                << (report.tobit->converged ? "yes" : "no") << '\n';
    }
  }
  return report.tobit && !report.tobit->converged ? kExitNotConverged : kExitOk;
}

struct ExperimentArgs {
  std::string spec;
  std::string output;
  unsigned threads = 0;
  bool no_records = false;
};

int cmd_experiment(const ExperimentArgs& a) {
  auto spec = censpl::io::read_experiment_spec(a.spec);
  if (a.threads > 0) spec.threads = a.threads;
  const auto report = censpl::run_experiment(spec);
  const auto json = censpl::io::report_to_json(report, !a.no_records);
  if (a.output.empty()) {
    std::cout << json.dump(2) << '\n';
  } else {
    censpl::io::write_json(json, a.output);
  }
  auto& log = a.output.empty() ? std::cerr : std::cout;
  log << "mean censored fraction " << report.mean_censored_fraction << '\n';
  for (const auto& s : report.summaries) {
    log << censpl::to_string(s.estimator) << ": fits=" << s.fits << " failures=" << s.failures
        << " mean n=" << s.n.mean << " bias(n)=" << s.n.bias << " mean sigma=" << s.sigma.mean;
    if (s.calibration_n) log << " calibration(n)=" << *s.calibration_n;
    log << '\n';
  }
  return kExitOk;
}

struct PlotArgs {
  std::string input;
  std::string result;
  std::string output;
  std::string svg;
  Overrides overrides;
};

int cmd_plot(const PlotArgs& a) {
  const auto dataset = censpl::io::read_dataset(a.input, a.overrides.resolve());
  std::vector<censpl::io::PlotCurve> curves;
  if (!a.result.empty()) {
    std::ifstream in(a.result);
    if (!in) throw censpl::Error("cannot open '" + a.result + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw censpl::ParseError(0, std::string("invalid result JSON: ") + e.what());
    }
    curves = censpl::io::curves_from_result(j);
  } else {
    curves.push_back({"ols", censpl::ols_fit(dataset).params});
    curves.push_back({"tobit", censpl::tobit_fit(dataset).params});
  }
  if (curves.empty()) throw censpl::Error("no fits to plot");
  if (!a.output.empty()) censpl::io::emit_plot_data(dataset, curves, a.output);
  if (!a.svg.empty()) censpl::io::emit_svg(dataset, curves, a.svg);
  if (a.output.empty() && a.svg.empty()) censpl::io::format_plot_data(std::cout, dataset, curves);
  return kExitOk;
}

void add_overrides(CLI::App* app, Overrides& o) {
  app->add_option("--d0", o.d0, "Reference distance override (m)");
  app->add_option("--c", o.c, "Censoring level override (dB, or 'inf')");
  app->add_option("--frequency", o.frequency_hz, "Carrier frequency override (Hz)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Censored pathloss estimation: OLS baseline and Tobit maximum likelihood"};
  app.require_subcommand(1);
  app.set_version_flag("--version", censpl::io::kToolVersion);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate censored synthetic pathloss data");
  simulate->add_option("--n", sim.n, "Pathloss exponent")->required();
  simulate->add_option("--sigma", sim.sigma, "Shadowing standard deviation (dB)")->required();
  simulate->add_option("--pl-d0", sim.pl_d0, "Pathloss at d0 (dB)");
  simulate->add_option("--frequency", sim.frequency_hz,
                       "Carrier frequency (Hz); sets PL(d0) to free space when --pl-d0 is absent "
                       "and is recorded in the file header");
  simulate->add_option("--d0", sim.d0, "Reference distance (m)")->capture_default_str();
  simulate->add_option("--dmin", sim.d_min, "Smallest distance (m)")->capture_default_str();
  simulate->add_option("--dmax", sim.d_max, "Largest distance (m)")->capture_default_str();
  simulate->add_option("--count", sim.count, "Number of samples")->capture_default_str();
  simulate->add_option("--spacing", sim.spacing, "Distance spacing")
      ->check(CLI::IsMember({"log", "linear"}))
      ->capture_default_str();
  simulate->add_option("--c", sim.c, "Censoring level (dB, or 'inf' for none)")
      ->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  simulate->add_option("-o,--output", sim.output, "Output measurement CSV")->required();

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit OLS and Tobit models to a measurement CSV");
  fit_cmd->add_option("-i,--input", fit.input, "Measurement CSV")->required();
  fit_cmd->add_option("-o,--output", fit.output, "Result JSON (stdout when absent)");
  fit_cmd->add_option("--estimator", fit.estimator, "Estimators to run")
      ->check(CLI::IsMember({"both", "ols", "tobit"}))
      ->capture_default_str();
  fit_cmd->add_option("--censored-mode", fit.censored_mode, "How OLS treats censored rows")
      ->check(CLI::IsMember({"substitute", "drop"}))
      ->capture_default_str();
  fit_cmd->add_option("--fix-pl-d0", fit.fix_pl_d0,
                      "Hold PL(d0) fixed in the Tobit fit: a value in dB, or 'fspl' for free "
                      "space at the header frequency");
  fit_cmd->add_option("--plot", fit.plot, "Also write plot data CSV");
  fit_cmd->add_option("--svg", fit.svg, "Also write an SVG plot");
  fit_cmd->add_option("--max-iter", fit.max_iterations, "Simplex iterations per search")
      ->capture_default_str();
  fit_cmd->add_option("--x-tol", fit.x_tolerance, "Simplex size tolerance (parameter units)")
      ->capture_default_str();
  fit_cmd->add_option("--f-tol", fit.f_tolerance, "Negative log-likelihood spread tolerance")
      ->capture_default_str();
  add_overrides(fit_cmd, fit.overrides);

  ExperimentArgs exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Run a Monte-Carlo estimator comparison");
  exp_cmd->add_option("-s,--spec", exp.spec, "Experiment spec JSON")->required();
  exp_cmd->add_option("-o,--output", exp.output, "Report JSON (stdout when absent)");
  exp_cmd->add_option("--threads", exp.threads, "Worker threads (0: use the spec value)");
  exp_cmd->add_flag("--no-records", exp.no_records, "Omit per-replicate records");

  PlotArgs plot;
  auto* plot_cmd = app.add_subcommand("plot", "Emit plot data for a dataset and fitted models");
  plot_cmd->add_option("-i,--input", plot.input, "Measurement CSV")->required();
  plot_cmd->add_option("-r,--result", plot.result,
                       "Result JSON from 'fit' (fits both estimators when absent)");
  plot_cmd->add_option("-o,--output", plot.output, "Plot data CSV (stdout when neither output given)");
  plot_cmd->add_option("--svg", plot.svg, "SVG plot");
  add_overrides(plot_cmd, plot.overrides);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim);
    if (fit_cmd->parsed()) return cmd_fit(fit);
    if (exp_cmd->parsed()) return cmd_experiment(exp);
    if (plot_cmd->parsed()) return cmd_plot(plot);
  } catch (const censpl::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return kExitInput;
}
