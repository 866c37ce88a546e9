#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "censpl/avar.hpp"
#include "censpl/errors.hpp"
#include "censpl/io.hpp"
#include "censpl/model.hpp"
#include "censpl/montecarlo.hpp"
#include "censpl/numerics.hpp"
#include "censpl/ols.hpp"
#include "censpl/optim.hpp"
#include "censpl/tobit.hpp"

namespace py = pybind11;
using namespace censpl;

namespace {

Dataset make_dataset(const std::vector<double>& distances, const std::vector<double>& values,
                     const std::vector<bool>& censored, double d0, double c,
                     std::optional<double> frequency_hz) {
  if (distances.size() != values.size() || distances.size() != censored.size()) {
    throw DomainError("distances, values and censored must have equal length");
  }
  std::vector<CensoredSample> samples;
  samples.reserve(distances.size());
  for (std::size_t i = 0; i < distances.size(); ++i) {
    samples.push_back({distances[i], values[i], static_cast<bool>(censored[i])});
  }
  return Dataset(std::move(samples), d0, c, frequency_hz);
}

std::vector<RawSample> make_raw(const std::vector<double>& distances,
                                const std::vector<double>& values) {
  if (distances.size() != values.size()) {
    throw DomainError("distances and values must have equal length");
  }
  std::vector<RawSample> raw(distances.size());
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = {distances[i], values[i]};
  return raw;
}

std::string params_repr(const PathlossParams& p) {
  std::ostringstream os;
  os.precision(17);
  os << "PathlossParams(pl_d0=" << p.pl_d0 << ", n=" << p.n << ", sigma=" << p.sigma << ")";
  return os.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Censored pathloss estimation: OLS baseline and Tobit maximum likelihood";
  m.attr("__version__") = io::kToolVersion;

  auto base = py::register_exception<Error>(m, "CensplError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<DegenerateDesign>(m, "DegenerateDesign", base.ptr());
  py::register_exception<TooFewSamples>(m, "TooFewSamples", base.ptr());
  py::register_exception<AllCensored>(m, "AllCensored", base.ptr());
  py::register_exception<SingularInformation>(m, "SingularInformation", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<MissingMetadata>(m, "MissingMetadata", base.ptr());
  py::register_exception<InvariantError>(m, "InvariantError", base.ptr());
  py::register_exception<SpecError>(m, "SpecError", base.ptr());

  // numerics
  m.def("normal_pdf", &numerics::normal_pdf, py::arg("z"));
  m.def("normal_cdf", &numerics::normal_cdf, py::arg("z"));
  m.def("log_normal_sf", &numerics::log_normal_sf, py::arg("z"));
  m.def("erfcx", &numerics::erfcx, py::arg("x"));
  m.def("mills_ratio", &numerics::mills_ratio, py::arg("z"));

  // model
  py::class_<PathlossParams>(m, "PathlossParams")
      .def(py::init([](double pl_d0, double n, double sigma) {
             return PathlossParams{pl_d0, n, sigma};
           }),
           py::arg("pl_d0"), py::arg("n"), py::arg("sigma"))
      .def_readwrite("pl_d0", &PathlossParams::pl_d0)
      .def_readwrite("n", &PathlossParams::n)
      .def_readwrite("sigma", &PathlossParams::sigma)
      .def("validate", &PathlossParams::validate)
      .def(py::self == py::self)
      .def("__repr__", &params_repr);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init(&make_dataset), py::arg("distances"), py::arg("values"), py::arg("censored"),
           py::arg("d0"), py::arg("c"), py::arg("frequency_hz") = std::nullopt)
      .def_property_readonly("d0", &Dataset::d0)
      .def_property_readonly("c", &Dataset::c)
      .def_property_readonly("frequency_hz", &Dataset::frequency_hz)
      .def_property_readonly("distances",
                             [](const Dataset& d) {
                               std::vector<double> v;
                               for (const auto& s : d.samples()) v.push_back(s.distance);
                               return v;
                             })
      .def_property_readonly("values",
                             [](const Dataset& d) {
                               std::vector<double> v;
                               for (const auto& s : d.samples()) v.push_back(s.value);
                               return v;
                             })
      .def_property_readonly("censored",
                             [](const Dataset& d) {
                               std::vector<bool> v;
                               for (const auto& s : d.samples()) v.push_back(s.censored);
                               return v;
                             })
      .def_property_readonly("censored_count", &Dataset::censored_count)
      .def_property_readonly("censored_fraction", &Dataset::censored_fraction)
      .def("__len__", &Dataset::size)
      .def(py::self == py::self);

  m.def("mean_pathloss", &mean_pathloss, py::arg("params"), py::arg("d"), py::arg("d0"));
  m.def("fspl_reference", &fspl_reference, py::arg("frequency_hz"), py::arg("d0"));
  m.def(
      "generate_synthetic",
      [](const PathlossParams& p, const std::vector<double>& distances, double d0,
         std::uint64_t seed) {
        std::vector<std::pair<double, double>> out;
        for (const auto& s : generate_synthetic(p, distances, d0, seed)) {
          out.emplace_back(s.distance, s.value);
        }
        return out;
      },
      py::arg("params"), py::arg("distances"), py::arg("d0"), py::arg("seed"),
      "List of (distance_m, pathloss_db) before censoring.");
  m.def(
      "apply_censoring",
      [](const std::vector<double>& distances, const std::vector<double>& values, double c,
         double d0, std::optional<double> frequency_hz) {
        const auto raw = make_raw(distances, values);
        return apply_censoring(raw, c, d0, frequency_hz);
      },
      py::arg("distances"), py::arg("values"), py::arg("c"), py::arg("d0"),
      py::arg("frequency_hz") = std::nullopt);
  m.def("censoring_probability", &censoring_probability, py::arg("params"), py::arg("d"),
        py::arg("d0"), py::arg("c"));
  m.def(
      "to_transformed",
      [](const PathlossParams& p, double c) {
        const auto t = to_transformed(p, c);
        return py::make_tuple(t.alpha_t[0], t.alpha_t[1], t.sigma);
      },
      py::arg("params"), py::arg("c"), "(alpha_t0, alpha_t1, sigma)");
  m.def(
      "from_transformed",
      [](double a0, double a1, double sigma, double c) {
        return from_transformed({{a0, a1}, sigma}, c);
      },
      py::arg("alpha_t0"), py::arg("alpha_t1"), py::arg("sigma"), py::arg("c"));

  // ols
  py::enum_<CensoredHandling>(m, "CensoredHandling")
      .value("SubstituteC", CensoredHandling::SubstituteC)
      .value("DropCensored", CensoredHandling::DropCensored);

  py::class_<OlsFit>(m, "OlsFit")
      .def_readonly("params", &OlsFit::params)
      .def_readonly("se_n", &OlsFit::se_n)
      .def_readonly("se_pl_d0", &OlsFit::se_pl_d0)
      .def_readonly("sigma_sq_hat", &OlsFit::sigma_sq_hat)
      .def_readonly("residuals", &OlsFit::residuals)
      .def_readonly("x_bar", &OlsFit::x_bar)
      .def_readonly("s_xx", &OlsFit::s_xx)
      .def_readonly("count", &OlsFit::count)
      .def_readonly("mode", &OlsFit::mode);
  m.def("ols_fit", &ols_fit, py::arg("dataset"), py::arg("mode") = CensoredHandling::SubstituteC);

  // tobit
  py::class_<FitOptions>(m, "FitOptions")
      .def(py::init<>())
      .def_readwrite("fixed_pl_d0", &FitOptions::fixed_pl_d0)
      .def_readwrite("restart", &FitOptions::restart)
      .def_property(
          "max_iterations", [](const FitOptions& o) { return o.optimizer.max_iterations; },
          [](FitOptions& o, int v) { o.optimizer.max_iterations = v; })
      .def_property(
          "x_tolerance", [](const FitOptions& o) { return o.optimizer.x_tolerance; },
          [](FitOptions& o, double v) { o.optimizer.x_tolerance = v; })
      .def_property(
          "f_tolerance", [](const FitOptions& o) { return o.optimizer.f_tolerance; },
          [](FitOptions& o, double v) { o.optimizer.f_tolerance = v; });

  py::class_<TobitFit>(m, "TobitFit")
      .def_readonly("params", &TobitFit::params)
      .def_readonly("nll", &TobitFit::nll)
      .def_readonly("converged", &TobitFit::converged)
      .def_readonly("iterations", &TobitFit::iterations)
      .def_readonly("restarts", &TobitFit::restarts)
      .def_readonly("n_censored", &TobitFit::n_censored)
      .def_readonly("n_uncensored", &TobitFit::n_uncensored)
      .def_readonly("init", &TobitFit::init)
      .def_readonly("fixed_pl_d0", &TobitFit::fixed_pl_d0)
      .def_readonly("warnings", &TobitFit::warnings);
  m.def("tobit_nll", &tobit_nll, py::arg("params"), py::arg("dataset"));
  m.def("tobit_fit", &tobit_fit, py::arg("dataset"), py::arg("options") = FitOptions{});

  // optim
  m.def(
      "nelder_mead",
      [](const std::function<double(std::vector<double>)>& f, const std::vector<double>& x0,
         double x_tolerance, double f_tolerance, int max_iterations) {
        optim::NelderMeadOptions o;
        o.x_tolerance = x_tolerance;
        o.f_tolerance = f_tolerance;
        o.max_iterations = max_iterations;
        const auto r = optim::nelder_mead(
            [&](std::span<const double> x) { return f(std::vector<double>(x.begin(), x.end())); },
            x0, o);
        py::dict d;
        d["x_min"] = r.x_min;
        d["f_min"] = r.f_min;
        d["converged"] = r.converged;
        d["iterations"] = r.iterations;
        d["best_history"] = r.best_history;
        return d;
      },
      py::arg("objective"), py::arg("x0"), py::arg("x_tolerance") = 1e-8,
      py::arg("f_tolerance") = 1e-10, py::arg("max_iterations") = 2000);

  // avar
  m.def(
      "avar_coefficients",
      [](double z, double sigma) {
        const auto k = avar_coefficients(numerics::StandardScore(z), sigma);
        return py::make_tuple(k.a, k.b, k.c);
      },
      py::arg("z"), py::arg("sigma"), "(a, b, c)");
  py::class_<AvarMatrix>(m, "AvarMatrix")
      .def_readonly("a_matrix", &AvarMatrix::a_matrix)
      .def_readonly("inverse_diag", &AvarMatrix::inverse_diag)
      .def_readonly("se", &AvarMatrix::se)
      .def_readonly("pl_d0_fixed", &AvarMatrix::pl_d0_fixed);
  m.def("avar_matrix", &avar_matrix, py::arg("params"), py::arg("dataset"),
        py::arg("pl_d0_fixed") = false);
  m.def(
      "estimate_standard_errors",
      [](const TobitFit& fit, const Dataset& dataset) {
        const auto se = estimate_standard_errors(fit, dataset);
        py::dict d;
        d["se_pl_d0"] = se.se_pl_d0;
        d["se_n"] = se.se_n;
        d["se_sigma_sq"] = se.se_sigma_sq;
        return d;
      },
      py::arg("fit"), py::arg("dataset"));

  // montecarlo and io work on JSON text; the Python package decodes it.
  m.def(
      "_run_experiment_json",
      [](const std::string& spec_json, bool include_records) {
        nlohmann::json j;
        try {
          j = nlohmann::json::parse(spec_json);
        } catch (const nlohmann::json::exception& e) {
          throw SpecError(std::string("invalid JSON: ") + e.what());
        }
        const auto spec = io::experiment_spec_from_json(j);
        ExperimentReport report;
        {
          py::gil_scoped_release release;
          report = run_experiment(spec);
        }
        return io::report_to_json(report, include_records).dump();
      },
      py::arg("spec_json"), py::arg("include_records") = true);

  m.def(
      "read_dataset",
      [](const std::filesystem::path& path, std::optional<double> d0, std::optional<double> c,
         std::optional<double> frequency_hz) {
        return io::read_dataset(path, {d0, c, frequency_hz});
      },
      py::arg("path"), py::arg("d0") = std::nullopt, py::arg("c") = std::nullopt,
      py::arg("frequency_hz") = std::nullopt);
  m.def("write_dataset", &io::write_dataset, py::arg("dataset"), py::arg("path"));
  m.def(
      "_result_json",
      [](const Dataset& dataset, std::optional<OlsFit> ols, std::optional<TobitFit> tobit) {
        auto report = io::make_fit_report(dataset);
        report.ols = std::move(ols);
        if (tobit) {
          report.tobit_se = estimate_standard_errors(*tobit, dataset);
          report.tobit = std::move(tobit);
        }
        return io::result_to_json(report).dump();
      },
      py::arg("dataset"), py::arg("ols") = std::nullopt, py::arg("tobit") = std::nullopt);
  m.def(
      "emit_plot_data",
      [](const Dataset& dataset, const std::vector<std::pair<std::string, PathlossParams>>& fits,
         const std::filesystem::path& csv_path, std::optional<std::filesystem::path> svg_path) {
        std::vector<io::PlotCurve> curves;
        for (const auto& [name, params] : fits) curves.push_back({name, params});
        io::emit_plot_data(dataset, curves, csv_path);
        if (svg_path) io::emit_svg(dataset, curves, *svg_path);
      },
      py::arg("dataset"), py::arg("fits"), py::arg("csv_path"), py::arg("svg_path") = std::nullopt);
}
