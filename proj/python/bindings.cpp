// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

// Python bindings for the density_lab core. Dates cross the boundary as
// ISO-8601 strings; library errors become density_lab.DensityLabError with
// `code` and `detail` attributes.

#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "density_lab/artifacts.h"
#include "density_lab/cli.h"
#include "density_lab/density.h"
#include "density_lab/error.h"
#include "density_lab/loss_law.h"
#include "density_lab/perf_curve.h"
#include "density_lab/registry.h"
#include "density_lab/synth.h"
#include "density_lab/trend.h"

namespace py = pybind11;
using namespace density_lab;

namespace {

PyObject* g_error_type = nullptr;

std::string date_iso(const Date& d) { return d.iso(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Capability-density analysis core";

  g_error_type = PyErr_NewException("density_lab._core.DensityLabError",
                                    PyExc_RuntimeError, nullptr);
  m.add_object("DensityLabError", py::handle(g_error_type));
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::reinterpret_steal<py::object>(
          PyObject_CallFunction(g_error_type, "s", e.what()));
      inst.attr("code") = std::string(errc_name(e.code()));
      inst.attr("detail") = e.detail();
      PyErr_SetObject(g_error_type, inst.ptr());
    }
  });

  py::class_<Date>(m, "Date")
      .def(py::init<int, unsigned, unsigned>(), py::arg("year"),
           py::arg("month"), py::arg("day"))
      .def_static("parse", &Date::parse)
      .def("iso", &Date::iso)
      .def("__str__", &Date::iso)
      .def("__repr__",
           [](const Date& d) { return "Date('" + d.iso() + "')"; })
      .def("__eq__", [](const Date& a, const Date& b) { return a == b; })
      .def("__lt__", [](const Date& a, const Date& b) { return a < b; });
  py::implicitly_convertible<std::string, Date>();

  py::class_<Epoch>(m, "Epoch")
      .def(py::init<>())
      .def(py::init([](const std::string& iso) { return Epoch{Date::parse(iso)}; }))
      .def_property_readonly(
          "reference_date", [](const Epoch& e) { return e.reference_date.iso(); });
  py::implicitly_convertible<std::string, Epoch>();
  m.def("days_since", [](const std::string& date, const Epoch& epoch) {
    return days_since(Date::parse(date), epoch);
  }, py::arg("date"), py::arg("epoch") = Epoch{});

  py::class_<FitDiagnostics>(m, "FitDiagnostics")
      .def_readonly("rmse", &FitDiagnostics::rmse)
      .def_readonly("n_points", &FitDiagnostics::n_points)
      .def_readonly("n_params", &FitDiagnostics::n_params)
      .def_readonly("converged", &FitDiagnostics::converged)
      .def_readonly("iterations", &FitDiagnostics::iterations)
      .def_readonly("objective_value", &FitDiagnostics::objective_value);

  py::class_<ScalingObservation>(m, "ScalingObservation")
      .def(py::init<double, double, double>(), py::arg("params"),
           py::arg("tokens"), py::arg("loss"))
      .def_readwrite("params", &ScalingObservation::params)
      .def_readwrite("tokens", &ScalingObservation::tokens)
      .def_readwrite("loss", &ScalingObservation::loss);

  py::class_<PerfObservation>(m, "PerfObservation")
      .def(py::init<double, double>(), py::arg("loss"), py::arg("score"))
      .def_readwrite("loss", &PerfObservation::loss)
      .def_readwrite("score", &PerfObservation::score);

  py::class_<PriceRecord>(m, "PriceRecord")
      .def(py::init([](std::string model, const std::string& date, double usd) {
             return PriceRecord{std::move(model), Date::parse(date), usd};
           }),
           py::arg("model"), py::arg("date"), py::arg("usd_per_million_tokens"))
      .def_readwrite("model", &PriceRecord::model)
      .def_property_readonly("date",
                             [](const PriceRecord& p) { return p.date.iso(); })
      .def_readwrite("usd_per_million_tokens",
                     &PriceRecord::usd_per_million_tokens);

  py::class_<ModelRecord>(m, "ModelRecord")
      .def(py::init([](std::string name, double param_count,
                       const std::string& release_date, BenchmarkMap scores,
                       std::optional<double> train_tokens,
                       std::optional<std::string> compressed_from) {
             ModelRecord r;
             r.name = std::move(name);
             r.param_count = param_count;
             r.release_date = Date::parse(release_date);
             r.scores = std::move(scores);
             r.train_tokens = train_tokens;
             r.compressed_from = std::move(compressed_from);
             validate(r);
             return r;
           }),
           py::arg("name"), py::arg("param_count"), py::arg("release_date"),
           py::arg("scores") = BenchmarkMap{},
           py::arg("train_tokens") = std::nullopt,
           py::arg("compressed_from") = std::nullopt)
      .def_readonly("name", &ModelRecord::name)
      .def_readonly("param_count", &ModelRecord::param_count)
      .def_readonly("train_tokens", &ModelRecord::train_tokens)
      .def_property_readonly(
          "release_date", [](const ModelRecord& r) { return r.release_date.iso(); })
      .def_readonly("scores", &ModelRecord::scores)
      .def_readonly("compressed_from", &ModelRecord::compressed_from);

  py::class_<LossLawFit>(m, "LossLawFit")
      .def(py::init([](double a, double alpha, double b, double beta) {
             LossLawFit f{a, alpha, b, beta, {}};
             validate(f);
             return f;
           }),
           py::arg("a"), py::arg("alpha"), py::arg("b"), py::arg("beta"))
      .def_readonly("a", &LossLawFit::a)
      .def_readonly("alpha", &LossLawFit::alpha)
      .def_readonly("b", &LossLawFit::b)
      .def_readonly("beta", &LossLawFit::beta)
      .def_readonly("diagnostics", &LossLawFit::diagnostics)
      .def("predict", [](const LossLawFit& f, double n, double d) {
        return predict_loss(f, n, d);
      }, py::arg("params"), py::arg("tokens"))
      .def("invert", [](const LossLawFit& f, double loss, double d) {
        return invert_for_params(f, loss, d);
      }, py::arg("loss"), py::arg("tokens") = kDefaultD0Tokens)
      .def("to_json", &loss_fit_to_json)
      .def_static("from_json", [](const std::string& s) {
        return loss_fit_from_json(s);
      });

  py::class_<PerfCurveFit>(m, "PerfCurveFit")
      .def(py::init([](double c, double gamma, double l, double d) {
             PerfCurveFit f{c, gamma, l, d, {}};
             validate(f);
             return f;
           }),
           py::arg("c"), py::arg("gamma"), py::arg("l"), py::arg("d"))
      .def_readonly("c", &PerfCurveFit::c)
      .def_readonly("gamma", &PerfCurveFit::gamma)
      .def_readonly("l", &PerfCurveFit::l)
      .def_readonly("d", &PerfCurveFit::d)
      .def_readonly("diagnostics", &PerfCurveFit::diagnostics)
      .def("predict", [](const PerfCurveFit& f, double loss) {
        return predict_score(f, loss);
      }, py::arg("loss"))
      .def("invert", [](const PerfCurveFit& f, double score) {
        return invert_for_loss(f, score);
      }, py::arg("score"))
      .def("to_json", &perf_fit_to_json)
      .def_static("from_json", [](const std::string& s) {
        return perf_fit_from_json(s);
      });

  m.def("fit_loss_law", [](const std::vector<ScalingObservation>& obs,
                           std::uint64_t seed) {
    FitConfig config = default_loss_law_config();
    config.seed = seed;
    return fit_loss_law(obs, config);
  }, py::arg("observations"), py::arg("seed") = 0);
  m.def("fit_perf_curve", [](const std::vector<PerfObservation>& obs,
                             std::uint64_t seed) {
    FitConfig config;
    config.seed = seed;
    return fit_perf_curve(obs, config);
  }, py::arg("observations"), py::arg("seed") = 0);

  py::class_<DensityEstimate>(m, "DensityEstimate")
      .def_readonly("model", &DensityEstimate::model)
      .def_readonly("benchmark", &DensityEstimate::benchmark)
      .def_readonly("score", &DensityEstimate::score)
      .def_readonly("effective_loss", &DensityEstimate::effective_loss)
      .def_readonly("effective_params", &DensityEstimate::effective_params)
      .def_readonly("density", &DensityEstimate::density)
      .def_readonly("d0_tokens", &DensityEstimate::d0_tokens);

  py::class_<CompressionComparison>(m, "CompressionComparison")
      .def_readonly("original", &CompressionComparison::original)
      .def_readonly("compressed", &CompressionComparison::compressed)
      .def_readonly("density_ratio", &CompressionComparison::density_ratio)
      .def_property_readonly("regression", &CompressionComparison::regression);

  m.def("effective_params", &effective_params, py::arg("loss_fit"),
        py::arg("perf_fit"), py::arg("score"),
        py::arg("d0_tokens") = kDefaultD0Tokens);
  m.def("density", &density, py::arg("model"), py::arg("benchmark"),
        py::arg("loss_fit"), py::arg("perf_fit"),
        py::arg("d0_tokens") = kDefaultD0Tokens);
  m.def("aggregate_density", [](const std::vector<DensityEstimate>& est,
                                const std::string& method) {
    return aggregate_density(est, parse_aggregation(method));
  }, py::arg("estimates"), py::arg("method") = "geometric");
  m.def("compare_compression", [](const ModelRecord& orig,
                                  const ModelRecord& comp,
                                  const LossLawFit& lf, const PerfCurveFit& pf,
                                  double d0, const std::string& method) {
    return compare_compression(orig, comp, lf, pf, d0, parse_aggregation(method));
  }, py::arg("original"), py::arg("compressed"), py::arg("loss_fit"),
        py::arg("perf_fit"), py::arg("d0_tokens") = kDefaultD0Tokens,
        py::arg("method") = "geometric");

  py::class_<TimedValue>(m, "TimedValue")
      .def(py::init<double, double, std::string>(), py::arg("t"),
           py::arg("value"), py::arg("label") = "")
      .def_readwrite("t", &TimedValue::t)
      .def_readwrite("value", &TimedValue::value)
      .def_readwrite("label", &TimedValue::label);

  auto direction = [](const std::string& s) {
    if (s == "upper") return Direction::kUpper;
    if (s == "lower") return Direction::kLower;
    throw Error(Errc::kValidation, "direction must be 'upper' or 'lower'",
                "direction");
  };

  py::class_<TrendFit>(m, "TrendFit")
      .def_readonly("slope_per_day", &TrendFit::slope_per_day)
      .def_readonly("intercept", &TrendFit::intercept)
      .def_readonly("r_squared", &TrendFit::r_squared)
      .def_readonly("doubling_days", &TrendFit::doubling_days)
      .def_readonly("envelope", &TrendFit::envelope)
      .def_property_readonly("epoch", [](const TrendFit& f) {
        return f.epoch.reference_date.iso();
      })
      .def_property_readonly("direction", [](const TrendFit& f) {
        return std::string(direction_name(f.direction));
      })
      .def("project", [](const TrendFit& f, double t) { return project(f, t); },
           py::arg("t"))
      .def("to_json", &trend_to_json)
      .def_static("from_json",
                  [](const std::string& s) { return trend_from_json(s); });

  py::class_<SplitTrend>(m, "SplitTrend")
      .def_readonly("before", &SplitTrend::before)
      .def_readonly("after", &SplitTrend::after)
      .def_readonly("slope_ratio", &SplitTrend::slope_ratio)
      .def_property_readonly("split_date",
                             [](const SplitTrend& s) { return s.split_date.iso(); });

  m.def("extract_envelope", [direction](const std::vector<TimedValue>& pts,
                                        const std::string& dir) {
    return extract_envelope(pts, direction(dir));
  }, py::arg("points"), py::arg("direction") = "upper");
  m.def("fit_trend", [direction](const std::vector<TimedValue>& pts,
                                 const std::string& dir, const Epoch& epoch) {
    return fit_trend(pts, direction(dir), epoch);
  }, py::arg("points"), py::arg("direction") = "upper",
        py::arg("epoch") = Epoch{});
  m.def("fit_envelope_trend", [direction](const std::vector<TimedValue>& pts,
                                          const std::string& dir,
                                          const Epoch& epoch) {
    return fit_envelope_trend(pts, direction(dir), epoch);
  }, py::arg("points"), py::arg("direction") = "upper",
        py::arg("epoch") = Epoch{});
  m.def("split_trend", [](const std::vector<TimedValue>& pts,
                          const std::string& split, const Epoch& epoch) {
    return split_trend(pts, Date::parse(split), epoch);
  }, py::arg("points"), py::arg("split_date") = "2022-11-30",
        py::arg("epoch") = Epoch{});
  m.def("fit_price_trend", [](const std::vector<PriceRecord>& prices,
                              const Epoch& epoch) {
    return fit_price_trend(prices, epoch);
  }, py::arg("prices"), py::arg("epoch") = Epoch{});
  m.def("envelope_reduction", &envelope_reduction, py::arg("fit"));
  m.def("doubling_days", &doubling_days, py::arg("slope_per_day"));
  m.def("combine_moore", [](double density_days, double chip_days) {
    return combine_moore(density_days, MooreConfig{chip_days});
  }, py::arg("density_doubling_days"),
        py::arg("chip_doubling_days") = MooreConfig{}.chip_doubling_days);

  m.def("load_models", [](const std::filesystem::path& p) {
    return load_models_file(p);
  }, py::arg("path"));

  m.def("gen_density_timeline", [](double slope, double intercept,
                                   const std::vector<double>& days,
                                   double sigma, std::uint64_t seed) {
    return gen_density_timeline(slope, intercept, days, sigma, seed);
  }, py::arg("slope_per_day"), py::arg("intercept"), py::arg("days"),
        py::arg("noise_sigma") = 0.0, py::arg("seed") = 0);
  m.def("gen_scaling_grid", [](const LossLawFit& truth, double sigma,
                               std::uint64_t seed) {
    SyntheticSpec spec;
    spec.loss_truth = truth;
    spec.noise_sigma = sigma;
    spec.seed = seed;
    spec.validate();
    return gen_scaling_grid(spec);
  }, py::arg("truth"), py::arg("noise_sigma") = 0.0, py::arg("seed") = 0);
  m.def("gen_perf_points", [](const PerfCurveFit& truth,
                              const std::vector<double>& losses, double sigma,
                              std::uint64_t seed) {
    SyntheticSpec spec;
    spec.perf_truth = truth;
    spec.noise_sigma = sigma;
    spec.seed = seed;
    spec.validate();
    return gen_perf_points(spec, losses);
  }, py::arg("truth"), py::arg("losses"), py::arg("noise_sigma") = 0.0,
        py::arg("seed") = 0);

  m.def("run_cli", [](std::vector<std::string> args) {
    args.insert(args.begin(), "density-lab");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"),
        "Runs the command-line tool in-process; returns (exit_code, stdout, "
        "stderr).");

  m.attr("DEFAULT_D0_TOKENS") = kDefaultD0Tokens;
}
