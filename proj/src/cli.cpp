// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "density_lab/cli.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <nlohmann/json.hpp>

#include "density_lab/artifacts.h"
#include "density_lab/density.h"
#include "density_lab/error.h"
#include "density_lab/loss_law.h"
#include "density_lab/perf_curve.h"
#include "density_lab/registry.h"
#include "density_lab/svg.h"
#include "density_lab/synth.h"
#include "density_lab/trend.h"

namespace density_lab::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct RunConfig {
  std::string models, scaling, perf, prices;
  std::string loss_fit, perf_fit, density, trend;
  std::string benchmarks;
  double d0_tokens = kDefaultD0Tokens;
  std::string epoch = "2023-02-24";
  std::string split_date = "2022-11-30";
  std::string aggregate = "geometric";
  double chip_doubling_days = MooreConfig{}.chip_doubling_days;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  int max_iterations = FitConfig{}.max_iterations;
  std::string format = "csv";
  std::string target_date;

  // synth
  std::vector<double> loss_truth, perf_truth, sizes, multiples;
  double noise_sigma = SyntheticSpec{}.noise_sigma;
  int perf_points = 24;
  double perf_loss_min = 0.2, perf_loss_max = 3.5;
  double timeline_slope = 0.0073;
  double timeline_intercept = std::log(0.1);
  int timeline_points = 40;
  double timeline_span_days = 600.0;
  double timeline_sigma = 0.05;
  std::string benchmark = "synth";

  fs::path out(const std::string& name) const { return fs::path(out_dir) / name; }
  fs::path or_default(const std::string& given, const std::string& name) const {
    return given.empty() ? out(name) : fs::path(given);
  }
  Epoch epoch_value() const { return Epoch{Date::parse(epoch)}; }
  MooreConfig moore() const { return MooreConfig{chip_doubling_days}; }
};

/// Subcommand context: validated config plus output streams.
struct Ctx {
  const RunConfig& cfg;
  std::ostream& out;
  std::ostream& err;
};

const std::string& require_path(const std::string& path, const char* flag) {
  if (path.empty()) {
    throw Error(Errc::kIo, fmt::format("{} is required for this command", flag),
                flag);
  }
  return path;
}

std::string g6(double v) { return fmt::format("{:.6g}", v); }

template <typename T, typename Loader>
std::vector<T> load_csv_file(const std::string& path, Loader loader) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, fmt::format("cannot open '{}'", path), path);
  return loader(in);
}

void ensure_out_dir(const RunConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) {
    throw Error(Errc::kIo,
                fmt::format("cannot create output directory '{}'", cfg.out_dir),
                cfg.out_dir);
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// fit-loss ---------------------------------------------------------------

int cmd_fit_loss(const Ctx& c) {
  const auto obs = load_csv_file<ScalingObservation>(
      require_path(c.cfg.scaling, "--scaling"),
      [](std::istream& in) { return load_observations(in); });
  FitConfig config = default_loss_law_config();
  config.seed = c.cfg.seed;
  config.max_iterations = c.cfg.max_iterations;
  const LossLawFit fit = fit_loss_law(obs, config);
  ensure_out_dir(c.cfg);
  write_file_atomic(c.cfg.out("loss_fit.json"), loss_fit_to_json(fit));
  c.out << fmt::format(
      "loss law  L = a N^-alpha + b D^-beta  ({} points)\n"
      "  a      {}\n  alpha  {}\n  b      {}\n  beta   {}\n  rmse   {}\n"
      "  converged {}\n",
      fit.diagnostics.n_points, g6(fit.a), g6(fit.alpha), g6(fit.b),
      g6(fit.beta), g6(fit.diagnostics.rmse),
      fit.diagnostics.converged ? "yes" : "no");
  if (!fit.diagnostics.converged) {
    c.err << "warning: loss-law fit did not converge\n";
    return kNonConvergence;
  }
  return kSuccess;
}

// fit-perf ---------------------------------------------------------------

int cmd_fit_perf(const Ctx& c) {
  const auto obs = load_csv_file<PerfObservation>(
      require_path(c.cfg.perf, "--perf"),
      [](std::istream& in) { return load_perf(in); });
  FitConfig config;
  config.seed = c.cfg.seed;
  config.max_iterations = c.cfg.max_iterations;
  const PerfCurveFit fit = fit_perf_curve(obs, config);
  ensure_out_dir(c.cfg);
  write_file_atomic(c.cfg.out("perf_fit.json"), perf_fit_to_json(fit));
  c.out << fmt::format(
      "performance curve  S = c / (1 + exp(-gamma (L - l))) + d  ({} points)\n"
      "  c      {}\n  gamma  {}\n  l      {}\n  d      {}\n  rmse   {}\n"
      "  converged {}\n",
      fit.diagnostics.n_points, g6(fit.c), g6(fit.gamma), g6(fit.l), g6(fit.d),
      g6(fit.diagnostics.rmse), fit.diagnostics.converged ? "yes" : "no");
  if (!fit.diagnostics.converged) {
    c.err << "warning: performance-curve fit did not converge\n";
    return kNonConvergence;
  }
  return kSuccess;
}

// density ----------------------------------------------------------------

struct Fits {
  LossLawFit loss;
  PerfCurveFit perf;
};

Fits load_fits(const RunConfig& cfg) {
  return {loss_fit_from_json(read_file(cfg.or_default(cfg.loss_fit, "loss_fit.json"))),
          perf_fit_from_json(read_file(cfg.or_default(cfg.perf_fit, "perf_fit.json")))};
}

bool inversion_error(Errc code) {
  return code == Errc::kScoreBelowFloor || code == Errc::kScoreAboveCeiling ||
         code == Errc::kUnattainablePerformance;
}

int cmd_density(const Ctx& c) {
  const auto models = load_models_file(require_path(c.cfg.models, "--models"));
  const Fits fits = load_fits(c.cfg);
  const Aggregation method = parse_aggregation(c.cfg.aggregate);
  if (!(c.cfg.d0_tokens > 0.0)) {
    throw Error(Errc::kValidation, "--d0-tokens must be > 0", "d0_tokens");
  }
  const auto only = split_list(c.cfg.benchmarks);

  std::vector<DensityEstimate> estimates;
  DensitySummary summary;
  summary.d0_tokens = c.cfg.d0_tokens;
  summary.aggregation = method;
  for (const auto& m : models) {
    std::vector<DensityEstimate> mine;
    for (const auto& [benchmark, _] : m.scores) {
      if (!only.empty() &&
          std::find(only.begin(), only.end(), benchmark) == only.end()) {
        continue;
      }
      try {
        mine.push_back(density(m, benchmark, fits.loss, fits.perf,
                               c.cfg.d0_tokens));
      } catch (const Error& e) {
        if (!inversion_error(e.code())) throw;
        summary.skipped.push_back(
            {m.name, benchmark, std::string(errc_name(e.code())), e.what()});
      }
    }
    if (mine.empty()) continue;
    ModelDensity md{m.name, m.release_date, m.param_count,
                    aggregate_density(mine, method), {}};
    for (const auto& e : mine) md.benchmarks.push_back(e.benchmark);
    summary.models.push_back(std::move(md));
    estimates.insert(estimates.end(), mine.begin(), mine.end());
  }

  ensure_out_dir(c.cfg);
  std::ostringstream csv_text;
  write_estimates_csv(csv_text, estimates);
  write_file_atomic(c.cfg.out("density.csv"), csv_text.str());
  write_file_atomic(c.cfg.out("density.json"), estimates_to_json(estimates));
  write_file_atomic(c.cfg.out("density_summary.json"), summary_to_json(summary));

  if (c.cfg.format == "json") {
    json report = json::parse(summary_to_json(summary));
    report["estimates"] = json::parse(estimates_to_json(estimates));
    c.out << report.dump(2) << '\n';
  } else {
    c.out << csv_text.str();
    c.out << "\nmodel,density (" << aggregation_name(method) << ")\n";
    for (const auto& m : summary.models) {
      c.out << m.model << ',' << g6(m.density) << '\n';
    }
    c.out << "\nskipped\nmodel,benchmark,reason\n";
    for (const auto& s : summary.skipped) {
      c.out << s.model << ',' << s.benchmark << ',' << s.reason << '\n';
    }
  }
  return kSuccess;
}

// trend / split-trend ----------------------------------------------------

std::vector<TimedValue> density_points(const RunConfig& cfg, const Epoch& epoch) {
  const DensitySummary summary = summary_from_json(
      read_file(cfg.or_default(cfg.density, "density_summary.json")));
  std::vector<TimedValue> points;
  for (const auto& m : summary.models) {
    points.push_back({static_cast<double>(days_since(m.release_date, epoch)),
                      m.density, m.model});
  }
  return points;
}

std::vector<std::pair<double, double>> xy(std::span<const TimedValue> pts) {
  std::vector<std::pair<double, double>> out;
  for (const auto& p : pts) out.emplace_back(p.t, p.value);
  return out;
}

svg::Series fit_line(const TrendFit& fit, double t0, double t1,
                     const std::string& name, const std::string& color) {
  return {name, {{t0, project(fit, t0)}, {t1, project(fit, t1)}},
          svg::Style::kLine, color, 0.0};
}

std::pair<double, double> t_span(std::span<const TimedValue> pts) {
  auto [lo, hi] = std::minmax_element(
      pts.begin(), pts.end(),
      [](const TimedValue& a, const TimedValue& b) { return a.t < b.t; });
  return {lo->t, hi->t};
}

std::string trend_line(const std::string& what, const TrendFit& fit) {
  return fmt::format("{}: A = {}/day, R² = {}, {} every {} days", what,
                     svg::sig4(fit.slope_per_day), svg::sig4(fit.r_squared),
                     fit.direction == Direction::kUpper ? "doubles" : "halves",
                     svg::sig4(fit.doubling_days));
}

int cmd_trend(const Ctx& c) {
  const Epoch epoch = c.cfg.epoch_value();
  const auto points = density_points(c.cfg, epoch);
  if (points.empty()) {
    throw Error(Errc::kInsufficientPoints, "density summary has no models");
  }
  const auto envelope = extract_envelope(points, Direction::kUpper);
  if (envelope.size() < 2) {
    throw Error(Errc::kInsufficientPoints,
                fmt::format("trend needs >= 2 envelope points, found {}",
                            envelope.size()));
  }
  const TrendFit fit = fit_trend(envelope, Direction::kUpper, epoch);

  ensure_out_dir(c.cfg);
  write_file_atomic(c.cfg.out("trend.json"), trend_to_json(fit));
  const auto [t0, t1] = t_span(points);
  svg::Plot plot;
  plot.title = "Maximum capability density over time";
  plot.x_label = "release date";
  plot.y_label = "density";
  plot.date_axis = epoch;
  plot.series = {{"models", xy(points), svg::Style::kMarkers, "#1f77b4", 3.0},
                 {"envelope", xy(fit.envelope), svg::Style::kMarkers, "#d62728",
                  5.0},
                 fit_line(fit, t0, t1, "ln(rho) = A t + B", "#2ca02c")};
  plot.annotations = {fmt::format("A = {} per day", svg::sig4(fit.slope_per_day)),
                      fmt::format("R² = {}", svg::sig4(fit.r_squared)),
                      fmt::format("doubling every {} days",
                                  svg::sig4(fit.doubling_days))};
  write_file_atomic(c.cfg.out("density_trend.svg"), svg::render(plot));

  c.out << fmt::format(
      "density trend over {} models ({} envelope points, epoch {})\n"
      "  slope_per_day  {}\n  intercept      {}\n  r_squared      {}\n"
      "  doubling_days  {}\n",
      points.size(), fit.envelope.size(), epoch.reference_date.iso(),
      g6(fit.slope_per_day), g6(fit.intercept), g6(fit.r_squared),
      g6(fit.doubling_days));
  return kSuccess;
}

int cmd_split_trend(const Ctx& c) {
  const Epoch epoch = c.cfg.epoch_value();
  const Date split = Date::parse(c.cfg.split_date);
  const auto points = density_points(c.cfg, epoch);
  const SplitTrend st = split_trend(points, split, epoch);

  ensure_out_dir(c.cfg);
  write_file_atomic(c.cfg.out("trend_before.json"), trend_to_json(st.before));
  write_file_atomic(c.cfg.out("trend_after.json"), trend_to_json(st.after));
  const json summary = {{"split_date", split.iso()},
                        {"slope_before", st.before.slope_per_day},
                        {"slope_after", st.after.slope_per_day},
                        {"slope_ratio", st.slope_ratio},
                        {"doubling_days_before", st.before.doubling_days},
                        {"doubling_days_after", st.after.doubling_days}};
  write_file_atomic(c.cfg.out("split_trend.json"), summary.dump(2) + "\n");

  const double t_split = static_cast<double>(days_since(split, epoch));
  const auto [t0, t1] = t_span(points);
  svg::Plot plot;
  plot.title = fmt::format("Density trend before and after {}", split.iso());
  plot.x_label = "release date";
  plot.y_label = "density";
  plot.date_axis = epoch;
  plot.series = {
      {"models", xy(points), svg::Style::kMarkers, "#1f77b4", 3.0},
      {"envelope (before)", xy(st.before.envelope), svg::Style::kMarkers,
       "#ff7f0e", 5.0},
      {"envelope (after)", xy(st.after.envelope), svg::Style::kMarkers,
       "#d62728", 5.0},
      fit_line(st.before, t0, t_split, "trend (before)", "#ff7f0e"),
      fit_line(st.after, t_split, t1, "trend (after)", "#d62728")};
  plot.annotations = {trend_line("before", st.before),
                      trend_line("after", st.after),
                      fmt::format("slope ratio after/before = {}",
                                  svg::sig4(st.slope_ratio))};
  write_file_atomic(c.cfg.out("density_split_trend.svg"), svg::render(plot));

  c.out << fmt::format(
      "split at {}\n  before  A = {}  doubling {} days  ({} envelope points)\n"
      "  after   A = {}  doubling {} days  ({} envelope points)\n"
      "  slope_ratio {}\n",
      split.iso(), g6(st.before.slope_per_day), g6(st.before.doubling_days),
      st.before.envelope.size(), g6(st.after.slope_per_day),
      g6(st.after.doubling_days), st.after.envelope.size(), g6(st.slope_ratio));
  return kSuccess;
}

// price-trend ------------------------------------------------------------

int cmd_price_trend(const Ctx& c) {
  const Epoch epoch = c.cfg.epoch_value();
  const auto prices = load_csv_file<PriceRecord>(
      require_path(c.cfg.prices, "--prices"),
      [](std::istream& in) { return load_prices(in); });
  const TrendFit fit = fit_price_trend(prices, epoch);
  const double reduction = envelope_reduction(fit);
  const bool flat = fit.slope_per_day == 0.0;

  ensure_out_dir(c.cfg);
  write_file_atomic(c.cfg.out("price_trend.json"), trend_to_json(fit));
  const json summary = {
      {"reduction_factor", reduction},
      {"halving_days", flat ? json(nullptr) : json(fit.doubling_days)},
      {"halving_months",
       flat ? json(nullptr) : json(fit.doubling_days / kDaysPerMonth)}};
  write_file_atomic(c.cfg.out("price_summary.json"), summary.dump(2) + "\n");

  std::vector<TimedValue> points;
  for (const auto& p : prices) {
    points.push_back({static_cast<double>(days_since(p.date, epoch)),
                      p.usd_per_million_tokens, p.model});
  }
  const auto [t0, t1] = t_span(points);
  svg::Plot plot;
  plot.title = "Inference price over time";
  plot.x_label = "date";
  plot.y_label = "USD per 1M tokens";
  plot.date_axis = epoch;
  plot.series = {{"models", xy(points), svg::Style::kMarkers, "#1f77b4", 3.0},
                 {"cheapest so far", xy(fit.envelope), svg::Style::kMarkers,
                  "#d62728", 5.0},
                 fit_line(fit, t0, t1, "ln(price) = A t + B", "#2ca02c")};
  plot.annotations = {fmt::format("reduction {}x", svg::sig4(reduction))};
  if (!flat) {
    plot.annotations.push_back(
        fmt::format("halves every {} days ({} months)",
                    svg::sig4(fit.doubling_days),
                    svg::sig4(fit.doubling_days / kDaysPerMonth)));
  }
  write_file_atomic(c.cfg.out("price_trend.svg"), svg::render(plot));

  c.out << fmt::format("price trend over {} records ({} envelope points)\n",
                       prices.size(), fit.envelope.size());
  c.out << fmt::format("  slope_per_day     {}\n  reduction_factor  {}\n",
                       g6(fit.slope_per_day), g6(reduction));
  if (flat) {
    c.out << "  halving period    none (flat)\n";
  } else {
    c.out << fmt::format("  halving_days      {}\n  halving_months    {}\n",
                         g6(fit.doubling_days),
                         g6(fit.doubling_days / kDaysPerMonth));
  }
  return kSuccess;
}

// project ----------------------------------------------------------------

int cmd_project(const Ctx& c) {
  const TrendFit fit =
      trend_from_json(read_file(c.cfg.or_default(c.cfg.trend, "trend.json")));
  if (c.cfg.target_date.empty()) {
    throw Error(Errc::kValidation, "--target-date is required", "target_date");
  }
  const Date target = Date::parse(c.cfg.target_date);
  const double t = static_cast<double>(days_since(target, fit.epoch));
  const double t_latest = fit.envelope.back().t;
  const double value = project(fit, t);
  const double multiple = value / project(fit, t_latest);

  json report = {{"target_date", target.iso()},
                 {"t", t},
                 {"projected_value", value},
                 {"latest_envelope_t", t_latest},
                 {"multiple_vs_latest", multiple}};
  c.out << fmt::format(
      "projection to {} (t = {} days since {})\n  projected value     {}\n"
      "  multiple vs latest  {}\n",
      target.iso(), t, fit.epoch.reference_date.iso(), g6(value), g6(multiple));
  if (fit.slope_per_day > 0.0) {
    const double combined = combine_moore(fit.doubling_days, c.cfg.moore());
    const double capability = std::exp2((t - t_latest) / combined);
    report["density_doubling_days"] = fit.doubling_days;
    report["chip_doubling_days"] = c.cfg.chip_doubling_days;
    report["combined_doubling_days"] = combined;
    report["capability_multiple_vs_latest"] = capability;
    c.out << fmt::format(
        "  density doubling    {} days\n  chip doubling       {} days\n"
        "  combined doubling   {} days\n  capability multiple {}\n",
        g6(fit.doubling_days), g6(c.cfg.chip_doubling_days), g6(combined),
        g6(capability));
  }
  ensure_out_dir(c.cfg);
  write_file_atomic(c.cfg.out("projection.json"), report.dump(2) + "\n");
  return kSuccess;
}

// compare-compression ----------------------------------------------------

int cmd_compare_compression(const Ctx& c) {
  const auto models = load_models_file(require_path(c.cfg.models, "--models"));
  const ModelRegistry registry(models);
  const Fits fits = load_fits(c.cfg);
  const Aggregation method = parse_aggregation(c.cfg.aggregate);

  struct Row {
    std::string original, compressed;
    CompressionComparison cmp;
  };
  std::vector<Row> rows;
  std::vector<SkippedEstimate> skipped;
  bool any_link = false;
  for (const auto& m : registry.records()) {
    if (!m.compressed_from) continue;
    any_link = true;
    const ModelRecord* orig = registry.find(*m.compressed_from);
    if (orig == nullptr) {
      skipped.push_back({m.name, "", "LinkMismatch",
                         fmt::format("source model '{}' is not in the registry",
                                     *m.compressed_from)});
      continue;
    }
    try {
      rows.push_back({orig->name, m.name,
                      compare_compression(*orig, m, fits.loss, fits.perf,
                                          c.cfg.d0_tokens, method)});
    } catch (const Error& e) {
      if (!inversion_error(e.code()) && e.code() != Errc::kNoCommonBenchmarks) {
        throw;
      }
      skipped.push_back({m.name, "", std::string(errc_name(e.code())), e.what()});
    }
  }
  if (!any_link) {
    throw Error(Errc::kLinkMismatch,
                "no model in the registry has compressed_from set");
  }

  ensure_out_dir(c.cfg);
  std::string table =
      "original,compressed,benchmarks,original_density,compressed_density,"
      "density_ratio,regression\n";
  json arr = json::array();
  for (const auto& r : rows) {
    table += fmt::format("{},{},{},{},{},{},{}\n", r.original, r.compressed,
                         r.cmp.compressed.benchmark, g6(r.cmp.original.density),
                         g6(r.cmp.compressed.density), g6(r.cmp.density_ratio),
                         r.cmp.regression() ? "yes" : "no");
    arr.push_back({{"original", r.original},
                   {"compressed", r.compressed},
                   {"benchmarks", r.cmp.compressed.benchmark},
                   {"original_density", r.cmp.original.density},
                   {"compressed_density", r.cmp.compressed.density},
                   {"density_ratio", r.cmp.density_ratio},
                   {"regression", r.cmp.regression()}});
  }
  json skipped_json = json::array();
  for (const auto& s : skipped) {
    skipped_json.push_back(
        {{"model", s.model}, {"reason", s.reason}, {"message", s.message}});
  }
  write_file_atomic(c.cfg.out("compression.csv"), table);
  write_file_atomic(
      c.cfg.out("compression.json"),
      json{{"pairs", arr}, {"skipped", skipped_json}}.dump(2) + "\n");

  svg::Plot plot;
  plot.title = "Compressed models vs their sources";
  plot.x_label = "pair";
  plot.y_label = "density";
  svg::Series orig{"original", {}, svg::Style::kMarkers, "#1f77b4", 5.0};
  svg::Series comp{"compressed", {}, svg::Style::kMarkers, "#d62728", 5.0};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    orig.points.emplace_back(i + 1.0, rows[i].cmp.original.density);
    comp.points.emplace_back(i + 1.0, rows[i].cmp.compressed.density);
    plot.annotations.push_back(fmt::format(
        "{}: {} vs {} ratio {}", i + 1, rows[i].compressed, rows[i].original,
        svg::sig4(rows[i].cmp.density_ratio)));
  }
  plot.series = {orig, comp};
  write_file_atomic(c.cfg.out("compression.svg"), svg::render(plot));

  c.out << table;
  for (const auto& s : skipped) {
    c.out << fmt::format("skipped {}: {}\n", s.model, s.reason);
  }
  if (rows.empty()) {
    c.err << "error: no compressed pair could be compared\n";
    return kInputError;
  }
  return kSuccess;
}

// synth ------------------------------------------------------------------

SyntheticSpec synth_spec(const RunConfig& cfg) {
  SyntheticSpec spec;
  auto four = [](const std::vector<double>& v, const char* flag) {
    if (v.size() != 4) {
      throw Error(Errc::kValidation, fmt::format("{} takes 4 values", flag), flag);
    }
  };
  if (!cfg.loss_truth.empty()) {
    four(cfg.loss_truth, "--loss-truth");
    spec.loss_truth = {cfg.loss_truth[0], cfg.loss_truth[1], cfg.loss_truth[2],
                       cfg.loss_truth[3], {}};
  }
  if (!cfg.perf_truth.empty()) {
    four(cfg.perf_truth, "--perf-truth");
    spec.perf_truth = {cfg.perf_truth[0], cfg.perf_truth[1], cfg.perf_truth[2],
                       cfg.perf_truth[3], {}};
  }
  if (!cfg.sizes.empty()) spec.size_grid = cfg.sizes;
  if (!cfg.multiples.empty()) spec.token_multiples = cfg.multiples;
  spec.noise_sigma = cfg.noise_sigma;
  spec.seed = cfg.seed;
  spec.validate();
  if (cfg.perf_points < 1 || cfg.timeline_points < 1) {
    throw Error(Errc::kValidation, "point counts must be >= 1", "points");
  }
  if (!(cfg.timeline_sigma >= 0.0)) {
    throw Error(Errc::kValidation, "--timeline-sigma must be >= 0",
                "timeline_sigma");
  }
  return spec;
}

int cmd_synth(const Ctx& c) {
  const SyntheticSpec spec = synth_spec(c.cfg);
  const Epoch epoch = c.cfg.epoch_value();
  const auto scaling = gen_scaling_grid(spec);
  const auto perf = gen_perf_points(
      spec, loss_grid(c.cfg.perf_loss_min, c.cfg.perf_loss_max, c.cfg.perf_points));
  const auto timeline = gen_density_timeline(
      c.cfg.timeline_slope, c.cfg.timeline_intercept,
      day_grid(c.cfg.timeline_points, c.cfg.timeline_span_days),
      c.cfg.timeline_sigma, spec.seed);
  const auto models =
      gen_models(spec, timeline, epoch, c.cfg.benchmark, c.cfg.d0_tokens);

  ensure_out_dir(c.cfg);
  std::ostringstream s1, s2, s3, s4;
  write_observations(s1, scaling);
  write_perf(s2, perf);
  write_models(s3, models, RecordFormat::kCsv);
  s4 << "t,value,label\n";
  for (const auto& p : timeline) {
    s4 << fmt::format("{},{},{}\n", p.t, p.value, p.label);
  }
  write_file_atomic(c.cfg.out("scaling.csv"), s1.str());
  write_file_atomic(c.cfg.out("perf.csv"), s2.str());
  write_file_atomic(c.cfg.out("models.csv"), s3.str());
  write_file_atomic(c.cfg.out("timeline.csv"), s4.str());

  const json truth = {
      {"loss_truth",
       {{"a", spec.loss_truth.a},
        {"alpha", spec.loss_truth.alpha},
        {"b", spec.loss_truth.b},
        {"beta", spec.loss_truth.beta}}},
      {"perf_truth",
       {{"c", spec.perf_truth.c},
        {"gamma", spec.perf_truth.gamma},
        {"l", spec.perf_truth.l},
        {"d", spec.perf_truth.d}}},
      {"size_grid", spec.size_grid},
      {"token_multiples", spec.token_multiples},
      {"noise_sigma", spec.noise_sigma},
      {"seed", spec.seed},
      {"timeline",
       {{"slope_per_day", c.cfg.timeline_slope},
        {"intercept", c.cfg.timeline_intercept},
        {"points", c.cfg.timeline_points},
        {"span_days", c.cfg.timeline_span_days},
        {"noise_sigma", c.cfg.timeline_sigma}}},
      {"epoch", epoch.reference_date.iso()},
      {"d0_tokens", c.cfg.d0_tokens},
      {"benchmark", c.cfg.benchmark}};
  write_file_atomic(c.cfg.out("truth.json"), truth.dump(2) + "\n");

  c.out << fmt::format(
      "wrote {} scaling observations, {} perf points, {} models to {}\n",
      scaling.size(), perf.size(), models.size(), c.cfg.out_dir);
  return kSuccess;
}

// report -----------------------------------------------------------------

int cmd_report(const Ctx& c) {
  RunConfig cfg = c.cfg;
  const Ctx ctx{cfg, c.out, c.err};
  int worst = kSuccess;
  auto stage = [&](const char* name, const std::function<int(const Ctx&)>& fn) {
    c.out << "== " << name << " ==\n";
    worst = std::max(worst, fn(ctx));
  };
  stage("fit-loss", cmd_fit_loss);
  stage("fit-perf", cmd_fit_perf);
  stage("density", cmd_density);
  stage("trend", cmd_trend);
  try {
    const Epoch epoch = cfg.epoch_value();
    split_trend(density_points(cfg, epoch), Date::parse(cfg.split_date), epoch);
    stage("split-trend", cmd_split_trend);
  } catch (const Error& e) {
    if (e.code() != Errc::kInsufficientPoints) throw;
    c.out << "== split-trend ==\nskipped: " << e.what() << '\n';
  }
  if (!cfg.prices.empty()) stage("price-trend", cmd_price_trend);
  const auto models = load_models_file(cfg.models);
  if (std::any_of(models.begin(), models.end(),
                  [](const ModelRecord& m) { return m.compressed_from.has_value(); })) {
    stage("compare-compression", cmd_compare_compression);
  }
  return worst;
}

void add_options(CLI::App& app, RunConfig& cfg) {
  app.add_option("--models", cfg.models, "model registry (.csv or .json)");
  app.add_option("--scaling", cfg.scaling, "scaling observations CSV");
  app.add_option("--perf", cfg.perf, "loss/score observations CSV");
  app.add_option("--prices", cfg.prices, "price records CSV");
  app.add_option("--loss-fit", cfg.loss_fit,
                 "loss fit artifact (default <out-dir>/loss_fit.json)");
  app.add_option("--perf-fit", cfg.perf_fit,
                 "perf fit artifact (default <out-dir>/perf_fit.json)");
  app.add_option("--density", cfg.density,
                 "density summary (default <out-dir>/density_summary.json)");
  app.add_option("--trend", cfg.trend,
                 "trend artifact (default <out-dir>/trend.json)");
  app.add_option("--benchmarks", cfg.benchmarks,
                 "comma-separated benchmark ids to use (default all)");
  app.add_option("--d0-tokens", cfg.d0_tokens, "reference data budget D0")
      ->capture_default_str();
  app.add_option("--epoch", cfg.epoch, "trend time origin (YYYY-MM-DD)")
      ->capture_default_str();
  app.add_option("--split-date", cfg.split_date, "split date for split-trend")
      ->capture_default_str();
  app.add_option("--aggregate", cfg.aggregate, "benchmark aggregation")
      ->check(CLI::IsMember({"geometric", "arithmetic"}))
      ->capture_default_str();
  app.add_option("--chip-doubling-days", cfg.chip_doubling_days,
                 "chip compute-per-price doubling period")
      ->capture_default_str();
  app.add_option("--out-dir", cfg.out_dir, "output directory")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--max-iterations", cfg.max_iterations,
                 "optimizer iteration cap per start")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--format", cfg.format, "report format on stdout")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--target-date", cfg.target_date, "projection date (project)");

  app.add_option("--loss-truth", cfg.loss_truth, "synth: a alpha b beta")
      ->expected(4)->delimiter(',');
  app.add_option("--perf-truth", cfg.perf_truth, "synth: c gamma l d")
      ->expected(4)->delimiter(',');
  app.add_option("--sizes", cfg.sizes, "synth: parameter counts")
      ->delimiter(',');
  app.add_option("--multiples", cfg.multiples, "synth: token multiples of N")
      ->delimiter(',');
  app.add_option("--noise-sigma", cfg.noise_sigma,
                 "synth: loss (log-normal) and score (additive) noise")
      ->capture_default_str();
  app.add_option("--perf-points", cfg.perf_points, "synth: perf point count")
      ->capture_default_str();
  app.add_option("--perf-loss-min", cfg.perf_loss_min)->capture_default_str();
  app.add_option("--perf-loss-max", cfg.perf_loss_max)->capture_default_str();
  app.add_option("--timeline-slope", cfg.timeline_slope,
                 "synth: density trend slope per day")
      ->capture_default_str();
  app.add_option("--timeline-intercept", cfg.timeline_intercept,
                 "synth: ln density at the epoch")
      ->capture_default_str();
  app.add_option("--timeline-points", cfg.timeline_points)
      ->capture_default_str();
  app.add_option("--timeline-span-days", cfg.timeline_span_days)
      ->capture_default_str();
  app.add_option("--timeline-sigma", cfg.timeline_sigma,
                 "synth: log-normal noise on densities")
      ->capture_default_str();
  app.add_option("--benchmark", cfg.benchmark, "synth: benchmark id")
      ->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Capability-density analysis for language models",
               "density-lab"};
  app.set_config("--config", "", "TOML config file")
      ->envname("DENSITY_LAB_CONFIG");
  add_options(app, cfg);
  app.require_subcommand(1);

  using Cmd = std::function<int(const Ctx&)>;
  const std::vector<std::tuple<const char*, const char*, Cmd>> commands = {
      {"fit-loss", "fit the loss scaling law", cmd_fit_loss},
      {"fit-perf", "fit the loss-to-score sigmoid", cmd_fit_perf},
      {"density", "effective parameter size and density per model",
       cmd_density},
      {"trend", "exponential trend of the maximum density", cmd_trend},
      {"split-trend", "trends before and after a split date", cmd_split_trend},
      {"price-trend", "exponential decline of the cheapest price",
       cmd_price_trend},
      {"project", "extrapolate a trend to a target date", cmd_project},
      {"compare-compression", "densities of compressed models vs sources",
       cmd_compare_compression},
      {"synth", "write a synthetic dataset with known ground truth", cmd_synth},
      {"report", "run the full pipeline", cmd_report},
  };
  std::map<const CLI::App*, Cmd> dispatch;
  for (const auto& [name, help, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    dispatch[sub] = fn;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }

  try {
    for (const auto& [sub, fn] : dispatch) {
      if (sub->parsed()) return fn(Ctx{cfg, out, err});
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace density_lab::cli
