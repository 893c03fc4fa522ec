// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "density_lab/perf_curve.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include <fmt/core.h>

#include "density_lab/error.h"

namespace density_lab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMinObservations = 8;
constexpr std::size_t kMinDistinctLosses = 4;
constexpr double kMinScoreSpread = 0.05;

bool feasible(double c, double gamma, double d) {
  return c > 0.0 && gamma < 0.0 && d >= 0.0 && c + d <= 1.0 + kCeilingSlack;
}

double sigmoid_score(double c, double gamma, double l, double d, double loss) {
  return c / (1.0 + std::exp(-gamma * (loss - l))) + d;
}

}  // namespace

void validate(const PerfCurveFit& fit) {
  if (!(fit.c > 0.0)) throw Error(Errc::kValidation, "c must be > 0", "c");
  if (!(fit.gamma < 0.0)) {
    throw Error(Errc::kValidation, "gamma must be < 0", "gamma");
  }
  if (!std::isfinite(fit.l)) {
    throw Error(Errc::kValidation, "l must be finite", "l");
  }
  if (!(fit.d >= 0.0)) throw Error(Errc::kValidation, "d must be >= 0", "d");
  if (!(fit.c + fit.d <= 1.0 + kCeilingSlack)) {
    throw Error(Errc::kValidation, "c + d must not exceed 1", "c");
  }
}

double predict_score(const PerfCurveFit& fit, double loss) {
  return sigmoid_score(fit.c, fit.gamma, fit.l, fit.d, loss);
}

double invert_for_loss(const PerfCurveFit& fit, double score) {
  const double above_floor = score - fit.d;
  if (!(above_floor > 0.0)) {
    throw Error(Errc::kScoreBelowFloor,
                fmt::format("score {} is not above the floor d = {}", score,
                            fit.d));
  }
  const double below_ceiling = fit.c - above_floor;
  if (!(below_ceiling > 0.0)) {
    throw Error(Errc::kScoreAboveCeiling,
                fmt::format("score {} is not below the ceiling d + c = {}",
                            score, fit.d + fit.c));
  }
  return fit.l - std::log(below_ceiling / above_floor) / fit.gamma;
}

FitConfig default_perf_curve_config(
    std::span<const PerfObservation> observations) {
  FitConfig config;
  if (observations.empty()) return config;
  double lo = observations.front().score, hi = lo;
  std::vector<double> losses;
  for (const auto& o : observations) {
    lo = std::min(lo, o.score);
    hi = std::max(hi, o.score);
    losses.push_back(o.loss);
  }
  std::sort(losses.begin(), losses.end());
  const std::size_t m = losses.size() / 2;
  const double median = losses.size() % 2 == 1
                            ? losses[m]
                            : 0.5 * (losses[m - 1] + losses[m]);
  for (double gamma : {-1.0, -5.0, -20.0}) {
    config.multistart_grid.push_back({hi - lo, gamma, median, lo});
  }
  return config;
}

PerfCurveFit fit_perf_curve(std::span<const PerfObservation> observations,
                            const FitConfig& config) {
  std::set<double> distinct;
  for (const auto& o : observations) {
    validate(o);
    distinct.insert(o.loss);
  }
  if (static_cast<int>(observations.size()) < kMinObservations ||
      distinct.size() < kMinDistinctLosses) {
    throw Error(Errc::kInsufficientData,
                fmt::format("sigmoid fit needs >= {} points with >= {} distinct "
                            "losses, got {} points and {} distinct",
                            kMinObservations, kMinDistinctLosses,
                            observations.size(), distinct.size()));
  }
  const auto [lo, hi] = std::minmax_element(
      observations.begin(), observations.end(),
      [](const auto& x, const auto& y) { return x.score < y.score; });
  if (!(hi->score - lo->score > kMinScoreSpread)) {
    throw Error(Errc::kFlatScores,
                fmt::format("score spread {} is too small to fit the sigmoid",
                            hi->score - lo->score));
  }

  FitConfig run = config;
  if (run.multistart_grid.empty()) {
    run.multistart_grid = default_perf_curve_config(observations).multistart_grid;
  }
  const auto sse = [&](std::span<const double> p) {
    if (!feasible(p[0], p[1], p[3])) return kInf;
    double total = 0.0;
    for (const auto& o : observations) {
      const double r = sigmoid_score(p[0], p[1], p[2], p[3], o.loss) - o.score;
      total += r * r;
    }
    return total;
  };
  const MinimizeResult best = minimize(sse, run);

  PerfCurveFit fit{best.params[0], best.params[1], best.params[2],
                   best.params[3], best.diagnostics};
  auto& d = fit.diagnostics;
  d.n_points = static_cast<int>(observations.size());
  d.n_params = 4;
  d.rmse = std::sqrt(d.objective_value / d.n_points);
  d.converged = d.converged && d.n_points >= d.n_params;
  return fit;
}

}  // namespace density_lab
