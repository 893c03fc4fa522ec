// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "density_lab/loss_law.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <fmt/core.h>

#include "density_lab/error.h"

namespace density_lab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMinObservations = 6;

bool exponent_ok(double e) { return e > 0.0 && e < 2.0; }

struct Inner {
  double a = 0.0;
  double b = 0.0;
  double sse = kInf;
};

double log_sse(std::span<const ScalingObservation> obs, double a, double alpha,
               double b, double beta) {
  double sse = 0.0;
  for (const auto& o : obs) {
    const double pred = a * std::pow(o.params, -alpha) +
                        b * std::pow(o.tokens, -beta);
    const double r = std::log(pred) - std::log(o.loss);
    sse += r * r;
  }
  return std::isfinite(sse) ? sse : kInf;
}

Inner solve_coefficients(std::span<const ScalingObservation> obs, double alpha,
                         double beta) {
  Inner out;
  if (!exponent_ok(alpha) || !exponent_ok(beta)) return out;
  Matrix design{static_cast<int>(obs.size()), 2, {}};
  design.values.reserve(obs.size() * 2);
  std::vector<double> ones(obs.size(), 1.0);
  for (const auto& o : obs) {
    design.values.push_back(std::pow(o.params, -alpha) / o.loss);
    design.values.push_back(std::pow(o.tokens, -beta) / o.loss);
  }
  std::vector<double> coef;
  try {
    coef = linear_lsq(design, ones);
  } catch (const Error&) {
    return out;
  }
  if (!(coef[0] > 0.0) || !(coef[1] > 0.0)) return out;
  out.a = coef[0];
  out.b = coef[1];
  out.sse = log_sse(obs, out.a, alpha, out.b, beta);
  return out;
}

}  // namespace

void validate(const LossLawFit& fit) {
  if (!(fit.a > 0.0) || !std::isfinite(fit.a)) {
    throw Error(Errc::kValidation, "loss law a must be > 0", "a");
  }
  if (!(fit.b > 0.0) || !std::isfinite(fit.b)) {
    throw Error(Errc::kValidation, "loss law b must be > 0", "b");
  }
  if (!exponent_ok(fit.alpha)) {
    throw Error(Errc::kValidation, "loss law alpha must be in (0, 2)", "alpha");
  }
  if (!exponent_ok(fit.beta)) {
    throw Error(Errc::kValidation, "loss law beta must be in (0, 2)", "beta");
  }
}

double predict_loss(const LossLawFit& fit, double params, double tokens) {
  return fit.a * std::pow(params, -fit.alpha) +
         fit.b * std::pow(tokens, -fit.beta);
}

double invert_for_params(const LossLawFit& fit, double loss, double tokens) {
  const double data_term = fit.b * std::pow(tokens, -fit.beta);
  const double excess = loss - data_term;
  if (!(excess > 0.0)) {
    throw Error(Errc::kUnattainablePerformance,
                fmt::format("loss {} is not above the data-limited floor {} at "
                            "{} tokens",
                            loss, data_term, tokens));
  }
  return std::pow(excess / fit.a, -1.0 / fit.alpha);
}

FitConfig default_loss_law_config() {
  FitConfig config;
  for (int i = 1; i <= 9; ++i) {
    for (int j = 1; j <= 9; ++j) {
      config.multistart_grid.push_back({0.1 * i, 0.1 * j});
    }
  }
  config.parameter_bounds = {{0.0, 2.0}, {0.0, 2.0}};
  return config;
}

LossLawFit fit_loss_law(std::span<const ScalingObservation> observations,
                        const FitConfig& config) {
  if (static_cast<int>(observations.size()) < kMinObservations) {
    throw Error(Errc::kInsufficientData,
                fmt::format("loss-law fit needs at least {} observations, got {}",
                            kMinObservations, observations.size()));
  }
  std::set<double> sizes, tokens;
  for (const auto& o : observations) {
    validate(o);
    sizes.insert(o.params);
    tokens.insert(o.tokens);
  }
  if (sizes.size() < 2 || tokens.size() < 2) {
    throw Error(Errc::kDegenerateGrid,
                fmt::format("need >= 2 distinct params and tokens values, got "
                            "{} and {}",
                            sizes.size(), tokens.size()));
  }

  FitConfig outer = config;
  if (outer.multistart_grid.empty()) {
    outer.multistart_grid = default_loss_law_config().multistart_grid;
  }
  if (outer.parameter_bounds.empty()) {
    outer.parameter_bounds = default_loss_law_config().parameter_bounds;
  }
  const auto profile = [&](std::span<const double> e) {
    return solve_coefficients(observations, e[0], e[1]).sse;
  };
  const MinimizeResult exps = minimize(profile, outer);
  const Inner inner =
      solve_coefficients(observations, exps.params[0], exps.params[1]);

  // Joint polish in (ln a, alpha, ln b, beta).
  FitConfig polish;
  polish.max_iterations = config.max_iterations;
  polish.relative_tolerance = config.relative_tolerance;
  polish.seed = config.seed;
  polish.multistart_grid = {{std::log(inner.a), exps.params[0],
                             std::log(inner.b), exps.params[1]}};
  const auto joint = [&](std::span<const double> p) {
    if (!exponent_ok(p[1]) || !exponent_ok(p[3])) return kInf;
    return log_sse(observations, std::exp(p[0]), p[1], std::exp(p[2]), p[3]);
  };
  const MinimizeResult full = minimize(joint, polish);

  LossLawFit fit;
  if (full.diagnostics.objective_value <= inner.sse) {
    fit.a = std::exp(full.params[0]);
    fit.alpha = full.params[1];
    fit.b = std::exp(full.params[2]);
    fit.beta = full.params[3];
  } else {
    fit.a = inner.a;
    fit.alpha = exps.params[0];
    fit.b = inner.b;
    fit.beta = exps.params[1];
  }
  const double sse =
      log_sse(observations, fit.a, fit.alpha, fit.b, fit.beta);
  auto& d = fit.diagnostics;
  d.n_points = static_cast<int>(observations.size());
  d.n_params = 4;
  d.iterations = exps.diagnostics.iterations + full.diagnostics.iterations;
  d.objective_value = sse;
  d.rmse = std::sqrt(sse / d.n_points);
  d.converged = exps.diagnostics.converged && full.diagnostics.converged &&
                d.n_points >= d.n_params;
  return fit;
}

}  // namespace density_lab
