// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "density_lab/optimizer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <Eigen/Dense>
#include <fmt/core.h>

#include "density_lab/error.h"

namespace density_lab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Vertex {
  std::vector<double> x;
  double f = 0.0;
};

class Simplex {
 public:
  Simplex(const Objective& fn, const std::vector<Bounds>& bounds)
      : fn_(fn), bounds_(bounds) {}

  double eval(std::span<const double> x) {
    ++evaluations;
    if (!bounds_.empty()) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] >= bounds_[i].lower && x[i] <= bounds_[i].upper)) {
          return kInf;
        }
      }
    }
    const double f = fn_(x);
    return std::isnan(f) ? kInf : f;
  }

  // One Nelder-Mead round from `start`. Returns the best vertex once the
  // simplex has collapsed in value and extent, or when the budget runs out.
  Vertex round(const std::vector<double>& start, double f_start,
               std::mt19937_64& rng, bool rotate, double rel_tol, int budget,
               int& iterations) {
    const std::size_t n = start.size();
    std::vector<Vertex> s;
    s.push_back({start, f_start});
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> sign(n, 1.0);
    if (rotate) {
      std::shuffle(order.begin(), order.end(), rng);
      for (auto& v : sign) v = (rng() & 1U) ? -1.0 : 1.0;
    }
    for (std::size_t k = 0; k < n; ++k) {
      const int i = order[k];
      std::vector<double> x = start;
      const double step = x[i] != 0.0 ? 0.05 * std::abs(x[i]) : 0.00025;
      x[i] += sign[k] * step;
      double f = eval(x);
      if (!std::isfinite(f)) {
        x[i] = start[i] - sign[k] * step;
        f = eval(x);
      }
      s.push_back({std::move(x), f});
    }

    auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
    std::vector<double> centroid(n), trial(n);
    auto along = [&](double t) {
      for (std::size_t j = 0; j < n; ++j) {
        trial[j] = centroid[j] + t * (s.back().x[j] - centroid[j]);
      }
      return eval(trial);
    };

    while (iterations < budget) {
      std::stable_sort(s.begin(), s.end(), by_value);
      const double f_best = s.front().f;
      const double f_worst = s.back().f;
      if (std::isfinite(f_worst)) {
        const double spread = f_worst - f_best;
        double extent = 0.0;
        for (std::size_t v = 1; v <= n; ++v) {
          for (std::size_t j = 0; j < n; ++j) {
            extent = std::max(extent, std::abs(s[v].x[j] - s.front().x[j]) /
                                          (std::abs(s.front().x[j]) + 1e-10));
          }
        }
        if ((spread <= rel_tol * std::abs(f_best) || spread == 0.0) &&
            extent <= 1e-6) {
          break;
        }
        if (extent <= 1e-15) break;
      }
      ++iterations;

      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t j = 0; j < n; ++j) centroid[j] += s[v].x[j];
      }
      for (auto& c : centroid) c /= static_cast<double>(n);

      const double f_second = s[n - 1].f;
      const double f_reflect = along(-1.0);
      if (f_reflect < f_best) {
        std::vector<double> reflected = trial;
        const double f_expand = along(-2.0);
        if (f_expand < f_reflect) {
          s.back() = {trial, f_expand};
        } else {
          s.back() = {std::move(reflected), f_reflect};
        }
        continue;
      }
      if (f_reflect < f_second) {
        s.back() = {trial, f_reflect};
        continue;
      }
      if (f_reflect < f_worst) {
        const double f_outside = along(-0.5);
        if (f_outside <= f_reflect) {
          s.back() = {trial, f_outside};
          continue;
        }
      } else {
        const double f_inside = along(0.5);
        if (f_inside < f_worst) {
          s.back() = {trial, f_inside};
          continue;
        }
      }
      // Shrink towards the best vertex.
      for (std::size_t v = 1; v <= n; ++v) {
        for (std::size_t j = 0; j < n; ++j) {
          s[v].x[j] = s[0].x[j] + 0.5 * (s[v].x[j] - s[0].x[j]);
        }
        s[v].f = eval(s[v].x);
      }
    }
    std::stable_sort(s.begin(), s.end(), by_value);
    return s.front();
  }

  long evaluations = 0;

 private:
  const Objective& fn_;
  const std::vector<Bounds>& bounds_;
};

struct StartOutcome {
  Vertex best;
  bool converged = false;
  int iterations = 0;
};

StartOutcome refine(Simplex& simplex, const std::vector<double>& start,
                    double f_start, const FitConfig& config,
                    std::uint64_t stream) {
  std::mt19937_64 rng(config.seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
  StartOutcome out{{start, f_start}, false, 0};
  bool rotate = false;
  while (out.iterations < config.max_iterations) {
    const double before = out.best.f;
    Vertex v = simplex.round(out.best.x, out.best.f, rng, rotate,
                             config.relative_tolerance, config.max_iterations,
                             out.iterations);
    if (v.f <= out.best.f) out.best = std::move(v);
    rotate = true;
    const double gain = before - out.best.f;
    if (std::isfinite(before) &&
        (gain <= config.relative_tolerance * std::abs(before) ||
         out.best.f == 0.0)) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace

void FitConfig::validate() const {
  if (max_iterations < 1) {
    throw Error(Errc::kValidation, "max_iterations must be >= 1",
                "max_iterations");
  }
  if (!(relative_tolerance > 0.0)) {
    throw Error(Errc::kValidation, "relative_tolerance must be > 0",
                "relative_tolerance");
  }
  for (const auto& b : parameter_bounds) {
    if (!(b.lower <= b.upper)) {
      throw Error(Errc::kValidation, "parameter bounds must satisfy lower <= upper",
                  "parameter_bounds");
    }
  }
  for (const auto& start : multistart_grid) {
    if (start.empty() || start.size() != multistart_grid.front().size() ||
        (!parameter_bounds.empty() &&
         start.size() != parameter_bounds.size())) {
      throw Error(Errc::kValidation,
                  "multistart vectors must share the parameter dimension",
                  "multistart_grid");
    }
  }
}

std::vector<double> linear_lsq(const Matrix& design,
                               std::span<const double> targets) {
  if (design.rows < design.cols || design.cols < 1 ||
      static_cast<int>(targets.size()) != design.rows) {
    throw Error(Errc::kInsufficientData,
                fmt::format("linear_lsq needs rows >= cols and one target per "
                            "row (rows={}, cols={}, targets={})",
                            design.rows, design.cols, targets.size()));
  }
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      a(design.values.data(), design.rows, design.cols);
  Eigen::Map<const Eigen::VectorXd> y(targets.data(), design.rows);

  // Column scaling keeps the rank test meaningful when basis magnitudes
  // differ by many orders (power-law columns do).
  Eigen::VectorXd scale = a.colwise().norm().transpose();
  for (int j = 0; j < design.cols; ++j) {
    if (!(scale[j] > 0.0) || !std::isfinite(scale[j])) {
      throw Error(Errc::kRankDeficient,
                  fmt::format("design column {} is zero or non-finite", j));
    }
  }
  const Eigen::MatrixXd scaled = a * scale.cwiseInverse().asDiagonal();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
  qr.setThreshold(1e-12);
  if (qr.rank() < design.cols) {
    throw Error(Errc::kRankDeficient,
                fmt::format("design has rank {} < {} columns", qr.rank(),
                            design.cols));
  }
  const Eigen::VectorXd x = qr.solve(y).cwiseQuotient(scale);
  return {x.data(), x.data() + x.size()};
}

MinimizeResult minimize(const Objective& objective, const FitConfig& config) {
  config.validate();
  if (config.multistart_grid.empty()) {
    throw Error(Errc::kNoFiniteStart, "multistart grid is empty");
  }
  Simplex simplex(objective, config.parameter_bounds);

  bool have_best = false;
  StartOutcome best;
  int total_iterations = 0;
  for (std::size_t i = 0; i < config.multistart_grid.size(); ++i) {
    const auto& start = config.multistart_grid[i];
    const double f0 = simplex.eval(start);
    if (!std::isfinite(f0)) continue;
    StartOutcome out = refine(simplex, start, f0, config, i);
    total_iterations += out.iterations;
    // Strict < keeps the lowest start index on ties.
    if (!have_best || out.best.f < best.best.f) {
      best = std::move(out);
      have_best = true;
    }
  }
  if (!have_best) {
    throw Error(Errc::kNoFiniteStart,
                fmt::format("objective is non-finite at all {} starts",
                            config.multistart_grid.size()));
  }
  MinimizeResult result;
  result.params = best.best.x;
  result.diagnostics.converged = best.converged;
  result.diagnostics.iterations = total_iterations;
  result.diagnostics.objective_value = best.best.f;
  result.diagnostics.n_params = static_cast<int>(best.best.x.size());
  return result;
}

double r_squared(std::span<const double> observed,
                 std::span<const double> predicted) {
  if (observed.size() != predicted.size() || observed.size() < 2) {
    throw Error(Errc::kInsufficientData,
                "r_squared needs two equal-length vectors of length >= 2");
  }
  const double n = static_cast<double>(observed.size());
  const double mean =
      std::accumulate(observed.begin(), observed.end(), 0.0) / n;
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    ss_res += (observed[i] - predicted[i]) * (observed[i] - predicted[i]);
    ss_tot += (observed[i] - mean) * (observed[i] - mean);
  }
  if (ss_tot == 0.0) {
    throw Error(Errc::kDegenerateData, "observed values are all identical");
  }
  return 1.0 - ss_res / ss_tot;
}

}  // namespace density_lab
