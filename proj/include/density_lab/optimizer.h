// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace density_lab {

struct FitDiagnostics {
  double rmse = 0.0;  // in the residual space of the fit objective
  int n_points = 0;
  int n_params = 0;
  bool converged = false;
  int iterations = 0;
  double objective_value = 0.0;  // final sum of squared residuals

  friend bool operator==(const FitDiagnostics&,
                         const FitDiagnostics&) = default;
};

/// Closed interval for one parameter.
struct Bounds {
  double lower;
  double upper;
};

struct FitConfig {
  int max_iterations = 20000;   // per start
  double relative_tolerance = 1e-12;
  std::vector<std::vector<double>> multistart_grid;
  std::vector<Bounds> parameter_bounds;  // empty = unbounded
  std::uint64_t seed = 0;

  /// Throws Error(kValidation) on max_iterations < 1, non-positive
  /// tolerance, inverted bounds or start vectors of mismatched length.
  void validate() const;
};

/// Dense row-major design matrix.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> values;

  double operator()(int r, int c) const { return values[r * cols + c]; }
  double& operator()(int r, int c) { return values[r * cols + c]; }
};

/// Least-squares coefficients for `design * x ~= targets`.
/// Throws Error(kRankDeficient) when the columns are collinear and
/// Error(kInsufficientData) when rows < cols.
std::vector<double> linear_lsq(const Matrix& design,
                               std::span<const double> targets);

using Objective = std::function<double(std::span<const double>)>;

struct MinimizeResult {
  std::vector<double> params;
  FitDiagnostics diagnostics;  // rmse/n_points are left for the caller
};

/// Multi-start Nelder-Mead. Each start is refined by repeated simplex
/// rounds; a round that improves the objective by less than
/// `relative_tolerance` (relative) marks that start converged. Points outside
/// `parameter_bounds` score +inf. The objective must be pure.
///
/// The best start wins by (objective value, start index), so the result is
/// independent of evaluation order. The seed only drives the orientation of
/// restart simplices. Throws Error(kNoFiniteStart) when the objective is
/// non-finite at every start.
MinimizeResult minimize(const Objective& objective, const FitConfig& config);

/// 1 - SS_res / SS_tot. Throws Error(kDegenerateData) if `observed` is
/// constant and Error(kInsufficientData) on length mismatch or n < 2.
double r_squared(std::span<const double> observed,
                 std::span<const double> predicted);

}  // namespace density_lab
