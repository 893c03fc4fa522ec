// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include "density_lab/optimizer.h"
#include "density_lab/records.h"

namespace density_lab {

/// Conditional-loss scaling law L(N, D) = a N^-alpha + b D^-beta.
struct LossLawFit {
  double a = 0.0;
  double alpha = 0.0;
  double b = 0.0;
  double beta = 0.0;
  FitDiagnostics diagnostics;
};

/// Throws Error(kValidation) unless a, b > 0 and both exponents are in (0, 2).
void validate(const LossLawFit& fit);

double predict_loss(const LossLawFit& fit, double params, double tokens);

/// Parameter count N with predict_loss(fit, N, tokens) == loss. Throws
/// Error(kUnattainablePerformance) when loss <= b tokens^-beta, since no
/// finite model reaches it at that data budget.
double invert_for_params(const LossLawFit& fit, double loss, double tokens);

/// (alpha, beta) starts on {0.1, ..., 0.9}^2 with exponent bounds [0, 2].
FitConfig default_loss_law_config();

/// Least squares on ln(loss). The exponents are searched by multi-start
/// simplex descent; for each candidate (a, b) come from a linear solve on the
/// basis (N^-alpha, D^-beta) with rows weighted by 1/loss, and candidates with
/// a <= 0 or b <= 0 are infeasible. The best candidate is then polished over
/// all four parameters in log space.
///
/// `config.multistart_grid` holds (alpha, beta) pairs; empty means the
/// default grid. Throws Error with kInsufficientData (< 6 observations) or
/// kDegenerateGrid (a single distinct N or D). Non-convergence is reported
/// through `diagnostics.converged`, not thrown.
LossLawFit fit_loss_law(std::span<const ScalingObservation> observations,
                        const FitConfig& config = default_loss_law_config());

}  // namespace density_lab
