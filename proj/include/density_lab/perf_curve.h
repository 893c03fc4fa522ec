// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

#include "density_lab/optimizer.h"
#include "density_lab/records.h"

namespace density_lab {

/// Loss-to-score sigmoid S(L) = c / (1 + exp(-gamma (L - l))) + d.
/// gamma < 0, so lower loss means a higher score; d is the random-guess
/// floor and d + c the ceiling.
struct PerfCurveFit {
  double c = 0.0;
  double gamma = 0.0;
  double l = 0.0;
  double d = 0.0;
  FitDiagnostics diagnostics;
};

/// Slack on the c + d <= 1 ceiling.
inline constexpr double kCeilingSlack = 1e-6;

/// Throws Error(kValidation) unless c > 0, gamma < 0, d >= 0 and
/// c + d <= 1 + kCeilingSlack.
void validate(const PerfCurveFit& fit);

double predict_score(const PerfCurveFit& fit, double loss);

/// Analytic inverse of predict_score. Scores at or below d throw
/// Error(kScoreBelowFloor); at or above d + c, Error(kScoreAboveCeiling).
double invert_for_loss(const PerfCurveFit& fit, double score);

/// Starts anchored on the data: d = min score, c = max - min, l = median
/// loss, gamma in {-1, -5, -20}.
FitConfig default_perf_curve_config(std::span<const PerfObservation> observations);

/// Least squares on score. Empty `config.multistart_grid` means the
/// data-anchored default; custom starts are (c, gamma, l, d). Throws
/// Error(kInsufficientData) below 8 points or 4 distinct losses and
/// Error(kFlatScores) when max - min score <= 0.05.
PerfCurveFit fit_perf_curve(std::span<const PerfObservation> observations,
                            const FitConfig& config = {});

}  // namespace density_lab
