// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "density_lab/density.h"
#include "density_lab/loss_law.h"
#include "density_lab/perf_curve.h"
#include "density_lab/records.h"
#include "density_lab/trend.h"

namespace density_lab {

/// Parameter counts of the six small reference models (0.005B ... 0.8B).
inline constexpr double kReferenceModelSizes[] = {
    5'247'232.0, 31'470'080.0, 106'196'736.0,
    245'416'960.0, 476'852'480.0, 828'225'024.0};

/// Training tokens per parameter used for each reference size.
inline constexpr double kReferenceTokenMultiples[] = {10, 15, 20, 30, 40, 60};

struct SyntheticSpec {
  LossLawFit loss_truth{1000.0, 0.34, 600.0, 0.28, {}};
  PerfCurveFit perf_truth{0.7, -3.0, 1.2, 0.25, {}};
  std::vector<double> size_grid{std::begin(kReferenceModelSizes),
                                std::end(kReferenceModelSizes)};
  std::vector<double> token_multiples{std::begin(kReferenceTokenMultiples),
                                      std::end(kReferenceTokenMultiples)};
  double noise_sigma = 0.01;
  std::uint64_t seed = 0;

  /// Throws Error(kValidation) on non-positive sizes/multiples, negative
  /// noise or invalid truth parameters.
  void validate() const;
};

/// One observation per (size, multiple), sizes outer. D = multiple * N and
/// loss = L(N, D) * exp(noise_sigma * z).
std::vector<ScalingObservation> gen_scaling_grid(const SyntheticSpec& spec);

/// score = S(loss) + noise_sigma * z, clamped to [0, 1].
std::vector<PerfObservation> gen_perf_points(const SyntheticSpec& spec,
                                             std::span<const double> losses);

/// value = exp(slope * t + intercept + noise_sigma * z), labelled "t000"...
std::vector<TimedValue> gen_density_timeline(double slope_per_day,
                                             double intercept,
                                             std::span<const double> days,
                                             double noise_sigma,
                                             std::uint64_t seed);

/// `count` evenly spaced losses in [lo, hi].
std::vector<double> loss_grid(double lo, double hi, int count);

/// `count` whole days evenly spaced over [0, span_days].
std::vector<double> day_grid(int count, double span_days);

/// Models whose true density follows `timeline`: release date is epoch + t,
/// param_count is log-uniform in [min_params, max_params] and the single
/// `benchmark` score is what the true curves give a reference model of size
/// density * param_count at `d0`. Names are "synth-000", ...
std::vector<ModelRecord> gen_models(const SyntheticSpec& spec,
                                    std::span<const TimedValue> timeline,
                                    const Epoch& epoch,
                                    const std::string& benchmark = "synth",
                                    double d0 = kDefaultD0Tokens,
                                    double min_params = 1e9,
                                    double max_params = 3e10);

}  // namespace density_lab
