// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include "density_lab/loss_law.h"
#include "density_lab/perf_curve.h"
#include "density_lab/records.h"

namespace density_lab {

/// Reference data budget D0 at which effective size is defined (1T tokens).
inline constexpr double kDefaultD0Tokens = 1e12;

struct DensityEstimate {
  std::string model;
  std::string benchmark;
  double score = 0.0;
  double effective_loss = 0.0;
  double effective_params = 0.0;
  double density = 0.0;
  double d0_tokens = kDefaultD0Tokens;

  friend bool operator==(const DensityEstimate&,
                         const DensityEstimate&) = default;
};

struct CompressionComparison {
  DensityEstimate original;
  DensityEstimate compressed;
  double density_ratio = 0.0;  // compressed / original

  bool regression() const { return density_ratio < 1.0; }
};

enum class Aggregation { kGeometric, kArithmetic };

/// Parameter count a reference model trained on `d0` tokens needs to reach
/// `score`: the loss-law inverse of the sigmoid inverse. Propagates
/// kScoreBelowFloor, kScoreAboveCeiling and kUnattainablePerformance.
double effective_params(const LossLawFit& loss_fit, const PerfCurveFit& perf_fit,
                        double score, double d0 = kDefaultD0Tokens);

/// Density of `model` on one benchmark. Throws Error(kMissingScore) if the
/// model has no score there; inversion errors keep their code and gain the
/// model and benchmark in the message.
DensityEstimate density(const ModelRecord& model, const std::string& benchmark,
                        const LossLawFit& loss_fit,
                        const PerfCurveFit& perf_fit,
                        double d0 = kDefaultD0Tokens);

/// Mean of per-benchmark densities for one model at one D0. Throws
/// Error(kEmptyInput) or Error(kMixedModels) (also raised for mixed D0).
double aggregate_density(std::span<const DensityEstimate> estimates,
                         Aggregation method);

/// Collapses per-benchmark estimates for one model into a single estimate:
/// benchmark ids joined with '+', arithmetic-mean score, aggregated density,
/// effective_params = density * param_count and the loss the reference model
/// would have at that size.
DensityEstimate aggregate_estimate(std::span<const DensityEstimate> estimates,
                                   const ModelRecord& model,
                                   const LossLawFit& loss_fit,
                                   Aggregation method);

/// Densities of a compressed model and its source on their common
/// benchmarks. Throws Error(kLinkMismatch) unless
/// compressed.compressed_from == original.name, and
/// Error(kNoCommonBenchmarks) when the score sets are disjoint.
CompressionComparison compare_compression(const ModelRecord& original,
                                          const ModelRecord& compressed,
                                          const LossLawFit& loss_fit,
                                          const PerfCurveFit& perf_fit,
                                          double d0 = kDefaultD0Tokens,
                                          Aggregation method =
                                              Aggregation::kGeometric);

}  // namespace density_lab
