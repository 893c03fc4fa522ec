// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "density_lab/density.h"

#include <cmath>

#include <fmt/core.h>

#include "density_lab/error.h"

namespace density_lab {

double effective_params(const LossLawFit& loss_fit, const PerfCurveFit& perf_fit,
                        double score, double d0) {
  if (!(d0 > 0.0)) {
    throw Error(Errc::kValidation, "d0 must be > 0", "d0_tokens");
  }
  const double loss = invert_for_loss(perf_fit, score);
  return invert_for_params(loss_fit, loss, d0);
}

DensityEstimate density(const ModelRecord& model, const std::string& benchmark,
                        const LossLawFit& loss_fit,
                        const PerfCurveFit& perf_fit, double d0) {
  const auto it = model.scores.find(benchmark);
  if (it == model.scores.end()) {
    throw Error(Errc::kMissingScore,
                fmt::format("model '{}' has no score for '{}'", model.name,
                            benchmark),
                benchmark);
  }
  DensityEstimate est;
  est.model = model.name;
  est.benchmark = benchmark;
  est.score = it->second;
  est.d0_tokens = d0;
  try {
    est.effective_loss = invert_for_loss(perf_fit, est.score);
    est.effective_params = effective_params(loss_fit, perf_fit, est.score, d0);
  } catch (const Error& e) {
    throw Error(e.code(),
                fmt::format("model '{}', benchmark '{}': {}", model.name,
                            benchmark, e.what()),
                e.detail());
  }
  est.density = est.effective_params / model.param_count;
  return est;
}

double aggregate_density(std::span<const DensityEstimate> estimates,
                         Aggregation method) {
  if (estimates.empty()) {
    throw Error(Errc::kEmptyInput, "no density estimates to aggregate");
  }
  const auto& first = estimates.front();
  double log_sum = 0.0, sum = 0.0;
  for (const auto& e : estimates) {
    if (e.model != first.model) {
      throw Error(Errc::kMixedModels,
                  fmt::format("cannot aggregate '{}' with '{}'", e.model,
                              first.model));
    }
    if (e.d0_tokens != first.d0_tokens) {
      throw Error(Errc::kMixedModels,
                  fmt::format("cannot aggregate estimates at D0 = {} and {}",
                              e.d0_tokens, first.d0_tokens));
    }
    log_sum += std::log(e.density);
    sum += e.density;
  }
  const double n = static_cast<double>(estimates.size());
  return method == Aggregation::kGeometric ? std::exp(log_sum / n) : sum / n;
}

DensityEstimate aggregate_estimate(std::span<const DensityEstimate> estimates,
                                   const ModelRecord& model,
                                   const LossLawFit& loss_fit,
                                   Aggregation method) {
  DensityEstimate out;
  out.density = aggregate_density(estimates, method);
  out.model = estimates.front().model;
  out.d0_tokens = estimates.front().d0_tokens;
  double score_sum = 0.0;
  for (const auto& e : estimates) {
    if (!out.benchmark.empty()) out.benchmark.push_back('+');
    out.benchmark += e.benchmark;
    score_sum += e.score;
  }
  out.score = score_sum / static_cast<double>(estimates.size());
  out.effective_params = out.density * model.param_count;
  out.effective_loss =
      predict_loss(loss_fit, out.effective_params, out.d0_tokens);
  return out;
}

CompressionComparison compare_compression(const ModelRecord& original,
                                          const ModelRecord& compressed,
                                          const LossLawFit& loss_fit,
                                          const PerfCurveFit& perf_fit,
                                          double d0, Aggregation method) {
  if (compressed.compressed_from != original.name) {
    throw Error(Errc::kLinkMismatch,
                fmt::format("'{}' is not linked to '{}' (compressed_from = '{}')",
                            compressed.name, original.name,
                            compressed.compressed_from.value_or("")));
  }
  std::vector<DensityEstimate> orig_est, comp_est;
  for (const auto& [benchmark, _] : compressed.scores) {
    if (!original.scores.contains(benchmark)) continue;
    orig_est.push_back(density(original, benchmark, loss_fit, perf_fit, d0));
    comp_est.push_back(density(compressed, benchmark, loss_fit, perf_fit, d0));
  }
  if (orig_est.empty()) {
    throw Error(Errc::kNoCommonBenchmarks,
                fmt::format("'{}' and '{}' share no benchmark", original.name,
                            compressed.name));
  }
  CompressionComparison out;
  out.original = aggregate_estimate(orig_est, original, loss_fit, method);
  out.compressed = aggregate_estimate(comp_est, compressed, loss_fit, method);
  out.density_ratio = out.compressed.density / out.original.density;
  return out;
}

}  // namespace density_lab
