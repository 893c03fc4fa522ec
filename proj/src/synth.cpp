// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "density_lab/synth.h"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "density_lab/error.h"
#include "density_lab/rng.h"

namespace density_lab {

namespace {

// Stream ids keep the generators independent under one seed.
constexpr std::uint64_t kScalingStream = 1;
constexpr std::uint64_t kPerfStream = 2;
constexpr std::uint64_t kTimelineStream = 3;
constexpr std::uint64_t kModelStream = 4;

}  // namespace

void SyntheticSpec::validate() const {
  density_lab::validate(loss_truth);
  density_lab::validate(perf_truth);
  if (size_grid.empty() || token_multiples.empty()) {
    throw Error(Errc::kValidation, "size grid and token multiples must be non-empty",
                "size_grid");
  }
  for (double s : size_grid) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw Error(Errc::kValidation, "sizes must be > 0", "size_grid");
    }
  }
  for (double m : token_multiples) {
    if (!(m > 0.0) || !std::isfinite(m)) {
      throw Error(Errc::kValidation, "token multiples must be > 0",
                  "token_multiples");
    }
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw Error(Errc::kValidation,
                fmt::format("noise_sigma must be >= 0, got {}", noise_sigma),
                "noise_sigma");
  }
}

std::vector<ScalingObservation> gen_scaling_grid(const SyntheticSpec& spec) {
  spec.validate();
  SeededRng rng(spec.seed, kScalingStream);
  std::vector<ScalingObservation> out;
  for (double n : spec.size_grid) {
    for (double m : spec.token_multiples) {
      const double d = m * n;
      const double eps = spec.noise_sigma * rng.normal();
      out.push_back({n, d, predict_loss(spec.loss_truth, n, d) * std::exp(eps)});
    }
  }
  return out;
}

std::vector<PerfObservation> gen_perf_points(const SyntheticSpec& spec,
                                             std::span<const double> losses) {
  spec.validate();
  if (losses.empty()) {
    throw Error(Errc::kEmptyInput, "no losses to evaluate");
  }
  SeededRng rng(spec.seed, kPerfStream);
  std::vector<PerfObservation> out;
  for (double loss : losses) {
    const double noise = spec.noise_sigma * rng.normal();
    const double score = predict_score(spec.perf_truth, loss) + noise;
    out.push_back({loss, std::clamp(score, 0.0, 1.0)});
  }
  return out;
}

std::vector<TimedValue> gen_density_timeline(double slope_per_day,
                                             double intercept,
                                             std::span<const double> days,
                                             double noise_sigma,
                                             std::uint64_t seed) {
  if (days.empty()) throw Error(Errc::kEmptyInput, "no dates to generate");
  if (!(noise_sigma >= 0.0)) {
    throw Error(Errc::kValidation, "noise_sigma must be >= 0", "noise_sigma");
  }
  SeededRng rng(seed, kTimelineStream);
  std::vector<TimedValue> out;
  for (std::size_t i = 0; i < days.size(); ++i) {
    const double eps = noise_sigma * rng.normal();
    out.push_back({days[i], std::exp(slope_per_day * days[i] + intercept + eps),
                   fmt::format("t{:03d}", i)});
  }
  return out;
}

std::vector<double> loss_grid(double lo, double hi, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
  }
  return out;
}

std::vector<double> day_grid(int count, double span_days) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(count == 1 ? 0.0 : std::round(span_days * i / (count - 1)));
  }
  return out;
}

std::vector<ModelRecord> gen_models(const SyntheticSpec& spec,
                                    std::span<const TimedValue> timeline,
                                    const Epoch& epoch,
                                    const std::string& benchmark, double d0,
                                    double min_params, double max_params) {
  spec.validate();
  SeededRng rng(spec.seed, kModelStream);
  const double log_lo = std::log(min_params), log_hi = std::log(max_params);
  std::vector<ModelRecord> out;
  for (std::size_t i = 0; i < timeline.size(); ++i) {
    const auto& p = timeline[i];
    ModelRecord r;
    r.name = fmt::format("synth-{:03d}", i);
    r.param_count = std::round(std::exp(log_lo + (log_hi - log_lo) * rng.uniform()));
    r.train_tokens = d0;
    r.release_date =
        epoch.reference_date.plus_days(static_cast<std::int64_t>(std::llround(p.t)));
    const double n_eff = p.value * r.param_count;
    r.scores[benchmark] =
        predict_score(spec.perf_truth, predict_loss(spec.loss_truth, n_eff, d0));
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace density_lab
