// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "density_lab/density.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "density_lab/error.h"

namespace density_lab {
namespace {

const LossLawFit kLoss{1, 0.5, 1, 0.5, {}};
const PerfCurveFit kPerf{1, -10, 0.001001, 0, {}};

ModelRecord model(std::string name, double n, BenchmarkMap scores) {
  ModelRecord m;
  m.name = std::move(name);
  m.param_count = n;
  m.release_date = Date::parse("2024-01-01");
  m.scores = std::move(scores);
  return m;
}

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return Errc::kIo;
}

DensityEstimate estimate(double rho) {
  DensityEstimate e;
  e.model = "m";
  e.density = rho;
  return e;
}

TEST(EffectiveParams, ComposedMidpoint) {
  EXPECT_NEAR(effective_params(kLoss, kPerf, 0.5, 1e12) / 1e6, 1, 1e-9);
}

TEST(EffectiveParams, RoundTrip) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> ln(5, 12);
  // A sigmoid centred on the loss range so scores stay strictly inside (d, d+c).
  const PerfCurveFit perf{0.9, -2000, 0.0012, 0.05, {}};
  for (int i = 0; i < 200; ++i) {
    const double n = std::pow(10, ln(gen));
    const double s = predict_score(perf, predict_loss(kLoss, n, 1e12));
    if (s <= perf.d || s >= perf.d + perf.c) continue;
    EXPECT_NEAR(effective_params(kLoss, perf, s, 1e12) / n, 1, 1e-6);
  }
}

TEST(EffectiveParams, CeilingAndD0Guards) {
  EXPECT_EQ(code_of([] { effective_params(kLoss, kPerf, 1.0, 1e12); }),
            Errc::kScoreAboveCeiling);
  EXPECT_EQ(code_of([] { effective_params(kLoss, kPerf, 0.5, 0); }),
            Errc::kValidation);
}

TEST(Density, Ratio) {
  const DensityEstimate e =
      density(model("m", 2e6, {{"mmlu", 0.5}}), "mmlu", kLoss, kPerf, 1e12);
  EXPECT_NEAR(e.density, 0.5, 1e-9);
  EXPECT_NEAR(e.effective_params, 1e6, 1e-3);
  EXPECT_NEAR(e.effective_loss, 0.001001, 1e-15);
  EXPECT_EQ(e.model, "m");
  EXPECT_EQ(e.benchmark, "mmlu");
  EXPECT_EQ(e.d0_tokens, 1e12);
}

TEST(Density, ReferenceModelIsOne) {
  const PerfCurveFit perf{0.9, -2000, 0.0012, 0.05, {}};
  for (double n : {1e5, 3e6, 1e8, 5e9}) {
    const double s = predict_score(perf, predict_loss(kLoss, n, 1e12));
    const auto e = density(model("ref", n, {{"b", s}}), "b", kLoss, perf, 1e12);
    EXPECT_NEAR(e.density, 1.0, 1e-6) << n;
  }
}

TEST(Density, MissingScoreAndAnnotatedErrors) {
  const auto m = model("m", 1e6, {{"mmlu", 1.0}});
  EXPECT_EQ(code_of([&] { density(m, "gsm8k", kLoss, kPerf); }),
            Errc::kMissingScore);
  try {
    density(m, "mmlu", kLoss, kPerf);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kScoreAboveCeiling);
    EXPECT_NE(std::string(e.what()).find("m"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("mmlu"), std::string::npos);
  }
}

TEST(AggregateDensity, Examples) {
  const std::vector<DensityEstimate> same{estimate(2), estimate(2), estimate(2)};
  EXPECT_DOUBLE_EQ(aggregate_density(same, Aggregation::kGeometric), 2);
  EXPECT_DOUBLE_EQ(aggregate_density(same, Aggregation::kArithmetic), 2);
  const std::vector<DensityEstimate> pair{estimate(1), estimate(4)};
  EXPECT_NEAR(aggregate_density(pair, Aggregation::kGeometric), 2, 1e-15);
  EXPECT_DOUBLE_EQ(aggregate_density(pair, Aggregation::kArithmetic), 2.5);
}

TEST(AggregateDensity, GeometricNeverExceedsArithmetic) {
  std::mt19937_64 gen(9);
  std::lognormal_distribution<double> ln(0, 1);
  for (int i = 0; i < 200; ++i) {
    std::vector<DensityEstimate> v;
    for (int k = 0; k < 1 + i % 7; ++k) v.push_back(estimate(ln(gen)));
    EXPECT_LE(aggregate_density(v, Aggregation::kGeometric),
              aggregate_density(v, Aggregation::kArithmetic) * (1 + 1e-12));
  }
}

TEST(AggregateDensity, Guards) {
  EXPECT_EQ(code_of([] {
              aggregate_density(std::vector<DensityEstimate>{},
                                Aggregation::kGeometric);
            }),
            Errc::kEmptyInput);
  auto b = estimate(1);
  b.model = "other";
  EXPECT_EQ(code_of([&] {
              aggregate_density(std::vector<DensityEstimate>{estimate(1), b},
                                Aggregation::kGeometric);
            }),
            Errc::kMixedModels);
}

TEST(CompareCompression, RatioAndFlag) {
  const PerfCurveFit perf{0.9, -2000, 0.0012, 0.05, {}};
  const double n = 1e8;
  const double s = predict_score(perf, predict_loss(kLoss, n, 1e12));
  const auto orig = model("big", n, {{"b", s}});
  auto comp = model("small", n / 0.8, {{"b", s}});
  comp.compressed_from = "big";
  const auto c = compare_compression(orig, comp, kLoss, perf);
  EXPECT_NEAR(c.density_ratio, 0.8, 1e-6);
  EXPECT_TRUE(c.regression());

  auto twin = orig;
  twin.name = "twin";
  twin.compressed_from = "big";
  const auto same = compare_compression(orig, twin, kLoss, perf);
  EXPECT_NEAR(same.density_ratio, 1.0, 1e-12);
  EXPECT_FALSE(same.regression());
}

TEST(CompareCompression, Guards) {
  const auto orig = model("big", 1e8, {{"a", 0.5}});
  auto comp = model("small", 1e7, {{"b", 0.5}});
  EXPECT_EQ(code_of([&] { compare_compression(orig, comp, kLoss, kPerf); }),
            Errc::kLinkMismatch);
  comp.compressed_from = "big";
  EXPECT_EQ(code_of([&] { compare_compression(orig, comp, kLoss, kPerf); }),
            Errc::kNoCommonBenchmarks);
}

}  // namespace
}  // namespace density_lab
