// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "density_lab/loss_law.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "density_lab/error.h"
#include "density_lab/synth.h"

namespace density_lab {
namespace {

const LossLawFit kUnit{1, 0.5, 1, 0.5, {}};

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return Errc::kIo;
}

TEST(PredictLoss, Substitution) {
  EXPECT_NEAR(predict_loss(kUnit, 1e6, 1e12), 0.001001, 1e-15);
  EXPECT_NEAR(predict_loss(LossLawFit{2, 0.5, 3, 1, {}}, 4, 3), 2.0, 1e-15);
}

TEST(PredictLoss, MonotoneDecreasingToZero) {
  double prev = INFINITY;
  for (double s = 1e3; s < 1e30; s *= 10) {
    const double l = predict_loss(kUnit, s, s);
    EXPECT_LT(l, prev);
    prev = l;
  }
  EXPECT_LT(prev, 1e-13);
}

TEST(InvertForParams, Examples) {
  EXPECT_NEAR(invert_for_params(kUnit, 0.001001, 1e12) / 1e6, 1, 1e-9);
  EXPECT_EQ(code_of([] { invert_for_params(kUnit, 1e-6, 1e12); }),
            Errc::kUnattainablePerformance);
  EXPECT_NEAR(invert_for_params(kUnit, 2e-6, 1e12) / 1e12, 1, 1e-9);
  EXPECT_NEAR(predict_loss(kUnit, invert_for_params(kUnit, 2e-6, 1e12), 1e12),
              2e-6, 1e-18);
}

TEST(InvertForParams, RoundTripProperty) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> exp(0.1, 1.2), lg(-1, 4), ln(5, 12);
  for (int i = 0; i < 500; ++i) {
    const LossLawFit f{std::pow(10, lg(gen)), exp(gen), std::pow(10, lg(gen)),
                       exp(gen), {}};
    const double n = std::pow(10, ln(gen));
    const double d = 1e12;
    // Well conditioned only while the parameter term carries the loss.
    if (f.a * std::pow(n, -f.alpha) < f.b * std::pow(d, -f.beta)) continue;
    EXPECT_NEAR(invert_for_params(f, predict_loss(f, n, d), d) / n, 1, 1e-10);
  }
}

TEST(FitLossLaw, NoiselessRecovery) {
  SyntheticSpec spec;
  spec.loss_truth = kUnit;
  spec.noise_sigma = 0;
  const LossLawFit fit = fit_loss_law(gen_scaling_grid(spec));
  EXPECT_NEAR(fit.a, 1, 1e-4);
  EXPECT_NEAR(fit.alpha, 0.5, 0.5e-4);
  EXPECT_NEAR(fit.b, 1, 1e-4);
  EXPECT_NEAR(fit.beta, 0.5, 0.5e-4);
  EXPECT_TRUE(fit.diagnostics.converged);
  EXPECT_EQ(fit.diagnostics.n_points, 36);
  EXPECT_EQ(fit.diagnostics.n_params, 4);
  EXPECT_LT(fit.diagnostics.rmse, 1e-6);
}

TEST(FitLossLaw, RealisticTruthRecovery) {
  // Chinchilla-like magnitudes with distinct exponents are well identified.
  SyntheticSpec spec;
  spec.noise_sigma = 0;
  const LossLawFit fit = fit_loss_law(gen_scaling_grid(spec));
  EXPECT_NEAR(fit.a / spec.loss_truth.a, 1, 1e-4);
  EXPECT_NEAR(fit.alpha / spec.loss_truth.alpha, 1, 1e-4);
  EXPECT_NEAR(fit.b / spec.loss_truth.b, 1, 1e-4);
  EXPECT_NEAR(fit.beta / spec.loss_truth.beta, 1, 1e-4);
}

TEST(FitLossLaw, Deterministic) {
  SyntheticSpec spec;
  spec.seed = 3;
  const auto obs = gen_scaling_grid(spec);
  const LossLawFit a = fit_loss_law(obs);
  const LossLawFit b = fit_loss_law(obs);
  EXPECT_EQ(a.a, b.a);
  EXPECT_EQ(a.beta, b.beta);
  EXPECT_EQ(a.diagnostics, b.diagnostics);
}

TEST(FitLossLaw, Guards) {
  const std::vector<ScalingObservation> three{{1e6, 1e7, 1}, {2e6, 2e7, 0.9},
                                              {3e6, 3e7, 0.8}};
  EXPECT_EQ(code_of([&] { fit_loss_law(three); }), Errc::kInsufficientData);
  std::vector<ScalingObservation> same_n;
  for (int i = 1; i <= 8; ++i) same_n.push_back({1e6, i * 1e7, 1.0 / i});
  EXPECT_EQ(code_of([&] { fit_loss_law(same_n); }), Errc::kDegenerateGrid);
}

TEST(LossLawFit, Validate) {
  EXPECT_NO_THROW(validate(kUnit));
  EXPECT_THROW(validate(LossLawFit{-1, 0.5, 1, 0.5, {}}), Error);
  EXPECT_THROW(validate(LossLawFit{1, 0.0, 1, 0.5, {}}), Error);
  EXPECT_THROW(validate(LossLawFit{1, 0.5, 1, 2.5, {}}), Error);
}

}  // namespace
}  // namespace density_lab
