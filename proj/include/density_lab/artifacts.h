// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "density_lab/density.h"
#include "density_lab/loss_law.h"
#include "density_lab/perf_curve.h"
#include "density_lab/trend.h"

namespace density_lab {

// Fit and trend artifacts. Serializers emit 2-space-indented JSON with a
// trailing newline; parsers require exactly the serialized field set and
// throw Error(kParse) otherwise, Error(kValidation) on invariant violations.

std::string loss_fit_to_json(const LossLawFit& fit);
LossLawFit loss_fit_from_json(std::string_view text);

std::string perf_fit_to_json(const PerfCurveFit& fit);
PerfCurveFit perf_fit_from_json(std::string_view text);

/// A flat trend's infinite doubling period is written as null.
std::string trend_to_json(const TrendFit& fit);
TrendFit trend_from_json(std::string_view text);

std::string estimates_to_json(std::span<const DensityEstimate> estimates);
std::vector<DensityEstimate> estimates_from_json(std::string_view text);
void write_estimates_csv(std::ostream& out,
                         std::span<const DensityEstimate> estimates);

/// Per-model density after aggregating benchmarks.
struct ModelDensity {
  std::string model;
  Date release_date;
  double param_count = 0.0;
  double density = 0.0;
  std::vector<std::string> benchmarks;

  friend bool operator==(const ModelDensity&, const ModelDensity&) = default;
};

/// A (model, benchmark) pair whose score could not be inverted.
struct SkippedEstimate {
  std::string model;
  std::string benchmark;
  std::string reason;  // error kind name, e.g. "ScoreAboveCeiling"
  std::string message;

  friend bool operator==(const SkippedEstimate&,
                         const SkippedEstimate&) = default;
};

struct DensitySummary {
  double d0_tokens = kDefaultD0Tokens;
  Aggregation aggregation = Aggregation::kGeometric;
  std::vector<ModelDensity> models;
  std::vector<SkippedEstimate> skipped;

  friend bool operator==(const DensitySummary&,
                         const DensitySummary&) = default;
};

std::string summary_to_json(const DensitySummary& summary);
DensitySummary summary_from_json(std::string_view text);

std::string_view aggregation_name(Aggregation method);
/// "geometric" or "arithmetic"; throws Error(kValidation) otherwise.
Aggregation parse_aggregation(std::string_view name);
std::string_view direction_name(Direction direction);

/// Reads a whole file; throws Error(kIo) naming the path.
std::string read_file(const std::filesystem::path& path);

/// Writes through a temporary sibling and renames it into place so readers
/// never observe a partial file. Throws Error(kIo).
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

}  // namespace density_lab
