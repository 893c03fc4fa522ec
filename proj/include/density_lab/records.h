// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <string>

#include "density_lab/date.h"

namespace density_lab {

/// Benchmark ids are opaque keys; an ordered map keeps serialization stable.
using BenchmarkMap = std::map<std::string, double>;

/// One evaluated LLM.
struct ModelRecord {
  std::string name;
  double param_count = 0.0;
  std::optional<double> train_tokens;
  Date release_date;
  BenchmarkMap scores;         // fractions in [0, 1]
  BenchmarkMap measured_loss;  // conditional loss, nats
  std::optional<std::string> compressed_from;

  friend bool operator==(const ModelRecord&, const ModelRecord&) = default;
};

/// (N, D, L) triple from a reference-model training run.
struct ScalingObservation {
  double params = 0.0;
  double tokens = 0.0;
  double loss = 0.0;

  friend bool operator==(const ScalingObservation&,
                         const ScalingObservation&) = default;
};

/// (L, S) pair used to fit the loss-to-score curve.
struct PerfObservation {
  double loss = 0.0;
  double score = 0.0;

  friend bool operator==(const PerfObservation&,
                         const PerfObservation&) = default;
};

struct PriceRecord {
  std::string model;
  Date date;
  double usd_per_million_tokens = 0.0;

  friend bool operator==(const PriceRecord&, const PriceRecord&) = default;
};

// Invariant checks. Each throws Error(kValidation) with the offending field
// as detail; `where` is prefixed to the message (e.g. "line 4").
void validate(const ModelRecord& record, const std::string& where = {});
void validate(const ScalingObservation& obs, const std::string& where = {});
void validate(const PerfObservation& obs, const std::string& where = {});
void validate(const PriceRecord& record, const std::string& where = {});

}  // namespace density_lab
