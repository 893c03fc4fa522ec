// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace density_lab {

enum class Errc {
  kIo,
  kParse,
  kValidation,
  kDuplicateName,
  kRankDeficient,
  kNoFiniteStart,
  kDegenerateData,
  kInsufficientData,
  kDegenerateGrid,
  kFlatScores,
  kUnattainablePerformance,
  kScoreBelowFloor,
  kScoreAboveCeiling,
  kMissingScore,
  kEmptyInput,
  kMixedModels,
  kNoCommonBenchmarks,
  kLinkMismatch,
  kInsufficientPoints,
  kDegenerateTimes,
  kZeroSlope,
};

/// Stable name of an error kind, e.g. "ScoreAboveCeiling".
std::string_view errc_name(Errc code);

/// Single exception type for the library. `detail()` carries the offending
/// field name, line number, or trend side when the error kind has one.
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message, std::string detail = {});

  Errc code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace density_lab
