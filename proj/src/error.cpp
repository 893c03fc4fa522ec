// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "density_lab/error.h"

#include <fmt/core.h>

namespace density_lab {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kIo: return "IoError";
    case Errc::kParse: return "ParseError";
    case Errc::kValidation: return "ValidationError";
    case Errc::kDuplicateName: return "DuplicateName";
    case Errc::kRankDeficient: return "RankDeficient";
    case Errc::kNoFiniteStart: return "NoFiniteStart";
    case Errc::kDegenerateData: return "DegenerateData";
    case Errc::kInsufficientData: return "InsufficientData";
    case Errc::kDegenerateGrid: return "DegenerateGrid";
    case Errc::kFlatScores: return "FlatScores";
    case Errc::kUnattainablePerformance: return "UnattainablePerformance";
    case Errc::kScoreBelowFloor: return "ScoreBelowFloor";
    case Errc::kScoreAboveCeiling: return "ScoreAboveCeiling";
    case Errc::kMissingScore: return "MissingScore";
    case Errc::kEmptyInput: return "EmptyInput";
    case Errc::kMixedModels: return "MixedModels";
    case Errc::kNoCommonBenchmarks: return "NoCommonBenchmarks";
    case Errc::kLinkMismatch: return "LinkMismatch";
    case Errc::kInsufficientPoints: return "InsufficientPoints";
    case Errc::kDegenerateTimes: return "DegenerateTimes";
    case Errc::kZeroSlope: return "ZeroSlope";
  }
  return "UnknownError";
}

Error::Error(Errc code, std::string message, std::string detail)
    : std::runtime_error(fmt::format("{}: {}", errc_name(code), message)),
      code_(code),
      detail_(std::move(detail)) {}

}  // namespace density_lab
