// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include "density_lab/date.h"
#include "density_lab/records.h"

namespace density_lab {

/// A positive value (density, or USD per 1M tokens) at t days after an epoch.
struct TimedValue {
  double t = 0.0;
  double value = 0.0;
  std::string label;

  friend bool operator==(const TimedValue&, const TimedValue&) = default;
};

/// Upper envelopes track running maxima (density), lower ones running
/// minima (price).
enum class Direction { kUpper, kLower };

/// ln(value) = slope_per_day * t + intercept. For lower trends
/// `doubling_days` is the halving period.
struct TrendFit {
  double slope_per_day = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double doubling_days = 0.0;  // ln 2 / |slope|, +inf for a flat trend
  Epoch epoch;
  std::vector<TimedValue> envelope;
  Direction direction = Direction::kUpper;
};

/// Chip compute per fixed price doubles every `chip_doubling_days`
/// (2.1 years by default).
struct MooreConfig {
  double chip_doubling_days = 766.5;
};

/// Average month length used for day/month conversions.
inline constexpr double kDaysPerMonth = 365.25 / 12.0;

/// Running strict extremum over increasing t. A point is kept iff it beats
/// every earlier kept point; the earliest point is always kept. Among points
/// with equal t only the most extreme (first in input order on exact ties)
/// is a candidate. Output is sorted by t.
std::vector<TimedValue> extract_envelope(std::span<const TimedValue> points,
                                         Direction direction);

/// Ordinary least squares of ln(value) on t over the given points, which
/// are stored (sorted by t) as the fit's envelope. Throws
/// Error(kInsufficientPoints) below two points and Error(kDegenerateTimes)
/// when every t is equal. Constant values give slope 0 and R^2 = 1.
TrendFit fit_trend(std::span<const TimedValue> points,
                   Direction direction = Direction::kUpper,
                   const Epoch& epoch = {});

/// extract_envelope followed by fit_trend.
TrendFit fit_envelope_trend(std::span<const TimedValue> points,
                            Direction direction = Direction::kUpper,
                            const Epoch& epoch = {});

/// ln 2 / |slope|. Throws Error(kZeroSlope) for a zero slope.
double doubling_days(double slope_per_day);

struct SplitTrend {
  TrendFit before;
  TrendFit after;
  Date split_date;
  double slope_ratio = 0.0;  // after / before
};

/// Independent upper-envelope trends on each side of `split_date`; a point
/// exactly at the split belongs to the after side. Throws
/// Error(kInsufficientPoints) with detail "before" or "after" when a side
/// lacks two distinct-t points (before or after envelope extraction).
SplitTrend split_trend(std::span<const TimedValue> points, const Date& split_date,
                       const Epoch& epoch = {});

/// Lower-envelope trend of prices. When no later record undercuts the
/// first one the trend is flat: slope 0 and a single envelope point.
/// Throws Error(kInsufficientPoints) below two records and
/// Error(kDegenerateTimes) when all dates coincide.
TrendFit fit_price_trend(std::span<const PriceRecord> prices,
                         const Epoch& epoch = {});

/// First envelope value over last envelope value (> 1 for a declining
/// series).
double envelope_reduction(const TrendFit& fit);

/// Doubling period when the density and chip growth rates add:
/// 1 / (1/density + 1/chip). An infinite chip period returns the density
/// period.
double combine_moore(double density_doubling_days, const MooreConfig& moore);

/// exp(slope * t + intercept).
double project(const TrendFit& fit, double t);

}  // namespace density_lab
