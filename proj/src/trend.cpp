// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "density_lab/trend.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <fmt/core.h>

#include "density_lab/error.h"
#include "density_lab/optimizer.h"

namespace density_lab {

namespace {

bool more_extreme(double a, double b, Direction dir) {
  return dir == Direction::kUpper ? a > b : a < b;
}

std::vector<TimedValue> sorted_by_t(std::span<const TimedValue> points) {
  std::vector<TimedValue> out(points.begin(), points.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const TimedValue& x, const TimedValue& y) {
                     return x.t < y.t;
                   });
  return out;
}

std::size_t distinct_times(std::span<const TimedValue> points) {
  std::vector<double> ts;
  for (const auto& p : points) ts.push_back(p.t);
  std::sort(ts.begin(), ts.end());
  return static_cast<std::size_t>(
      std::distance(ts.begin(), std::unique(ts.begin(), ts.end())));
}

}  // namespace

std::vector<TimedValue> extract_envelope(std::span<const TimedValue> points,
                                         Direction direction) {
  const std::vector<TimedValue> sorted = sorted_by_t(points);
  std::vector<TimedValue> out;
  std::size_t i = 0;
  while (i < sorted.size()) {
    // Most extreme point of the group sharing this t.
    std::size_t pick = i, j = i + 1;
    for (; j < sorted.size() && sorted[j].t == sorted[i].t; ++j) {
      if (more_extreme(sorted[j].value, sorted[pick].value, direction)) pick = j;
    }
    if (out.empty() ||
        more_extreme(sorted[pick].value, out.back().value, direction)) {
      out.push_back(sorted[pick]);
    }
    i = j;
  }
  return out;
}

TrendFit fit_trend(std::span<const TimedValue> points, Direction direction,
                   const Epoch& epoch) {
  if (points.size() < 2) {
    throw Error(Errc::kInsufficientPoints,
                fmt::format("trend fit needs >= 2 points, got {}",
                            points.size()));
  }
  if (distinct_times(points) < 2) {
    throw Error(Errc::kDegenerateTimes, "all points share the same t");
  }
  TrendFit fit;
  fit.envelope = sorted_by_t(points);
  fit.direction = direction;
  fit.epoch = epoch;

  const int n = static_cast<int>(fit.envelope.size());
  Matrix design{n, 2, {}};
  std::vector<double> logs;
  for (const auto& p : fit.envelope) {
    if (!(p.value > 0.0) || !std::isfinite(p.value)) {
      throw Error(Errc::kValidation,
                  fmt::format("trend value for '{}' must be > 0", p.label),
                  "value");
    }
    design.values.push_back(p.t);
    design.values.push_back(1.0);
    logs.push_back(std::log(p.value));
  }
  const bool flat = std::all_of(logs.begin(), logs.end(),
                                [&](double v) { return v == logs.front(); });
  if (flat) {
    fit.slope_per_day = 0.0;
    fit.intercept = logs.front();
    fit.r_squared = 1.0;
  } else {
    const auto coef = linear_lsq(design, logs);
    fit.slope_per_day = coef[0];
    fit.intercept = coef[1];
    std::vector<double> predicted;
    for (const auto& p : fit.envelope) {
      predicted.push_back(fit.slope_per_day * p.t + fit.intercept);
    }
    fit.r_squared = r_squared(logs, predicted);
  }
  fit.doubling_days = fit.slope_per_day == 0.0
                          ? std::numeric_limits<double>::infinity()
                          : doubling_days(fit.slope_per_day);
  return fit;
}

TrendFit fit_envelope_trend(std::span<const TimedValue> points,
                            Direction direction, const Epoch& epoch) {
  const auto envelope = extract_envelope(points, direction);
  return fit_trend(envelope, direction, epoch);
}

double doubling_days(double slope_per_day) {
  if (slope_per_day == 0.0) {
    throw Error(Errc::kZeroSlope, "a flat trend has no doubling period");
  }
  return std::numbers::ln2 / std::abs(slope_per_day);
}

SplitTrend split_trend(std::span<const TimedValue> points, const Date& split_date,
                       const Epoch& epoch) {
  const double t_split = static_cast<double>(days_since(split_date, epoch));
  std::vector<TimedValue> before, after;
  for (const auto& p : points) (p.t < t_split ? before : after).push_back(p);

  auto side = [&](const std::vector<TimedValue>& pts, const char* name) {
    const auto envelope = extract_envelope(pts, Direction::kUpper);
    if (distinct_times(pts) < 2 || envelope.size() < 2) {
      throw Error(Errc::kInsufficientPoints,
                  fmt::format("{} side of {} needs >= 2 distinct-t envelope "
                              "points ({} points, {} on the envelope)",
                              name, split_date.iso(), pts.size(),
                              envelope.size()),
                  name);
    }
    return fit_trend(envelope, Direction::kUpper, epoch);
  };
  SplitTrend out;
  out.before = side(before, "before");
  out.after = side(after, "after");
  out.split_date = split_date;
  out.slope_ratio = out.after.slope_per_day / out.before.slope_per_day;
  return out;
}

TrendFit fit_price_trend(std::span<const PriceRecord> prices,
                         const Epoch& epoch) {
  std::vector<TimedValue> points;
  for (const auto& p : prices) {
    validate(p);
    points.push_back({static_cast<double>(days_since(p.date, epoch)),
                      p.usd_per_million_tokens, p.model});
  }
  if (points.size() < 2) {
    throw Error(Errc::kInsufficientPoints,
                fmt::format("price trend needs >= 2 records, got {}",
                            points.size()));
  }
  if (distinct_times(points) < 2) {
    throw Error(Errc::kDegenerateTimes, "all price records share one date");
  }
  const auto envelope = extract_envelope(points, Direction::kLower);
  if (envelope.size() >= 2) {
    return fit_trend(envelope, Direction::kLower, epoch);
  }
  TrendFit flat;
  flat.envelope = envelope;
  flat.direction = Direction::kLower;
  flat.epoch = epoch;
  flat.intercept = std::log(envelope.front().value);
  flat.r_squared = 1.0;
  flat.doubling_days = std::numeric_limits<double>::infinity();
  return flat;
}

double envelope_reduction(const TrendFit& fit) {
  if (fit.envelope.empty()) {
    throw Error(Errc::kEmptyInput, "trend has no envelope points");
  }
  return fit.envelope.front().value / fit.envelope.back().value;
}

double combine_moore(double density_doubling_days, const MooreConfig& moore) {
  if (!(density_doubling_days > 0.0) || !(moore.chip_doubling_days > 0.0)) {
    throw Error(Errc::kValidation, "doubling periods must be > 0",
                "chip_doubling_days");
  }
  return 1.0 / (1.0 / density_doubling_days + 1.0 / moore.chip_doubling_days);
}

double project(const TrendFit& fit, double t) {
  return std::exp(fit.slope_per_day * t + fit.intercept);
}

}  // namespace density_lab
