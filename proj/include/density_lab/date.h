// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace density_lab {

/// Calendar date with day resolution (proleptic Gregorian, no time zone).
class Date {
 public:
  constexpr Date() = default;
  /// Throws Error(kValidation) when the triple is not a real calendar day.
  Date(int year, unsigned month, unsigned day);

  /// Parses strict ISO-8601 `YYYY-MM-DD`. Throws Error(kParse).
  static Date parse(std::string_view text);
  static Date from_days(std::int64_t days_since_unix_epoch);

  std::string iso() const;
  std::int64_t days_since_unix_epoch() const { return days_.time_since_epoch().count(); }

  Date plus_days(std::int64_t n) const;

  int year() const;
  unsigned month() const;
  unsigned day() const;

  friend auto operator<=>(const Date&, const Date&) = default;

 private:
  std::chrono::sys_days days_{};
};

/// Origin of trend time t. Defaults to 2023-02-24.
struct Epoch {
  Date reference_date{2023, 2, 24};

  friend bool operator==(const Epoch&, const Epoch&) = default;
};

/// Exact calendar-day difference `date - epoch`.
std::int64_t days_since(const Date& date, const Epoch& epoch);

}  // namespace density_lab
