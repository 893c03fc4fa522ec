// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "density_lab/date.h"

#include <charconv>

#include <fmt/core.h>

#include "density_lab/error.h"

namespace density_lab {

namespace {

bool parse_digits(std::string_view s, int& out) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

Date::Date(int year, unsigned month, unsigned day) {
  const std::chrono::year_month_day ymd{std::chrono::year{year},
                                        std::chrono::month{month},
                                        std::chrono::day{day}};
  if (!ymd.ok()) {
    throw Error(Errc::kValidation,
                fmt::format("invalid calendar date {:04d}-{:02d}-{:02d}", year,
                            month, day),
                "date");
  }
  days_ = std::chrono::sys_days{ymd};
}

Date Date::parse(std::string_view text) {
  int y = 0, m = 0, d = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
      !parse_digits(text.substr(0, 4), y) ||
      !parse_digits(text.substr(5, 2), m) ||
      !parse_digits(text.substr(8, 2), d)) {
    throw Error(Errc::kParse,
                fmt::format("expected date as YYYY-MM-DD, got '{}'", text));
  }
  try {
    return Date(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
  } catch (const Error&) {
    throw Error(Errc::kParse, fmt::format("'{}' is not a calendar date", text));
  }
}

Date Date::from_days(std::int64_t days_since_unix_epoch) {
  Date out;
  out.days_ = std::chrono::sys_days{std::chrono::days{days_since_unix_epoch}};
  return out;
}

std::string Date::iso() const {
  return fmt::format("{:04d}-{:02d}-{:02d}", year(), month(), day());
}

Date Date::plus_days(std::int64_t n) const {
  return from_days(days_since_unix_epoch() + n);
}

int Date::year() const {
  return static_cast<int>(std::chrono::year_month_day{days_}.year());
}

unsigned Date::month() const {
  return static_cast<unsigned>(std::chrono::year_month_day{days_}.month());
}

unsigned Date::day() const {
  return static_cast<unsigned>(std::chrono::year_month_day{days_}.day());
}

std::int64_t days_since(const Date& date, const Epoch& epoch) {
  return date.days_since_unix_epoch() -
         epoch.reference_date.days_since_unix_epoch();
}

}  // namespace density_lab
