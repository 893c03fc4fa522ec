// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "density_lab/date.h"

#include <gtest/gtest.h>

#include "density_lab/error.h"

namespace density_lab {
namespace {

Epoch epoch(const char* iso) { return Epoch{Date::parse(iso)}; }

TEST(DaysSince, IdentityIsZero) {
  EXPECT_EQ(days_since(Date::parse("2023-02-24"), epoch("2023-02-24")), 0);
}

TEST(DaysSince, ForwardAndBackward) {
  EXPECT_EQ(days_since(Date::parse("2023-03-01"), epoch("2023-02-24")), 5);
  EXPECT_EQ(days_since(Date::parse("2023-02-20"), epoch("2023-02-24")), -4);
}

TEST(DaysSince, DefaultEpoch) {
  EXPECT_EQ(Epoch{}.reference_date.iso(), "2023-02-24");
  EXPECT_EQ(days_since(Date::parse("2024-02-24"), Epoch{}), 365);
}

TEST(DaysSince, LeapYears) {
  EXPECT_EQ(days_since(Date::parse("2024-03-01"), epoch("2024-02-28")), 2);
  EXPECT_EQ(days_since(Date::parse("2100-03-01"), epoch("2100-02-28")), 1);
  EXPECT_EQ(days_since(Date::parse("2000-03-01"), epoch("2000-02-28")), 2);
}

TEST(DaysSince, PriceWindow) {
  EXPECT_EQ(days_since(Date::parse("2024-08-01"), epoch("2022-12-01")), 609);
}

TEST(Date, ParseRoundTrip) {
  for (const char* s : {"1970-01-01", "1999-12-31", "2024-02-29", "2023-11-30"}) {
    EXPECT_EQ(Date::parse(s).iso(), s);
  }
  EXPECT_EQ(Date::parse("1970-01-02").days_since_unix_epoch(), 1);
}

TEST(Date, RejectsMalformed) {
  for (const char* s : {"2023-2-24", "2023/02/24", "2023-02-30", "2023-13-01",
                        "20230224", "", " 2023-02-24", "2023-02-24x"}) {
    try {
      Date::parse(s);
      ADD_FAILURE() << "accepted '" << s << "'";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::kParse) << s;
    }
  }
}

TEST(Date, InvalidCalendarTriple) {
  try {
    Date(2023, 2, 29);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kValidation);
  }
}

TEST(Date, OrderingAndArithmetic) {
  const Date a = Date::parse("2023-12-31");
  EXPECT_EQ(a.plus_days(1).iso(), "2024-01-01");
  EXPECT_LT(a, a.plus_days(1));
  EXPECT_EQ(a.year(), 2023);
  EXPECT_EQ(a.month(), 12u);
  EXPECT_EQ(a.day(), 31u);
  EXPECT_EQ(Date::from_days(a.days_since_unix_epoch()), a);
}

}  // namespace
}  // namespace density_lab
