// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace density_lab::csv {

struct Row {
  std::vector<std::string> fields;
  int line = 0;  // 1-based line of the row's first character
};

/// RFC 4180-style reader: `,` delimiter, `"` quoting with `""` escapes,
/// LF or CRLF line ends. Blank lines are skipped; a UTF-8 BOM is dropped.
std::vector<Row> read(std::istream& in);

/// Quotes the field only when it contains a delimiter, quote or newline.
std::string escape(std::string_view field);

/// Strict decimal/scientific number. Rejects empty text, trailing garbage,
/// thousands separators and non-finite values. Throws Error(kParse).
double parse_number(std::string_view text, std::string_view field, int line);

/// Shortest representation that round-trips to the same double.
std::string format_number(double value);

std::string_view trim(std::string_view s);

}  // namespace density_lab::csv
