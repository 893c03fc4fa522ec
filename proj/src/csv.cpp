// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "csv.h"

#include <charconv>
#include <cmath>
#include <istream>
#include <iterator>

#include <fmt/core.h>

#include "density_lab/error.h"

namespace density_lab::csv {

std::vector<Row> read(std::istream& in) {
  std::string text{std::istreambuf_iterator<char>(in),
                   std::istreambuf_iterator<char>()};
  if (text.starts_with("\xEF\xBB\xBF")) text.erase(0, 3);

  std::vector<Row> rows;
  Row row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  int line = 1;
  row.line = 1;

  auto end_row = [&] {
    const bool blank = row.fields.empty() && !field_started && field.empty();
    if (!blank) {
      row.fields.push_back(std::move(field));
      rows.push_back(std::move(row));
    }
    row = Row{};
    field.clear();
    field_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) {
          throw Error(Errc::kParse,
                      fmt::format("line {}: stray quote inside field", line));
        }
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        row.fields.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        field.push_back(c);
        break;
      case '\n':
        end_row();
        ++line;
        row.line = line;
        break;
      default:
        field.push_back(c);
        field_started = true;
        break;
    }
  }
  if (in_quotes) {
    throw Error(Errc::kParse,
                fmt::format("line {}: unterminated quoted field", row.line));
  }
  end_row();
  return rows;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view text, std::string_view field, int line) {
  const std::string_view t = trim(text);
  double value = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (!t.empty() && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (t.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw Error(Errc::kParse,
                fmt::format("line {}: field '{}' is not a finite number: '{}'",
                            line, field, text),
                std::string(field));
  }
  return value;
}

std::string format_number(double value) { return fmt::format("{}", value); }

}  // namespace density_lab::csv
