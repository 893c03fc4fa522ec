// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "density_lab/registry.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <fmt/core.h>
#include <nlohmann/json.hpp>

#include "csv.h"
#include "density_lab/error.h"

namespace density_lab {

namespace {

using json = nlohmann::json;

std::string prefixed(const std::string& where, const std::string& msg) {
  return where.empty() ? msg : fmt::format("{}: {}", where, msg);
}

[[noreturn]] void invalid(const std::string& where, const std::string& field,
                          const std::string& msg) {
  throw Error(Errc::kValidation, prefixed(where, field + " " + msg), field);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

// Column name -> index, with unknown and missing columns rejected.
class Header {
 public:
  Header(const csv::Row& row, std::initializer_list<std::string_view> required,
         std::initializer_list<std::string_view> optional) {
    std::set<std::string_view> known(required);
    known.insert(optional.begin(), optional.end());
    for (std::size_t i = 0; i < row.fields.size(); ++i) {
      const std::string name(csv::trim(row.fields[i]));
      if (!known.contains(name)) {
        throw Error(Errc::kParse,
                    fmt::format("line {}: unknown column '{}'", row.line, name),
                    name);
      }
      if (!index_.emplace(name, i).second) {
        throw Error(Errc::kParse,
                    fmt::format("line {}: duplicate column '{}'", row.line, name),
                    name);
      }
    }
    for (auto name : required) {
      if (!index_.contains(std::string(name))) {
        throw Error(Errc::kParse,
                    fmt::format("line {}: missing required column '{}'",
                                row.line, name),
                    std::string(name));
      }
    }
    width_ = row.fields.size();
  }

  std::optional<std::string_view> get(const csv::Row& row,
                                      const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return csv::trim(row.fields[it->second]);
  }

  void check_width(const csv::Row& row) const {
    if (row.fields.size() != width_) {
      throw Error(Errc::kParse,
                  fmt::format("line {}: expected {} fields, found {}", row.line,
                              width_, row.fields.size()));
    }
  }

 private:
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t width_ = 0;
};

BenchmarkMap parse_pairs(std::string_view text, std::string_view column,
                         int line) {
  BenchmarkMap out;
  while (!text.empty()) {
    const auto semi = text.find(';');
    const std::string_view item = csv::trim(text.substr(0, semi));
    text = semi == std::string_view::npos ? std::string_view{}
                                          : text.substr(semi + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw Error(Errc::kParse,
                  fmt::format("line {}: '{}' entry '{}' is not id=value", line,
                              column, item),
                  std::string(column));
    }
    const std::string key(csv::trim(item.substr(0, eq)));
    if (key.empty()) {
      throw Error(Errc::kParse,
                  fmt::format("line {}: empty benchmark id in '{}'", line,
                              column),
                  std::string(column));
    }
    const std::string field = fmt::format("{}.{}", column, key);
    const double value = csv::parse_number(item.substr(eq + 1), field, line);
    if (!out.emplace(key, value).second) {
      throw Error(Errc::kParse,
                  fmt::format("line {}: benchmark '{}' repeated", line, field),
                  field);
    }
  }
  return out;
}

bool parse_bool(std::string_view text, int line) {
  if (text.empty() || text == "0" || text == "false") return false;
  if (text == "1" || text == "true") return true;
  throw Error(Errc::kParse,
              fmt::format("line {}: 'percent' must be true/false, got '{}'",
                          line, text),
              "percent");
}

Date parse_date_field(std::string_view text, std::string_view field, int line) {
  try {
    return Date::parse(text);
  } catch (const Error& e) {
    throw Error(Errc::kParse, fmt::format("line {}: field '{}': {}", line,
                                          field, e.what()),
                std::string(field));
  }
}

void scale_percent(ModelRecord& r) {
  for (auto& [_, v] : r.scores) v /= 100.0;
}

void check_unique(const std::vector<ModelRecord>& records) {
  std::unordered_set<std::string> seen;
  for (const auto& r : records) {
    if (!seen.insert(r.name).second) {
      throw Error(Errc::kDuplicateName,
                  fmt::format("model name '{}' appears more than once", r.name),
                  r.name);
    }
  }
}

std::vector<ModelRecord> models_from_csv(std::istream& in) {
  const auto rows = csv::read(in);
  std::vector<ModelRecord> out;
  if (rows.empty()) return out;
  const Header header(rows.front(), {"name", "param_count", "release_date"},
                      {"train_tokens", "compressed_from", "scores",
                       "measured_loss", "percent"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    header.check_width(row);
    ModelRecord r;
    r.name = std::string(*header.get(row, "name"));
    r.param_count =
        csv::parse_number(*header.get(row, "param_count"), "param_count",
                          row.line);
    if (auto v = header.get(row, "train_tokens"); v && !v->empty()) {
      r.train_tokens = csv::parse_number(*v, "train_tokens", row.line);
    }
    r.release_date =
        parse_date_field(*header.get(row, "release_date"), "release_date",
                         row.line);
    if (auto v = header.get(row, "compressed_from"); v && !v->empty()) {
      r.compressed_from = std::string(*v);
    }
    if (auto v = header.get(row, "scores")) {
      r.scores = parse_pairs(*v, "scores", row.line);
    }
    if (auto v = header.get(row, "measured_loss")) {
      r.measured_loss = parse_pairs(*v, "measured_loss", row.line);
    }
    if (auto v = header.get(row, "percent"); v && parse_bool(*v, row.line)) {
      scale_percent(r);
    }
    validate(r, fmt::format("line {}", row.line));
    out.push_back(std::move(r));
  }
  check_unique(out);
  return out;
}

BenchmarkMap map_from_json(const json& j, const std::string& field,
                           const std::string& where) {
  BenchmarkMap out;
  if (j.is_null()) return out;
  if (!j.is_object()) {
    throw Error(Errc::kParse, prefixed(where, field + " must be an object"),
                field);
  }
  for (const auto& [k, v] : j.items()) {
    if (!v.is_number()) {
      throw Error(Errc::kParse,
                  prefixed(where, fmt::format("{}.{} must be a number", field, k)),
                  fmt::format("{}.{}", field, k));
    }
    out.emplace(k, v.get<double>());
  }
  return out;
}

std::vector<ModelRecord> models_from_json(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in),
                         std::istreambuf_iterator<char>()};
  std::vector<ModelRecord> out;
  if (csv::trim(text).empty()) return out;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::kParse, e.what());
  }
  if (!doc.is_array()) {
    throw Error(Errc::kParse, "models JSON must be an array of objects");
  }
  static const std::set<std::string> known = {
      "name",    "param_count",   "train_tokens",    "release_date",
      "scores",  "measured_loss", "compressed_from", "percent"};
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& o = doc[i];
    const std::string where = fmt::format("record {}", i);
    if (!o.is_object()) {
      throw Error(Errc::kParse, prefixed(where, "expected an object"));
    }
    for (const auto& [k, _] : o.items()) {
      if (!known.contains(k)) {
        throw Error(Errc::kParse, prefixed(where, "unknown field '" + k + "'"),
                    k);
      }
    }
    auto require = [&](const char* key, auto pred, const char* what) {
      if (!o.contains(key) || !pred(o.at(key))) {
        throw Error(Errc::kParse,
                    prefixed(where, fmt::format("'{}' must be {}", key, what)),
                    key);
      }
      return o.at(key);
    };
    auto is_str = [](const json& v) { return v.is_string(); };
    auto is_num = [](const json& v) { return v.is_number(); };
    ModelRecord r;
    r.name = require("name", is_str, "a string").get<std::string>();
    r.param_count = require("param_count", is_num, "a number").get<double>();
    const std::string date =
        require("release_date", is_str, "a YYYY-MM-DD string")
            .get<std::string>();
    try {
      r.release_date = Date::parse(date);
    } catch (const Error& e) {
      throw Error(Errc::kParse, prefixed(where, e.what()), "release_date");
    }
    if (o.contains("train_tokens") && !o.at("train_tokens").is_null()) {
      r.train_tokens =
          require("train_tokens", is_num, "a number").get<double>();
    }
    if (o.contains("compressed_from") && !o.at("compressed_from").is_null()) {
      r.compressed_from =
          require("compressed_from", is_str, "a string").get<std::string>();
    }
    if (o.contains("scores")) {
      r.scores = map_from_json(o.at("scores"), "scores", where);
    }
    if (o.contains("measured_loss")) {
      r.measured_loss = map_from_json(o.at("measured_loss"), "measured_loss",
                                      where);
    }
    if (o.contains("percent") &&
        require("percent", [](const json& v) { return v.is_boolean(); },
                "a boolean")
            .get<bool>()) {
      scale_percent(r);
    }
    validate(r, where);
    out.push_back(std::move(r));
  }
  check_unique(out);
  return out;
}

std::string pairs_to_text(const BenchmarkMap& m) {
  std::string out;
  for (const auto& [k, v] : m) {
    if (!out.empty()) out.push_back(';');
    out += k;
    out.push_back('=');
    out += csv::format_number(v);
  }
  return out;
}

template <typename T, typename Parse>
std::vector<T> load_simple_csv(std::istream& in,
                               std::initializer_list<std::string_view> columns,
                               Parse parse_row) {
  const auto rows = csv::read(in);
  std::vector<T> out;
  if (rows.empty()) return out;
  const Header header(rows.front(), columns, {});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    header.check_width(rows[i]);
    T value = parse_row(header, rows[i]);
    validate(value, fmt::format("line {}", rows[i].line));
    out.push_back(std::move(value));
  }
  return out;
}

}  // namespace

void validate(const ModelRecord& r, const std::string& where) {
  if (r.name.empty()) invalid(where, "name", "must be non-empty");
  if (!positive(r.param_count)) {
    invalid(where, "param_count",
            fmt::format("must be > 0, got {}", r.param_count));
  }
  if (r.train_tokens && !positive(*r.train_tokens)) {
    invalid(where, "train_tokens",
            fmt::format("must be > 0, got {}", *r.train_tokens));
  }
  for (const auto& [k, v] : r.scores) {
    if (!(v >= 0.0 && v <= 1.0)) {
      invalid(where, "scores." + k, fmt::format("must be in [0, 1], got {}", v));
    }
  }
  for (const auto& [k, v] : r.measured_loss) {
    if (!positive(v)) {
      invalid(where, "measured_loss." + k, fmt::format("must be > 0, got {}", v));
    }
  }
}

void validate(const ScalingObservation& o, const std::string& where) {
  if (!positive(o.params)) invalid(where, "params", "must be > 0");
  if (!positive(o.tokens)) invalid(where, "tokens", "must be > 0");
  if (!positive(o.loss)) {
    invalid(where, "loss", fmt::format("must be > 0, got {}", o.loss));
  }
}

void validate(const PerfObservation& o, const std::string& where) {
  if (!positive(o.loss)) {
    invalid(where, "loss", fmt::format("must be > 0, got {}", o.loss));
  }
  if (!(o.score >= 0.0 && o.score <= 1.0)) {
    invalid(where, "score", fmt::format("must be in [0, 1], got {}", o.score));
  }
}

void validate(const PriceRecord& r, const std::string& where) {
  if (r.model.empty()) invalid(where, "model", "must be non-empty");
  if (!positive(r.usd_per_million_tokens)) {
    invalid(where, "usd_per_million_tokens",
            fmt::format("must be > 0, got {}", r.usd_per_million_tokens));
  }
}

std::vector<ModelRecord> load_models(std::istream& source,
                                     RecordFormat format) {
  return format == RecordFormat::kJson ? models_from_json(source)
                                       : models_from_csv(source);
}

std::vector<ScalingObservation> load_observations(std::istream& source) {
  return load_simple_csv<ScalingObservation>(
      source, {"params", "tokens", "loss"},
      [](const Header& h, const csv::Row& row) {
        return ScalingObservation{
            csv::parse_number(*h.get(row, "params"), "params", row.line),
            csv::parse_number(*h.get(row, "tokens"), "tokens", row.line),
            csv::parse_number(*h.get(row, "loss"), "loss", row.line)};
      });
}

std::vector<PerfObservation> load_perf(std::istream& source) {
  return load_simple_csv<PerfObservation>(
      source, {"loss", "score"}, [](const Header& h, const csv::Row& row) {
        return PerfObservation{
            csv::parse_number(*h.get(row, "loss"), "loss", row.line),
            csv::parse_number(*h.get(row, "score"), "score", row.line)};
      });
}

std::vector<PriceRecord> load_prices(std::istream& source) {
  auto out = load_simple_csv<PriceRecord>(
      source, {"model", "date", "usd_per_million_tokens"},
      [](const Header& h, const csv::Row& row) {
        return PriceRecord{
            std::string(*h.get(row, "model")),
            parse_date_field(*h.get(row, "date"), "date", row.line),
            csv::parse_number(*h.get(row, "usd_per_million_tokens"),
                              "usd_per_million_tokens", row.line)};
      });
  std::stable_sort(out.begin(), out.end(),
                   [](const PriceRecord& a, const PriceRecord& b) {
                     return a.date < b.date;
                   });
  return out;
}

void write_models(std::ostream& out, std::span<const ModelRecord> records,
                  RecordFormat format) {
  if (format == RecordFormat::kJson) {
    json arr = json::array();
    for (const auto& r : records) {
      json o;
      o["name"] = r.name;
      o["param_count"] = r.param_count;
      o["train_tokens"] = r.train_tokens ? json(*r.train_tokens) : json(nullptr);
      o["release_date"] = r.release_date.iso();
      o["scores"] = json::object();
      for (const auto& [k, v] : r.scores) o["scores"][k] = v;
      o["measured_loss"] = json::object();
      for (const auto& [k, v] : r.measured_loss) o["measured_loss"][k] = v;
      o["compressed_from"] =
          r.compressed_from ? json(*r.compressed_from) : json(nullptr);
      arr.push_back(std::move(o));
    }
    out << arr.dump(2) << '\n';
    return;
  }
  out << "name,param_count,train_tokens,release_date,compressed_from,scores,"
         "measured_loss\n";
  for (const auto& r : records) {
    out << csv::escape(r.name) << ',' << csv::format_number(r.param_count)
        << ',' << (r.train_tokens ? csv::format_number(*r.train_tokens) : "")
        << ',' << r.release_date.iso() << ','
        << csv::escape(r.compressed_from.value_or("")) << ','
        << csv::escape(pairs_to_text(r.scores)) << ','
        << csv::escape(pairs_to_text(r.measured_loss)) << '\n';
  }
}

void write_observations(std::ostream& out,
                        std::span<const ScalingObservation> observations) {
  out << "params,tokens,loss\n";
  for (const auto& o : observations) {
    out << csv::format_number(o.params) << ',' << csv::format_number(o.tokens)
        << ',' << csv::format_number(o.loss) << '\n';
  }
}

void write_perf(std::ostream& out, std::span<const PerfObservation> points) {
  out << "loss,score\n";
  for (const auto& p : points) {
    out << csv::format_number(p.loss) << ',' << csv::format_number(p.score)
        << '\n';
  }
}

void write_prices(std::ostream& out, std::span<const PriceRecord> prices) {
  out << "model,date,usd_per_million_tokens\n";
  for (const auto& p : prices) {
    out << csv::escape(p.model) << ',' << p.date.iso() << ','
        << csv::format_number(p.usd_per_million_tokens) << '\n';
  }
}

std::vector<ModelRecord> load_models_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::kIo, fmt::format("cannot open '{}'", path.string()),
                path.string());
  }
  const auto format = path.extension() == ".json" ? RecordFormat::kJson
                                                  : RecordFormat::kCsv;
  return load_models(in, format);
}

ModelRegistry::ModelRegistry(std::vector<ModelRecord> records)
    : records_(std::move(records)) {
  for (std::size_t i = 0; i < records_.size(); ++i) {
    validate(records_[i], fmt::format("record {}", i));
  }
  check_unique(records_);
}

const ModelRecord* ModelRegistry::find(std::string_view name) const {
  for (const auto& r : records_) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

}  // namespace density_lab
