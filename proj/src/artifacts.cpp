// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "density_lab/artifacts.h"

#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <system_error>

#include <fmt/core.h>
#include <nlohmann/json.hpp>
#include <unistd.h>

#include "csv.h"
#include "density_lab/error.h"

namespace density_lab {

namespace {

using json = nlohmann::json;

json parse(std::string_view text, std::string_view what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::kParse, fmt::format("{}: {}", what, e.what()));
  }
}

void expect_fields(const json& o, std::initializer_list<const char*> fields,
                   std::string_view what) {
  if (!o.is_object()) {
    throw Error(Errc::kParse, fmt::format("{} must be a JSON object", what));
  }
  std::set<std::string> want(fields.begin(), fields.end());
  for (const auto& [k, _] : o.items()) {
    if (!want.contains(k)) {
      throw Error(Errc::kParse, fmt::format("{}: unexpected field '{}'", what, k),
                  k);
    }
  }
  for (const auto& k : want) {
    if (!o.contains(k)) {
      throw Error(Errc::kParse, fmt::format("{}: missing field '{}'", what, k),
                  k);
    }
  }
}

template <typename T>
T get(const json& o, const char* key, std::string_view what) {
  try {
    return o.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(Errc::kParse,
                fmt::format("{}: field '{}' has the wrong type", what, key), key);
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json estimate_json(const DensityEstimate& e) {
  return {{"model", e.model},
          {"benchmark", e.benchmark},
          {"score", e.score},
          {"effective_loss", e.effective_loss},
          {"effective_params", e.effective_params},
          {"density", e.density},
          {"d0_tokens", e.d0_tokens}};
}

}  // namespace

std::string loss_fit_to_json(const LossLawFit& fit) {
  json j = {{"a", fit.a},
            {"alpha", fit.alpha},
            {"b", fit.b},
            {"beta", fit.beta},
            {"rmse", fit.diagnostics.rmse},
            {"n_points", fit.diagnostics.n_points},
            {"converged", fit.diagnostics.converged}};
  return dump(j);
}

LossLawFit loss_fit_from_json(std::string_view text) {
  constexpr std::string_view what = "loss fit";
  const json j = parse(text, what);
  expect_fields(j, {"a", "alpha", "b", "beta", "rmse", "n_points", "converged"},
                what);
  LossLawFit fit;
  fit.a = get<double>(j, "a", what);
  fit.alpha = get<double>(j, "alpha", what);
  fit.b = get<double>(j, "b", what);
  fit.beta = get<double>(j, "beta", what);
  fit.diagnostics.rmse = get<double>(j, "rmse", what);
  fit.diagnostics.n_points = get<int>(j, "n_points", what);
  fit.diagnostics.n_params = 4;
  fit.diagnostics.converged = get<bool>(j, "converged", what);
  validate(fit);
  return fit;
}

std::string perf_fit_to_json(const PerfCurveFit& fit) {
  json j = {{"c", fit.c},
            {"gamma", fit.gamma},
            {"l", fit.l},
            {"d", fit.d},
            {"rmse", fit.diagnostics.rmse},
            {"n_points", fit.diagnostics.n_points},
            {"converged", fit.diagnostics.converged}};
  return dump(j);
}

PerfCurveFit perf_fit_from_json(std::string_view text) {
  constexpr std::string_view what = "perf fit";
  const json j = parse(text, what);
  expect_fields(j, {"c", "gamma", "l", "d", "rmse", "n_points", "converged"},
                what);
  PerfCurveFit fit;
  fit.c = get<double>(j, "c", what);
  fit.gamma = get<double>(j, "gamma", what);
  fit.l = get<double>(j, "l", what);
  fit.d = get<double>(j, "d", what);
  fit.diagnostics.rmse = get<double>(j, "rmse", what);
  fit.diagnostics.n_points = get<int>(j, "n_points", what);
  fit.diagnostics.n_params = 4;
  fit.diagnostics.converged = get<bool>(j, "converged", what);
  validate(fit);
  return fit;
}

std::string_view direction_name(Direction direction) {
  return direction == Direction::kUpper ? "upper" : "lower";
}

std::string trend_to_json(const TrendFit& fit) {
  json envelope = json::array();
  for (const auto& p : fit.envelope) {
    envelope.push_back({{"t", p.t}, {"value", p.value}, {"label", p.label}});
  }
  json j = {{"slope_per_day", fit.slope_per_day},
            {"intercept", fit.intercept},
            {"r_squared", fit.r_squared},
            {"doubling_days", std::isfinite(fit.doubling_days)
                                  ? json(fit.doubling_days)
                                  : json(nullptr)},
            {"epoch", fit.epoch.reference_date.iso()},
            {"direction", direction_name(fit.direction)},
            {"envelope", std::move(envelope)}};
  return dump(j);
}

TrendFit trend_from_json(std::string_view text) {
  constexpr std::string_view what = "trend";
  const json j = parse(text, what);
  expect_fields(j, {"slope_per_day", "intercept", "r_squared", "doubling_days",
                    "epoch", "direction", "envelope"},
                what);
  TrendFit fit;
  fit.slope_per_day = get<double>(j, "slope_per_day", what);
  fit.intercept = get<double>(j, "intercept", what);
  fit.r_squared = get<double>(j, "r_squared", what);
  fit.doubling_days = j.at("doubling_days").is_null()
                          ? std::numeric_limits<double>::infinity()
                          : get<double>(j, "doubling_days", what);
  fit.epoch.reference_date = Date::parse(get<std::string>(j, "epoch", what));
  const auto dir = get<std::string>(j, "direction", what);
  if (dir != "upper" && dir != "lower") {
    throw Error(Errc::kParse, "trend: direction must be upper or lower",
                "direction");
  }
  fit.direction = dir == "upper" ? Direction::kUpper : Direction::kLower;
  if (!j.at("envelope").is_array()) {
    throw Error(Errc::kParse, "trend: envelope must be an array", "envelope");
  }
  for (const auto& p : j.at("envelope")) {
    expect_fields(p, {"t", "value", "label"}, "trend envelope point");
    fit.envelope.push_back({get<double>(p, "t", what),
                            get<double>(p, "value", what),
                            get<std::string>(p, "label", what)});
  }
  if (fit.envelope.empty()) {
    throw Error(Errc::kValidation, "trend envelope is empty", "envelope");
  }
  return fit;
}

std::string estimates_to_json(std::span<const DensityEstimate> estimates) {
  json arr = json::array();
  for (const auto& e : estimates) arr.push_back(estimate_json(e));
  return dump(arr);
}

std::vector<DensityEstimate> estimates_from_json(std::string_view text) {
  constexpr std::string_view what = "density estimate";
  const json j = parse(text, what);
  if (!j.is_array()) throw Error(Errc::kParse, "density report must be an array");
  std::vector<DensityEstimate> out;
  for (const auto& o : j) {
    expect_fields(o, {"model", "benchmark", "score", "effective_loss",
                      "effective_params", "density", "d0_tokens"},
                  what);
    out.push_back({get<std::string>(o, "model", what),
                   get<std::string>(o, "benchmark", what),
                   get<double>(o, "score", what),
                   get<double>(o, "effective_loss", what),
                   get<double>(o, "effective_params", what),
                   get<double>(o, "density", what),
                   get<double>(o, "d0_tokens", what)});
  }
  return out;
}

void write_estimates_csv(std::ostream& out,
                         std::span<const DensityEstimate> estimates) {
  out << "model,benchmark,score,effective_loss,effective_params,density,"
         "d0_tokens\n";
  for (const auto& e : estimates) {
    out << csv::escape(e.model) << ',' << csv::escape(e.benchmark) << ','
        << csv::format_number(e.score) << ','
        << csv::format_number(e.effective_loss) << ','
        << csv::format_number(e.effective_params) << ','
        << csv::format_number(e.density) << ','
        << csv::format_number(e.d0_tokens) << '\n';
  }
}

std::string_view aggregation_name(Aggregation method) {
  return method == Aggregation::kGeometric ? "geometric" : "arithmetic";
}

Aggregation parse_aggregation(std::string_view name) {
  if (name == "geometric") return Aggregation::kGeometric;
  if (name == "arithmetic") return Aggregation::kArithmetic;
  throw Error(Errc::kValidation,
              fmt::format("aggregation must be geometric or arithmetic, got '{}'",
                          name),
              "aggregate");
}

std::string summary_to_json(const DensitySummary& s) {
  json models = json::array();
  for (const auto& m : s.models) {
    models.push_back({{"model", m.model},
                      {"release_date", m.release_date.iso()},
                      {"param_count", m.param_count},
                      {"density", m.density},
                      {"benchmarks", m.benchmarks}});
  }
  json skipped = json::array();
  for (const auto& k : s.skipped) {
    skipped.push_back({{"model", k.model},
                       {"benchmark", k.benchmark},
                       {"reason", k.reason},
                       {"message", k.message}});
  }
  return dump({{"d0_tokens", s.d0_tokens},
               {"aggregate", aggregation_name(s.aggregation)},
               {"models", std::move(models)},
               {"skipped", std::move(skipped)}});
}

DensitySummary summary_from_json(std::string_view text) {
  constexpr std::string_view what = "density summary";
  const json j = parse(text, what);
  expect_fields(j, {"d0_tokens", "aggregate", "models", "skipped"}, what);
  DensitySummary s;
  s.d0_tokens = get<double>(j, "d0_tokens", what);
  s.aggregation = parse_aggregation(get<std::string>(j, "aggregate", what));
  for (const auto& m : j.at("models")) {
    expect_fields(m, {"model", "release_date", "param_count", "density",
                      "benchmarks"},
                  what);
    s.models.push_back(
        {get<std::string>(m, "model", what),
         Date::parse(get<std::string>(m, "release_date", what)),
         get<double>(m, "param_count", what), get<double>(m, "density", what),
         get<std::vector<std::string>>(m, "benchmarks", what)});
  }
  for (const auto& k : j.at("skipped")) {
    expect_fields(k, {"model", "benchmark", "reason", "message"}, what);
    s.skipped.push_back({get<std::string>(k, "model", what),
                         get<std::string>(k, "benchmark", what),
                         get<std::string>(k, "reason", what),
                         get<std::string>(k, "message", what)});
  }
  return s;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::kIo, fmt::format("cannot open '{}'", path.string()),
                path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content) {
  static std::atomic<unsigned> counter{0};
  std::filesystem::path tmp = path;
  tmp += fmt::format(".tmp.{}.{}", static_cast<long>(::getpid()), counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(Errc::kIo, fmt::format("cannot write '{}'", tmp.string()),
                  path.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out.flush()) {
      throw Error(Errc::kIo, fmt::format("write to '{}' failed", tmp.string()),
                  path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(Errc::kIo,
                fmt::format("cannot move output into '{}'", path.string()),
                path.string());
  }
}

}  // namespace density_lab
