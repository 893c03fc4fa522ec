// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "density_lab/registry.h"

#include <sstream>

#include <gtest/gtest.h>

#include "density_lab/error.h"

namespace density_lab {
namespace {

template <typename F>
Error expect_error(F&& f, Errc code) {
  try {
    f();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
    return e;
  }
  ADD_FAILURE() << "no error thrown";
  return Error(Errc::kIo, "none");
}

std::vector<ModelRecord> models_csv(const std::string& text) {
  std::istringstream in(text);
  return load_models(in, RecordFormat::kCsv);
}

TEST(LoadModels, CsvRow) {
  const auto m = models_csv(
      "name,param_count,train_tokens,release_date,scores\n"
      "llama-1-7b,6.7e9,1.0e12,2023-02-24,mmlu=0.352\n");
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].name, "llama-1-7b");
  EXPECT_DOUBLE_EQ(m[0].param_count, 6.7e9);
  EXPECT_DOUBLE_EQ(*m[0].train_tokens, 1.0e12);
  EXPECT_EQ(m[0].release_date.iso(), "2023-02-24");
  EXPECT_DOUBLE_EQ(m[0].scores.at("mmlu"), 0.352);
  EXPECT_FALSE(m[0].compressed_from);
}

TEST(LoadModels, ScoreOutOfRangeNamesField) {
  const Error e = expect_error(
      [] {
        models_csv("name,param_count,release_date,scores\n"
                   "m,1e9,2023-01-01,mmlu=1.2\n");
      },
      Errc::kValidation);
  EXPECT_EQ(e.detail(), "scores.mmlu");
  EXPECT_NE(std::string(e.what()).find("scores.mmlu"), std::string::npos);
}

TEST(LoadModels, EmptyFile) {
  EXPECT_TRUE(models_csv("").empty());
  std::istringstream in("");
  EXPECT_TRUE(load_models(in, RecordFormat::kJson).empty());
}

TEST(LoadModels, PercentScoresAreScaled) {
  const auto m = models_csv(
      "name,param_count,release_date,scores,percent\n"
      "m,1e9,2023-01-01,mmlu=35.2;gsm8k=50,true\n");
  EXPECT_DOUBLE_EQ(m[0].scores.at("mmlu"), 0.352);
  EXPECT_DOUBLE_EQ(m[0].scores.at("gsm8k"), 0.5);
}

TEST(LoadModels, QuotedFieldsAndCrlf) {
  const auto m = models_csv(
      "name,param_count,release_date,scores,compressed_from\r\n"
      "\"small, pruned\",1e9,2023-01-01,\"mmlu=0.3;arc=0.4\",big\r\n");
  EXPECT_EQ(m[0].name, "small, pruned");
  EXPECT_EQ(m[0].scores.size(), 2u);
  EXPECT_EQ(*m[0].compressed_from, "big");
}

TEST(LoadModels, DuplicateNames) {
  expect_error(
      [] {
        models_csv("name,param_count,release_date\nm,1e9,2023-01-01\n"
                   "m,2e9,2023-01-02\n");
      },
      Errc::kDuplicateName);
}

TEST(LoadModels, BadRowsAreParseErrors) {
  expect_error([] { models_csv("name,param_count,release_date\nm,abc,2023-01-01\n"); },
               Errc::kParse);
  expect_error([] { models_csv("name,param_count,release_date\nm,1e9\n"); },
               Errc::kParse);
  expect_error([] { models_csv("name,param_count,release_date,bogus\nm,1,2023-01-01,x\n"); },
               Errc::kParse);
  expect_error([] { models_csv("name,param_count\nm,1\n"); }, Errc::kParse);
  expect_error([] { models_csv("name,param_count,release_date\nm,1e9,2023-1-1\n"); },
               Errc::kParse);
}

TEST(LoadModels, NonPositiveParams) {
  expect_error([] { models_csv("name,param_count,release_date\nm,0,2023-01-01\n"); },
               Errc::kValidation);
}

TEST(LoadModels, JsonRoundTrip) {
  ModelRecord a;
  a.name = "a";
  a.param_count = 7e9;
  a.train_tokens = 2e12;
  a.release_date = Date::parse("2023-07-18");
  a.scores = {{"mmlu", 0.45}, {"arc", 0.5}};
  a.measured_loss = {{"mmlu", 1.25}};
  ModelRecord b;
  b.name = "b";
  b.param_count = 3.5e9;
  b.release_date = Date::parse("2024-01-01");
  b.scores = {{"mmlu", 0.4}};
  b.compressed_from = "a";
  const std::vector<ModelRecord> in{a, b};
  for (RecordFormat f : {RecordFormat::kJson, RecordFormat::kCsv}) {
    std::ostringstream out;
    write_models(out, in, f);
    std::istringstream back(out.str());
    EXPECT_EQ(load_models(back, f), in);
  }
}

TEST(LoadModels, JsonUnknownKey) {
  std::istringstream in(
      R"([{"name":"m","param_count":1e9,"release_date":"2023-01-01","colour":1}])");
  expect_error([&] { load_models(in, RecordFormat::kJson); }, Errc::kParse);
}

TEST(LoadObservations, Row) {
  std::istringstream in("params,tokens,loss\n1e6,1e12,0.001001\n");
  const auto obs = load_observations(in);
  ASSERT_EQ(obs.size(), 1u);
  EXPECT_EQ(obs[0], (ScalingObservation{1e6, 1e12, 0.001001}));
}

TEST(LoadObservations, NegativeLossAndHeaderOnly) {
  std::istringstream bad("params,tokens,loss\n1e6,1e12,-1\n");
  expect_error([&] { load_observations(bad); }, Errc::kValidation);
  std::istringstream header("params,tokens,loss\n");
  EXPECT_TRUE(load_observations(header).empty());
}

TEST(LoadPerf, RowAndRange) {
  std::istringstream in("loss,score\n1.5,0.25\n");
  EXPECT_EQ(load_perf(in), (std::vector<PerfObservation>{{1.5, 0.25}}));
  std::istringstream bad("loss,score\n1.5,1.25\n");
  expect_error([&] { load_perf(bad); }, Errc::kValidation);
}

TEST(LoadPrices, PublishedRecords) {
  std::istringstream in(
      "model,date,usd_per_million_tokens\n"
      "gemini-1.5-flash,2024-08-01,0.075\n"
      "gpt-3.5,2022-12-01,20.0\n");
  const auto p = load_prices(in);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0].model, "gpt-3.5");  // sorted by date
  EXPECT_DOUBLE_EQ(p[0].usd_per_million_tokens, 20.0);
  EXPECT_DOUBLE_EQ(p[1].usd_per_million_tokens, 0.075);
}

TEST(LoadPrices, ZeroPrice) {
  std::istringstream in("model,date,usd_per_million_tokens\nm,2024-01-01,0\n");
  expect_error([&] { load_prices(in); }, Errc::kValidation);
}

TEST(LoadModelsFile, MissingFileNamesPath) {
  const Error e = expect_error([] { load_models_file("/nonexistent/models.csv"); },
                               Errc::kIo);
  EXPECT_NE(std::string(e.what()).find("/nonexistent/models.csv"),
            std::string::npos);
}

TEST(ModelRegistry, FindAndDuplicates) {
  ModelRecord m;
  m.name = "x";
  m.param_count = 1e9;
  const ModelRegistry reg({m});
  ASSERT_NE(reg.find("x"), nullptr);
  EXPECT_EQ(reg.find("y"), nullptr);
  expect_error([&] { ModelRegistry({m, m}); }, Errc::kDuplicateName);
}

}  // namespace
}  // namespace density_lab
