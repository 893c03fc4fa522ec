// Copyright 2026 The Density Lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "density_lab/cli.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <fmt/core.h>
#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "density_lab/artifacts.h"
#include "density_lab/loss_law.h"
#include "density_lab/perf_curve.h"

namespace density_lab {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct Result {
  int code;
  std::string out, err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           fmt::format("density_lab_cli_{}_{}", info->name(), ::getpid());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "density-lab");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name, std::ios::binary) << text;
  }
  std::string read(const std::string& name) const { return read_file(dir_ / name); }
  json read_json(const std::string& name) const { return json::parse(read(name)); }
  std::vector<std::string> out_dir() const { return {"--out-dir", dir_.string()}; }

  Result run_in(std::string cmd, std::vector<std::string> extra = {}) {
    std::vector<std::string> args{std::move(cmd), "--out-dir", dir_.string()};
    args.insert(args.end(), extra.begin(), extra.end());
    return run(args);
  }

  void write_fits(const LossLawFit& loss, const PerfCurveFit& perf) const {
    write("loss_fit.json", loss_fit_to_json(loss));
    write("perf_fit.json", perf_fit_to_json(perf));
  }

  void write_summary(const std::vector<std::pair<std::string, double>>& dated) {
    DensitySummary s;
    int i = 0;
    for (const auto& [date, rho] : dated) {
      s.models.push_back(
          {fmt::format("m{}", i++), Date::parse(date), 1e9, rho, {"b"}});
    }
    write("density_summary.json", summary_to_json(s));
  }

  fs::path dir_;
};

TEST_F(CliTest, HelpAndBadFlags) {
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"trend", "--no-such-flag"}).code, 1);
  EXPECT_EQ(run({"nonsense"}).code, 1);
  EXPECT_EQ(run({"density", "--aggregate", "median"}).code, 1);
}

TEST_F(CliTest, SynthDefaultShapeAndDeterminism) {
  ASSERT_EQ(run_in("synth").code, 0);
  const std::string scaling = read("scaling.csv");
  EXPECT_EQ(std::count(scaling.begin(), scaling.end(), '\n'), 37);  // header + 36
  const std::vector<std::string> files{"scaling.csv", "perf.csv", "timeline.csv",
                                       "models.csv", "truth.json"};
  std::vector<std::string> first;
  for (const auto& f : files) first.push_back(read(f));
  ASSERT_EQ(run_in("synth").code, 0);
  for (std::size_t i = 0; i < files.size(); ++i) {
    EXPECT_EQ(read(files[i]), first[i]) << files[i];
  }
  ASSERT_EQ(run_in("synth", {"--seed", "1"}).code, 0);
  EXPECT_NE(read("scaling.csv"), first[0]);
}

TEST_F(CliTest, SynthRejectsNegativeNoise) {
  const Result r = run_in("synth", {"--noise-sigma", "-0.1"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("error"), std::string::npos);
}

TEST_F(CliTest, FitLossRecoversNoiselessTruth) {
  ASSERT_EQ(run_in("synth", {"--noise-sigma", "0"}).code, 0);
  const Result r = run_in("fit-loss", {"--scaling", path("scaling.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const LossLawFit fit = loss_fit_from_json(read("loss_fit.json"));
  const json truth = read_json("truth.json")["loss_truth"];
  EXPECT_NEAR(fit.a / truth["a"].get<double>(), 1, 1e-4);
  EXPECT_NEAR(fit.alpha / truth["alpha"].get<double>(), 1, 1e-4);
  EXPECT_NEAR(fit.b / truth["b"].get<double>(), 1, 1e-4);
  EXPECT_NEAR(fit.beta / truth["beta"].get<double>(), 1, 1e-4);
  EXPECT_TRUE(fit.diagnostics.converged);
}

TEST_F(CliTest, FitLossErrors) {
  const Result missing = run_in("fit-loss", {"--scaling", path("nope.csv")});
  EXPECT_EQ(missing.code, 1);
  EXPECT_NE(missing.err.find(path("nope.csv")), std::string::npos);
  write("three.csv", "params,tokens,loss\n1e6,1e7,3\n2e6,2e7,2.9\n3e6,3e7,2.8\n");
  const Result few = run_in("fit-loss", {"--scaling", path("three.csv")});
  EXPECT_EQ(few.code, 1);
  EXPECT_NE(few.err.find("InsufficientData"), std::string::npos);
  EXPECT_EQ(run_in("fit-loss").code, 1);  // no --scaling
}

TEST_F(CliTest, NonConvergenceExitsTwoAndStillWrites) {
  ASSERT_EQ(run_in("synth").code, 0);
  const Result r = run_in("fit-perf", {"--perf", path("perf.csv"),
                                       "--max-iterations", "3"});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(read_json("perf_fit.json")["converged"].get<bool>());
}

TEST_F(CliTest, FitPerf) {
  ASSERT_EQ(run_in("synth", {"--noise-sigma", "0"}).code, 0);
  ASSERT_EQ(run_in("fit-perf", {"--perf", path("perf.csv")}).code, 0);
  const json j = read_json("perf_fit.json");
  const json truth = read_json("truth.json")["perf_truth"];
  for (const char* k : {"c", "gamma", "l", "d"}) {
    EXPECT_NEAR(j[k].get<double>() / truth[k].get<double>(), 1, 1e-4) << k;
  }
  std::string flat = "loss,score\n";
  for (int i = 0; i < 12; ++i) flat += fmt::format("{},0.25\n", 0.5 + 0.1 * i);
  write("flat.csv", flat);
  const Result r = run_in("fit-perf", {"--perf", path("flat.csv")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("FlatScores"), std::string::npos);
}

TEST_F(CliTest, DensityReferenceModelAndSkipped) {
  const LossLawFit loss{1000, 0.34, 600, 0.28, {}};
  const PerfCurveFit perf{0.7, -3, 1.2, 0.25, {}};
  write_fits(loss, perf);
  const double s = predict_score(perf, predict_loss(loss, 1e9, 1e12));
  write("models.csv", fmt::format(
                          "name,param_count,release_date,scores\n"
                          "ref,1e9,2024-01-01,b={}\n"
                          "high,1e9,2024-02-01,b=0.97;c={}\n",
                          s, s));
  const Result r = run_in("density", {"--models", path("models.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json summary = read_json("density_summary.json");
  ASSERT_EQ(summary["models"].size(), 2u);
  EXPECT_EQ(summary["models"][0]["model"], "ref");
  EXPECT_NEAR(summary["models"][0]["density"].get<double>(), 1.0, 1e-9);
  ASSERT_EQ(summary["skipped"].size(), 1u);
  EXPECT_EQ(summary["skipped"][0]["model"], "high");
  EXPECT_EQ(summary["skipped"][0]["reason"], "ScoreAboveCeiling");
  const json estimates = read_json("density.json");
  EXPECT_EQ(estimates.size(), 2u);
  const std::string csv = read("density.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST_F(CliTest, DensityOnBundledRegistry) {
  const char* data = std::getenv("DENSITY_LAB_DATA_DIR");
  if (data == nullptr) GTEST_SKIP() << "DENSITY_LAB_DATA_DIR not set";
  const fs::path root = fs::path(data) / "reference";
  const Result r = run_in(
      "density", {"--models", (root / "models.csv").string(), "--loss-fit",
                  (root / "loss_fit.json").string(), "--perf-fit",
                  (root / "perf_fit.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = read_json("density.json").size();
  const auto skipped = read_json("density_summary.json")["skipped"].size();
  EXPECT_EQ(rows + skipped, 10u);  // one (model, benchmark) pair per row
}

TEST_F(CliTest, DensityMissingArtifacts) {
  write("models.csv", "name,param_count,release_date,scores\nm,1e9,2024-01-01,b=0.5\n");
  EXPECT_EQ(run_in("density", {"--models", path("models.csv")}).code, 1);
}

TEST_F(CliTest, TrendExactLineAndSvg) {
  std::vector<std::pair<std::string, double>> pts;
  for (int i = 0; i < 5; ++i) {
    const Date d = Epoch{}.reference_date.plus_days(100 * i);
    pts.emplace_back(d.iso(), 0.1 * std::exp(0.0073 * 100 * i));
  }
  write_summary(pts);
  const Result r = run_in("trend");
  ASSERT_EQ(r.code, 0) << r.err;
  const json t = read_json("trend.json");
  EXPECT_NEAR(t["slope_per_day"].get<double>(), 0.0073, 1e-12);
  EXPECT_NEAR(t["r_squared"].get<double>(), 1.0, 1e-12);
  const std::string svg = read("density_trend.svg");
  int paths = 0;
  for (auto p = svg.find("<path"); p != std::string::npos; p = svg.find("<path", p + 1)) ++paths;
  EXPECT_EQ(paths, 3);  // models, envelope, fit line
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST_F(CliTest, TrendNeedsTwoEnvelopePoints) {
  write_summary({{"2024-01-01", 1.0}, {"2024-02-01", 0.5}});
  EXPECT_EQ(run_in("trend").code, 1);
}

TEST_F(CliTest, SyntheticTimelineTrend) {
  ASSERT_EQ(run_in("synth").code, 0);
  // models.csv encodes the timeline through the true curves.
  const json truth = read_json("truth.json");
  const auto& lt = truth["loss_truth"];
  const auto& pt = truth["perf_truth"];
  write_fits({lt["a"], lt["alpha"], lt["b"], lt["beta"], {}},
             {pt["c"], pt["gamma"], pt["l"], pt["d"], {}});
  ASSERT_EQ(run_in("density", {"--models", path("models.csv")}).code, 0);
  ASSERT_EQ(run_in("trend").code, 0);
  EXPECT_NEAR(read_json("trend.json")["slope_per_day"].get<double>() / 0.0073, 1,
              0.05);
}

TEST_F(CliTest, SplitTrend) {
  const Epoch e;
  const Date split = Date::parse("2022-11-30");
  const auto ts = days_since(split, e);
  std::vector<std::pair<std::string, double>> pts;
  for (int t = -600; t <= 600; t += 20) {
    const double a = t < ts ? 0.0048 : 0.0073;
    pts.emplace_back(e.reference_date.plus_days(t).iso(),
                     std::exp(-1 + a * (t - ts)));
  }
  write_summary(pts);
  const Result r = run_in("split-trend");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(read_json("split_trend.json")["slope_ratio"].get<double>(),
              0.0073 / 0.0048, 1e-9);
  EXPECT_NO_THROW(trend_from_json(read("trend_before.json")));
  EXPECT_NO_THROW(trend_from_json(read("trend_after.json")));
  EXPECT_NE(read("density_split_trend.svg").find("</svg>"), std::string::npos);
}

TEST_F(CliTest, SplitTrendSingleRegimeAndEmptySide) {
  std::vector<std::pair<std::string, double>> pts;
  for (int t = -300; t <= 300; t += 30) {
    pts.emplace_back(Epoch{}.reference_date.plus_days(t).iso(),
                     std::exp(0.006 * t));
  }
  write_summary(pts);
  ASSERT_EQ(run_in("split-trend", {"--split-date", "2023-02-24"}).code, 0);
  EXPECT_NEAR(read_json("split_trend.json")["slope_ratio"].get<double>(), 1, 1e-9);
  const Result r = run_in("split-trend", {"--split-date", "2030-01-01"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("after"), std::string::npos);
}

TEST_F(CliTest, PriceTrend) {
  write("prices.csv",
        "model,date,usd_per_million_tokens\n"
        "gpt-3.5,2022-12-01,20.0\ngemini-1.5-flash,2024-08-01,0.075\n");
  ASSERT_EQ(run_in("price-trend", {"--prices", path("prices.csv")}).code, 0);
  const json s = read_json("price_summary.json");
  EXPECT_NEAR(s["reduction_factor"].get<double>(), 266.6667, 1e-4);
  EXPECT_NEAR(s["halving_days"].get<double>(), 75.6, 0.05);
  EXPECT_NEAR(s["halving_months"].get<double>(), 2.6, 0.3);

  write("flat.csv", "model,date,usd_per_million_tokens\na,2023-01-01,5\n"
                    "b,2023-06-01,5\n");
  ASSERT_EQ(run_in("price-trend", {"--prices", path("flat.csv")}).code, 0);
  EXPECT_EQ(read_json("price_summary.json")["reduction_factor"].get<double>(), 1.0);

  write("one.csv", "model,date,usd_per_million_tokens\na,2023-01-01,5\n");
  EXPECT_EQ(run_in("price-trend", {"--prices", path("one.csv")}).code, 1);
}

TEST_F(CliTest, Project) {
  TrendFit f;
  f.slope_per_day = std::log(2) / 100.4;
  f.intercept = std::log(0.1);
  f.doubling_days = 100.4;
  f.envelope = {{0, 0.1, "a"}, {200, 0.1 * std::exp(200 * f.slope_per_day), "b"}};
  write("trend.json", trend_to_json(f));

  ASSERT_EQ(run_in("project", {"--target-date", "2023-02-24"}).code, 0);
  json p = read_json("projection.json");
  EXPECT_NEAR(p["projected_value"].get<double>(), 0.1, 1e-15);
  EXPECT_NEAR(p["combined_doubling_days"].get<double>(), 88.8, 2);

  const Date ahead = Epoch{}.reference_date.plus_days(200 + 100);
  f.doubling_days = 100;
  f.slope_per_day = std::log(2) / 100;
  f.envelope.back().value = 0.1 * std::exp(200 * f.slope_per_day);
  write("trend.json", trend_to_json(f));
  ASSERT_EQ(run_in("project", {"--target-date", ahead.iso()}).code, 0);
  EXPECT_NEAR(read_json("projection.json")["multiple_vs_latest"].get<double>(), 2,
              1e-12);

  EXPECT_EQ(run_in("project").code, 1);  // no target date
  fs::remove(dir_ / "trend.json");
  EXPECT_EQ(run_in("project", {"--target-date", "2024-01-01"}).code, 1);
}

TEST_F(CliTest, CompareCompression) {
  const LossLawFit loss{1000, 0.34, 600, 0.28, {}};
  const PerfCurveFit perf{0.7, -3, 1.2, 0.25, {}};
  write_fits(loss, perf);
  const double s = predict_score(perf, predict_loss(loss, 1e9, 1e12));
  write("models.csv",
        fmt::format("name,param_count,release_date,scores,compressed_from\n"
                    "big,1e9,2024-01-01,b={0},\n"
                    "small,1.25e9,2024-02-01,b={0},big\n"
                    "twin,1e9,2024-03-01,b={0},big\n",
                    s));
  const Result r = run_in("compare-compression", {"--models", path("models.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json pairs = read_json("compression.json")["pairs"];
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_NEAR(pairs[0]["density_ratio"].get<double>(), 0.8, 1e-9);
  EXPECT_TRUE(pairs[0]["regression"].get<bool>());
  EXPECT_NEAR(pairs[1]["density_ratio"].get<double>(), 1.0, 1e-12);
  EXPECT_FALSE(pairs[1]["regression"].get<bool>());
  EXPECT_NE(read("compression.svg").find("</svg>"), std::string::npos);

  write("plain.csv", "name,param_count,release_date,scores\nm,1e9,2024-01-01,b=0.5\n");
  EXPECT_EQ(run_in("compare-compression", {"--models", path("plain.csv")}).code, 1);
}

TEST_F(CliTest, ConfigFilePrecedence) {
  write("cfg.toml", "seed = 7\nnoise-sigma = 0.02\n");
  ASSERT_EQ(run_in("synth", {"--config", path("cfg.toml")}).code, 0);
  json t = read_json("truth.json");
  EXPECT_EQ(t["seed"], 7);
  EXPECT_EQ(t["noise_sigma"], 0.02);
  // Flags beat the config file.
  ASSERT_EQ(run_in("synth", {"--config", path("cfg.toml"), "--seed", "3"}).code, 0);
  t = read_json("truth.json");
  EXPECT_EQ(t["seed"], 3);
  EXPECT_EQ(t["noise_sigma"], 0.02);
}

TEST_F(CliTest, ConfigFromEnvironment) {
  write("env.toml", "seed = 11\n");
  ::setenv("DENSITY_LAB_CONFIG", path("env.toml").c_str(), 1);
  const Result r = run_in("synth");
  ::unsetenv("DENSITY_LAB_CONFIG");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_json("truth.json")["seed"], 11);
}

TEST_F(CliTest, ReportRunsThePipeline) {
  ASSERT_EQ(run_in("synth").code, 0);
  const Result r = run_in("report", {"--models", path("models.csv"), "--scaling",
                                     path("scaling.csv"), "--perf", path("perf.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"loss_fit.json", "perf_fit.json", "density.csv",
                        "density_summary.json", "trend.json", "density_trend.svg"}) {
    EXPECT_TRUE(fs::exists(dir_ / f)) << f;
  }
}

}  // namespace
}  // namespace density_lab
