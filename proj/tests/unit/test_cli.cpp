/*
 * Copyright 2026 The DSO Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "dso/cli.hpp"
#include "json.hpp"

namespace dso {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("dso_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "dso");
    out_.str("");
    err_.str("");
    return cli_main(args, out_, err_);
  }

  std::string synth(const std::string& name, std::size_t m, std::size_t d, double density) {
    const auto file = path(name);
    EXPECT_EQ(run({"synth", "--m", std::to_string(m), "--d", std::to_string(d), "--density",
                   std::to_string(density), "--seed", "3", "--out", file}),
              kExitOk)
        << err_.str();
    return file;
  }

  static std::string slurp(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, TrainIsDeterministic) {
  const auto data = synth("train.svm", 200, 40, 0.1);
  ASSERT_EQ(run({"train", "--data", data, "--workers", "1", "--seed", "7", "--model", path("a.bin")}), kExitOk)
      << err_.str();
  ASSERT_EQ(run({"train", "--data", data, "--workers", "1", "--seed", "7", "--model", path("b.bin")}), kExitOk);
  EXPECT_EQ(slurp(path("a.bin")), slurp(path("b.bin")));
  const auto summary = nlohmann::json::parse(out_.str());
  EXPECT_EQ(summary["method"], "dso");
  EXPECT_GE(summary["gap"].get<double>(), 0.0);
}

TEST_F(CliTest, ReplayOfLoggedRun) {
  const auto data = synth("train.svm", 120, 30, 0.15);
  ASSERT_EQ(run({"train", "--data", data, "--workers", "4", "--epochs", "3", "--seed", "5", "--schedule", "adagrad",
                 "--eta0", "0.1", "--log-updates", path("u.log"), "--model", path("m.bin")}),
            kExitOk)
      << err_.str();
  ASSERT_EQ(run({"replay", "--data", data, "--log", path("u.log"), "--model-expected", path("m.bin")}), kExitOk)
      << out_.str() << err_.str();
  EXPECT_TRUE(nlohmann::json::parse(out_.str())["bit_exact"].get<bool>());

  // A model from a different seed must not verify.
  ASSERT_EQ(run({"train", "--data", data, "--workers", "4", "--epochs", "3", "--seed", "6", "--schedule", "adagrad",
                 "--eta0", "0.1", "--model", path("other.bin")}),
            kExitOk);
  EXPECT_EQ(run({"replay", "--data", data, "--log", path("u.log"), "--model-expected", path("other.bin")}),
            kExitVerification);
}

TEST_F(CliTest, TraceAndEval) {
  const auto data = synth("train.svm", 150, 30, 0.2);
  ASSERT_EQ(run({"train", "--data", data, "--test", data, "--loss", "logistic", "--epochs", "4", "--workers", "2",
                 "--trace", path("t.jsonl"), "--model", path("m.bin")}),
            kExitOk)
      << err_.str();
  std::ifstream trace(path("t.jsonl"));
  std::string line;
  std::size_t lines = 0;
  while (std::getline(trace, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(j["test_error"].is_number());
    ++lines;
  }
  EXPECT_EQ(lines, 4u);

  ASSERT_EQ(run({"eval", "--model", path("m.bin"), "--test", data, "--data", data}), kExitOk) << err_.str();
  const auto report = nlohmann::json::parse(out_.str());
  EXPECT_EQ(report["examples"], 150);
  EXPECT_TRUE(report["auprc"].is_number());
  EXPECT_TRUE(report["gap"].is_number());
}

TEST_F(CliTest, EvalWarnsAboutUnseenFeatures) {
  const auto data = synth("train.svm", 100, 20, 0.2);
  ASSERT_EQ(run({"train", "--data", data, "--epochs", "2", "--model", path("m.bin")}), kExitOk);
  {
    std::ofstream wide(path("wide.svm"));
    wide << "+1 1:1 25:2\n-1 2:1\n";
  }
  ASSERT_EQ(run({"eval", "--model", path("m.bin"), "--test", path("wide.svm")}), kExitOk) << err_.str();
  EXPECT_NE(err_.str().find("ignored"), std::string::npos);
  EXPECT_EQ(nlohmann::json::parse(out_.str())["ignored_features"], 5);
}

TEST_F(CliTest, SquaredLossAndPsgd) {
  {
    std::ofstream reg(path("reg.svm"));
    reg << "1.5 1:1 2:0.5\n-0.5 2:1 3:-1\n2.0 1:0.5 3:1\n0.25 1:-1 2:1\n";
  }
  EXPECT_EQ(run({"train", "--data", path("reg.svm"), "--loss", "squared", "--reg", "l1", "--balpha", "5",
                 "--epochs", "3", "--workers", "2", "--model", path("sq.bin")}),
            kExitOk)
      << err_.str();
  const auto data = synth("train.svm", 100, 20, 0.2);
  EXPECT_EQ(run({"psgd-train", "--data", data, "--workers", "2", "--epochs", "3", "--model", path("p.bin")}), kExitOk)
      << err_.str();
  EXPECT_EQ(nlohmann::json::parse(out_.str())["method"], "psgd");
  EXPECT_EQ(run({"eval", "--model", path("p.bin"), "--test", data, "--data", data}), kExitOk) << err_.str();
}

TEST_F(CliTest, Scale) {
  const auto data = synth("scale.svm", 4000, 400, 0.05);
  ASSERT_EQ(run({"scale", "--data", data, "--workers-list", "1,2,4", "--epochs", "4", "--warmup", "1"}), kExitOk)
      << err_.str();
  const auto j = nlohmann::json::parse(out_.str());
  ASSERT_TRUE(j.contains("A"));
  ASSERT_TRUE(j.contains("B"));
  ASSERT_TRUE(j["r_squared"].is_number());
  EXPECT_EQ(j["samples"].size(), 3u);
  if (std::thread::hardware_concurrency() < 4) {
    GTEST_SKIP() << "fewer than 4 hardware threads; A > 0 and B >= 0 are not expected (A=" << j["A"]
                 << ", B=" << j["B"] << ")";
  }
  EXPECT_GT(j["A"].get<double>(), 0.0);
  EXPECT_GE(j["B"].get<double>(), 0.0);
}

TEST_F(CliTest, StatsAndHelp) {
  const auto data = synth("s.svm", 50, 10, 0.3);
  ASSERT_EQ(run({"stats", "--data", data}), kExitOk);
  EXPECT_EQ(nlohmann::json::parse(out_.str())["m"], 50);
  EXPECT_EQ(run({"--help"}), kExitOk);
  EXPECT_NE(out_.str().find("train"), std::string::npos);
}

TEST_F(CliTest, ExitCodes) {
  const auto data = synth("s.svm", 50, 10, 0.3);
  EXPECT_EQ(run({}), kExitUsage);
  EXPECT_EQ(run({"train"}), kExitUsage);
  EXPECT_EQ(run({"train", "--data", data, "--loss", "cubic"}), kExitUsage);
  EXPECT_EQ(run({"train", "--data", data, "--frobnicate"}), kExitUsage);
  EXPECT_EQ(run({"train", "--data", data, "--lambda", "-1"}), kExitUsage);
  EXPECT_EQ(run({"train", "--data", data, "--epochs", "0"}), kExitUsage);
  EXPECT_EQ(run({"train", "--data", data, "--workers", "100"}), kExitUsage);
  EXPECT_EQ(run({"scale", "--data", data, "--workers-list", "2,2"}), kExitUsage);
  {
    std::ofstream bad(path("bad.svm"));
    bad << "+1 1:1\n+1 2:abc\n";
  }
  EXPECT_EQ(run({"train", "--data", path("bad.svm")}), kExitData);
  EXPECT_NE(err_.str().find("line 2"), std::string::npos) << err_.str();
  {
    std::ofstream junk(path("junk.log"));
    junk << "garbage";
  }
  ASSERT_EQ(run({"train", "--data", data, "--epochs", "1", "--model", path("m.bin")}), kExitOk);
  EXPECT_EQ(run({"replay", "--data", data, "--log", path("junk.log"), "--model-expected", path("m.bin")}),
            kExitData);
}

}  // namespace
}  // namespace dso
