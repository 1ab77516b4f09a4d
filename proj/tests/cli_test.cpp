// Copyright 2026 The metriq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Runs the metriq executable end to end and checks the exit-code contract.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("metriq_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  static std::string config(const std::string& name) { return std::string(METRIQ_CONFIG_DIR) + "/" + name; }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  Invocation run(const std::string& args, const std::string& env = "") const {
    const std::string out = path("stdout.txt");
    const std::string err = path("stderr.txt");
    const std::string cmd = env + " " + METRIQ_CLI + " " + args + " >" + out + " 2>" + err;
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
  }

  fs::path dir_;
};

TEST_F(Cli, ValidateEta2) {
  const auto r = run("metric validate --config " + config("eta2.json"));
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("valid, eigenvalues [0.6", 0), 0u) << r.out;
  EXPECT_NE(r.out.find(", 1], norm 1, subidentity"), std::string::npos) << r.out;
}

TEST_F(Cli, ValidateIdentityAndJson) {
  const auto r = run("metric validate --format json --config " + config("identity.json"));
  EXPECT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.at("valid").get<bool>());
  EXPECT_TRUE(j.at("subidentity").get<bool>());
}

TEST_F(Cli, ValidateNonPsd) { EXPECT_EQ(run("metric validate --config " + config("not_psd.json")).code, 2); }

TEST_F(Cli, ParseAndIoErrors) {
  EXPECT_EQ(run("metric validate --config " + path("missing.json")).code, 3);
  EXPECT_EQ(run("metric validate --config " + write("bad.json", "{\"dim\": 2,")).code, 3);
  EXPECT_EQ(run("metric validate --config " + write("ragged.json", R"({"dim": 2, "matrix": [[1, 0], [0]]})")).code, 3);
}

TEST_F(Cli, SimulateGEtaCsv) {
  const auto r = run("simulate g-eta --config " + config("g_eta.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  EXPECT_EQ(header, "seed,N,total_copies,success_ratio,analytic_prob,abs_error");
  std::vector<std::string> fields;
  std::istringstream cells(row);
  for (std::string c; std::getline(cells, c, ',');) fields.push_back(c);
  ASSERT_EQ(fields.size(), 6u);
  EXPECT_EQ(fields[0], "7");
  EXPECT_EQ(fields[1], "100000");
  EXPECT_NEAR(std::stod(fields[3]), 0.8, 0.004);
  EXPECT_NEAR(std::stod(fields[4]), 0.8, 1e-14);
}

TEST_F(Cli, ByteIdenticalOutputs) {
  const std::string a = path("a.csv");
  const std::string b = path("b.csv");
  ASSERT_EQ(run("simulate pt --config " + config("pt.json") + " --out " + a).code, 0);
  ASSERT_EQ(run("simulate pt --config " + config("pt.json") + " --out " + b).code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_FALSE(slurp(a).empty());
  ASSERT_EQ(run("verify --config " + config("verify_honest.json") + " --out " + a, "METRIQ_THREADS=1").code, 0);
  ASSERT_EQ(run("verify --config " + config("verify_honest.json") + " --out " + b, "METRIQ_THREADS=3").code, 0);
  EXPECT_EQ(slurp(a), slurp(b));
}

TEST_F(Cli, SimulatePtAtTimeZero) {
  const std::string cfg = write("pt0.json", R"({"pt": {"r": 1, "s": 2, "phi": 0.5235987755982988, "t": 0},
                                               "rho": [[1, 0], [0, 0]]})");
  const auto r = run("simulate pt --format json --seed 3 --shots 100000 --config " + cfg);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j.at("success_ratio").get<double>(), 0.6, 0.006);
  EXPECT_NEAR(j.at("analytic_prob").get<double>(), 0.6, 1e-14);
  EXPECT_EQ(j.at("seed"), 3);
}

TEST_F(Cli, SeedFlagOverridesConfig) {
  const auto a = run("simulate g-eta --shots 1000 --config " + config("g_eta.json"));
  const auto b = run("simulate g-eta --shots 1000 --seed 7 --config " + config("g_eta.json"));
  const auto c = run("simulate g-eta --shots 1000 --seed 8 --config " + config("g_eta.json"));
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
}

TEST_F(Cli, BrokenPtRegime) {
  const auto r = run("simulate pt --config " + config("pt_broken.json"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("BrokenPtRegime"), std::string::npos) << r.err;
}

TEST_F(Cli, VerifyVerdicts) {
  const auto honest = run("verify --config " + config("verify_honest.json"));
  EXPECT_EQ(honest.code, 0) << honest.err;
  const auto j = nlohmann::json::parse(honest.out);
  EXPECT_EQ(j.at("verdict"), "accept");
  EXPECT_EQ(j.at("shots_per_input"), 100000);
  EXPECT_EQ(j.at("seed"), 11);
  const auto cheat = run("verify --config " + config("verify_dishonest.json"));
  EXPECT_EQ(cheat.code, 1) << cheat.err;
  EXPECT_EQ(nlohmann::json::parse(cheat.out).at("verdict"), "reject");
  EXPECT_EQ(run("verify --config " + config("verify_identity.json")).code, 2);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("simulate g-eta --bogus --config " + config("g_eta.json")).code, 64);
  EXPECT_EQ(run("").code, 64);
  EXPECT_EQ(run("simulate g-eta --config " + config("g_eta.json") + " --format xml").code, 64);
  EXPECT_EQ(run("simulate g-eta --config " + config("g_eta.json") + " --shots 0").code, 64);
  const std::string no_seed = write("noseed.json", R"({"metric": {"dim": 2, "matrix": [[1, 0], [0, 1]]},
                                                      "rho": [[1, 0], [0, 0]]})");
  EXPECT_EQ(run("simulate g-eta --config " + no_seed).code, 64);
  EXPECT_EQ(run("verify --config " + config("verify_honest.json"), "METRIQ_THREADS=many").code, 64);
}

TEST_F(Cli, HelpListsEveryFlag) {
  for (const char* cmd : {"simulate g-eta", "simulate pt", "verify"}) {
    const auto r = run(std::string(cmd) + " --help");
    EXPECT_EQ(r.code, 0);
    for (const char* flag : {"--config", "--seed", "--shots", "--out", "--format", "--help"}) {
      EXPECT_NE(r.out.find(flag), std::string::npos) << cmd << " missing " << flag;
    }
  }
  const auto v = run("metric validate --help");
  EXPECT_EQ(v.code, 0);
  for (const char* flag : {"--config", "--out", "--format", "--help"}) EXPECT_NE(v.out.find(flag), std::string::npos);
}

}  // namespace
