// Copyright 2026 The teamcomp Authors.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "teamcomp/bench.hpp"
#include "teamcomp/io.hpp"

namespace teamcomp {
namespace {

namespace fs = std::filesystem;
using ::testing::HasSubstr;
using Json = nlohmann::json;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "teamcomp");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  Outcome o;
  o.code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string Slurp(const fs::path& path) { return ReadFile(path); }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) /
           ("teamcomp_cli_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    WriteRoster("r6.csv", 6);
    WriteRoster("r12.csv", 12);
    std::ofstream(dir_ / "arts.json") << R"({
      "schema": 1, "name": "arts-design", "lambda": 0.8, "m": 3,
      "requirements": [
        {"competence": "linguistic", "level": "novice", "importance": "slightly-important"},
        {"competence": "visual_spatial", "level": "advanced", "importance": "very-important"},
        {"competence": "intrapersonal", "level": "intermediate",
         "importance": "fairly-important"}]})";
  }
  void TearDown() override { fs::remove_all(dir_); }

  void WriteRoster(const std::string& name, int n) {
    std::ofstream file(dir_ / name);
    write_roster_csv(file, synthetic_roster(n, 11));
  }
  std::string P(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, SolveWritesPartitionAndTrace) {
  const Outcome o = RunCli({"solve", "--roster", P("r6.csv"), "--task", P("arts.json"),
                            "--out", P("out/p.json")});
  ASSERT_EQ(o.code, 0) << o.err;
  const Json doc = Json::parse(Slurp(dir_ / "out/p.json"));
  EXPECT_EQ(doc["schema"], 1);
  EXPECT_EQ(doc["algorithm"], "exact");
  EXPECT_EQ(doc["optimal"], true);
  ASSERT_EQ(doc["teams"].size(), 2u);
  for (const Json& team : doc["teams"]) {
    EXPECT_EQ(team["members"].size(), 3u);
    EXPECT_TRUE(team.contains("s"));
    EXPECT_TRUE(team.contains("u_prof"));
    EXPECT_TRUE(team.contains("u_con"));
    EXPECT_EQ(team["assignment"].size(), 3u);
  }
  const std::string trace = Slurp(dir_ / "out/p.trace.csv");
  EXPECT_THAT(trace,
              HasSubstr("label,algorithm,seed,elapsed_s,best_S\narts-design,exact,0,"));
}

TEST_F(CliTest, SolveToStdoutAndDumpModel) {
  const Outcome o = RunCli({"solve", "--roster", P("r6.csv"), "--task", P("arts.json"),
                            "--m", "2", "--dump-model", P("model.txt")});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(Json::parse(o.out)["teams"].size(), 3u);
  EXPECT_THAT(Slurp(dir_ / "model.txt"), HasSubstr("count x0 x1"));
}

TEST_F(CliTest, UsageErrors) {
  Outcome o = RunCli({"solve", "--roster", P("r6.csv")});
  EXPECT_EQ(o.code, 2);
  EXPECT_THAT(o.err, HasSubstr("--task"));
  EXPECT_THAT(o.err, HasSubstr("Usage"));
  EXPECT_EQ(RunCli({}).code, 2);
  EXPECT_EQ(RunCli({"frobnicate"}).code, 2);
  EXPECT_EQ(RunCli({"heuristic", "--roster", P("r6.csv"), "--task", P("arts.json"),
                    "--seed", "x"})
                .code,
            2);
  o = RunCli({"--help"});
  EXPECT_EQ(o.code, 0);
  EXPECT_THAT(o.out, HasSubstr("gen-roster"));
}

TEST_F(CliTest, InputErrors) {
  std::ofstream(dir_ / "bad.json") << R"({"lambda": 0.5, "m": 2, "requirements": [
      {"competence": "x", "level": 0.5, "importance": "super-important"}]})";
  Outcome o = RunCli({"solve", "--roster", P("r6.csv"), "--task", P("bad.json")});
  EXPECT_EQ(o.code, 3);
  EXPECT_THAT(o.err, HasSubstr("super-important"));
  o = RunCli({"solve", "--roster", P("missing.csv"), "--task", P("arts.json")});
  EXPECT_EQ(o.code, 3);
  o = RunCli({"solve", "--roster", P("r6.csv"), "--task", P("arts.json"), "--m", "4"});
  EXPECT_EQ(o.code, 3);  // 6 students cannot form teams of 4 or 5
}

TEST_F(CliTest, GuardExceeded) {
  const Outcome o = RunCli(
      {"solve", "--roster", P("r12.csv"), "--task", P("arts.json"), "--team-cap", "50"});
  EXPECT_EQ(o.code, 4);
  EXPECT_THAT(o.err, HasSubstr("enumeration cap"));
}

TEST_F(CliTest, HeuristicIsReproducible) {
  const std::vector<std::string> base = {
      "heuristic", "--roster", P("r12.csv"), "--task", P("arts.json"), "--seed", "7"};
  auto with_out = [&](const std::string& name) {
    auto args = base;
    args.insert(args.end(), {"--out", P(name)});
    return args;
  };
  ASSERT_EQ(RunCli(with_out("a.json")).code, 0);
  ASSERT_EQ(RunCli(with_out("b.json")).code, 0);
  const std::string a = Slurp(dir_ / "a.json");
  EXPECT_EQ(a, Slurp(dir_ / "b.json"));
  const Json doc = Json::parse(a);
  EXPECT_EQ(doc["algorithm"], "synteam");
  EXPECT_EQ(doc["seed"], 7);
  EXPECT_EQ(doc["teams"].size(), 4u);
}

TEST_F(CliTest, EvalRoundTrip) {
  for (const std::vector<std::string>& solver :
       {std::vector<std::string>{"solve"},
        {"heuristic", "--seed", "3"},
        {"anneal", "--seed", "3", "--max-steps", "2000"}}) {
    auto args = solver;
    args.insert(args.end(), {"--roster", P("r12.csv"), "--task", P("arts.json"), "--out",
                             P("p.json"), "--upsilon", "0.3"});
    ASSERT_EQ(RunCli(args).code, 0) << solver[0];
    const Outcome o = RunCli({"eval", "--roster", P("r12.csv"), "--task", P("arts.json"),
                              "--partition", P("p.json")});
    ASSERT_EQ(o.code, 0) << o.err;
    const Json report = Json::parse(o.out);
    EXPECT_EQ(report["consistent"], true);
    EXPECT_EQ(report["assignments_match"], true);
    const double recorded = Json::parse(Slurp(dir_ / "p.json"))["S"];
    EXPECT_NEAR(report["S"].get<double>(), recorded, 1e-9 * std::max(1.0, recorded));
  }
}

TEST_F(CliTest, EvalDetectsTampering) {
  ASSERT_EQ(RunCli({"solve", "--roster", P("r6.csv"), "--task", P("arts.json"), "--out",
                    P("p.json")})
                .code,
            0);
  Json doc = Json::parse(Slurp(dir_ / "p.json"));
  doc["S"] = doc["S"].get<double>() * 1.5;
  std::ofstream(dir_ / "p.json") << doc.dump(2);
  const Outcome o = RunCli({"eval", "--roster", P("r6.csv"), "--task", P("arts.json"),
                            "--partition", P("p.json")});
  EXPECT_EQ(o.code, 3);
  EXPECT_EQ(Json::parse(o.out)["consistent"], false);
}

TEST_F(CliTest, Assign) {
  const Outcome o = RunCli({"assign", "--roster", P("r6.csv"), "--task", P("arts.json"),
                            "--team", "s000,s003,s005"});
  ASSERT_EQ(o.code, 0) << o.err;
  const Json doc = Json::parse(o.out);
  EXPECT_TRUE(doc.contains("u_prof"));
  EXPECT_EQ(doc["assignment"].size(), 3u);
  EXPECT_EQ(RunCli({"assign", "--roster", P("r6.csv"), "--task", P("arts.json"), "--team",
                    "s000,nobody"})
                .code,
            3);
}

TEST_F(CliTest, GenRosterAndBench) {
  Outcome o = RunCli({"gen-roster", "--n", "8", "--seed", "4"});
  ASSERT_EQ(o.code, 0);
  EXPECT_THAT(o.out, HasSubstr("#schema=1\nid,gender,sn,tf,ei,pj,"));
  ASSERT_EQ(RunCli({"gen-roster", "--n", "8", "--seed", "4", "--out", P("g.json")}).code,
            0);
  EXPECT_EQ(parse_roster(dir_ / "g.json").size(), 8u);

  o = RunCli({"bench", "--n-list", "8", "--m-list", "2,4", "--lambda-list", "0.8",
              "--tasks", "english", "--repeats", "2", "--out-dir", P("bench"),
              "--algorithms", "exact,synteam,sa"});
  ASSERT_EQ(o.code, 0) << o.err;
  std::istringstream csv(Slurp(dir_ / "bench/results.csv"));
  EXPECT_EQ(read_results_csv(csv).size(), 2u * 2u * 3u);
  EXPECT_TRUE(fs::exists(dir_ / "bench/ratio_summary.csv"));

  EXPECT_EQ(RunCli({"bench", "--n-list", "8,x"}).code, 3);
}

}  // namespace
}  // namespace teamcomp
