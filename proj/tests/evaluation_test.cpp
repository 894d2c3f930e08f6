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

#include "teamcomp/evaluation.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "teamcomp/errors.hpp"
#include "test_util.hpp"

namespace teamcomp {
namespace {

using testing::MakeStudent;

Roster Pair(PersonalityProfile a, PersonalityProfile b, Gender ga = Gender::kMan,
            Gender gb = Gender::kMan) {
  return Roster({MakeStudent("a", ga, a), MakeStudent("b", gb, b)});
}

TEST(CongenialityTest, Sntf) {
  EXPECT_EQ(u_sntf(Pair({0.3, 0.2, 0.1, 0}, {0.3, 0.2, 0.1, 0}), {0, 1}), 0.0);
  EXPECT_DOUBLE_EQ(u_sntf(Pair({-1, -1, 0, 0}, {1, 1, 0, 0}), {0, 1}), 1.0);
  EXPECT_EQ(u_sntf(Pair({-1, 0.5, 0, 0}, {1, 0.5, 0, 0}), {0, 1}), 0.0);
}

TEST(CongenialityTest, Etj) {
  EXPECT_NEAR(u_etj(Pair({0.4, 1, 1, 1}, {0, 0, 0, 0}), {0, 1}, 0.11), 0.33, 1e-15);
  EXPECT_EQ(u_etj(Pair({0, -1, 0, 0}, {0, 0.2, -0.5, 0}), {0, 1}, 0.11), 0.0);
  EXPECT_NEAR(u_etj(Pair({0, 0.5, 0.25, 0.25}, {0, 0, 0, 0.5}), {0, 1}, 0.11), 0.11,
              1e-15);
}

TEST(CongenialityTest, Introvert) {
  EXPECT_NEAR(u_introvert(Pair({0, 0, -1, 0}, {0, 0, 0.2, 0}), {0, 1}, 0.33), 0.33,
              1e-15);
  EXPECT_EQ(u_introvert(Pair({0, 0, 0.1, 0}, {0, 0, 0.9, 0}), {0, 1}, 0.33), 0.0);
  EXPECT_EQ(u_introvert(Pair({0, 0, 0, 0}, {0, 0, 0.9, 0}), {0, 1}, 0.33), 0.0);
}

TEST(CongenialityTest, Gender) {
  EXPECT_DOUBLE_EQ(u_gender(2, 2, 0.33), 0.33);
  EXPECT_EQ(u_gender(0, 4, 0.33), 0.0);
  EXPECT_EQ(u_gender(4, 0, 0.33), 0.0);
  EXPECT_NEAR(u_gender(1, 3, 0.33), 0.33 * std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(u_gender(1, 3, 0.33), 0.2333, 1e-4);
  const Roster roster = Pair({}, {}, Gender::kWoman, Gender::kMan);
  EXPECT_DOUBLE_EQ(u_gender(roster, {0, 1}, 0.5), 0.5);
}

TEST(CongenialityTest, SumOfMaxima) {
  // Two members: sn/tf at opposite corners (sigma product 1), one with
  // tf + ei + pj = 3 and one fully introvert, one woman and one man.
  const Roster roster = Pair({-1, 1, 1, 1}, {1, -1, -1, 0}, Gender::kWoman, Gender::kMan);
  const EvalConfig config;
  EXPECT_NEAR(congeniality(roster, {0, 1}, config), 1.0 + 0.33 + 0.33 + 0.33, 1e-12);
  EXPECT_NEAR(congeniality(roster, {0, 1}, config), 1.99, 1e-12);
}

TEST(CongenialityTest, ZeroProfileClones) {
  const Roster roster = Pair({0, 0, 0, 0}, {0, 0, 0, 0});
  EXPECT_EQ(congeniality(roster, {0, 1}, EvalConfig{}), 0.0);
}

class SynergyTest : public ::testing::Test {
 protected:
  // Both members at level 0.3 on a single competence required at 0.5;
  // upsilon = 1 gives u_prof = 1 - 0.2 / 2 = 0.9. With identical men whose
  // only congeniality is introversion ei = -1 and beta = 0.5, u_con = 0.5.
  Roster roster_{{MakeStudent("a", Gender::kMan, {0, 0, -1, 0}, {{"x", 0.3}}),
                  MakeStudent("b", Gender::kMan, {0, 0, -1, 0}, {{"x", 0.3}})}};
  EvalConfig config_{.upsilon = 1.0, .beta = 0.5};

  Task MakeTask(double lambda) {
    return Task::Create(TaskType("t", lambda, {{"x", 0.5, 1.0}}), 2);
  }
};

TEST_F(SynergyTest, BlendsProficiencyAndCongeniality) {
  const SynergyRecord r = synergistic_value(roster_, {0, 1}, MakeTask(0.8), config_);
  EXPECT_NEAR(r.u_prof, 0.9, 1e-15);
  EXPECT_NEAR(r.u_con, 0.5, 1e-15);
  EXPECT_NEAR(r.s, 0.82, 1e-15);
  EXPECT_EQ(r.assignment.mapping.size(), 2u);
}

TEST_F(SynergyTest, LambdaEndpoints) {
  const SynergyRecord one = synergistic_value(roster_, {0, 1}, MakeTask(1.0), config_);
  EXPECT_EQ(one.s, one.u_prof);
  const SynergyRecord zero = synergistic_value(roster_, {0, 1}, MakeTask(0.0), config_);
  EXPECT_EQ(zero.s, zero.u_con);
}

TEST(PartitionValueTest, ProductAndFloor) {
  const std::vector<double> halves{0.5, 0.5};
  const PartitionScore a = ScoreFromTeamValues(halves, 1e-12);
  EXPECT_DOUBLE_EQ(a.value, 0.25);
  EXPECT_NEAR(a.log_value, 2 * std::log(0.5), 1e-15);

  const std::vector<double> with_zero{0.5, 0.0};
  const PartitionScore b = ScoreFromTeamValues(with_zero, 1e-12);
  EXPECT_EQ(b.value, 0.0);
  EXPECT_NEAR(b.log_value, std::log(0.5) + std::log(1e-12), 1e-12);
  EXPECT_TRUE(std::isfinite(b.log_value));
}

TEST(PartitionValueTest, MatchesPerTeamValues) {
  std::mt19937_64 gen(4);
  const Roster roster = testing::RandomRoster(7, 3, gen);
  const Task task = Task::Create(testing::RandomTaskType(3, 0.5, gen), 3);
  const Partition p{{{0, 2, 4, 6}, {1, 3, 5}}};
  const EvalConfig config;
  const PartitionScore score = partition_value(roster, p, task, config);
  double product = 1.0;
  for (const Team& t : p.teams) product *= synergistic_value(roster, t, task, config).s;
  EXPECT_NEAR(score.value, product, 1e-15);
  EXPECT_NEAR(score.log_value, std::log(product), 1e-12);

  const Partition bad{{{0, 1, 2, 3, 4}, {5, 6}}};
  EXPECT_THROW(partition_value(roster, bad, task, config), ValidationError);
}

TEST(PropertyTest, RandomTeams) {
  std::mt19937_64 gen(99);
  std::uniform_int_distribution<int> size(2, 6);
  const EvalConfig config;
  for (int trial = 0; trial < 500; ++trial) {
    const int k = size(gen);
    const Roster roster = testing::RandomRoster(k, 3, gen);
    const Task task = Task::Create(testing::RandomTaskType(3, 0.5, gen), 2);
    const Team team = testing::AllOf(roster);
    const double reference = testing::ReferenceCongeniality(roster, team, config.alpha,
                                                            config.beta, config.gamma);
    const double u_con = congeniality(roster, team, config);
    EXPECT_NEAR(u_con, reference, 1e-12);
    EXPECT_NEAR(u_con,
                u_sntf(roster, team) + u_etj(roster, team, config.alpha) +
                    u_introvert(roster, team, config.beta) +
                    u_gender(roster, team, config.gamma),
                1e-15);
    EXPECT_GE(u_con, 0.0);
    EXPECT_LE(u_con, 1.0 + 3 * config.alpha + config.beta + config.gamma);

    // Member order is irrelevant to every component.
    Team shuffled = team;
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    EXPECT_NEAR(congeniality(roster, shuffled, config), u_con, 1e-12);

    const SynergyRecord r = synergistic_value(roster, team, task, config);
    EXPECT_NEAR(r.s, 0.5 * r.u_prof + 0.5 * r.u_con, 1e-15);
  }
  for (int w = 0; w <= 6; ++w) {
    for (int m = 0; m <= 6; ++m) {
      if (w + m == 0) continue;
      EXPECT_NEAR(u_gender(w, m, 0.33), u_gender(m, w, 0.33), 1e-15);
    }
  }
}

TEST(TeamEvaluatorTest, MemoizesAndAgrees) {
  std::mt19937_64 gen(8);
  const Roster roster = testing::RandomRoster(8, 4, gen);
  const Task task = Task::Create(testing::RandomTaskType(4, 0.5, gen), 2);
  const EvalConfig config;
  const TeamEvaluator eval(roster, task, config);
  const Team team{1, 4, 6};
  const double s = eval.Synergy(team);
  EXPECT_NEAR(s, synergistic_value(roster, team, task, config).s, 1e-12);
  EXPECT_EQ(eval.cache_size(), 1u);
  EXPECT_EQ(eval.Synergy(team), s);
  EXPECT_EQ(eval.cache_size(), 1u);
  EXPECT_EQ(eval.SynergyUncached(team), s);
  EXPECT_NEAR(eval.LogSynergy(team), std::log(s), 1e-15);
  EXPECT_EQ(eval.FloorLog(0.0), std::log(config.epsilon_floor));
  EXPECT_THROW(TeamEvaluator(roster, task, EvalConfig{.gamma = 2.0}), ValidationError);
}

TEST(TeamEvaluatorTest, ConcurrentLookups) {
  std::mt19937_64 gen(18);
  const Roster roster = testing::RandomRoster(10, 3, gen);
  const Task task = Task::Create(testing::RandomTaskType(3, 0.5, gen), 2);
  const TeamEvaluator eval(roster, task, EvalConfig{});
  std::vector<std::thread> threads;
  std::vector<double> sums(4, 0.0);
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      for (StudentIndex a = 0; a < 10; ++a) {
        for (StudentIndex b = a + 1; b < 10; ++b) {
          const Team team{a, b};
          sums[t] += eval.Synergy(team);
        }
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(eval.cache_size(), 45u);
  for (double s : sums) EXPECT_EQ(s, sums[0]);
}

}  // namespace
}  // namespace teamcomp
