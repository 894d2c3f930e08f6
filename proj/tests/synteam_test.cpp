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

#include "teamcomp/synteam.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "teamcomp/errors.hpp"
#include "teamcomp/exact_solver.hpp"
#include "test_util.hpp"

namespace teamcomp {
namespace {

struct Problem {
  Roster roster;
  Task task;
};

Problem RandomProblem(int n, int m, double lambda, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Roster roster = testing::RandomRoster(n, 4, gen);
  return {std::move(roster), Task::Create(testing::RandomTaskType(4, lambda, gen), m)};
}

TEST(SynTeamParamsTest, Defaults) {
  const SynTeamParams p = SynTeamParams::Defaults(24, 3, 9);
  EXPECT_EQ(p.n_r, 12);  // b = 8
  EXPECT_EQ(p.n_l, 2);
  EXPECT_EQ(p.seed, 9u);
  EXPECT_EQ(SynTeamParams::Defaults(10, 3, 0).n_r, 5);  // ceil(4.5)
  EXPECT_EQ(SynTeamParams::Defaults(10, 3, 0).n_l, 1);
  EXPECT_THROW((SynTeamParams{.n_r = 2, .n_l = 3}.Validate()), ValidationError);
  EXPECT_THROW((SynTeamParams{.n_r = 0, .n_l = 0}.Validate()), ValidationError);
}

TEST(RandomPartitionTest, SizesAndReproducibility) {
  const SizeDistribution dist = quantity_distribution(11, 3);
  Rng a(5);
  Rng b(5);
  const Partition p = random_partition(11, dist, a);
  EXPECT_EQ(p, random_partition(11, dist, b));
  validate_partition(p, 11, 3);
  EXPECT_EQ(p.teams[0].size(), 4u);
  EXPECT_EQ(p.teams[1].size(), 4u);
  EXPECT_EQ(p.teams[2].size(), 3u);
}

TEST(RandomPartitionTest, UniformOverMatchings) {
  const SizeDistribution dist = quantity_distribution(4, 2);
  Rng rng(2026);
  std::map<Team, int> partner_of_zero;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    const Partition p = random_partition(4, dist, rng);
    for (const Team& t : p.teams) {
      if (t[0] == 0) ++partner_of_zero[t];
    }
  }
  ASSERT_EQ(partner_of_zero.size(), 3u);
  for (const auto& [team, count] : partner_of_zero) {
    EXPECT_NEAR(static_cast<double>(count) / draws, 1.0 / 3.0, 0.02);
  }
}

TEST(RedistributionTest, SplitCountsAndNoLoss) {
  for (const auto& [n, m, splits] : {std::tuple{10, 5, 126}, {11, 5, 462}}) {
    const Problem p = RandomProblem(n, m, 0.5, n);
    const TeamEvaluator eval(p.roster, p.task, EvalConfig{});
    Rng rng(1);
    const ScoredPartition start =
        ScorePartition(random_partition(n, quantity_distribution(n, m), rng), eval);
    const Redistribution r = RedistributePair(start, 0, 1, eval);
    EXPECT_EQ(r.splits_evaluated, static_cast<std::uint64_t>(splits));
    EXPECT_GE(r.candidate.log_S, start.log_S - 1e-12);
    EXPECT_EQ(r.candidate.partition.teams[0].size(), start.partition.teams[0].size());
    EXPECT_EQ(r.candidate.partition.teams[1].size(), start.partition.teams[1].size());
    validate_partition(r.candidate.partition, n, m);
  }
}

// The best split of two teams, found by trying every member subset.
TEST(RedistributionTest, MatchesExhaustiveSplit) {
  const Problem p = RandomProblem(9, 3, 0.3, 21);
  const TeamEvaluator eval(p.roster, p.task, EvalConfig{});
  Rng rng(3);
  const ScoredPartition start =
      ScorePartition(random_partition(9, quantity_distribution(9, 3), rng), eval);
  const Redistribution r = RedistributePair(start, 0, 2, eval);
  Team pool = start.partition.teams[0];
  pool.insert(pool.end(), start.partition.teams[2].begin(),
              start.partition.teams[2].end());
  double best = -1e300;
  for (int mask = 0; mask < 64; ++mask) {
    if (__builtin_popcount(mask) != 3) continue;
    Team a;
    Team b;
    for (int i = 0; i < 6; ++i) (mask >> i & 1 ? a : b).push_back(pool[i]);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    best = std::max(best, eval.LogSynergy(a) + eval.LogSynergy(b));
  }
  EXPECT_NEAR(r.candidate.team_log_s[0] + r.candidate.team_log_s[2], best, 1e-12);
  EXPECT_EQ(r.candidate.partition.teams[1], start.partition.teams[1]);
}

TEST(ImprovingSwapTest, NoneAtOptimum) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Problem p = RandomProblem(4, 2, 0.5, seed);
    const TeamEvaluator eval(p.roster, p.task, EvalConfig{});
    const auto oracle = brute_force_partitions(p.roster, p.task, EvalConfig{});
    EXPECT_FALSE(improving_swap(ScorePartition(oracle.partition, eval), eval));
  }
}

TEST(ImprovingSwapTest, ReturnsFirstImprovingSwap) {
  const Problem p = RandomProblem(9, 3, 0.5, 4);
  const TeamEvaluator eval(p.roster, p.task, EvalConfig{});
  Rng rng(8);
  const ScoredPartition start =
      ScorePartition(random_partition(9, quantity_distribution(9, 3), rng), eval);
  const auto found = improving_swap(start, eval);
  // Independent scan in (team, position) order.
  std::optional<Partition> expected;
  const auto& teams = start.partition.teams;
  for (std::size_t t1 = 0; t1 < teams.size() && !expected; ++t1) {
    for (std::size_t p1 = 0; p1 < teams[t1].size() && !expected; ++p1) {
      for (std::size_t t2 = t1 + 1; t2 < teams.size() && !expected; ++t2) {
        for (std::size_t p2 = 0; p2 < teams[t2].size() && !expected; ++p2) {
          Partition next = start.partition;
          std::swap(next.teams[t1][p1], next.teams[t2][p2]);
          std::sort(next.teams[t1].begin(), next.teams[t1].end());
          std::sort(next.teams[t2].begin(), next.teams[t2].end());
          if (partition_value(p.roster, next, p.task, EvalConfig{}).log_value >
              start.log_S + 1e-12) {
            expected = next;
          }
        }
      }
    }
  }
  ASSERT_EQ(found.has_value(), expected.has_value());
  if (found) {
    EXPECT_EQ(found->partition, *expected);
    EXPECT_EQ(improving_swap(start, eval)->partition, found->partition);
  }
}

TEST(ImprovingSwapTest, IdenticalStudentsNeverImprove) {
  std::vector<Student> students;
  for (const char* id : {"a", "b", "c", "d"}) {
    students.push_back(
        testing::MakeStudent(id, Gender::kMan, {0.1, 0.2, 0.3, 0.4}, {{"x", 0.5}}));
  }
  const Roster roster(std::move(students));
  const Task task = Task::Create(TaskType("t", 0.5, {{"x", 0.6, 1}}), 2);
  const TeamEvaluator eval(roster, task, EvalConfig{});
  EXPECT_FALSE(improving_swap(ScorePartition(Partition{{{0, 1}, {2, 3}}}, eval), eval));
}

TEST(RunSynTeamTest, SingleTeam) {
  const Problem p = RandomProblem(4, 4, 0.5, 3);
  const SolverResult r =
      run_synteam(p.roster, p.task, EvalConfig{}, SynTeamParams::Defaults(4, 4, 1));
  ASSERT_EQ(r.partition.teams.size(), 1u);
  EXPECT_EQ(r.iterations, 0u);
  EXPECT_EQ(r.trace.size(), 1u);
}

TEST(RunSynTeamTest, Reproducible) {
  const Problem p = RandomProblem(15, 3, 0.5, 17);
  const SynTeamParams params = SynTeamParams::Defaults(15, 3, 99);
  const SolverResult a = run_synteam(p.roster, p.task, EvalConfig{}, params);
  const SolverResult b = run_synteam(p.roster, p.task, EvalConfig{}, params);
  EXPECT_EQ(a.partition, b.partition);
  EXPECT_EQ(a.score.value, b.score.value);
  EXPECT_EQ(a.iterations, b.iterations);
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    EXPECT_EQ(a.trace[i].best_S, b.trace[i].best_S);
  }
  validate_partition(a.partition, 15, 3);
  EXPECT_TRUE(IsMonotone(a.trace));
  EXPECT_NEAR(a.trace.back().best_S, a.score.value, 1e-12 * a.score.value);
  EXPECT_NEAR(partition_value(p.roster, a.partition, p.task, EvalConfig{}).value,
              a.score.value, 1e-12 * a.score.value);
}

TEST(RunSynTeamTest, QualityOnSmallInstances) {
  int good = 0;
  const int runs = 100;
  for (int run = 0; run < runs; ++run) {
    const int n = 6 + 2 * (run % 4);  // 6, 8, 10, 12
    const Problem p = RandomProblem(n, 2, 0.2, 500 + run);
    const auto oracle = brute_force_partitions(p.roster, p.task, EvalConfig{});
    const SolverResult r =
        run_synteam(p.roster, p.task, EvalConfig{}, SynTeamParams::Defaults(n, 2, run));
    EXPECT_LE(r.score.value, oracle.score.value * (1 + 1e-9));
    if (r.score.value >= 0.75 * oracle.score.value) ++good;
  }
  EXPECT_GE(good, 95);
}

}  // namespace
}  // namespace teamcomp
