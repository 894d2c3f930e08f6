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

#include "teamcomp/annealing.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "teamcomp/errors.hpp"
#include "test_util.hpp"

namespace teamcomp {
namespace {

TEST(ScheduleTest, InitialTemperature) {
  const SAParams params;
  EXPECT_NEAR(initial_temperature(params), 0.094912, 1e-6);
  EXPECT_EQ(temperature(0.0, params), initial_temperature(params));
}

TEST(ScheduleTest, Anchors) {
  for (double t_max : {0.001, 1.0, 37.5}) {
    const SAParams params{.t_max_s = t_max};
    const double d = params.delta_ref;
    EXPECT_NEAR(acceptance_probability(d, temperature(0.0, params)), 0.9, 1e-9);
    EXPECT_NEAR(acceptance_probability(d, temperature(t_max, params)), 0.1, 1e-9);
    EXPECT_NEAR(std::exp(-d / temperature(t_max, params)), params.p_end, 1e-9);
  }
  const SAParams custom{.t_max_s = 2.0, .delta_ref = 0.05, .p_start = 0.7, .p_end = 0.2};
  EXPECT_NEAR(acceptance_probability(0.05, temperature(0.0, custom)), 0.7, 1e-9);
  EXPECT_NEAR(acceptance_probability(0.05, temperature(2.0, custom)), 0.2, 1e-9);
}

TEST(ScheduleTest, StrictlyDecreasing) {
  const SAParams params{.t_max_s = 3.0};
  double previous = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 300; ++i) {
    const double t = temperature(0.01 * i, params);
    EXPECT_GT(t, 0.0);
    EXPECT_LT(t, previous);
    previous = t;
  }
}

TEST(AcceptanceTest, Limits) {
  EXPECT_EQ(acceptance_probability(0.0, 0.01), 1.0);
  EXPECT_EQ(acceptance_probability(-0.2, 0.01), 1.0);
  EXPECT_NEAR(acceptance_probability(0.5, 1e12), 1.0, 1e-9);
  EXPECT_EQ(acceptance_probability(std::numeric_limits<double>::infinity(), 1.0), 0.0);
}

TEST(AcceptanceTest, RelativeWorsening) {
  EXPECT_NEAR(relative_worsening(std::log(0.5), std::log(0.4), false), 0.2, 1e-15);
  EXPECT_NEAR(relative_worsening(std::log(0.5), std::log(0.6), false), -0.2, 1e-15);
  EXPECT_TRUE(std::isinf(relative_worsening(-30.0, -31.0, true)));
}

TEST(SAParamsTest, Validation) {
  EXPECT_THROW((SAParams{.t_max_s = 0.0}.Validate()), ValidationError);
  EXPECT_THROW((SAParams{.p_start = 0.1, .p_end = 0.5}.Validate()), ValidationError);
  EXPECT_THROW((SAParams{.delta_ref = -1}.Validate()), ValidationError);
  EXPECT_NO_THROW(SAParams{}.Validate());
}

TEST(RunSATest, StepBudgetIsReproducible) {
  std::mt19937_64 gen(6);
  const Roster roster = testing::RandomRoster(15, 4, gen);
  const Task task = Task::Create(testing::RandomTaskType(4, 0.5, gen), 3);
  const SAParams params{.seed = 4, .max_steps = 3000};
  const SolverResult a = run_sa(roster, task, EvalConfig{}, params);
  const SolverResult b = run_sa(roster, task, EvalConfig{}, params);
  EXPECT_EQ(a.partition, b.partition);
  EXPECT_EQ(a.iterations, 3000u);
  validate_partition(a.partition, 15, 3);
  EXPECT_TRUE(IsMonotone(a.trace));
  EXPECT_NEAR(a.trace.back().best_S, a.score.value, 1e-9 * a.score.value);
  EXPECT_NEAR(partition_value(roster, a.partition, task, EvalConfig{}).value,
              a.score.value, 1e-12 * a.score.value);
  // The best state is never worse than the starting point.
  EXPECT_GE(a.score.value, a.trace.front().best_S);
}

TEST(RunSATest, WallClockBudget) {
  std::mt19937_64 gen(7);
  const Roster roster = testing::RandomRoster(12, 3, gen);
  const Task task = Task::Create(testing::RandomTaskType(3, 0.5, gen), 4);
  const SolverResult r = run_sa(roster, task, EvalConfig{}, {.t_max_s = 0.05, .seed = 1});
  EXPECT_GT(r.iterations, 0u);
  EXPECT_GE(r.solve_time_s, 0.05);
  EXPECT_LT(r.solve_time_s, 1.0);
  EXPECT_TRUE(IsMonotone(r.trace));
}

TEST(RunSATest, SingleTeamStopsImmediately) {
  std::mt19937_64 gen(8);
  const Roster roster = testing::RandomRoster(3, 2, gen);
  const Task task = Task::Create(testing::RandomTaskType(2, 0.5, gen), 3);
  const SolverResult r = run_sa(roster, task, EvalConfig{}, {.max_steps = 100});
  EXPECT_EQ(r.iterations, 0u);
  EXPECT_EQ(r.partition.teams.size(), 1u);
}

}  // namespace
}  // namespace teamcomp
