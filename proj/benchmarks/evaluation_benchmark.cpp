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

#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "teamcomp/bench.hpp"
#include "teamcomp/competence.hpp"
#include "teamcomp/evaluation.hpp"

namespace teamcomp {
namespace {

constexpr std::uint64_t kSeed = 7;

Team FirstMembers(int m) {
  std::vector<StudentIndex> members(m);
  std::iota(members.begin(), members.end(), 0);
  return MakeTeam(std::move(members));
}

// Balanced assignment of the arts-design requirements (3) and english (6).
void BM_BalancedAssignment(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const Roster roster = synthetic_roster(8, kSeed);
  const TaskType type = library_task(state.range(1) ? "english" : "arts-design", 0.5);
  const Team team = FirstMembers(m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_balanced_assignment(roster, team, type, 1.0));
  }
}
BENCHMARK(BM_BalancedAssignment)->ArgsProduct({{2, 3, 4, 5, 6}, {0, 1}});

void BM_Congeniality(benchmark::State& state) {
  const Roster roster = synthetic_roster(8, kSeed);
  const Team team = FirstMembers(static_cast<int>(state.range(0)));
  const EvalConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(congeniality(roster, team, config));
}
BENCHMARK(BM_Congeniality)->DenseRange(2, 6);

// Uncached team value, which is what the solvers pay on a memo miss.
void BM_TeamSynergy(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const Instance inst = MakeInstance(12, m, 0.5, "english", 0, kSeed);
  const TeamEvaluator evaluator(inst.roster, inst.task, inst.config);
  const Team team = FirstMembers(m);
  for (auto _ : state) benchmark::DoNotOptimize(evaluator.SynergyUncached(team));
}
BENCHMARK(BM_TeamSynergy)->DenseRange(2, 5);

}  // namespace
}  // namespace teamcomp
