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

#include "teamcomp/annealing.hpp"
#include "teamcomp/bench.hpp"
#include "teamcomp/exact_solver.hpp"
#include "teamcomp/synteam.hpp"

namespace teamcomp {
namespace {

constexpr std::uint64_t kSeed = 11;

void BM_Exact(benchmark::State& state) {
  const Instance inst =
      MakeInstance(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)),
                   0.5, "english", 0, kSeed);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_exact(inst.roster, inst.task, inst.config));
  }
}
BENCHMARK(BM_Exact)
    ->Args({8, 2})
    ->Args({12, 2})
    ->Args({12, 3})
    ->Args({15, 3})
    ->Args({16, 4})
    ->Unit(benchmark::kMillisecond);

void BM_SynTeam(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int m = static_cast<int>(state.range(1));
  const Instance inst = MakeInstance(n, m, 0.5, "english", 0, kSeed);
  const SynTeamParams params = SynTeamParams::Defaults(n, m, kSeed);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_synteam(inst.roster, inst.task, inst.config, params));
  }
}
BENCHMARK(BM_SynTeam)
    ->ArgsProduct({{12, 24, 48}, {2, 3, 4}})
    ->Unit(benchmark::kMillisecond);

// Fixed step count, so the figure is cost per step times range(1).
void BM_Annealing(benchmark::State& state) {
  const Instance inst =
      MakeInstance(static_cast<int>(state.range(0)), 3, 0.5, "english", 0, kSeed);
  SAParams params;
  params.seed = kSeed;
  params.max_steps = static_cast<std::uint64_t>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_sa(inst.roster, inst.task, inst.config, params));
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_Annealing)
    ->Args({24, 2000})
    ->Args({48, 2000})
    ->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace teamcomp
