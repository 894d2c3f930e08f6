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

// Exact solver: enumerate every feasible team, score it, then pick exactly b
// pairwise-disjoint teams covering the roster with the size multiset of
// quantity_distribution, maximizing the sum of log synergistic values.
//
// The selection step is a depth-first branch and bound over students. Each
// node branches on the lowest-index unassigned student; its children are
// the scored teams whose smallest member is that student, disjoint from the
// partial solution and of a size still available. Children are tried in
// decreasing reduced value, so the first dive yields a greedy incumbent.
//
// The bound is Lagrangian. With student prices pi and size prices mu, every
// completion is worth at most sum(mu over sizes still to place) plus, for
// each free student j, pi_j + the best (log s(K) - pi(K) - mu_|K|) / |K|
// over placeable teams K containing j. Any prices give a valid bound; zero
// prices give the plain per-student share bound. Prices are tuned once at
// the root by subgradient steps.

#ifndef TEAMCOMP_EXACT_SOLVER_HPP_
#define TEAMCOMP_EXACT_SOLVER_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "teamcomp/evaluation.hpp"
#include "teamcomp/model.hpp"
#include "teamcomp/solution.hpp"

namespace teamcomp {

inline constexpr std::uint64_t kDefaultTeamCap = 20'000'000;

// sum over sizes y of C(n, y); saturates at UINT64_MAX.
std::uint64_t count_feasible_teams(int n, const SizeDistribution& distribution);

// All member subsets whose size occurs in the distribution, in lexicographic
// order of their sorted member lists. Throws GuardExceeded above `cap`.
std::vector<Team> enumerate_teams(int n, const SizeDistribution& distribution,
                                  std::uint64_t cap = kDefaultTeamCap);

// One record per team, input order preserved. Spreads the work over
// `workers` threads (0 = hardware concurrency).
std::vector<SynergyRecord> score_teams(std::span<const Team> teams, const Roster& roster,
                                       const Task& task, const EvalConfig& config,
                                       unsigned workers = 1);

// The linearized set-partitioning model.
struct MasterProblem {
  int students = 0;
  int b = 0;  // required team count
  SizeDistribution distribution;
  std::vector<Team> teams;
  std::vector<double> log_s;  // log(max(s, epsilon_floor)) per team
  std::vector<double> s;
  double epsilon_floor = 1e-12;
  // membership[i] = indices of teams containing student i
  std::vector<std::vector<std::uint32_t>> membership;
};

// Enumerates and scores every feasible team. Throws GuardExceeded above
// team_cap, ValidationError when some student belongs to no team.
MasterProblem build_master_problem(const Roster& roster, const Task& task,
                                   const EvalConfig& config,
                                   std::uint64_t team_cap = kDefaultTeamCap,
                                   unsigned workers = 1);

// Writes the model as text, one row per line (see docs/formats.md).
void write_master_problem(std::ostream& out, const MasterProblem& problem,
                          const Roster& roster);

struct ExactOptions {
  std::optional<double> time_budget_s;
  std::uint64_t team_cap = kDefaultTeamCap;
  unsigned workers = 1;
};

// Branch and bound over a built model. `elapsed_offset_s` shifts trace
// timestamps (e.g. by the model-building time).
SolverResult solve_master_problem(const MasterProblem& problem,
                                  const ExactOptions& options = {},
                                  double elapsed_offset_s = 0.0);

// Builds and solves. result.optimal is false when the time budget ran out
// before the search finished; the partition is then the best incumbent.
SolverResult solve_exact(const Roster& roster, const Task& task, const EvalConfig& config,
                         const ExactOptions& options = {});

// n! / (prod over entries of size!^count * count!); saturates at UINT64_MAX.
std::uint64_t count_constrained_partitions(int n, const SizeDistribution& distribution);

struct BruteForcePartitionResult {
  Partition partition;
  PartitionScore score;
  std::uint64_t partitions_enumerated = 0;
};

// Enumerates every size-constrained partition and keeps the largest product
// of synergistic values. Throws GuardExceeded above `guard` partitions.
BruteForcePartitionResult brute_force_partitions(const Roster& roster, const Task& task,
                                                 const EvalConfig& config,
                                                 std::uint64_t guard = 1'000'000);

}  // namespace teamcomp

#endif  // TEAMCOMP_EXACT_SOLVER_HPP_
