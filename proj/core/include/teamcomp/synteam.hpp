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

// SynTeam: single-trajectory local search with two neighborhoods.
//
// Each iteration picks two teams at random and redistributes their members
// optimally between two teams of the same sizes. When that fails to improve
// and the non-improvement counter c_l has reached n_l, a first-improvement
// scan over cross-team student swaps is tried instead. Only strict
// improvements are accepted. The run stops after more than n_r consecutive
// non-improving iterations.

#ifndef TEAMCOMP_SYNTEAM_HPP_
#define TEAMCOMP_SYNTEAM_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "teamcomp/evaluation.hpp"
#include "teamcomp/model.hpp"
#include "teamcomp/rng.hpp"
#include "teamcomp/solution.hpp"

namespace teamcomp {

struct SynTeamParams {
  int n_r = 1;  // max consecutive non-improving iterations
  int n_l = 1;  // non-improving iterations before a swap scan
  std::uint64_t seed = 0;

  // n_r = ceil(1.5 b), n_l = max(1, floor(n_r / 6)) with b = floor(n / m).
  static SynTeamParams Defaults(int n, int m, std::uint64_t seed);
  // Throws ValidationError unless 1 <= n_l <= n_r.
  void Validate() const;
};

// A partition with its per-team log values cached.
struct ScoredPartition {
  Partition partition;
  std::vector<double> team_log_s;
  double log_S = 0.0;
};

ScoredPartition ScorePartition(Partition partition, const TeamEvaluator& evaluator);

// Shuffles the students and cuts them into teams of the distribution's
// sizes, larger teams first. Members are sorted within each team.
Partition random_partition(int n, const SizeDistribution& distribution, Rng& rng);

struct Redistribution {
  ScoredPartition candidate;
  std::size_t first = 0;  // team indices that were redistributed
  std::size_t second = 0;
  std::uint64_t splits_evaluated = 0;
};

// Best split of teams `first` and `second` into two teams with the same
// sizes; the first team's slot receives the side of its original size.
// Equal-size pairs are enumerated once per unordered split.
Redistribution RedistributePair(const ScoredPartition& current, std::size_t first,
                                std::size_t second, const TeamEvaluator& evaluator);

// RedistributePair on two distinct teams drawn uniformly. Requires >= 2 teams.
Redistribution two_team_redistribution(const ScoredPartition& current,
                                       const TeamEvaluator& evaluator, Rng& rng);

// First swap of two students from different teams that strictly raises the
// objective, scanning (team, member) pairs in ascending order; nullopt if
// none does.
std::optional<ScoredPartition> improving_swap(const ScoredPartition& current,
                                              const TeamEvaluator& evaluator);

SolverResult run_synteam(const TeamEvaluator& evaluator, const SynTeamParams& params);

SolverResult run_synteam(const Roster& roster, const Task& task, const EvalConfig& config,
                         const SynTeamParams& params);

// Log-domain improvement test shared by the local searches.
inline constexpr double kLogImprovementTolerance = 1e-12;

}  // namespace teamcomp

#endif  // TEAMCOMP_SYNTEAM_HPP_
