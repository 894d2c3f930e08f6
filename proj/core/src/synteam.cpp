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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "teamcomp/errors.hpp"

namespace teamcomp {
namespace {

// Calls visit(side) for every size-`k` subset of pool positions [from, n),
// with `side` holding the chosen positions.
template <typename Visit>
void ForEachSubset(int n, int k, int from, std::vector<int>& side, Visit& visit) {
  if (static_cast<int>(side.size()) == k) {
    visit(side);
    return;
  }
  const int need = k - static_cast<int>(side.size());
  for (int i = from; i <= n - need; ++i) {
    side.push_back(i);
    ForEachSubset(n, k, i + 1, side, visit);
    side.pop_back();
  }
}

SolverResult Finish(const ScoredPartition& best, const TeamEvaluator& evaluator) {
  SolverResult result;
  result.partition = best.partition;
  std::vector<double> values;
  for (const Team& team : best.partition.teams) values.push_back(evaluator.Synergy(team));
  result.score = ScoreFromTeamValues(values, evaluator.config().epsilon_floor);
  return result;
}

}  // namespace

SynTeamParams SynTeamParams::Defaults(int n, int m, std::uint64_t seed) {
  const int b = m > 0 ? n / m : 0;
  SynTeamParams p;
  p.n_r = std::max(1, (3 * b + 1) / 2);
  p.n_l = std::max(1, p.n_r / 6);
  p.seed = seed;
  return p;
}

void SynTeamParams::Validate() const {
  if (n_r < 1 || n_l < 1 || n_l > n_r) {
    throw ValidationError("local search needs 1 <= n_l <= n_r (got n_r = " +
                          std::to_string(n_r) + ", n_l = " + std::to_string(n_l) + ")");
  }
}

ScoredPartition ScorePartition(Partition partition, const TeamEvaluator& evaluator) {
  ScoredPartition scored;
  scored.partition = std::move(partition);
  for (const Team& team : scored.partition.teams) {
    scored.team_log_s.push_back(evaluator.LogSynergy(team));
    scored.log_S += scored.team_log_s.back();
  }
  return scored;
}

Partition random_partition(int n, const SizeDistribution& distribution, Rng& rng) {
  std::vector<StudentIndex> order(n);
  std::iota(order.begin(), order.end(), StudentIndex{0});
  rng.Shuffle(std::span<StudentIndex>(order));
  Partition partition;
  auto next = order.begin();
  for (int size : distribution.Sizes()) {
    Team team(next, next + size);
    std::sort(team.begin(), team.end());
    partition.teams.push_back(std::move(team));
    next += size;
  }
  return partition;
}

Redistribution RedistributePair(const ScoredPartition& current, std::size_t first,
                                std::size_t second, const TeamEvaluator& evaluator) {
  const Team& a = current.partition.teams[first];
  const Team& b = current.partition.teams[second];
  Team pool;
  pool.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(pool));
  const int total = static_cast<int>(pool.size());
  const int size_a = static_cast<int>(a.size());

  Redistribution out;
  out.first = first;
  out.second = second;
  double best = -std::numeric_limits<double>::infinity();
  Team best_a;
  Team best_b;
  Team side_a;
  Team side_b;
  std::vector<bool> in_side(total);

  // `chosen` holds positions of the enumerated side; `chosen_is_a` says
  // which team it becomes.
  auto score_split = [&](const std::vector<int>& chosen, bool chosen_is_a) {
    std::fill(in_side.begin(), in_side.end(), false);
    for (int p : chosen) in_side[p] = true;
    side_a.clear();
    side_b.clear();
    for (int p = 0; p < total; ++p) {
      (in_side[p] == chosen_is_a ? side_a : side_b).push_back(pool[p]);
    }
    ++out.splits_evaluated;
    const double value = evaluator.LogSynergy(side_a) + evaluator.LogSynergy(side_b);
    if (value > best) {
      best = value;
      best_a = side_a;
      best_b = side_b;
    }
  };

  std::vector<int> chosen;
  if (a.size() == b.size()) {
    // Pin pool[0] to side A: each unordered split once.
    chosen.push_back(0);
    auto visit = [&](const std::vector<int>& c) { score_split(c, true); };
    ForEachSubset(total, size_a, 1, chosen, visit);
  } else {
    const bool enumerate_a = a.size() < b.size();
    const int k = static_cast<int>(std::min(a.size(), b.size()));
    auto visit = [&](const std::vector<int>& c) { score_split(c, enumerate_a); };
    ForEachSubset(total, k, 0, chosen, visit);
  }

  out.candidate = current;
  out.candidate.partition.teams[first] = std::move(best_a);
  out.candidate.partition.teams[second] = std::move(best_b);
  out.candidate.team_log_s[first] =
      evaluator.LogSynergy(out.candidate.partition.teams[first]);
  out.candidate.team_log_s[second] =
      evaluator.LogSynergy(out.candidate.partition.teams[second]);
  out.candidate.log_S = current.log_S - current.team_log_s[first] -
                        current.team_log_s[second] + out.candidate.team_log_s[first] +
                        out.candidate.team_log_s[second];
  return out;
}

Redistribution two_team_redistribution(const ScoredPartition& current,
                                       const TeamEvaluator& evaluator, Rng& rng) {
  const std::size_t teams = current.partition.teams.size();
  if (teams < 2) throw ValidationError("redistribution needs at least two teams");
  const std::size_t first = rng.Below(teams);
  std::size_t second = rng.Below(teams - 1);
  if (second >= first) ++second;
  return RedistributePair(current, first, second, evaluator);
}

std::optional<ScoredPartition> improving_swap(const ScoredPartition& current,
                                              const TeamEvaluator& evaluator) {
  const auto& teams = current.partition.teams;
  Team left;
  Team right;
  for (std::size_t t1 = 0; t1 < teams.size(); ++t1) {
    for (std::size_t p1 = 0; p1 < teams[t1].size(); ++p1) {
      for (std::size_t t2 = t1 + 1; t2 < teams.size(); ++t2) {
        for (std::size_t p2 = 0; p2 < teams[t2].size(); ++p2) {
          left = teams[t1];
          right = teams[t2];
          std::swap(left[p1], right[p2]);
          std::sort(left.begin(), left.end());
          std::sort(right.begin(), right.end());
          const double log_left = evaluator.LogSynergy(left);
          const double log_right = evaluator.LogSynergy(right);
          const double log_S = current.log_S - current.team_log_s[t1] -
                               current.team_log_s[t2] + log_left + log_right;
          if (log_S > current.log_S + kLogImprovementTolerance) {
            ScoredPartition next = current;
            next.partition.teams[t1] = left;
            next.partition.teams[t2] = right;
            next.team_log_s[t1] = log_left;
            next.team_log_s[t2] = log_right;
            next.log_S = log_S;
            return next;
          }
        }
      }
    }
  }
  return std::nullopt;
}

SolverResult run_synteam(const TeamEvaluator& evaluator, const SynTeamParams& params) {
  params.Validate();
  Stopwatch clock;
  const int n = static_cast<int>(evaluator.roster().size());
  const SizeDistribution distribution = quantity_distribution(n, evaluator.task().m);
  Rng rng(params.seed);

  ScoredPartition current =
      ScorePartition(random_partition(n, distribution, rng), evaluator);
  AnytimeTrace trace{{clock.Seconds(), std::exp(current.log_S)}};
  std::uint64_t iterations = 0;

  if (current.partition.teams.size() >= 2) {
    int c_r = 1;
    int c_l = 1;
    while (c_r <= params.n_r) {
      ++iterations;
      ScoredPartition candidate =
          two_team_redistribution(current, evaluator, rng).candidate;
      const bool improved = candidate.log_S > current.log_S + kLogImprovementTolerance;
      if (!improved && c_l == params.n_l) {
        auto swapped = improving_swap(current, evaluator);
        candidate = swapped ? std::move(*swapped) : current;
        c_l = 1;
      }
      if (candidate.log_S > current.log_S + kLogImprovementTolerance) {
        current = std::move(candidate);
        trace.push_back({clock.Seconds(), std::exp(current.log_S)});
        c_r = 1;
        c_l = 1;
      } else {
        ++c_r;
        ++c_l;
      }
    }
  }

  SolverResult result = Finish(current, evaluator);
  result.trace = std::move(trace);
  result.iterations = iterations;
  result.solve_time_s = clock.Seconds();
  return result;
}

SolverResult run_synteam(const Roster& roster, const Task& task, const EvalConfig& config,
                         const SynTeamParams& params) {
  const TeamEvaluator evaluator(roster, task, config);
  return run_synteam(evaluator, params);
}

}  // namespace teamcomp
