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

#include <algorithm>
#include <cmath>
#include <limits>

#include "teamcomp/errors.hpp"
#include "teamcomp/rng.hpp"
#include "teamcomp/synteam.hpp"

namespace teamcomp {

void SAParams::Validate() const {
  std::vector<std::string> issues;
  if (!(t_max_s > 0.0) || !std::isfinite(t_max_s)) issues.push_back("t_max must be > 0");
  if (!(delta_ref > 0.0)) issues.push_back("delta_ref must be > 0");
  if (!(p_start > 0.0 && p_start < 1.0)) issues.push_back("p_start outside (0, 1)");
  if (!(p_end > 0.0 && p_end < 1.0)) issues.push_back("p_end outside (0, 1)");
  if (!(p_end < p_start)) issues.push_back("p_end must be below p_start");
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

double initial_temperature(const SAParams& params) {
  return -params.delta_ref / std::log(params.p_start);
}

double temperature(double x, const SAParams& params) {
  const double tau_max = initial_temperature(params);
  const double final_ratio = params.delta_ref / (std::log(1.0 / params.p_end) * tau_max);
  // r^x = final_ratio^(x / t_max)
  return tau_max * std::exp(x / params.t_max_s * std::log(final_ratio));
}

double acceptance_probability(double delta, double temperature) {
  if (delta <= 0.0) return 1.0;
  if (std::isinf(delta)) return 0.0;
  return std::exp(-delta / temperature);
}

double relative_worsening(double log_current, double log_candidate,
                          bool current_is_zero) {
  if (current_is_zero) return std::numeric_limits<double>::infinity();
  return -std::expm1(log_candidate - log_current);
}

SolverResult run_sa(const TeamEvaluator& evaluator, const SAParams& params) {
  params.Validate();
  Stopwatch clock;
  const int n = static_cast<int>(evaluator.roster().size());
  const SizeDistribution distribution = quantity_distribution(n, evaluator.task().m);
  const double floor = evaluator.config().epsilon_floor;
  Rng rng(params.seed);

  ScoredPartition current =
      ScorePartition(random_partition(n, distribution, rng), evaluator);
  // Teams whose s is at or below the floor make the product zero.
  const double zero_log = std::log(floor);
  auto zero_teams = [&](const ScoredPartition& p) {
    return std::count_if(p.team_log_s.begin(), p.team_log_s.end(),
                         [&](double l) { return l <= zero_log; });
  };
  long current_zero = zero_teams(current);

  ScoredPartition best = current;
  AnytimeTrace trace{{clock.Seconds(), std::exp(best.log_S)}};
  std::uint64_t steps = 0;
  const std::size_t team_count = current.partition.teams.size();

  Team left;
  Team right;
  while (team_count >= 2) {
    double x;
    if (params.max_steps > 0) {
      if (steps >= params.max_steps) break;
      x = params.t_max_s * static_cast<double>(steps) /
          static_cast<double>(params.max_steps);
    } else {
      x = clock.Seconds();
      if (x >= params.t_max_s) break;
    }
    ++steps;

    const std::size_t t1 = rng.Below(team_count);
    std::size_t t2 = rng.Below(team_count - 1);
    if (t2 >= t1) ++t2;
    const auto& teams = current.partition.teams;
    const std::size_t p1 = rng.Below(teams[t1].size());
    const std::size_t p2 = rng.Below(teams[t2].size());
    left = teams[t1];
    right = teams[t2];
    std::swap(left[p1], right[p2]);
    std::sort(left.begin(), left.end());
    std::sort(right.begin(), right.end());
    const double log_left = evaluator.LogSynergy(left);
    const double log_right = evaluator.LogSynergy(right);
    const double log_candidate = current.log_S - current.team_log_s[t1] -
                                 current.team_log_s[t2] + log_left + log_right;

    bool accept = log_candidate >= current.log_S;
    if (!accept) {
      const double delta =
          relative_worsening(current.log_S, log_candidate, current_zero > 0);
      accept = rng.Uniform01() < acceptance_probability(delta, temperature(x, params));
    }
    if (!accept) continue;

    current.partition.teams[t1] = left;
    current.partition.teams[t2] = right;
    current.team_log_s[t1] = log_left;
    current.team_log_s[t2] = log_right;
    current.log_S = log_candidate;
    current_zero = zero_teams(current);
    if (current.log_S > best.log_S + kLogImprovementTolerance) {
      best = current;
      trace.push_back({clock.Seconds(), std::exp(best.log_S)});
    }
  }

  SolverResult result;
  result.partition = best.partition;
  std::vector<double> values;
  for (const Team& team : best.partition.teams) values.push_back(evaluator.Synergy(team));
  result.score = ScoreFromTeamValues(values, floor);
  result.trace = std::move(trace);
  result.iterations = steps;
  result.solve_time_s = clock.Seconds();
  return result;
}

SolverResult run_sa(const Roster& roster, const Task& task, const EvalConfig& config,
                    const SAParams& params) {
  const TeamEvaluator evaluator(roster, task, config);
  return run_sa(evaluator, params);
}

}  // namespace teamcomp
