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

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "teamcomp/errors.hpp"

namespace teamcomp {
namespace {

using Members = std::span<const StudentIndex>;

// Shifted by the first member's value, so equal values give exactly 0.
template <typename Field>
double PopulationStdDev(const Roster& roster, Members members, Field field) {
  const double pivot = field(roster[members[0]].profile);
  double mean = 0.0;
  for (StudentIndex a : members) mean += field(roster[a].profile) - pivot;
  mean /= static_cast<double>(members.size());
  double var = 0.0;
  for (StudentIndex a : members) {
    const double d = field(roster[a].profile) - pivot - mean;
    var += d * d;
  }
  return std::sqrt(var / static_cast<double>(members.size()));
}

double Sntf(const Roster& roster, Members members) {
  return PopulationStdDev(roster, members,
                          [](const PersonalityProfile& p) { return p.sn; }) *
         PopulationStdDev(roster, members,
                          [](const PersonalityProfile& p) { return p.tf; });
}

double Etj(const Roster& roster, Members members, double alpha) {
  double best = 0.0;
  for (StudentIndex a : members) {
    const PersonalityProfile& p = roster[a].profile;
    best = std::max(best, alpha * (p.tf + p.ei + p.pj));
  }
  return best;
}

double Introvert(const Roster& roster, Members members, double beta) {
  double best = 0.0;
  for (StudentIndex a : members) {
    best = std::max(best, -beta * roster[a].profile.ei);
  }
  return best;
}

double GenderBalance(const Roster& roster, Members members, double gamma) {
  int women = 0;
  for (StudentIndex a : members) {
    if (roster[a].gender == Gender::kWoman) ++women;
  }
  return u_gender(women, static_cast<int>(members.size()) - women, gamma);
}

double Congeniality(const Roster& roster, Members members, const EvalConfig& config) {
  return Sntf(roster, members) + Etj(roster, members, config.alpha) +
         Introvert(roster, members, config.beta) +
         GenderBalance(roster, members, config.gamma);
}

}  // namespace

double u_sntf(const Roster& roster, const Team& team) { return Sntf(roster, team); }

double u_etj(const Roster& roster, const Team& team, double alpha) {
  return Etj(roster, team, alpha);
}

double u_introvert(const Roster& roster, const Team& team, double beta) {
  return Introvert(roster, team, beta);
}

double u_gender(const Roster& roster, const Team& team, double gamma) {
  return GenderBalance(roster, team, gamma);
}

double u_gender(int women, int men, double gamma) {
  // Single-gender teams score exactly 0; sin(pi) is not exactly zero.
  if (women == 0 || men == 0) return 0.0;
  const double ratio = static_cast<double>(women) / (women + men);
  return gamma * std::sin(std::numbers::pi * ratio);
}

double congeniality(const Roster& roster, const Team& team, const EvalConfig& config) {
  return Congeniality(roster, team, config);
}

SynergyRecord synergistic_value(const Roster& roster, const Team& team, const Task& task,
                                const EvalConfig& config) {
  const ProficiencyResult prof =
      solve_balanced_assignment(roster, team, task.type, config.upsilon);
  SynergyRecord record;
  record.team = team;
  record.u_prof = prof.u_prof;
  record.u_con = congeniality(roster, team, config);
  const double lambda = task.type.lambda();
  record.s = lambda * record.u_prof + (1.0 - lambda) * record.u_con;
  record.assignment = prof.assignment;
  return record;
}

PartitionScore ScoreFromTeamValues(std::span<const double> team_values,
                                   double epsilon_floor) {
  PartitionScore score{1.0, 0.0};
  for (double s : team_values) {
    score.value *= s;
    score.log_value += std::log(std::max(s, epsilon_floor));
  }
  return score;
}

PartitionScore partition_value(const Roster& roster, const Partition& partition,
                               const Task& task, const EvalConfig& config) {
  validate_partition(partition, roster.size(), task.m);
  std::vector<double> values;
  values.reserve(partition.teams.size());
  for (const Team& team : partition.teams) {
    values.push_back(synergistic_value(roster, team, task, config).s);
  }
  return ScoreFromTeamValues(values, config.epsilon_floor);
}

std::size_t TeamEvaluator::KeyHash::operator()(const Team& key) const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (StudentIndex s : key) {
    h ^= s;
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h);
}

TeamEvaluator::TeamEvaluator(const Roster& roster, const Task& task,
                             const EvalConfig& config)
    : roster_(&roster),
      task_(&task),
      config_(config),
      competences_(static_cast<int>(task.type.requirements().size())) {
  config_.Validate();
  if (competences_ == 0) throw ValidationError("task type has no requirements");
  const auto reqs = task.type.requirements();
  levels_.resize(roster.size() * reqs.size());
  for (std::size_t a = 0; a < roster.size(); ++a) {
    for (std::size_t c = 0; c < reqs.size(); ++c) {
      levels_[a * reqs.size() + c] =
          roster[static_cast<StudentIndex>(a)].Level(reqs[c].competence);
    }
  }
}

double TeamEvaluator::SynergyUncached(std::span<const StudentIndex> members) const {
  evaluations_.fetch_add(1, std::memory_order_relaxed);
  const auto reqs = task_->type.requirements();
  AssignmentCosts costs(static_cast<int>(members.size()), competences_);
  for (int k = 0; k < costs.members(); ++k) {
    const double* row = &levels_[static_cast<std::size_t>(members[k]) * competences_];
    for (int c = 0; c < competences_; ++c) {
      costs.at(k, c) = assignment_cost(row[c], reqs[c], config_.upsilon);
    }
  }
  // One assignee per competence makes u_prof = 1 - cost / 2.
  const double u_prof = 1.0 - SolveAssignment(costs).cost / 2.0;
  const double lambda = task_->type.lambda();
  return lambda * u_prof + (1.0 - lambda) * Congeniality(*roster_, members, config_);
}

double TeamEvaluator::Synergy(std::span<const StudentIndex> members) const {
  Team key(members.begin(), members.end());
  {
    std::shared_lock lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  const double s = SynergyUncached(members);
  std::unique_lock lock(mutex_);
  cache_.emplace(std::move(key), s);
  return s;
}

double TeamEvaluator::FloorLog(double s) const {
  return std::log(std::max(s, config_.epsilon_floor));
}

double TeamEvaluator::LogSynergy(std::span<const StudentIndex> members) const {
  return FloorLog(Synergy(members));
}

SynergyRecord TeamEvaluator::Record(const Team& team) const {
  return synergistic_value(*roster_, team, *task_, config_);
}

std::size_t TeamEvaluator::cache_size() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

}  // namespace teamcomp
