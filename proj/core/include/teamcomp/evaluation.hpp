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

// Team congeniality, synergistic value and the partition objective.
//
// Congeniality sums four terms: SN/TF diversity (product of population
// standard deviations), the best ETJ-ness alpha * (tf + ei + pj), the best
// introversion -beta * ei, and gamma * sin(pi * women / size). The
// synergistic value blends it with proficiency: s = lambda * u_prof +
// (1 - lambda) * u_con. A partition scores the product of its teams' s,
// and solvers compare partitions through the sum of log(max(s, floor)).

#ifndef TEAMCOMP_EVALUATION_HPP_
#define TEAMCOMP_EVALUATION_HPP_

#include <atomic>
#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "teamcomp/competence.hpp"
#include "teamcomp/model.hpp"

namespace teamcomp {

double u_sntf(const Roster& roster, const Team& team);
double u_etj(const Roster& roster, const Team& team, double alpha);
double u_introvert(const Roster& roster, const Team& team, double beta);
double u_gender(const Roster& roster, const Team& team, double gamma);
double u_gender(int women, int men, double gamma);
double congeniality(const Roster& roster, const Team& team, const EvalConfig& config);

struct SynergyRecord {
  Team team;
  double s = 0.0;
  double u_prof = 0.0;
  double u_con = 0.0;
  CompetenceAssignment assignment;
};

SynergyRecord synergistic_value(const Roster& roster, const Team& team, const Task& task,
                                const EvalConfig& config);

struct PartitionScore {
  double value = 0.0;      // product of team values
  double log_value = 0.0;  // sum of log(max(s, epsilon_floor))
};

// Folds per-team synergistic values into a partition score.
PartitionScore ScoreFromTeamValues(std::span<const double> team_values,
                                   double epsilon_floor);

// Throws ValidationError when the partition is not valid for the roster and
// task.m.
PartitionScore partition_value(const Roster& roster, const Partition& partition,
                               const Task& task, const EvalConfig& config);

// Scores teams of one (roster, task, config) triple, memoizing s per member
// set. Lookups and inserts are safe from concurrent threads.
class TeamEvaluator {
 public:
  // Validates config; throws ValidationError.
  TeamEvaluator(const Roster& roster, const Task& task, const EvalConfig& config);

  const Roster& roster() const { return *roster_; }
  const Task& task() const { return *task_; }
  const EvalConfig& config() const { return config_; }

  // s for a sorted member list, memoized.
  double Synergy(std::span<const StudentIndex> members) const;
  // s without touching the memo table.
  double SynergyUncached(std::span<const StudentIndex> members) const;
  double LogSynergy(std::span<const StudentIndex> members) const;
  double FloorLog(double s) const;

  SynergyRecord Record(const Team& team) const;

  std::size_t cache_size() const;
  std::uint64_t evaluations() const { return evaluations_.load(); }

 private:
  struct KeyHash {
    std::size_t operator()(const Team& key) const;
  };

  const Roster* roster_;
  const Task* task_;
  EvalConfig config_;
  // levels_[student * competences + c] for the task's requirement order.
  std::vector<double> levels_;
  int competences_;

  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<Team, double, KeyHash> cache_;
  mutable std::atomic<std::uint64_t> evaluations_{0};
};

}  // namespace teamcomp

#endif  // TEAMCOMP_EVALUATION_HPP_
