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

// Balanced competence assignment: which team member answers for which
// required competence, and the team's resulting proficiency degree.
//
// A balanced assignment gives every required competence exactly one member,
// caps each member at ceil(|C| / |K|) competencies and, when |C| >= |K|,
// gives every member at least one. Its cost is the importance-weighted
// distance between offered and required levels, with under-shooting weighted
// by upsilon and over-shooting by 1 - upsilon. With one assignee per
// competence, u_prof = 1 - cost / 2, so minimizing cost maximizes u_prof.

#ifndef TEAMCOMP_COMPETENCE_HPP_
#define TEAMCOMP_COMPETENCE_HPP_

#include <map>
#include <string>
#include <vector>

#include "teamcomp/model.hpp"

namespace teamcomp {

// Student id -> competence ids the student answers for (sorted).
struct CompetenceAssignment {
  std::map<std::string, std::vector<std::string>> mapping;
  friend bool operator==(const CompetenceAssignment&,
                         const CompetenceAssignment&) = default;
};

struct ProficiencyResult {
  CompetenceAssignment assignment;
  double u_prof = 0.0;
  double under = 0.0;
  double over = 0.0;
  // Set when |C| < |K|: some members answer for nothing.
  bool has_idle_members = false;
};

// Cost of letting a student with `student_level` answer for `requirement`.
double assignment_cost(double student_level, const Requirement& requirement,
                       double upsilon);

// Throws ValidationError if the assignment does not cover the task type with
// team members only.
double under_proficiency(const Roster& roster, const Team& team,
                         const TaskType& task_type,
                         const CompetenceAssignment& assignment);
double over_proficiency(const Roster& roster, const Team& team, const TaskType& task_type,
                        const CompetenceAssignment& assignment);

// Optimal balanced assignment. Ties on cost go to the lexicographically
// smallest list of (student id, competence id) pairs.
ProficiencyResult solve_balanced_assignment(const Roster& roster, const Team& team,
                                            const TaskType& task_type, double upsilon);

// Exhaustive reference: enumerates all |K|^|C| maps, keeps the balanced ones
// and scores them from the under/over definitions. Throws GuardExceeded when
// |K| > 8 or |C| > 8.
ProficiencyResult brute_force_assignment(const Roster& roster, const Team& team,
                                         const TaskType& task_type, double upsilon);

// ---------------------------------------------------------------------------
// Index-level machinery, shared with the team evaluator.

// Dense member x competence cost matrix. Members follow team order (= id
// order), competencies follow the task type's sorted requirement order.
class AssignmentCosts {
 public:
  AssignmentCosts(int members, int competences)
      : members_(members),
        competences_(competences),
        cost_(static_cast<std::size_t>(members) * competences, 0.0) {}

  int members() const { return members_; }
  int competences() const { return competences_; }
  double& at(int member, int competence) {
    return cost_[static_cast<std::size_t>(member) * competences_ + competence];
  }
  double at(int member, int competence) const {
    return cost_[static_cast<std::size_t>(member) * competences_ + competence];
  }

 private:
  int members_;
  int competences_;
  std::vector<double> cost_;
};

AssignmentCosts BuildAssignmentCosts(const Roster& roster, const Team& team,
                                     const TaskType& task_type, double upsilon);

// owner[c] = member answering for competence c.
struct IndexAssignment {
  std::vector<int> owner;
  double cost = 0.0;
};

int CompetenceCap(int competences, int members);
bool EveryMemberNeeded(int competences, int members);
bool IsBalanced(const std::vector<int>& owner, int members);

// Pair-list order used for tie-breaking: is `a` lexicographically smaller
// than `b` when both are read as sorted (member, competence) pairs?
bool PairListLess(const std::vector<int>& a, const std::vector<int>& b, int members);

inline constexpr int kEnumerationMaxCompetences = 8;

// Depth-first enumeration with cost and feasibility pruning. Exact, with the
// pair-list tie-break. Used when competences() <= kEnumerationMaxCompetences.
IndexAssignment SolveByEnumeration(const AssignmentCosts& costs);

// Min-cost flow: competencies are unit sources, members capacity-capped
// sinks; the at-least-one lower bound becomes a first unit of capacity with a
// large negative cost. Exact on cost; ties resolved by the path order.
IndexAssignment SolveByMinCostFlow(const AssignmentCosts& costs);

// Dispatches between the two solvers by instance size.
IndexAssignment SolveAssignment(const AssignmentCosts& costs);

}  // namespace teamcomp

#endif  // TEAMCOMP_COMPETENCE_HPP_
