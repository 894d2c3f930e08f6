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

#include "teamcomp/competence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

#include "teamcomp/errors.hpp"

namespace teamcomp {
namespace {

constexpr double kCostTolerance = 1e-12;

void CheckSolvable(const Team& team, const TaskType& task_type) {
  if (team.size() < 2) {
    throw ValidationError("competence assignment needs a team of at least two");
  }
  if (task_type.requirements().empty()) {
    throw ValidationError("task type has no requirements");
  }
}

double SumCost(const AssignmentCosts& costs, const std::vector<int>& owner) {
  double total = 0.0;
  for (int c = 0; c < costs.competences(); ++c) total += costs.at(owner[c], c);
  return total;
}

// Per-requirement count of assignees and the members holding it, checked
// against the team and the task type.
std::vector<std::vector<StudentIndex>> Holders(const Roster& roster, const Team& team,
                                               const TaskType& task_type,
                                               const CompetenceAssignment& assignment) {
  const auto reqs = task_type.requirements();
  std::vector<std::vector<StudentIndex>> holders(reqs.size());
  for (const auto& [student_id, competences] : assignment.mapping) {
    const auto index = roster.IndexOf(student_id);
    if (!index || !std::binary_search(team.begin(), team.end(), *index)) {
      throw ValidationError("assignment names student \"" + student_id +
                            "\" who is not in the team");
    }
    for (const std::string& competence : competences) {
      auto it = std::find_if(reqs.begin(), reqs.end(), [&](const Requirement& r) {
        return r.competence == competence;
      });
      if (it == reqs.end()) {
        throw ValidationError("assignment names competence \"" + competence +
                              "\" which the task does not require");
      }
      holders[static_cast<std::size_t>(it - reqs.begin())].push_back(*index);
    }
  }
  return holders;
}

template <typename Term>
double Proficiency(const Roster& roster, const Team& team, const TaskType& task_type,
                   const CompetenceAssignment& assignment, Term term) {
  const auto holders = Holders(roster, team, task_type, assignment);
  const auto reqs = task_type.requirements();
  double total = 0.0;
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    double gap = 0.0;
    for (StudentIndex a : holders[i]) {
      gap += term(roster[a].Level(reqs[i].competence) - reqs[i].level);
    }
    total += reqs[i].weight * gap / static_cast<double>(holders[i].size() + 1);
  }
  return total;
}

CompetenceAssignment ToAssignment(const Roster& roster, const Team& team,
                                  const TaskType& task_type,
                                  const std::vector<int>& owner) {
  CompetenceAssignment out;
  for (StudentIndex s : team) out.mapping[roster[s].id];
  const auto reqs = task_type.requirements();
  for (std::size_t c = 0; c < owner.size(); ++c) {
    out.mapping[roster[team[owner[c]]].id].push_back(reqs[c].competence);
  }
  return out;
}

ProficiencyResult MakeResult(const Roster& roster, const Team& team,
                             const TaskType& task_type, double upsilon,
                             const std::vector<int>& owner) {
  ProficiencyResult result;
  result.assignment = ToAssignment(roster, team, task_type, owner);
  result.under = under_proficiency(roster, team, task_type, result.assignment);
  result.over = over_proficiency(roster, team, task_type, result.assignment);
  result.u_prof = 1.0 - (upsilon * result.under + (1.0 - upsilon) * result.over);
  result.has_idle_members = task_type.requirements().size() < team.size();
  return result;
}

class EnumerationSearch {
 public:
  explicit EnumerationSearch(const AssignmentCosts& costs)
      : costs_(costs),
        members_(costs.members()),
        competences_(costs.competences()),
        cap_(CompetenceCap(competences_, members_)),
        every_(EveryMemberNeeded(competences_, members_)),
        suffix_min_(competences_ + 1, 0.0),
        owner_(competences_, -1),
        load_(members_, 0),
        idle_(members_) {
    for (int c = competences_ - 1; c >= 0; --c) {
      double lo = std::numeric_limits<double>::infinity();
      for (int k = 0; k < members_; ++k) lo = std::min(lo, costs_.at(k, c));
      suffix_min_[c] = suffix_min_[c + 1] + lo;
    }
  }

  IndexAssignment Run() {
    Visit(0, 0.0);
    return best_;
  }

 private:
  void Visit(int c, double partial) {
    if (found_ && partial + suffix_min_[c] > best_.cost + kCostTolerance) return;
    if (every_ && competences_ - c < idle_) return;
    if (c == competences_) {
      Consider();
      return;
    }
    for (int k = 0; k < members_; ++k) {
      if (load_[k] >= cap_) continue;
      owner_[c] = k;
      if (load_[k]++ == 0) --idle_;
      Visit(c + 1, partial + costs_.at(k, c));
      if (--load_[k] == 0) ++idle_;
    }
    owner_[c] = -1;
  }

  void Consider() {
    const double cost = SumCost(costs_, owner_);
    if (!found_ || cost < best_.cost - kCostTolerance ||
        (cost <= best_.cost + kCostTolerance &&
         PairListLess(owner_, best_.owner, members_))) {
      best_.owner = owner_;
      best_.cost = cost;
      found_ = true;
    }
  }

  const AssignmentCosts& costs_;
  int members_;
  int competences_;
  int cap_;
  bool every_;
  std::vector<double> suffix_min_;
  std::vector<int> owner_;
  std::vector<int> load_;
  int idle_;
  bool found_ = false;
  IndexAssignment best_;
};

struct FlowEdge {
  int to;
  int capacity;
  double cost;
};

// Successive shortest paths with Bellman-Ford; graphs here have a few dozen
// nodes.
class MinCostFlow {
 public:
  explicit MinCostFlow(int nodes) : adjacency_(nodes) {}

  int AddEdge(int from, int to, int capacity, double cost) {
    const int id = static_cast<int>(edges_.size());
    edges_.push_back({to, capacity, cost});
    adjacency_[from].push_back(id);
    edges_.push_back({from, 0, -cost});
    adjacency_[to].push_back(id + 1);
    return id;
  }

  // Pushes up to `units` units; returns the amount sent.
  int Run(int source, int sink, int units) {
    const int n = static_cast<int>(adjacency_.size());
    int sent = 0;
    while (sent < units) {
      std::vector<double> dist(n, std::numeric_limits<double>::infinity());
      std::vector<int> via(n, -1);
      dist[source] = 0.0;
      for (int round = 0; round < n; ++round) {
        bool changed = false;
        for (int u = 0; u < n; ++u) {
          if (!std::isfinite(dist[u])) continue;
          for (int id : adjacency_[u]) {
            const FlowEdge& e = edges_[id];
            if (e.capacity > 0 && dist[u] + e.cost < dist[e.to] - 1e-15) {
              dist[e.to] = dist[u] + e.cost;
              via[e.to] = id;
              changed = true;
            }
          }
        }
        if (!changed) break;
      }
      if (via[sink] < 0) break;
      for (int v = sink; v != source; v = edges_[via[v] ^ 1].to) {
        edges_[via[v]].capacity -= 1;
        edges_[via[v] ^ 1].capacity += 1;
      }
      ++sent;
    }
    return sent;
  }

  const FlowEdge& edge(int id) const { return edges_[id]; }

 private:
  std::vector<FlowEdge> edges_;
  std::vector<std::vector<int>> adjacency_;
};

}  // namespace

double assignment_cost(double student_level, const Requirement& requirement,
                       double upsilon) {
  const double diff = student_level - requirement.level;
  if (diff >= 0.0) return diff * (1.0 - upsilon) * requirement.weight;
  return -diff * upsilon * requirement.weight;
}

double under_proficiency(const Roster& roster, const Team& team,
                         const TaskType& task_type,
                         const CompetenceAssignment& assignment) {
  return Proficiency(roster, team, task_type, assignment,
                     [](double d) { return std::abs(std::min(d, 0.0)); });
}

double over_proficiency(const Roster& roster, const Team& team, const TaskType& task_type,
                        const CompetenceAssignment& assignment) {
  return Proficiency(roster, team, task_type, assignment,
                     [](double d) { return std::max(d, 0.0); });
}

int CompetenceCap(int competences, int members) {
  return (competences + members - 1) / members;
}

bool EveryMemberNeeded(int competences, int members) { return competences >= members; }

bool IsBalanced(const std::vector<int>& owner, int members) {
  const int competences = static_cast<int>(owner.size());
  const int cap = CompetenceCap(competences, members);
  std::vector<int> load(members, 0);
  for (int k : owner) {
    if (k < 0 || k >= members || ++load[k] > cap) return false;
  }
  if (EveryMemberNeeded(competences, members)) {
    return std::none_of(load.begin(), load.end(), [](int l) { return l == 0; });
  }
  return true;
}

bool PairListLess(const std::vector<int>& a, const std::vector<int>& b, int members) {
  auto pairs = [members](const std::vector<int>& owner) {
    std::vector<std::pair<int, int>> out;
    out.reserve(owner.size());
    for (int k = 0; k < members; ++k) {
      for (int c = 0; c < static_cast<int>(owner.size()); ++c) {
        if (owner[c] == k) out.emplace_back(k, c);
      }
    }
    return out;
  };
  const auto pa = pairs(a);
  const auto pb = pairs(b);
  return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
}

AssignmentCosts BuildAssignmentCosts(const Roster& roster, const Team& team,
                                     const TaskType& task_type, double upsilon) {
  const auto reqs = task_type.requirements();
  AssignmentCosts costs(static_cast<int>(team.size()), static_cast<int>(reqs.size()));
  for (int k = 0; k < costs.members(); ++k) {
    const Student& s = roster[team[k]];
    for (int c = 0; c < costs.competences(); ++c) {
      costs.at(k, c) = assignment_cost(s.Level(reqs[c].competence), reqs[c], upsilon);
    }
  }
  return costs;
}

IndexAssignment SolveByEnumeration(const AssignmentCosts& costs) {
  return EnumerationSearch(costs).Run();
}

IndexAssignment SolveByMinCostFlow(const AssignmentCosts& costs) {
  const int members = costs.members();
  const int competences = costs.competences();
  const int cap = CompetenceCap(competences, members);
  const bool every = EveryMemberNeeded(competences, members);
  // Exceeds the spread between any two feasible assignments (each cost <= 1).
  const double bonus = static_cast<double>(competences) + 1.0;

  const int source = 0;
  const int sink = 1 + competences + members;
  MinCostFlow flow(sink + 1);
  std::vector<std::vector<int>> edge_ids(competences, std::vector<int>(members));
  for (int c = 0; c < competences; ++c) {
    flow.AddEdge(source, 1 + c, 1, 0.0);
    for (int k = 0; k < members; ++k) {
      edge_ids[c][k] = flow.AddEdge(1 + c, 1 + competences + k, 1, costs.at(k, c));
    }
  }
  for (int k = 0; k < members; ++k) {
    const int node = 1 + competences + k;
    if (every) {
      flow.AddEdge(node, sink, 1, -bonus);
      if (cap > 1) flow.AddEdge(node, sink, cap - 1, 0.0);
    } else {
      flow.AddEdge(node, sink, cap, 0.0);
    }
  }
  if (flow.Run(source, sink, competences) != competences) {
    throw Error("competence assignment flow network is infeasible");
  }

  IndexAssignment result;
  result.owner.assign(competences, -1);
  for (int c = 0; c < competences; ++c) {
    for (int k = 0; k < members; ++k) {
      if (flow.edge(edge_ids[c][k]).capacity == 0) result.owner[c] = k;
    }
  }
  result.cost = SumCost(costs, result.owner);
  return result;
}

IndexAssignment SolveAssignment(const AssignmentCosts& costs) {
  if (costs.competences() <= kEnumerationMaxCompetences) {
    return SolveByEnumeration(costs);
  }
  return SolveByMinCostFlow(costs);
}

ProficiencyResult solve_balanced_assignment(const Roster& roster, const Team& team,
                                            const TaskType& task_type, double upsilon) {
  CheckSolvable(team, task_type);
  const IndexAssignment best =
      SolveAssignment(BuildAssignmentCosts(roster, team, task_type, upsilon));
  return MakeResult(roster, team, task_type, upsilon, best.owner);
}

ProficiencyResult brute_force_assignment(const Roster& roster, const Team& team,
                                         const TaskType& task_type, double upsilon) {
  CheckSolvable(team, task_type);
  const int members = static_cast<int>(team.size());
  const auto reqs = task_type.requirements();
  const int competences = static_cast<int>(reqs.size());
  if (members > 8 || competences > 8) {
    throw GuardExceeded(
        "brute-force assignment limited to 8 members and 8 "
        "competencies");
  }

  // gap[k][c] = offered minus required level.
  std::vector<std::vector<double>> gap(members, std::vector<double>(competences));
  for (int k = 0; k < members; ++k) {
    for (int c = 0; c < competences; ++c) {
      gap[k][c] = roster[team[k]].Level(reqs[c].competence) - reqs[c].level;
    }
  }

  std::vector<int> owner(competences, 0);
  std::vector<int> best_owner;
  double best_value = -std::numeric_limits<double>::infinity();
  while (true) {
    if (IsBalanced(owner, members)) {
      double under = 0.0;
      double over = 0.0;
      for (int c = 0; c < competences; ++c) {
        int holders = 0;
        double u = 0.0;
        double o = 0.0;
        for (int k = 0; k < members; ++k) {
          if (owner[c] != k) continue;
          ++holders;
          u += std::abs(std::min(gap[k][c], 0.0));
          o += std::max(gap[k][c], 0.0);
        }
        under += reqs[c].weight * u / (holders + 1);
        over += reqs[c].weight * o / (holders + 1);
      }
      const double value = 1.0 - (upsilon * under + (1.0 - upsilon) * over);
      if (value > best_value + kCostTolerance ||
          (value >= best_value - kCostTolerance &&
           PairListLess(owner, best_owner, members))) {
        best_value = value;
        best_owner = owner;
      }
    }
    int c = 0;
    while (c < competences && ++owner[c] == members) owner[c++] = 0;
    if (c == competences) break;
  }
  return MakeResult(roster, team, task_type, upsilon, best_owner);
}

}  // namespace teamcomp
