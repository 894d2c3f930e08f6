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

#include "teamcomp/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

#include "teamcomp/errors.hpp"

namespace teamcomp {

ValidationError::ValidationError(std::vector<std::string> issues)
    : Error([&] {
        std::string joined;
        for (const auto& issue : issues) {
          if (!joined.empty()) joined += "; ";
          joined += issue;
        }
        return joined;
      }()),
      issues_(std::move(issues)) {}

namespace {

bool InRange(double x, double lo, double hi) {
  return std::isfinite(x) && x >= lo && x <= hi;
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(c));
  return out;
}

}  // namespace

std::string_view GenderName(Gender g) { return g == Gender::kWoman ? "woman" : "man"; }

std::optional<Gender> ParseGender(std::string_view text) {
  const std::string s = Lower(text);
  if (s == "man" || s == "male") return Gender::kMan;
  if (s == "woman" || s == "female") return Gender::kWoman;
  return std::nullopt;
}

double Student::Level(std::string_view competence) const {
  auto it = levels.find(competence);
  return it == levels.end() ? 0.0 : it->second;
}

std::vector<std::string> validate_roster(std::span<const Student> students) {
  std::vector<std::string> issues;
  std::set<std::string, std::less<>> seen;
  std::set<std::string, std::less<>> reported;
  for (const Student& s : students) {
    if (s.id.empty()) issues.push_back("student with empty id");
    if (!seen.insert(s.id).second && reported.insert(s.id).second) {
      issues.push_back("duplicate student id \"" + s.id + "\"");
    }
    const std::pair<const char*, double> dims[] = {{"sn", s.profile.sn},
                                                   {"tf", s.profile.tf},
                                                   {"ei", s.profile.ei},
                                                   {"pj", s.profile.pj}};
    for (const auto& [name, value] : dims) {
      if (!InRange(value, -1.0, 1.0)) {
        std::ostringstream os;
        os << "student \"" << s.id << "\": " << name << " = " << value
           << " outside [-1, 1]";
        issues.push_back(os.str());
      }
    }
    for (const auto& [competence, level] : s.levels) {
      if (!InRange(level, 0.0, 1.0)) {
        std::ostringstream os;
        os << "student \"" << s.id << "\": level of " << competence << " = " << level
           << " outside [0, 1]";
        issues.push_back(os.str());
      }
    }
  }
  return issues;
}

Roster::Roster(std::vector<Student> students) : students_(std::move(students)) {
  if (auto issues = validate_roster(students_); !issues.empty()) {
    throw ValidationError(std::move(issues));
  }
  std::sort(students_.begin(), students_.end(),
            [](const Student& a, const Student& b) { return a.id < b.id; });
}

std::optional<StudentIndex> Roster::IndexOf(std::string_view id) const {
  auto it =
      std::lower_bound(students_.begin(), students_.end(), id,
                       [](const Student& s, std::string_view key) { return s.id < key; });
  if (it == students_.end() || it->id != id) return std::nullopt;
  return static_cast<StudentIndex>(it - students_.begin());
}

TaskType::TaskType(std::string name, double lambda, std::vector<Requirement> requirements)
    : name_(std::move(name)), lambda_(lambda), requirements_(std::move(requirements)) {
  std::vector<std::string> issues;
  if (!InRange(lambda_, 0.0, 1.0)) {
    issues.push_back("lambda = " + std::to_string(lambda_) + " outside [0, 1]");
  }
  if (requirements_.empty()) issues.push_back("task type has no requirements");
  std::set<std::string, std::less<>> seen;
  double total = 0.0;
  for (const Requirement& r : requirements_) {
    if (r.competence.empty()) issues.push_back("requirement with empty competence");
    if (!seen.insert(r.competence).second) {
      issues.push_back("competence \"" + r.competence + "\" listed twice");
    }
    if (!InRange(r.level, 0.0, 1.0)) {
      issues.push_back("level of " + r.competence + " outside [0, 1]");
    }
    if (!InRange(r.weight, 0.0, 1.0)) {
      issues.push_back("weight of " + r.competence + " outside [0, 1]");
    }
    total += r.weight;
  }
  if (issues.empty() && !(total > 0.0)) {
    issues.push_back("requirement weights sum to zero");
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));

  for (Requirement& r : requirements_) r.weight /= total;
  std::sort(requirements_.begin(), requirements_.end(),
            [](const Requirement& a, const Requirement& b) {
              return a.competence < b.competence;
            });
}

Task Task::Create(TaskType type, int m) {
  if (m < 2) {
    throw ValidationError("team size m = " + std::to_string(m) + " must be at least 2");
  }
  return Task{std::move(type), m};
}

Team MakeTeam(std::vector<StudentIndex> members) {
  std::sort(members.begin(), members.end());
  if (std::adjacent_find(members.begin(), members.end()) != members.end()) {
    throw ValidationError("team lists a student twice");
  }
  if (members.size() < 2) {
    throw ValidationError("a team needs at least two students");
  }
  return members;
}

int SizeDistribution::team_count() const {
  int total = 0;
  for (const auto& e : entries) total += e.count;
  return total;
}

int SizeDistribution::student_count() const {
  int total = 0;
  for (const auto& e : entries) total += e.count * e.size;
  return total;
}

int SizeDistribution::CountOf(int size) const {
  for (const auto& e : entries) {
    if (e.size == size) return e.count;
  }
  return 0;
}

std::vector<int> SizeDistribution::Sizes() const {
  std::vector<int> sizes;
  for (const auto& e : entries) sizes.insert(sizes.end(), e.count, e.size);
  return sizes;
}

SizeDistribution quantity_distribution(int n, int m) {
  if (m < 2) {
    throw ValidationError("team size m = " + std::to_string(m) + " must be at least 2");
  }
  if (n < m) {
    throw ValidationError("roster of " + std::to_string(n) +
                          " students cannot fill a team of size " + std::to_string(m));
  }
  const int b = n / m;
  const int oversized = n % m;
  if (oversized > b) {
    throw ValidationError("no partition of " + std::to_string(n) + " students into " +
                          std::to_string(b) + " teams of size " + std::to_string(m) +
                          " or " + std::to_string(m + 1));
  }
  SizeDistribution d;
  if (oversized > 0) d.entries.push_back({oversized, m + 1});
  if (b - oversized > 0) d.entries.push_back({b - oversized, m});
  return d;
}

std::vector<std::string> check_partition(const Partition& partition,
                                         std::size_t roster_size, int m) {
  std::vector<std::string> issues;
  std::vector<int> owner(roster_size, -1);
  std::map<int, int> sizes;
  for (std::size_t t = 0; t < partition.teams.size(); ++t) {
    const Team& team = partition.teams[t];
    ++sizes[static_cast<int>(team.size())];
    if (!std::is_sorted(team.begin(), team.end())) {
      issues.push_back("team " + std::to_string(t) + " is not sorted");
    }
    for (StudentIndex s : team) {
      if (s >= roster_size) {
        issues.push_back("team " + std::to_string(t) +
                         " references unknown student index " + std::to_string(s));
        continue;
      }
      if (owner[s] >= 0) {
        issues.push_back("student index " + std::to_string(s) + " appears in teams " +
                         std::to_string(owner[s]) + " and " + std::to_string(t));
      }
      owner[s] = static_cast<int>(t);
    }
  }
  for (std::size_t s = 0; s < roster_size; ++s) {
    if (owner[s] < 0) {
      issues.push_back("student index " + std::to_string(s) + " is not in any team");
    }
  }
  SizeDistribution expected;
  try {
    expected = quantity_distribution(static_cast<int>(roster_size), m);
  } catch (const ValidationError& e) {
    issues.push_back(e.what());
    return issues;
  }
  std::map<int, int> want;
  for (const auto& e : expected.entries) want[e.size] = e.count;
  if (sizes != want) {
    issues.push_back("team sizes do not match the quantity distribution for n = " +
                     std::to_string(roster_size) + ", m = " + std::to_string(m));
  }
  return issues;
}

void validate_partition(const Partition& partition, std::size_t roster_size, int m) {
  if (auto issues = check_partition(partition, roster_size, m); !issues.empty()) {
    throw ValidationError(std::move(issues));
  }
}

void EvalConfig::Validate() const {
  std::vector<std::string> issues;
  if (!InRange(upsilon, 0.0, 1.0)) issues.push_back("upsilon outside [0, 1]");
  if (!(std::isfinite(alpha) && alpha > 0.0)) issues.push_back("alpha must be > 0");
  if (!(std::isfinite(beta) && beta > 0.0)) issues.push_back("beta must be > 0");
  if (!(std::isfinite(gamma) && gamma > 0.0 && gamma <= 1.0)) {
    issues.push_back("gamma outside (0, 1]");
  }
  if (!(epsilon_floor > 0.0 && epsilon_floor <= 1e-6)) {
    issues.push_back("epsilon_floor outside (0, 1e-6]");
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

}  // namespace teamcomp
