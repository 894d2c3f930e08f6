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

// Domain types shared by every solver: students, rosters, task types, teams,
// partitions and the team-size arithmetic.

#ifndef TEAMCOMP_MODEL_HPP_
#define TEAMCOMP_MODEL_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace teamcomp {

enum class Gender { kMan, kWoman };

std::string_view GenderName(Gender g);
std::optional<Gender> ParseGender(std::string_view text);

// Four post-Jungian dimensions, each in [-1, 1].
struct PersonalityProfile {
  double sn = 0.0;  // sensing (-) / intuition (+)
  double tf = 0.0;  // thinking / feeling
  double ei = 0.0;  // introvert (-) / extrovert (+)
  double pj = 0.0;  // perceiving / judging

  friend bool operator==(const PersonalityProfile&, const PersonalityProfile&) = default;
};

struct Student {
  std::string id;
  Gender gender = Gender::kMan;
  PersonalityProfile profile;
  // Competence id -> level in [0, 1]. Absent competencies count as 0.
  std::map<std::string, double, std::less<>> levels;

  double Level(std::string_view competence) const;

  friend bool operator==(const Student&, const Student&) = default;
};

// Returns one message per violation (duplicate ids, out-of-range fields);
// empty when the roster is valid.
std::vector<std::string> validate_roster(std::span<const Student> students);

using StudentIndex = std::uint32_t;

// A validated, immutable roster. Students are stored sorted by id, so index
// order and id order coincide everywhere downstream.
class Roster {
 public:
  Roster() = default;
  // Throws ValidationError listing every violation.
  explicit Roster(std::vector<Student> students);

  std::size_t size() const { return students_.size(); }
  bool empty() const { return students_.empty(); }
  const Student& operator[](StudentIndex i) const { return students_[i]; }
  std::span<const Student> students() const { return students_; }

  std::optional<StudentIndex> IndexOf(std::string_view id) const;

  friend bool operator==(const Roster&, const Roster&) = default;

 private:
  std::vector<Student> students_;
};

struct Requirement {
  std::string competence;
  double level = 0.0;   // required level in [0, 1]
  double weight = 0.0;  // importance; normalized to sum 1 over a task type

  friend bool operator==(const Requirement&, const Requirement&) = default;
};

// Required competencies plus the proficiency/congeniality trade-off lambda.
class TaskType {
 public:
  TaskType() = default;
  // Validates ranges and distinct competencies, normalizes weights to sum 1
  // and sorts requirements by competence id. Throws ValidationError.
  TaskType(std::string name, double lambda, std::vector<Requirement> requirements);

  const std::string& name() const { return name_; }
  double lambda() const { return lambda_; }
  std::span<const Requirement> requirements() const { return requirements_; }

 private:
  std::string name_;
  double lambda_ = 0.5;
  std::vector<Requirement> requirements_;
};

struct Task {
  TaskType type;
  int m = 2;  // target team size

  // Throws ValidationError when m < 2.
  static Task Create(TaskType type, int m);
};

// Sorted, duplicate-free roster indices.
using Team = std::vector<StudentIndex>;

// Sorts and checks a member list; throws ValidationError on duplicates or a
// team smaller than two.
Team MakeTeam(std::vector<StudentIndex> members);

struct SizeCount {
  int count = 0;
  int size = 0;
  friend bool operator==(const SizeCount&, const SizeCount&) = default;
};

// Multiset of team sizes covering a roster, larger size first.
struct SizeDistribution {
  std::vector<SizeCount> entries;

  int team_count() const;
  int student_count() const;
  int CountOf(int size) const;
  // Sizes in the order teams are cut by random_partition.
  std::vector<int> Sizes() const;

  friend bool operator==(const SizeDistribution&, const SizeDistribution&) = default;
};

// (n mod m) teams of size m+1 and floor(n/m) - (n mod m) teams of size m.
// Throws ValidationError for m < 2, n < m, or when no such multiset exists
// (n mod m > floor(n/m), e.g. n = 5, m = 3).
SizeDistribution quantity_distribution(int n, int m);

struct Partition {
  std::vector<Team> teams;
  friend bool operator==(const Partition&, const Partition&) = default;
};

// Checks disjointness, exact cover of [0, roster_size) and that the size
// multiset equals quantity_distribution(roster_size, m). Returns the list of
// violations, empty when valid.
std::vector<std::string> check_partition(const Partition& partition,
                                         std::size_t roster_size, int m);

// Throwing form of check_partition.
void validate_partition(const Partition& partition, std::size_t roster_size, int m);

// Evaluation weights. Defaults are the experimental settings: upsilon 0.5,
// alpha 0.11, beta = 3 alpha, gamma 0.33.
struct EvalConfig {
  double upsilon = 0.5;
  double alpha = 0.11;
  double beta = 0.33;
  double gamma = 0.33;
  double epsilon_floor = 1e-12;

  // Throws ValidationError when a field is outside its range.
  void Validate() const;
};

}  // namespace teamcomp

#endif  // TEAMCOMP_MODEL_HPP_
