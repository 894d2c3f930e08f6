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

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "teamcomp/errors.hpp"
#include "test_util.hpp"

namespace teamcomp {
namespace {

using ::testing::HasSubstr;
using testing::MakeStudent;

TEST(QuantityDistributionTest, ExactDivision) {
  EXPECT_EQ(quantity_distribution(10, 5), (SizeDistribution{{{2, 5}}}));
  EXPECT_EQ(quantity_distribution(4, 2), (SizeDistribution{{{2, 2}}}));
}

TEST(QuantityDistributionTest, OneOversizedTeam) {
  EXPECT_EQ(quantity_distribution(11, 5), (SizeDistribution{{{1, 6}, {1, 5}}}));
}

TEST(QuantityDistributionTest, OnlyOversizedTeams) {
  // 7 = 3 + 4 with b = 2: remainder 1, one team of each size.
  EXPECT_EQ(quantity_distribution(7, 3), (SizeDistribution{{{1, 4}, {1, 3}}}));
  // 8 = 4 + 4 with m = 3: b = 2, remainder 2, both teams oversized.
  EXPECT_EQ(quantity_distribution(8, 3), (SizeDistribution{{{2, 4}}}));
}

TEST(QuantityDistributionTest, RejectsBadArguments) {
  EXPECT_THROW(quantity_distribution(3, 4), ValidationError);
  EXPECT_THROW(quantity_distribution(5, 1), ValidationError);
  // b = 1 team cannot absorb two extra students within size m + 1.
  EXPECT_THROW(quantity_distribution(5, 3), ValidationError);
}

// Every feasible (n, m) pair: sizes in {m, m+1}, b = floor(n/m) teams,
// covering n. Pairs with n mod m > floor(n/m) admit no such multiset and
// must be rejected.
TEST(QuantityDistributionTest, ExhaustiveInvariants) {
  for (int m = 2; m <= 200; ++m) {
    for (int n = m; n <= 200; ++n) {
      const int b = n / m;
      const int r = n % m;
      if (r > b) {
        EXPECT_THROW(quantity_distribution(n, m), ValidationError) << n << "," << m;
        continue;
      }
      const SizeDistribution d = quantity_distribution(n, m);
      EXPECT_EQ(d.student_count(), n);
      EXPECT_EQ(d.team_count(), b);
      for (const SizeCount& e : d.entries) {
        EXPECT_GT(e.count, 0);
        EXPECT_TRUE(e.size == m || e.size == m + 1);
      }
      int sum = 0;
      int teams = 0;
      for (int size : d.Sizes()) {
        sum += size;
        ++teams;
      }
      EXPECT_EQ(sum, n);
      EXPECT_EQ(teams, b);
    }
  }
}

TEST(ValidateRosterTest, DuplicateIdNamed) {
  const std::vector<Student> students = {MakeStudent("s1", Gender::kMan, {}),
                                         MakeStudent("s1", Gender::kWoman, {})};
  const std::vector<std::string> issues = validate_roster(students);
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_THAT(issues[0], HasSubstr("s1"));
  EXPECT_THROW(Roster{students}, ValidationError);
}

TEST(ValidateRosterTest, ProfileOutOfRange) {
  const std::vector<Student> students = {
      MakeStudent("a", Gender::kMan, {1.2, 0, 0, 0}),
      MakeStudent("b", Gender::kMan, {0, 0, 0, 0}, {{"x", 1.5}})};
  const std::vector<std::string> issues = validate_roster(students);
  ASSERT_EQ(issues.size(), 2u);
  EXPECT_THAT(issues[0], HasSubstr("sn"));
  EXPECT_THAT(issues[1], HasSubstr("x"));
}

TEST(ValidateRosterTest, ValidRosterUnchangedAndSorted) {
  const std::vector<Student> students = {
      MakeStudent("c", Gender::kMan, {0.1, 0.2, 0.3, 0.4}, {{"x", 0.5}}),
      MakeStudent("a", Gender::kWoman, {-1, 1, -1, 1}),
      MakeStudent("b", Gender::kMan, {0, 0, 0, 0})};
  EXPECT_TRUE(validate_roster(students).empty());
  const Roster roster(students);
  ASSERT_EQ(roster.size(), 3u);
  EXPECT_EQ(roster[0].id, "a");
  EXPECT_EQ(roster[2], students[0]);
  EXPECT_EQ(roster.IndexOf("b"), 1u);
  EXPECT_FALSE(roster.IndexOf("z").has_value());
}

TEST(StudentTest, MissingCompetenceIsZero) {
  const Student s = MakeStudent("a", Gender::kMan, {}, {{"x", 0.7}});
  EXPECT_EQ(s.Level("x"), 0.7);
  EXPECT_EQ(s.Level("y"), 0.0);
}

TEST(GenderTest, ParsesTwoValues) {
  EXPECT_EQ(ParseGender("woman"), Gender::kWoman);
  EXPECT_EQ(ParseGender("Male"), Gender::kMan);
  EXPECT_FALSE(ParseGender("other").has_value());
}

TEST(TaskTypeTest, NormalizesAndSorts) {
  const TaskType t("t", 0.5, {{"z", 0.1, 2.0 / 10}, {"a", 0.2, 6.0 / 10}});
  ASSERT_EQ(t.requirements().size(), 2u);
  EXPECT_EQ(t.requirements()[0].competence, "a");
  EXPECT_NEAR(t.requirements()[0].weight, 0.75, 1e-15);
  EXPECT_NEAR(t.requirements()[1].weight, 0.25, 1e-15);
}

TEST(TaskTypeTest, Rejections) {
  EXPECT_THROW(TaskType("t", 0.5, {}), ValidationError);
  EXPECT_THROW(TaskType("t", 1.5, {{"a", 0.1, 1}}), ValidationError);
  EXPECT_THROW(TaskType("t", 0.5, {{"a", 0.1, 1}, {"a", 0.2, 1}}), ValidationError);
  EXPECT_THROW(TaskType("t", 0.5, {{"a", 0.1, 0}}), ValidationError);
  EXPECT_THROW(Task::Create(TaskType("t", 0.5, {{"a", 0.1, 1}}), 1), ValidationError);
}

TEST(PartitionTest, Checks) {
  EXPECT_TRUE(check_partition({{{0, 1}, {2, 3}}}, 4, 2).empty());
  // Overlap, missing student, wrong size.
  EXPECT_FALSE(check_partition({{{0, 1}, {1, 2}}}, 4, 2).empty());
  EXPECT_FALSE(check_partition({{{0, 1}}}, 4, 2).empty());
  EXPECT_FALSE(check_partition({{{0, 1, 2, 3}}}, 4, 2).empty());
  EXPECT_THROW(validate_partition({{{0, 1}}}, 4, 2), ValidationError);
}

TEST(EvalConfigTest, Ranges) {
  EXPECT_NO_THROW(EvalConfig{}.Validate());
  EvalConfig c;
  c.gamma = 0.0;
  EXPECT_THROW(c.Validate(), ValidationError);
  c = {};
  c.epsilon_floor = 1e-3;
  EXPECT_THROW(c.Validate(), ValidationError);
  c = {};
  c.upsilon = -0.1;
  EXPECT_THROW(c.Validate(), ValidationError);
}

}  // namespace
}  // namespace teamcomp
