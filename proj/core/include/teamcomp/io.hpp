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

// Roster, task, partition and trace files. Layouts are documented in
// docs/formats.md. Every reader throws ValidationError with the file and
// row or field at fault.

#ifndef TEAMCOMP_IO_HPP_
#define TEAMCOMP_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "teamcomp/competence.hpp"
#include "teamcomp/model.hpp"
#include "teamcomp/solution.hpp"

namespace teamcomp {

inline constexpr int kSchemaVersion = 1;

// Shortest decimal that reads back to the same double.
std::string FormatDouble(double value);

// Splits one CSV line on commas and trims surrounding blanks. No quoting.
std::vector<std::string> SplitCsvLine(std::string_view line);

// Qualitative requirement-level and importance labels -> [0, 1].
struct LabelMapping {
  std::map<std::string, double, std::less<>> levels;
  std::map<std::string, double, std::less<>> importance;

  // fundamental-awareness/novice/intermediate/advanced/expert and
  // unimportant/slightly-important/important/fairly-important/very-important
  // map to 0.2, 0.4, 0.6, 0.8, 1.0.
  static const LabelMapping& Default();

  // Labels compare case-insensitively with ' ' and '_' read as '-'.
  std::optional<double> Level(std::string_view label) const;
  std::optional<double> Importance(std::string_view label) const;
};

std::string NormalizeLabel(std::string_view label);

Roster parse_roster(const std::filesystem::path& path);
Roster parse_roster_csv(std::istream& in, std::string_view source = "<csv>");
Roster parse_roster_json(std::string_view text, std::string_view source = "<json>");
void write_roster_csv(std::ostream& out, const Roster& roster);
std::string roster_to_json(const Roster& roster);

// Optional overrides for task files.
struct TaskOverrides {
  std::optional<double> lambda;
  std::optional<int> m;
};

Task parse_task(const std::filesystem::path& path, const TaskOverrides& overrides = {},
                const LabelMapping& labels = LabelMapping::Default());
Task parse_task_json(std::string_view text, std::string_view source = "<json>",
                     const TaskOverrides& overrides = {},
                     const LabelMapping& labels = LabelMapping::Default());
std::string task_to_json(const Task& task);

struct PartitionFileTeam {
  std::vector<std::string> members;
  double s = 0.0;
  double u_prof = 0.0;
  double u_con = 0.0;
  CompetenceAssignment assignment;
};

struct PartitionFile {
  std::string algorithm;
  std::string task;
  int m = 0;
  double lambda = 0.0;
  EvalConfig config;
  double S = 0.0;
  double log_S = 0.0;
  bool optimal = false;
  std::optional<std::uint64_t> seed;
  std::vector<PartitionFileTeam> teams;
};

// Serializes a solver result with per-team records (s, u_prof, u_con and
// the witnessing assignment). Contains no timings, so equal inputs give
// byte-identical output.
std::string partition_to_json(const Roster& roster, const Task& task,
                              const EvalConfig& config, const SolverResult& result,
                              std::string_view algorithm,
                              std::optional<std::uint64_t> seed = std::nullopt);

PartitionFile parse_partition_json(std::string_view text,
                                   std::string_view source = "<json>");

// Resolves member ids against the roster.
Partition ToPartition(const PartitionFile& file, const Roster& roster);

// Trace CSV: #schema=1, then label,algorithm,seed,elapsed_s,best_S.
void write_trace_csv(std::ostream& out, const AnytimeTrace& trace, std::string_view label,
                     std::string_view algorithm, std::uint64_t seed, bool header = true);

std::string ReadFile(const std::filesystem::path& path);

}  // namespace teamcomp

#endif  // TEAMCOMP_IO_HPP_
