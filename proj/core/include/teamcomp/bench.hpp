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

// Synthetic instances, the experiment grid runner and the CSV outputs used
// for the runtime, quality-ratio, anytime and annealing comparisons.

#ifndef TEAMCOMP_BENCH_HPP_
#define TEAMCOMP_BENCH_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "teamcomp/exact_solver.hpp"
#include "teamcomp/io.hpp"
#include "teamcomp/model.hpp"
#include "teamcomp/solution.hpp"

namespace teamcomp {

// The seven competencies every synthetic student is rated on.
const std::vector<std::string>& GardnerCompetences();

// Seeded roster of n students: ids "s000", "s001", ...; personality
// dimensions uniform on [-1, 1]; levels uniform on [0, 1]; each student is
// a woman with probability `woman_ratio`.
Roster synthetic_roster(int n, std::uint64_t seed, double woman_ratio = 0.5);

// body-rythm, entrepreneur, arts-design and english, in that order.
std::vector<TaskType> load_task_library(
    double lambda = 0.5, const LabelMapping& labels = LabelMapping::Default());
std::vector<std::string> TaskLibraryNames();
// Throws ValidationError for a name outside the library.
TaskType library_task(std::string_view name, double lambda,
                      const LabelMapping& labels = LabelMapping::Default());

struct Instance {
  Roster roster;
  Task task;
  EvalConfig config;
  std::string label;
  std::uint64_t seed = 0;
};

// Instance for one grid cell; the roster seed is derived from the cell
// coordinates so it does not depend on the rest of the grid.
Instance MakeInstance(int n, int m, double lambda, std::string_view task, int repeat,
                      std::uint64_t base_seed, const EvalConfig& config = {});

inline constexpr std::string_view kExact = "exact";
inline constexpr std::string_view kSynTeam = "synteam";
inline constexpr std::string_view kAnnealing = "sa";

struct ExperimentResult {
  std::string label;
  std::string algorithm;
  int n = 0;
  int m = 0;
  double lambda = 0.0;
  std::string task;
  std::uint64_t seed = 0;
  double gen_time_s = 0.0;
  double solve_time_s = 0.0;
  double best_S = 0.0;
  std::optional<double> ratio;  // best_S / exact optimum, when known
  AnytimeTrace trace;
  bool optimal = false;
  std::string error;  // non-empty when the cell failed

  double total_time_s() const { return gen_time_s + solve_time_s; }
};

struct Grid {
  std::vector<int> n_values;
  std::vector<int> m_values;
  std::vector<double> lambdas;
  std::vector<std::string> tasks;
  int repeats = 1;
  std::uint64_t seed = 0;
};

struct MatrixOptions {
  std::vector<std::string> algorithms{std::string(kExact), std::string(kSynTeam)};
  unsigned workers = 1;
  EvalConfig config;
  ExactOptions exact;
  // SA budget when SynTeam is not part of the run; otherwise SA gets the
  // time SynTeam used on the same instance.
  double sa_budget_s = 1.0;
  // Non-zero: SA runs this many steps instead of a wall-clock budget.
  std::uint64_t sa_max_steps = 0;
};

// Runs every (cell, algorithm) pair. The exact solver is skipped where its
// team-count guard rejects the instance. Failures are recorded per result.
// Output is sorted by (label, algorithm).
std::vector<ExperimentResult> run_matrix(const Grid& grid, const MatrixOptions& options);

struct RatioSummary {
  std::string algorithm;
  int n = 0;  // 0 when aggregated over n
  int m = 0;
  double lambda = 0.0;
  std::string task;  // empty when aggregated over tasks
  std::size_t count = 0;
  double min = 0.0;
  double median = 0.0;
  double mean = 0.0;
};

struct SummaryKey {
  bool by_n = false;
  bool by_task = true;
};

// Ratio statistics per (algorithm, m, lambda, task). Throws Error when a
// heuristic result has no exact baseline.
std::vector<RatioSummary> quality_ratio_summary(
    const std::vector<ExperimentResult>& results, SummaryKey key = {});

// Median of a non-empty sample.
double Median(std::vector<double> values);

// #schema=1 then label,algorithm,n,m,lambda,task,seed,gen_time_s,
// solve_time_s,best_S,ratio. Missing values are empty fields.
void write_results_csv(std::ostream& out, const std::vector<ExperimentResult>& results);
std::vector<ExperimentResult> read_results_csv(std::istream& in,
                                               std::string_view source = "<csv>");
void write_traces_csv(std::ostream& out, const std::vector<ExperimentResult>& results);
void write_ratio_summary_csv(std::ostream& out, const std::vector<RatioSummary>& rows);

// Writes results.csv, traces.csv, ratio_summary.csv (when exact baselines
// exist) and one fig_*.csv per figure into `dir`.
void write_bench_outputs(const std::filesystem::path& dir,
                         const std::vector<ExperimentResult>& results);

}  // namespace teamcomp

#endif  // TEAMCOMP_BENCH_HPP_
