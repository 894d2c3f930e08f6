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

#include "teamcomp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>
#include <tuple>

#include "teamcomp/annealing.hpp"
#include "teamcomp/errors.hpp"
#include "teamcomp/evaluation.hpp"
#include "teamcomp/rng.hpp"
#include "teamcomp/synteam.hpp"

namespace teamcomp {
namespace {

struct LabeledRequirement {
  const char* competence;
  const char* level;
  const char* importance;
};

struct LibraryEntry {
  const char* name;
  std::vector<LabeledRequirement> requirements;
};

const std::vector<LibraryEntry>& Library() {
  static const auto* const library = new std::vector<LibraryEntry>{
      {"body-rythm",
       {{"bodily_kinesthetic", "advanced", "very-important"},
        {"musical", "intermediate", "fairly-important"},
        {"linguistic", "intermediate", "slightly-important"},
        {"interpersonal", "advanced", "very-important"},
        {"visual_spatial", "novice", "slightly-important"}}},
      {"entrepreneur",
       {{"linguistic", "advanced", "fairly-important"},
        {"logic_mathematics", "intermediate", "very-important"},
        {"visual_spatial", "novice", "slightly-important"},
        {"musical", "novice", "slightly-important"},
        {"interpersonal", "advanced", "very-important"},
        {"intrapersonal", "intermediate", "important"}}},
      {"arts-design",
       {{"linguistic", "novice", "slightly-important"},
        {"visual_spatial", "advanced", "very-important"},
        {"intrapersonal", "intermediate", "fairly-important"}}},
      {"english",
       {{"linguistic", "intermediate", "very-important"},
        {"intrapersonal", "novice", "important"},
        {"interpersonal", "advanced", "very-important"}}},
  };
  return *library;
}

TaskType BuildTask(const LibraryEntry& entry, double lambda, const LabelMapping& labels) {
  std::vector<Requirement> requirements;
  for (const LabeledRequirement& r : entry.requirements) {
    requirements.push_back(
        {r.competence, *labels.Level(r.level), *labels.Importance(r.importance)});
  }
  return TaskType(entry.name, lambda, std::move(requirements));
}

std::uint64_t HashName(std::string_view name) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

std::string CellLabel(std::string_view task, int n, int m, double lambda, int repeat) {
  char repeat_text[16];
  std::snprintf(repeat_text, sizeof(repeat_text), "%02d", repeat);
  return std::string(task) + "_n" + std::to_string(n) + "_m" + std::to_string(m) + "_l" +
         FormatDouble(lambda) + "_r" + repeat_text;
}

struct Cell {
  int n;
  int m;
  double lambda;
  std::string task;
  int repeat;
};

ExperimentResult BaseResult(const Instance& instance, const Cell& cell,
                            std::string_view algorithm) {
  ExperimentResult r;
  r.label = instance.label;
  r.algorithm = std::string(algorithm);
  r.n = cell.n;
  r.m = cell.m;
  r.lambda = cell.lambda;
  r.task = cell.task;
  r.seed = instance.seed;
  return r;
}

bool Wants(const MatrixOptions& options, std::string_view algorithm) {
  return std::find(options.algorithms.begin(), options.algorithms.end(), algorithm) !=
         options.algorithms.end();
}

std::vector<ExperimentResult> RunCell(const Cell& cell, const Grid& grid,
                                      const MatrixOptions& options) {
  std::vector<ExperimentResult> out;
  Instance instance;
  try {
    instance = MakeInstance(cell.n, cell.m, cell.lambda, cell.task, cell.repeat,
                            grid.seed, options.config);
  } catch (const std::exception& e) {
    ExperimentResult r;
    r.label = CellLabel(cell.task, cell.n, cell.m, cell.lambda, cell.repeat);
    r.algorithm = "instance";
    r.n = cell.n;
    r.m = cell.m;
    r.lambda = cell.lambda;
    r.task = cell.task;
    r.error = e.what();
    out.push_back(std::move(r));
    return out;
  }
  const TeamEvaluator evaluator(instance.roster, instance.task, instance.config);

  std::optional<double> optimum;
  if (Wants(options, kExact)) {
    const SizeDistribution distribution = quantity_distribution(cell.n, cell.m);
    if (count_feasible_teams(cell.n, distribution) <= options.exact.team_cap) {
      ExperimentResult r = BaseResult(instance, cell, kExact);
      try {
        ExactOptions exact = options.exact;
        exact.workers = 1;
        const SolverResult solved =
            solve_exact(instance.roster, instance.task, instance.config, exact);
        r.gen_time_s = solved.gen_time_s;
        r.solve_time_s = solved.solve_time_s;
        r.best_S = solved.score.value;
        r.trace = solved.trace;
        r.optimal = solved.optimal;
        if (solved.optimal) {
          optimum = solved.score.value;
          r.ratio = 1.0;
        }
      } catch (const std::exception& e) {
        r.error = e.what();
      }
      out.push_back(std::move(r));
    }
  }

  auto set_ratio = [&](ExperimentResult& r) {
    if (optimum && *optimum > 0.0) r.ratio = r.best_S / *optimum;
  };

  std::optional<double> synteam_time;
  if (Wants(options, kSynTeam)) {
    ExperimentResult r = BaseResult(instance, cell, kSynTeam);
    r.seed = Rng::Derive(instance.seed, 1);
    try {
      const SolverResult solved =
          run_synteam(evaluator, SynTeamParams::Defaults(cell.n, cell.m, r.seed));
      r.solve_time_s = solved.solve_time_s;
      r.best_S = solved.score.value;
      r.trace = solved.trace;
      synteam_time = solved.solve_time_s;
      set_ratio(r);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    out.push_back(std::move(r));
  }

  if (Wants(options, kAnnealing)) {
    ExperimentResult r = BaseResult(instance, cell, kAnnealing);
    r.seed = Rng::Derive(instance.seed, 2);
    try {
      SAParams params;
      params.seed = r.seed;
      params.t_max_s = synteam_time ? std::max(*synteam_time, 1e-6) : options.sa_budget_s;
      params.max_steps = options.sa_max_steps;
      // A separate evaluator so SA does not reuse SynTeam's cache warm-up.
      const TeamEvaluator own(instance.roster, instance.task, instance.config);
      const SolverResult solved = run_sa(own, params);
      r.solve_time_s = solved.solve_time_s;
      r.best_S = solved.score.value;
      r.trace = solved.trace;
      set_ratio(r);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string OptionalNumber(const std::optional<double>& value) {
  return value ? FormatDouble(*value) : std::string();
}

double ParseField(const std::string& text, const std::string& where) {
  if (text.empty()) return std::nan("");
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ValidationError(where + "\"" + text + "\" is not a number");
  }
  return value;
}

std::ofstream OpenOutput(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

}  // namespace

const std::vector<std::string>& GardnerCompetences() {
  static const auto* const names = new std::vector<std::string>{
      "linguistic", "logic_mathematics", "visual_spatial", "bodily_kinesthetic",
      "musical",    "intrapersonal",     "interpersonal"};
  return *names;
}

Roster synthetic_roster(int n, std::uint64_t seed, double woman_ratio) {
  if (n < 2) throw ValidationError("synthetic roster needs n >= 2");
  if (!(woman_ratio >= 0.0 && woman_ratio <= 1.0)) {
    throw ValidationError("gender ratio outside [0, 1]");
  }
  Rng rng(seed);
  std::vector<Student> students;
  students.reserve(n);
  for (int i = 0; i < n; ++i) {
    char id[16];
    std::snprintf(id, sizeof(id), "s%03d", i);
    Student s;
    s.id = id;
    s.gender = rng.Bernoulli(woman_ratio) ? Gender::kWoman : Gender::kMan;
    s.profile.sn = rng.Uniform(-1.0, 1.0);
    s.profile.tf = rng.Uniform(-1.0, 1.0);
    s.profile.ei = rng.Uniform(-1.0, 1.0);
    s.profile.pj = rng.Uniform(-1.0, 1.0);
    for (const std::string& c : GardnerCompetences()) s.levels[c] = rng.Uniform01();
    students.push_back(std::move(s));
  }
  return Roster(std::move(students));
}

std::vector<TaskType> load_task_library(double lambda, const LabelMapping& labels) {
  std::vector<TaskType> tasks;
  for (const LibraryEntry& entry : Library())
    tasks.push_back(BuildTask(entry, lambda, labels));
  return tasks;
}

std::vector<std::string> TaskLibraryNames() {
  std::vector<std::string> names;
  for (const LibraryEntry& entry : Library()) names.emplace_back(entry.name);
  return names;
}

TaskType library_task(std::string_view name, double lambda, const LabelMapping& labels) {
  const std::string key = NormalizeLabel(name);
  for (const LibraryEntry& entry : Library()) {
    if (key == entry.name) return BuildTask(entry, lambda, labels);
  }
  throw ValidationError("unknown task type \"" + std::string(name) + "\"");
}

Instance MakeInstance(int n, int m, double lambda, std::string_view task, int repeat,
                      std::uint64_t base_seed, const EvalConfig& config) {
  Instance instance;
  std::uint64_t seed = Rng::Derive(base_seed, static_cast<std::uint64_t>(n));
  seed = Rng::Derive(seed, static_cast<std::uint64_t>(m));
  seed = Rng::Derive(seed, std::bit_cast<std::uint64_t>(lambda));
  seed = Rng::Derive(seed, HashName(NormalizeLabel(task)));
  seed = Rng::Derive(seed, static_cast<std::uint64_t>(repeat));
  instance.seed = seed;
  instance.roster = synthetic_roster(n, seed);
  instance.task = Task::Create(library_task(task, lambda), m);
  instance.config = config;
  instance.label = CellLabel(instance.task.type.name(), n, m, lambda, repeat);
  // Fails early on n/m pairs with no valid size distribution.
  quantity_distribution(n, m);
  return instance;
}

std::vector<ExperimentResult> run_matrix(const Grid& grid, const MatrixOptions& options) {
  for (const std::string& a : options.algorithms) {
    if (a != kExact && a != kSynTeam && a != kAnnealing) {
      throw ValidationError("unknown algorithm \"" + a + "\"");
    }
  }
  std::vector<Cell> cells;
  for (const std::string& task : grid.tasks) {
    for (double lambda : grid.lambdas) {
      for (int m : grid.m_values) {
        for (int n : grid.n_values) {
          for (int r = 0; r < grid.repeats; ++r) cells.push_back({n, m, lambda, task, r});
        }
      }
    }
  }

  std::vector<ExperimentResult> results;
  std::mutex mutex;
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      std::vector<ExperimentResult> part = RunCell(cells[i], grid, options);
      const std::lock_guard<std::mutex> lock(mutex);
      for (ExperimentResult& r : part) results.push_back(std::move(r));
    }
  };
  const unsigned workers = std::max(
      1u, std::min<unsigned>(options.workers == 0 ? std::thread::hardware_concurrency()
                                                  : options.workers,
                             static_cast<unsigned>(cells.size())));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(work);
    for (std::thread& t : threads) t.join();
  }
  std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) {
    return std::tie(a.label, a.algorithm) < std::tie(b.label, b.algorithm);
  });
  return results;
}

double Median(std::vector<double> values) {
  if (values.empty()) throw Error("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

std::vector<RatioSummary> quality_ratio_summary(
    const std::vector<ExperimentResult>& results, SummaryKey key) {
  using Key = std::tuple<std::string, int, int, double, std::string>;
  std::map<Key, std::vector<double>> groups;
  for (const ExperimentResult& r : results) {
    if (r.algorithm == kExact || !r.error.empty()) continue;
    if (!r.ratio) {
      throw Error("missing exact baseline for " + r.label + " (" + r.algorithm + ")");
    }
    groups[{r.algorithm, key.by_n ? r.n : 0, r.m, r.lambda,
            key.by_task ? r.task : std::string()}]
        .push_back(*r.ratio);
  }
  std::vector<RatioSummary> rows;
  for (const auto& [k, ratios] : groups) {
    RatioSummary row;
    std::tie(row.algorithm, row.n, row.m, row.lambda, row.task) = k;
    row.count = ratios.size();
    row.min = *std::min_element(ratios.begin(), ratios.end());
    row.median = Median(ratios);
    row.mean = std::accumulate(ratios.begin(), ratios.end(), 0.0) /
               static_cast<double>(ratios.size());
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_results_csv(std::ostream& out, const std::vector<ExperimentResult>& results) {
  out << "#schema=" << kSchemaVersion << "\n";
  out << "label,algorithm,n,m,lambda,task,seed,gen_time_s,solve_time_s,best_S,ratio\n";
  for (const ExperimentResult& r : results) {
    out << r.label << ',' << r.algorithm << ',' << r.n << ',' << r.m << ','
        << FormatDouble(r.lambda) << ',' << r.task << ',' << r.seed << ','
        << FormatDouble(r.gen_time_s) << ',' << FormatDouble(r.solve_time_s) << ','
        << (r.error.empty() ? FormatDouble(r.best_S) : std::string()) << ','
        << OptionalNumber(r.ratio) << "\n";
  }
}

std::vector<ExperimentResult> read_results_csv(std::istream& in,
                                               std::string_view source) {
  static const std::vector<std::string> kHeader = {
      "label",      "algorithm",    "n",      "m",    "lambda", "task", "seed",
      "gen_time_s", "solve_time_s", "best_S", "ratio"};
  std::vector<ExperimentResult> results;
  bool have_header = false;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where =
        std::string(source) + ":" + std::to_string(line_number) + ": ";
    if (line.front() == '#') {
      if (line.rfind("#schema=", 0) == 0 && line != "#schema=1") {
        throw ValidationError(where + "unsupported schema");
      }
      continue;
    }
    const std::vector<std::string> f = SplitCsvLine(line);
    if (!have_header) {
      if (f != kHeader) throw ValidationError(where + "unexpected header");
      have_header = true;
      continue;
    }
    if (f.size() != kHeader.size()) {
      throw ValidationError(where + "expected 11 fields, found " +
                            std::to_string(f.size()));
    }
    ExperimentResult r;
    r.label = f[0];
    r.algorithm = f[1];
    r.n = static_cast<int>(ParseField(f[2], where));
    r.m = static_cast<int>(ParseField(f[3], where));
    r.lambda = ParseField(f[4], where);
    r.task = f[5];
    auto [ptr, ec] = std::from_chars(f[6].data(), f[6].data() + f[6].size(), r.seed);
    if (ec != std::errc() || ptr != f[6].data() + f[6].size()) {
      throw ValidationError(where + "bad seed \"" + f[6] + "\"");
    }
    r.gen_time_s = ParseField(f[7], where);
    r.solve_time_s = ParseField(f[8], where);
    if (f[9].empty()) {
      r.error = "failed";
    } else {
      r.best_S = ParseField(f[9], where);
    }
    if (!f[10].empty()) r.ratio = ParseField(f[10], where);
    results.push_back(std::move(r));
  }
  if (!have_header) throw ValidationError(std::string(source) + ": missing header row");
  return results;
}

void write_traces_csv(std::ostream& out, const std::vector<ExperimentResult>& results) {
  out << "#schema=" << kSchemaVersion << "\n";
  out << "label,algorithm,seed,elapsed_s,best_S\n";
  for (const ExperimentResult& r : results) {
    write_trace_csv(out, r.trace, r.label, r.algorithm, r.seed, /*header=*/false);
  }
}

void write_ratio_summary_csv(std::ostream& out, const std::vector<RatioSummary>& rows) {
  out << "#schema=" << kSchemaVersion << "\n";
  out << "algorithm,n,m,lambda,task,count,min,median,mean\n";
  for (const RatioSummary& r : rows) {
    out << r.algorithm << ',' << r.n << ',' << r.m << ',' << FormatDouble(r.lambda) << ','
        << r.task << ',' << r.count << ',' << FormatDouble(r.min) << ','
        << FormatDouble(r.median) << ',' << FormatDouble(r.mean) << "\n";
  }
}

void write_bench_outputs(const std::filesystem::path& dir,
                         const std::vector<ExperimentResult>& results) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out = OpenOutput(dir / "results.csv");
    write_results_csv(out, results);
  }
  {
    std::ofstream out = OpenOutput(dir / "traces.csv");
    write_traces_csv(out, results);
  }

  // Exact optimum per instance label.
  std::map<std::string, double> optimum;
  for (const ExperimentResult& r : results) {
    if (r.algorithm == kExact && r.optimal && r.error.empty())
      optimum[r.label] = r.best_S;
  }
  const bool have_baselines =
      std::all_of(results.begin(), results.end(), [&](const ExperimentResult& r) {
        return r.algorithm == kExact || !r.error.empty() || r.ratio.has_value();
      });
  if (!optimum.empty() && have_baselines) {
    std::ofstream out = OpenOutput(dir / "ratio_summary.csv");
    write_ratio_summary_csv(out, quality_ratio_summary(results));
  }

  // Figures 1 and 2: mean wall time vs n per (task, lambda, m, algorithm).
  // Total time adds model generation for the exact solver.
  using TimeKey = std::tuple<std::string, double, int, int, std::string>;
  std::map<TimeKey, std::vector<const ExperimentResult*>> by_cell;
  for (const ExperimentResult& r : results) {
    if (!r.error.empty() || r.algorithm == kAnnealing) continue;
    by_cell[{r.task, r.lambda, r.m, r.n, r.algorithm}].push_back(&r);
  }
  {
    std::ofstream total = OpenOutput(dir / "fig_total_time.csv");
    std::ofstream solve = OpenOutput(dir / "fig_solve_time.csv");
    for (std::ofstream* out : {&total, &solve}) {
      *out << "#schema=" << kSchemaVersion << "\n";
      *out << "task,lambda,m,n,algorithm,count,mean_time_s,median_time_s\n";
    }
    for (const auto& [k, rows] : by_cell) {
      std::vector<double> totals;
      std::vector<double> solves;
      for (const ExperimentResult* r : rows) {
        totals.push_back(r->total_time_s());
        solves.push_back(r->solve_time_s);
      }
      const auto& [task, lambda, m, n, algorithm] = k;
      auto emit = [&, &task = task, &lambda = lambda, &m = m, &n = n,
                   &algorithm = algorithm](std::ofstream& out,
                                           const std::vector<double>& v) {
        out << task << ',' << FormatDouble(lambda) << ',' << m << ',' << n << ','
            << algorithm << ',' << v.size() << ','
            << FormatDouble(std::accumulate(v.begin(), v.end(), 0.0) /
                            static_cast<double>(v.size()))
            << ',' << FormatDouble(Median(v)) << "\n";
      };
      emit(total, totals);
      emit(solve, solves);
    }
  }

  // Figure 3: SynTeam ratio vs n per m.
  {
    std::ofstream out = OpenOutput(dir / "fig_quality_ratio.csv");
    out << "#schema=" << kSchemaVersion << "\n";
    out << "task,lambda,m,n,count,min_ratio,median_ratio,mean_ratio\n";
    std::map<TimeKey, std::vector<double>> ratios;
    for (const ExperimentResult& r : results) {
      if (r.algorithm == kSynTeam && r.ratio) {
        ratios[{r.task, r.lambda, r.m, r.n, r.algorithm}].push_back(*r.ratio);
      }
    }
    for (const auto& [k, v] : ratios) {
      const auto& [task, lambda, m, n, algorithm] = k;
      out << task << ',' << FormatDouble(lambda) << ',' << m << ',' << n << ','
          << v.size() << ',' << FormatDouble(*std::min_element(v.begin(), v.end())) << ','
          << FormatDouble(Median(v)) << ','
          << FormatDouble(std::accumulate(v.begin(), v.end(), 0.0) /
                          static_cast<double>(v.size()))
          << "\n";
    }
  }

  // Figure 4: incumbent ratio vs time. Exact timestamps exclude the model
  // generation time.
  {
    std::ofstream out = OpenOutput(dir / "fig_anytime.csv");
    out << "#schema=" << kSchemaVersion << "\n";
    out << "label,task,lambda,m,n,algorithm,elapsed_s,ratio\n";
    for (const ExperimentResult& r : results) {
      const auto it = optimum.find(r.label);
      if (it == optimum.end() || !(it->second > 0.0) || !r.error.empty()) continue;
      const double shift = r.algorithm == kExact ? r.gen_time_s : 0.0;
      for (const TracePoint& p : r.trace) {
        out << r.label << ',' << r.task << ',' << FormatDouble(r.lambda) << ',' << r.m
            << ',' << r.n << ',' << r.algorithm << ','
            << FormatDouble(std::max(0.0, p.elapsed_s - shift)) << ','
            << FormatDouble(p.best_S / it->second) << "\n";
      }
    }
  }

  // Figure 5: SynTeam improvement over SA on the same instance, percent.
  {
    std::ofstream out = OpenOutput(dir / "fig_sa_comparison.csv");
    out << "#schema=" << kSchemaVersion << "\n";
    out << "label,task,lambda,m,n,synteam_S,sa_S,improvement_pct\n";
    std::map<std::string, const ExperimentResult*> synteam;
    for (const ExperimentResult& r : results) {
      if (r.algorithm == kSynTeam && r.error.empty()) synteam[r.label] = &r;
    }
    for (const ExperimentResult& r : results) {
      if (r.algorithm != kAnnealing || !r.error.empty()) continue;
      const auto it = synteam.find(r.label);
      if (it == synteam.end()) continue;
      const double syn = it->second->best_S;
      out << r.label << ',' << r.task << ',' << FormatDouble(r.lambda) << ',' << r.m
          << ',' << r.n << ',' << FormatDouble(syn) << ',' << FormatDouble(r.best_S)
          << ','
          << (r.best_S > 0.0 ? FormatDouble(100.0 * (syn - r.best_S) / r.best_S)
                             : std::string())
          << "\n";
    }
  }
}

}  // namespace teamcomp
