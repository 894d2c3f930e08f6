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

#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "teamcomp/annealing.hpp"
#include "teamcomp/bench.hpp"
#include "teamcomp/competence.hpp"
#include "teamcomp/errors.hpp"
#include "teamcomp/evaluation.hpp"
#include "teamcomp/exact_solver.hpp"
#include "teamcomp/io.hpp"
#include "teamcomp/synteam.hpp"

namespace teamcomp {
namespace {

namespace fs = std::filesystem;
using OrderedJson = nlohmann::ordered_json;

constexpr double kEvalTolerance = 1e-9;

struct InstanceFlags {
  std::string roster;
  std::string task;
  std::optional<int> m;
  std::optional<double> lambda;
  std::optional<double> upsilon;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> gamma;

  void Register(CLI::App* app) {
    app->add_option("--roster", roster, "Roster file (.csv or .json)")->required();
    app->add_option("--task", task, "Task file (.json)")->required();
    app->add_option("--m", m, "Override the task's team size");
    app->add_option("--lambda", lambda, "Override the task's proficiency weight");
    app->add_option("--upsilon", upsilon, "Under/over-proficiency blend (default 0.5)");
    app->add_option("--alpha", alpha, "ETJ utility weight (default 0.11)");
    app->add_option("--beta", beta, "Introvert utility weight (default 0.33)");
    app->add_option("--gamma", gamma, "Gender balance weight (default 0.33)");
  }

  EvalConfig Config(EvalConfig base = {}) const {
    if (upsilon) base.upsilon = *upsilon;
    if (alpha) base.alpha = *alpha;
    if (beta) base.beta = *beta;
    if (gamma) base.gamma = *gamma;
    base.Validate();
    return base;
  }

  Roster LoadRoster() const { return parse_roster(roster); }
  Task LoadTask() const { return parse_task(task, TaskOverrides{lambda, m}); }
};

struct OutputFlags {
  std::string out;
  std::string trace;

  void Register(CLI::App* app) {
    app->add_option("--out", out, "Partition JSON path (default: stdout)");
    app->add_option("--trace", trace,
                    "Trace CSV path (default: next to --out as <name>.trace.csv)");
  }
};

void WriteText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot write " + path.string());
  file << text;
  if (!file) throw Error("cannot write " + path.string());
}

void EmitSolution(const OutputFlags& flags, const Roster& roster, const Task& task,
                  const EvalConfig& config, const SolverResult& result,
                  std::string_view algorithm, std::optional<std::uint64_t> seed,
                  std::ostream& out) {
  const std::string json =
      partition_to_json(roster, task, config, result, algorithm, seed);
  if (flags.out.empty()) {
    out << json;
  } else {
    WriteText(flags.out, json);
  }
  fs::path trace_path = flags.trace;
  if (trace_path.empty() && !flags.out.empty()) {
    trace_path = fs::path(flags.out).replace_extension(".trace.csv");
  }
  if (!trace_path.empty()) {
    std::ostringstream csv;
    write_trace_csv(csv, result.trace, task.type.name(), algorithm, seed.value_or(0));
    WriteText(trace_path, csv.str());
  }
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> items;
  for (std::string& item : SplitCsvLine(text)) {
    if (!item.empty()) items.push_back(std::move(item));
  }
  return items;
}

template <typename T>
std::vector<T> ParseList(const std::string& text, const char* flag) {
  std::vector<T> values;
  for (const std::string& item : SplitList(text)) {
    std::istringstream in(item);
    T value{};
    if (!(in >> value) || !in.eof()) {
      throw ValidationError(std::string(flag) + ": \"" + item + "\" is not a number");
    }
    values.push_back(value);
  }
  return values;
}

Team ResolveMembers(const std::vector<std::string>& ids, const Roster& roster) {
  std::vector<StudentIndex> members;
  for (const std::string& id : ids) {
    const std::optional<StudentIndex> index = roster.IndexOf(id);
    if (!index) throw ValidationError("unknown student \"" + id + "\"");
    members.push_back(*index);
  }
  Team team = MakeTeam(std::move(members));
  if (std::adjacent_find(team.begin(), team.end()) != team.end()) {
    throw ValidationError("a student is listed twice");
  }
  return team;
}

OrderedJson AssignmentJson(const CompetenceAssignment& assignment) {
  OrderedJson json = OrderedJson::object();
  for (const auto& [member, competences] : assignment.mapping) json[member] = competences;
  return json;
}

// Is `assignment` balanced for this team and task type: one assignee per
// competence, per-member caps, and no idle member when |C| >= |K|.
bool IsBalancedAssignment(const Roster& roster, const Team& team, const TaskType& type,
                          const CompetenceAssignment& assignment) {
  const int members = static_cast<int>(team.size());
  const int competences = static_cast<int>(type.requirements().size());
  std::vector<int> owner(competences, -1);
  for (const auto& [id, list] : assignment.mapping) {
    const auto pos = std::find_if(team.begin(), team.end(),
                                  [&](StudentIndex i) { return roster[i].id == id; });
    if (pos == team.end()) return false;
    for (const std::string& c : list) {
      const auto req =
          std::find_if(type.requirements().begin(), type.requirements().end(),
                       [&](const Requirement& r) { return r.competence == c; });
      if (req == type.requirements().end()) return false;
      const auto k = req - type.requirements().begin();
      if (owner[k] != -1) return false;
      owner[k] = static_cast<int>(pos - team.begin());
    }
  }
  if (std::find(owner.begin(), owner.end(), -1) != owner.end()) return false;
  return IsBalanced(owner, members);
}

int RunSolve(const InstanceFlags& instance, const OutputFlags& output,
             std::optional<double> time_budget, const std::string& dump_model,
             std::uint64_t team_cap, unsigned workers, std::ostream& out) {
  const Roster roster = instance.LoadRoster();
  const Task task = instance.LoadTask();
  const EvalConfig config = instance.Config();
  ExactOptions options;
  options.time_budget_s = time_budget;
  options.team_cap = team_cap;
  options.workers = workers;

  Stopwatch gen_clock;
  const MasterProblem problem =
      build_master_problem(roster, task, config, options.team_cap, options.workers);
  const double gen_time = gen_clock.Seconds();
  if (!dump_model.empty()) {
    std::ostringstream model;
    write_master_problem(model, problem, roster);
    WriteText(dump_model, model.str());
  }
  if (options.time_budget_s) {
    options.time_budget_s = std::max(0.0, *options.time_budget_s - gen_time);
  }
  SolverResult result = solve_master_problem(problem, options, gen_time);
  result.gen_time_s = gen_time;
  EmitSolution(output, roster, task, config, result, kExact, std::nullopt, out);
  return kExitOk;
}

int RunEval(const InstanceFlags& instance, const std::string& partition_path,
            std::ostream& out, std::ostream& err) {
  const Roster roster = instance.LoadRoster();
  const Task task = instance.LoadTask();
  const PartitionFile file =
      parse_partition_json(ReadFile(partition_path), partition_path);
  const EvalConfig config = instance.Config(file.config);
  const Partition partition = ToPartition(file, roster);
  validate_partition(partition, roster.size(), task.m);

  const TeamEvaluator evaluator(roster, task, config);
  std::vector<double> values;
  OrderedJson teams = OrderedJson::array();
  bool assignments_ok = true;
  for (std::size_t t = 0; t < partition.teams.size(); ++t) {
    const Team& team = partition.teams[t];
    const SynergyRecord record = evaluator.Record(team);
    values.push_back(record.s);
    const PartitionFileTeam& recorded = file.teams[t];
    OrderedJson item;
    item["members"] = recorded.members;
    item["s"] = record.s;
    item["s_recorded"] = recorded.s;
    item["u_prof"] = record.u_prof;
    item["u_prof_recorded"] = recorded.u_prof;

    bool matches = false;
    if (IsBalancedAssignment(roster, team, task.type, recorded.assignment)) {
      const double under =
          under_proficiency(roster, team, task.type, recorded.assignment);
      const double over = over_proficiency(roster, team, task.type, recorded.assignment);
      const double u_prof =
          1.0 - (config.upsilon * under + (1.0 - config.upsilon) * over);
      item["u_prof_of_recorded_assignment"] = u_prof;
      matches = std::abs(u_prof - record.u_prof) <= kEvalTolerance;
    }
    item["assignment_matches"] = matches;
    if (!matches) {
      assignments_ok = false;
      item["assignment"] = AssignmentJson(record.assignment);
    }
    teams.push_back(std::move(item));
  }
  const PartitionScore score = ScoreFromTeamValues(values, config.epsilon_floor);
  const double diff = std::abs(score.value - file.S);
  const bool consistent = diff <= kEvalTolerance * std::max(1.0, std::abs(score.value));

  OrderedJson report;
  report["schema"] = kSchemaVersion;
  report["S"] = score.value;
  report["log_S"] = score.log_value;
  report["S_recorded"] = file.S;
  report["abs_diff"] = diff;
  report["consistent"] = consistent;
  report["assignments_match"] = assignments_ok;
  report["teams"] = std::move(teams);
  out << report.dump(2) << "\n";
  if (!assignments_ok) err << "warning: recorded assignments differ from the optimum\n";
  if (!consistent) {
    err << "error: recorded S " << FormatDouble(file.S) << " does not match re-scored "
        << FormatDouble(score.value) << "\n";
    return kExitInput;
  }
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Team composition: exact, local-search and annealing solvers", "teamcomp"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  // solve
  InstanceFlags solve_instance;
  OutputFlags solve_output;
  std::optional<double> time_budget;
  std::string dump_model;
  std::uint64_t team_cap = kDefaultTeamCap;
  unsigned workers = 1;
  CLI::App* solve = app.add_subcommand("solve", "Optimal partition by branch and bound");
  solve_instance.Register(solve);
  solve_output.Register(solve);
  solve
      ->add_option("--time-budget", time_budget,
                   "Wall-clock limit in seconds; returns the best incumbent")
      ->check(CLI::PositiveNumber);
  solve->add_option("--dump-model", dump_model, "Write the set-partitioning model here");
  solve->add_option("--team-cap", team_cap, "Refuse instances with more feasible teams");
  solve->add_option("--workers", workers, "Threads for team scoring (0 = all cores)");

  // heuristic
  InstanceFlags heuristic_instance;
  OutputFlags heuristic_output;
  std::uint64_t heuristic_seed = 0;
  std::optional<int> n_r;
  std::optional<int> n_l;
  CLI::App* heuristic = app.add_subcommand("heuristic", "SynTeam local search");
  heuristic_instance.Register(heuristic);
  heuristic_output.Register(heuristic);
  heuristic->add_option("--seed", heuristic_seed, "Random seed");
  heuristic->add_option("--nr", n_r,
                        "Consecutive non-improving iterations before stopping");
  heuristic->add_option("--nl", n_l, "Non-improving iterations before a swap scan");

  // anneal
  InstanceFlags anneal_instance;
  OutputFlags anneal_output;
  SAParams sa;
  CLI::App* anneal = app.add_subcommand("anneal", "Simulated-annealing baseline");
  anneal_instance.Register(anneal);
  anneal_output.Register(anneal);
  anneal->add_option("--seed", sa.seed, "Random seed");
  anneal->add_option("--budget-s", sa.t_max_s, "Time budget t_max in seconds")
      ->capture_default_str();
  anneal->add_option("--max-steps", sa.max_steps,
                     "Run this many steps on a step clock instead (reproducible)");
  anneal->add_option("--delta", sa.delta_ref, "Reference relative worsening")
      ->capture_default_str();
  anneal->add_option("--p-start", sa.p_start, "Acceptance probability of delta at start")
      ->capture_default_str();
  anneal->add_option("--p-end", sa.p_end, "Acceptance probability of delta at t_max")
      ->capture_default_str();

  // assign
  InstanceFlags assign_instance;
  std::string members;
  CLI::App* assign = app.add_subcommand("assign", "Competence assignment for one team");
  assign_instance.Register(assign);
  assign->add_option("--team", members, "Comma-separated student ids")->required();

  // eval
  InstanceFlags eval_instance;
  std::string partition_path;
  CLI::App* eval = app.add_subcommand("eval", "Re-score a partition file");
  eval_instance.Register(eval);
  eval->add_option("--partition", partition_path, "Partition JSON")->required();

  // bench
  std::string n_list = "8,12,16";
  std::string m_list = "2,3";
  std::string lambda_list = "0.2,0.8";
  std::string task_list = "body-rythm,entrepreneur,arts-design,english";
  std::string algorithms = "exact,synteam,sa";
  std::string out_dir = "bench_out";
  Grid grid;
  grid.repeats = 20;
  MatrixOptions matrix;
  std::optional<double> bench_budget;
  CLI::App* bench = app.add_subcommand("bench", "Run an experiment grid");
  bench->add_option("--n-list", n_list, "Roster sizes")->capture_default_str();
  bench->add_option("--m-list", m_list, "Team sizes")->capture_default_str();
  bench->add_option("--lambda-list", lambda_list, "Proficiency weights")
      ->capture_default_str();
  bench->add_option("--tasks", task_list, "Task types from the built-in library")
      ->capture_default_str();
  bench->add_option("--repeats", grid.repeats, "Instances per cell")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  bench->add_option("--seed", grid.seed, "Base seed")->capture_default_str();
  bench->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
  bench->add_option("--algorithms", algorithms, "Any of exact,synteam,sa")
      ->capture_default_str();
  bench->add_option("--workers", matrix.workers, "Parallel cells (0 = all cores)")
      ->capture_default_str();
  bench->add_option("--time-budget", bench_budget, "Exact solver limit per instance");
  bench->add_option("--sa-steps", matrix.sa_max_steps,
                    "SA step budget instead of SynTeam's wall time");

  // gen-roster
  int gen_n = 24;
  std::uint64_t gen_seed = 0;
  double woman_ratio = 0.5;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("gen-roster", "Synthetic roster");
  gen->add_option("--n", gen_n, "Number of students")
      ->capture_default_str()
      ->check(CLI::Range(2, 100000));
  gen->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
  gen->add_option("--woman-ratio", woman_ratio, "Probability of a woman")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--out", gen_out, "Output (.csv or .json; default CSV on stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* failed = &app;
    for (const CLI::App* sub : app.get_subcommands()) failed = sub;
    err << failed->help();
    return kExitUsage;
  }

  try {
    if (solve->parsed()) {
      return RunSolve(solve_instance, solve_output, time_budget, dump_model, team_cap,
                      workers, out);
    }
    if (heuristic->parsed()) {
      const Roster roster = heuristic_instance.LoadRoster();
      const Task task = heuristic_instance.LoadTask();
      const EvalConfig config = heuristic_instance.Config();
      SynTeamParams params = SynTeamParams::Defaults(static_cast<int>(roster.size()),
                                                     task.m, heuristic_seed);
      if (n_r) params.n_r = *n_r;
      if (n_l) params.n_l = *n_l;
      const SolverResult result = run_synteam(roster, task, config, params);
      EmitSolution(heuristic_output, roster, task, config, result, kSynTeam,
                   heuristic_seed, out);
      return kExitOk;
    }
    if (anneal->parsed()) {
      const Roster roster = anneal_instance.LoadRoster();
      const Task task = anneal_instance.LoadTask();
      const EvalConfig config = anneal_instance.Config();
      const SolverResult result = run_sa(roster, task, config, sa);
      EmitSolution(anneal_output, roster, task, config, result, kAnnealing, sa.seed, out);
      return kExitOk;
    }
    if (assign->parsed()) {
      const Roster roster = assign_instance.LoadRoster();
      const Task task = assign_instance.LoadTask();
      const EvalConfig config = assign_instance.Config();
      const Team team = ResolveMembers(SplitList(members), roster);
      const ProficiencyResult r =
          solve_balanced_assignment(roster, team, task.type, config.upsilon);
      OrderedJson doc;
      doc["schema"] = kSchemaVersion;
      OrderedJson ids = OrderedJson::array();
      for (StudentIndex i : team) ids.push_back(roster[i].id);
      doc["team"] = std::move(ids);
      doc["u_prof"] = r.u_prof;
      doc["under"] = r.under;
      doc["over"] = r.over;
      doc["assignment"] = AssignmentJson(r.assignment);
      out << doc.dump(2) << "\n";
      return kExitOk;
    }
    if (eval->parsed()) return RunEval(eval_instance, partition_path, out, err);
    if (bench->parsed()) {
      grid.n_values = ParseList<int>(n_list, "--n-list");
      grid.m_values = ParseList<int>(m_list, "--m-list");
      grid.lambdas = ParseList<double>(lambda_list, "--lambda-list");
      grid.tasks = SplitList(task_list);
      for (const std::string& t : grid.tasks) library_task(t, 0.5);
      matrix.algorithms = SplitList(algorithms);
      matrix.exact.time_budget_s = bench_budget;
      const std::vector<ExperimentResult> results = run_matrix(grid, matrix);
      write_bench_outputs(out_dir, results);
      std::size_t failed = 0;
      for (const ExperimentResult& r : results) failed += r.error.empty() ? 0 : 1;
      out << results.size() << " results (" << failed << " failed) written to " << out_dir
          << "\n";
      for (const ExperimentResult& r : results) {
        if (!r.error.empty())
          err << r.label << " " << r.algorithm << ": " << r.error << "\n";
      }
      return kExitOk;
    }
    if (gen->parsed()) {
      const Roster roster = synthetic_roster(gen_n, gen_seed, woman_ratio);
      if (gen_out.empty()) {
        write_roster_csv(out, roster);
      } else if (fs::path(gen_out).extension() == ".json") {
        WriteText(gen_out, roster_to_json(roster));
      } else {
        std::ostringstream csv;
        write_roster_csv(csv, roster);
        WriteText(gen_out, csv.str());
      }
      return kExitOk;
    }
  } catch (const GuardExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitGuard;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace teamcomp
