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

#include "teamcomp/exact_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <thread>

#include "teamcomp/errors.hpp"

namespace teamcomp {
namespace {

__extension__ using u128 = unsigned __int128;
constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();
constexpr double kImproveTolerance = 1e-12;
constexpr int kPriceIterations = 300;

std::uint64_t Binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  u128 result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<u128>(n - k + i) / static_cast<u128>(i);
    if (result > kSaturated) return kSaturated;
  }
  return static_cast<std::uint64_t>(result);
}

unsigned ResolveWorkers(unsigned workers) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  return workers;
}

// Runs body(i) for i in [0, count) over contiguous chunks.
template <typename Body>
void ParallelFor(std::size_t count, unsigned workers, Body body) {
  workers = static_cast<unsigned>(
      std::min<std::size_t>(ResolveWorkers(workers), std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        const std::size_t end = std::min(count, (w + 1) * chunk);
        for (std::size_t i = w * chunk; i < end; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

class BranchAndBound {
 public:
  BranchAndBound(const MasterProblem& problem, const ExactOptions& options,
                 double offset_s)
      : problem_(problem),
        options_(options),
        offset_s_(offset_s),
        n_(problem.students),
        words_((n_ + 63) / 64),
        masks_(problem.teams.size() * words_, 0),
        used_(words_, 0),
        children_(n_),
        by_student_(n_) {
    for (const auto& e : problem.distribution.entries) {
      min_size_ = std::min(min_size_, e.size);
    }
    remaining_.assign(2, 0);
    for (const auto& e : problem.distribution.entries) {
      remaining_[e.size - min_size_] = e.count;
    }
    for (std::size_t t = 0; t < problem.teams.size(); ++t) {
      for (StudentIndex s : problem.teams[t]) {
        masks_[t * words_ + s / 64] |= std::uint64_t{1} << (s % 64);
      }
      children_[problem.teams[t].front()].push_back(static_cast<std::uint32_t>(t));
    }
    ComputePrices();
    for (auto& list : children_) {
      std::stable_sort(list.begin(), list.end(), [&](std::uint32_t a, std::uint32_t b) {
        return reduced_[a] > reduced_[b];
      });
    }
    for (int j = 0; j < n_; ++j) {
      by_student_[j] = problem.membership[j];
      std::stable_sort(by_student_[j].begin(), by_student_[j].end(),
                       [&](std::uint32_t a, std::uint32_t b) {
                         return PerStudent(a) > PerStudent(b);
                       });
    }
  }

  SolverResult Run() {
    Stopwatch clock;
    Visit(0, 0.0);
    SolverResult result;
    result.iterations = nodes_;
    result.solve_time_s = clock.Seconds();
    result.optimal = !timed_out_ && found_;
    result.trace = std::move(trace_);
    if (!found_) return result;
    std::vector<double> values;
    for (std::uint32_t t : best_) {
      result.partition.teams.push_back(problem_.teams[t]);
      values.push_back(problem_.s[t]);
    }
    result.score = ScoreFromTeamValues(values, problem_.epsilon_floor);
    return result;
  }

 private:
  double PerStudent(std::uint32_t t) const {
    return reduced_[t] / static_cast<double>(problem_.teams[t].size());
  }

  // Greedy feasible solution: repeatedly take the best placeable team.
  double GreedyValue() {
    std::vector<std::uint32_t> order(problem_.teams.size());
    std::iota(order.begin(), order.end(), 0U);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return problem_.log_s[a] > problem_.log_s[b];
    });
    double value = 0.0;
    std::vector<std::uint32_t> taken;
    for (std::uint32_t t : order) {
      if (!Placeable(t)) continue;
      Toggle(t);
      --remaining_[problem_.teams[t].size() - min_size_];
      taken.push_back(t);
      value += problem_.log_s[t];
    }
    for (std::uint32_t t : taken) {
      Toggle(t);
      ++remaining_[problem_.teams[t].size() - min_size_];
    }
    return value;
  }

  // Student prices pi and size prices mu for the bound
  //   sum_i pi_i + sum_y c_y mu_y + sum_i max_{T containing i} rc_T / |T|
  // with rc_T = w_T - pi(T) - mu_|T|, c_y the number of teams of size y
  // still to place. It holds for any prices; a subgradient descent at the
  // root tightens it toward the linear relaxation.
  void ComputePrices() {
    const std::size_t team_count = problem_.teams.size();
    prices_.assign(n_, 0.0);
    size_prices_.assign(remaining_.size(), 0.0);
    reduced_ = problem_.log_s;
    if (team_count == 0) return;
    const double target = GreedyValue();

    std::vector<double> best_prices = prices_;
    std::vector<double> best_size_prices = size_prices_;
    double best_bound = std::numeric_limits<double>::infinity();
    std::vector<double> share(n_);
    std::vector<std::uint32_t> argmax(n_);
    std::vector<double> gradient(n_);
    std::vector<double> size_gradient(remaining_.size());
    double theta = 1.0;
    int stall = 0;
    for (int iter = 0; iter < kPriceIterations; ++iter) {
      std::fill(share.begin(), share.end(), -std::numeric_limits<double>::infinity());
      for (std::size_t t = 0; t < team_count; ++t) {
        const Team& team = problem_.teams[t];
        double rc = problem_.log_s[t] - size_prices_[team.size() - min_size_];
        for (StudentIndex s : team) rc -= prices_[s];
        const double per = rc / static_cast<double>(team.size());
        for (StudentIndex s : team) {
          if (per > share[s]) {
            share[s] = per;
            argmax[s] = static_cast<std::uint32_t>(t);
          }
        }
      }
      double bound = 0.0;
      for (int i = 0; i < n_; ++i) bound += prices_[i] + share[i];
      for (std::size_t y = 0; y < remaining_.size(); ++y) {
        bound += remaining_[y] * size_prices_[y];
      }
      if (bound < best_bound - 1e-12) {
        best_bound = bound;
        best_prices = prices_;
        best_size_prices = size_prices_;
        stall = 0;
      } else if (++stall >= 10) {
        theta *= 0.5;
        stall = 0;
      }
      std::fill(gradient.begin(), gradient.end(), 1.0);
      for (std::size_t y = 0; y < remaining_.size(); ++y)
        size_gradient[y] = remaining_[y];
      for (int i = 0; i < n_; ++i) {
        const Team& team = problem_.teams[argmax[i]];
        const double weight = 1.0 / static_cast<double>(team.size());
        for (StudentIndex s : team) gradient[s] -= weight;
        size_gradient[team.size() - min_size_] -= weight;
      }
      double norm = 0.0;
      for (double g : gradient) norm += g * g;
      for (double g : size_gradient) norm += g * g;
      const double gap = bound - target;
      if (norm < 1e-18 || gap < 1e-9 || theta < 1e-4) break;
      const double step = theta * gap / norm;
      for (int i = 0; i < n_; ++i) prices_[i] -= step * gradient[i];
      for (std::size_t y = 0; y < remaining_.size(); ++y) {
        size_prices_[y] -= step * size_gradient[y];
      }
    }
    prices_ = best_prices;
    size_prices_ = best_size_prices;
    for (std::size_t t = 0; t < team_count; ++t) {
      reduced_[t] -= size_prices_[problem_.teams[t].size() - min_size_];
      for (StudentIndex s : problem_.teams[t]) reduced_[t] -= prices_[s];
    }
  }

  bool IsUsed(int s) const { return (used_[s / 64] >> (s % 64)) & 1U; }

  bool Placeable(std::uint32_t t) const {
    if (remaining_[problem_.teams[t].size() - min_size_] == 0) return false;
    const std::uint64_t* mask = &masks_[t * words_];
    for (int w = 0; w < words_; ++w) {
      if (mask[w] & used_[w]) return false;
    }
    return true;
  }

  void Toggle(std::uint32_t t) {
    const std::uint64_t* mask = &masks_[t * words_];
    for (int w = 0; w < words_; ++w) used_[w] ^= mask[w];
  }

  // Upper bound on what the free students can still add; -inf if some free
  // student has no placeable team left.
  double RestBound(int first_free) const {
    double bound = 0.0;
    for (std::size_t y = 0; y < remaining_.size(); ++y) {
      bound += remaining_[y] * size_prices_[y];
    }
    for (int j = first_free; j < n_; ++j) {
      if (IsUsed(j)) continue;
      bool any = false;
      for (std::uint32_t t : by_student_[j]) {
        if (Placeable(t)) {
          bound += prices_[j] + PerStudent(t);
          any = true;
          break;
        }
      }
      if (!any) return -std::numeric_limits<double>::infinity();
    }
    return bound;
  }

  // The budget is only enforced once an incumbent exists, so an interrupted
  // search still returns a partition.
  bool OutOfTime() {
    if (!options_.time_budget_s || !found_) return false;
    if (!timed_out_ && clock_.Seconds() > *options_.time_budget_s) timed_out_ = true;
    return timed_out_;
  }

  void Visit(int from, double partial) {
    ++nodes_;
    if (OutOfTime()) return;
    int first = from;
    while (first < n_ && IsUsed(first)) ++first;
    if (first == n_) {
      if (!found_ || partial > best_log_ + kImproveTolerance) {
        found_ = true;
        best_log_ = partial;
        best_ = stack_;
        trace_.push_back({offset_s_ + clock_.Seconds(), std::exp(best_log_)});
      }
      return;
    }
    const double rest = RestBound(first);
    if (!std::isfinite(rest)) return;
    if (found_ && partial + rest <= best_log_ + kImproveTolerance) return;

    for (std::uint32_t t : children_[first]) {
      if (!Placeable(t)) continue;
      const std::size_t size_slot = problem_.teams[t].size() - min_size_;
      Toggle(t);
      --remaining_[size_slot];
      stack_.push_back(t);
      Visit(first + 1, partial + problem_.log_s[t]);
      stack_.pop_back();
      ++remaining_[size_slot];
      Toggle(t);
      if (timed_out_) return;
      // Re-check: the incumbent may have improved below this node.
      if (found_ && partial + rest <= best_log_ + kImproveTolerance) return;
    }
  }

  const MasterProblem& problem_;
  const ExactOptions& options_;
  double offset_s_;
  int n_;
  int words_;
  int min_size_ = std::numeric_limits<int>::max();
  std::vector<std::uint64_t> masks_;
  std::vector<std::uint64_t> used_;
  std::vector<int> remaining_;
  std::vector<std::vector<std::uint32_t>> children_;
  std::vector<std::vector<std::uint32_t>> by_student_;
  std::vector<double> prices_;
  std::vector<double> size_prices_;
  std::vector<double> reduced_;  // w_T - pi(T)
  std::vector<std::uint32_t> stack_;
  std::vector<std::uint32_t> best_;
  double best_log_ = -std::numeric_limits<double>::infinity();
  bool found_ = false;
  bool timed_out_ = false;
  std::uint64_t nodes_ = 0;
  AnytimeTrace trace_;
  Stopwatch clock_;
};

void EnumerateInto(int n, int next, int min_size, int max_size,
                   const SizeDistribution& distribution, Team& prefix,
                   std::vector<Team>& out) {
  const int size = static_cast<int>(prefix.size());
  if (size >= min_size && distribution.CountOf(size) > 0) out.push_back(prefix);
  if (size == max_size) return;
  for (int s = next; s < n; ++s) {
    // Not enough students left to reach the smallest allowed size.
    if (size + 1 + (n - s - 1) < min_size) break;
    prefix.push_back(static_cast<StudentIndex>(s));
    EnumerateInto(n, s + 1, min_size, max_size, distribution, prefix, out);
    prefix.pop_back();
  }
}

struct PartitionSearch {
  const TeamEvaluator& evaluator;
  int n;
  int min_size;
  std::vector<int> remaining;  // indexed by size - min_size
  std::vector<bool> used;
  std::vector<Team> chosen;
  std::vector<double> values;
  std::vector<Team> best;
  double best_value = -1.0;
  std::uint64_t count = 0;

  void Visit() {
    int first = 0;
    while (first < n && used[first]) ++first;
    if (first == n) {
      ++count;
      double product = 1.0;
      for (double v : values) product *= v;
      if (product > best_value) {
        best_value = product;
        best = chosen;
      }
      return;
    }
    std::vector<int> free_after;
    for (int s = first + 1; s < n; ++s) {
      if (!used[s]) free_after.push_back(s);
    }
    for (std::size_t slot = 0; slot < remaining.size(); ++slot) {
      if (remaining[slot] == 0) continue;
      const int size = min_size + static_cast<int>(slot);
      Team team{static_cast<StudentIndex>(first)};
      Extend(free_after, 0, size, slot, team);
    }
  }

  void Extend(const std::vector<int>& pool, std::size_t from, int size, std::size_t slot,
              Team& team) {
    if (static_cast<int>(team.size()) == size) {
      for (StudentIndex s : team) used[s] = true;
      --remaining[slot];
      chosen.push_back(team);
      values.push_back(evaluator.Synergy(team));
      Visit();
      values.pop_back();
      chosen.pop_back();
      ++remaining[slot];
      for (StudentIndex s : team) used[s] = false;
      return;
    }
    for (std::size_t i = from; i < pool.size(); ++i) {
      team.push_back(static_cast<StudentIndex>(pool[i]));
      Extend(pool, i + 1, size, slot, team);
      team.pop_back();
    }
  }
};

}  // namespace

std::uint64_t count_feasible_teams(int n, const SizeDistribution& distribution) {
  u128 total = 0;
  for (const auto& e : distribution.entries) {
    total += Binomial(n, e.size);
    if (total > kSaturated) return kSaturated;
  }
  return static_cast<std::uint64_t>(total);
}

std::vector<Team> enumerate_teams(int n, const SizeDistribution& distribution,
                                  std::uint64_t cap) {
  const std::uint64_t count = count_feasible_teams(n, distribution);
  if (count > cap) {
    throw GuardExceeded("instance has " + std::to_string(count) +
                        " feasible teams, above the enumeration cap of " +
                        std::to_string(cap));
  }
  int min_size = std::numeric_limits<int>::max();
  int max_size = 0;
  for (const auto& e : distribution.entries) {
    min_size = std::min(min_size, e.size);
    max_size = std::max(max_size, e.size);
  }
  std::vector<Team> teams;
  teams.reserve(count);
  Team prefix;
  EnumerateInto(n, 0, min_size, max_size, distribution, prefix, teams);
  return teams;
}

std::vector<SynergyRecord> score_teams(std::span<const Team> teams, const Roster& roster,
                                       const Task& task, const EvalConfig& config,
                                       unsigned workers) {
  config.Validate();
  std::vector<SynergyRecord> records(teams.size());
  ParallelFor(teams.size(), workers, [&](std::size_t i) {
    records[i] = synergistic_value(roster, teams[i], task, config);
  });
  return records;
}

MasterProblem build_master_problem(const Roster& roster, const Task& task,
                                   const EvalConfig& config, std::uint64_t team_cap,
                                   unsigned workers) {
  MasterProblem problem;
  problem.students = static_cast<int>(roster.size());
  problem.distribution = quantity_distribution(problem.students, task.m);
  problem.b = problem.distribution.team_count();
  problem.teams = enumerate_teams(problem.students, problem.distribution, team_cap);

  const TeamEvaluator evaluator(roster, task, config);
  problem.epsilon_floor = config.epsilon_floor;
  problem.s.resize(problem.teams.size());
  problem.log_s.resize(problem.teams.size());
  ParallelFor(problem.teams.size(), workers, [&](std::size_t t) {
    problem.s[t] = evaluator.SynergyUncached(problem.teams[t]);
    problem.log_s[t] = evaluator.FloorLog(problem.s[t]);
  });

  problem.membership.assign(problem.students, {});
  for (std::size_t t = 0; t < problem.teams.size(); ++t) {
    for (StudentIndex s : problem.teams[t]) {
      problem.membership[s].push_back(static_cast<std::uint32_t>(t));
    }
  }
  for (int s = 0; s < problem.students; ++s) {
    if (problem.membership[s].empty()) {
      throw ValidationError("student " + roster[s].id + " belongs to no feasible team");
    }
  }
  return problem;
}

void write_master_problem(std::ostream& out, const MasterProblem& problem,
                          const Roster& roster) {
  out.precision(17);
  out << "# teamcomp master problem, schema=1\n";
  out << "students " << problem.students << "\n";
  out << "teams " << problem.teams.size() << "\n";
  for (std::size_t t = 0; t < problem.teams.size(); ++t) {
    out << "team x" << t;
    for (StudentIndex s : problem.teams[t]) out << ' ' << roster[s].id;
    out << "\n";
  }
  out << "maximize";
  for (std::size_t t = 0; t < problem.teams.size(); ++t) {
    out << ' ' << problem.log_s[t] << " x" << t;
  }
  out << "\n";
  for (int s = 0; s < problem.students; ++s) {
    out << "cover " << roster[s].id;
    for (std::uint32_t t : problem.membership[s]) out << " x" << t;
    out << " = 1\n";
  }
  out << "count";
  for (std::size_t t = 0; t < problem.teams.size(); ++t) out << " x" << t;
  out << " = " << problem.b << "\n";
  if (problem.distribution.entries.size() > 1) {
    for (const auto& e : problem.distribution.entries) {
      out << "size " << e.size;
      for (std::size_t t = 0; t < problem.teams.size(); ++t) {
        if (static_cast<int>(problem.teams[t].size()) == e.size) out << " x" << t;
      }
      out << " = " << e.count << "\n";
    }
  }
  out << "binary all\n";
}

SolverResult solve_master_problem(const MasterProblem& problem,
                                  const ExactOptions& options, double elapsed_offset_s) {
  BranchAndBound search(problem, options, elapsed_offset_s);
  return search.Run();
}

SolverResult solve_exact(const Roster& roster, const Task& task, const EvalConfig& config,
                         const ExactOptions& options) {
  Stopwatch gen_clock;
  const MasterProblem problem =
      build_master_problem(roster, task, config, options.team_cap, options.workers);
  const double gen_time = gen_clock.Seconds();

  ExactOptions search_options = options;
  if (options.time_budget_s) {
    search_options.time_budget_s = std::max(0.0, *options.time_budget_s - gen_time);
  }
  BranchAndBound search(problem, search_options, gen_time);
  SolverResult result = search.Run();
  result.gen_time_s = gen_time;
  return result;
}

std::uint64_t count_constrained_partitions(int n, const SizeDistribution& distribution) {
  // Overflow check in log space first; exact arithmetic below.
  double log_count = std::lgamma(n + 1.0);
  for (const auto& e : distribution.entries) {
    log_count -= e.count * std::lgamma(e.size + 1.0) + std::lgamma(e.count + 1.0);
  }
  if (log_count > std::log(1.8e19)) return kSaturated;

  u128 result = 1;
  int left = n;
  for (const auto& e : distribution.entries) {
    for (int t = 1; t <= e.count; ++t) {
      // Prefix counts (unordered t-sets of disjoint teams) are integers.
      result = result * Binomial(left, e.size) / static_cast<u128>(t);
      left -= e.size;
      if (result > kSaturated) return kSaturated;
    }
  }
  return static_cast<std::uint64_t>(result);
}

BruteForcePartitionResult brute_force_partitions(const Roster& roster, const Task& task,
                                                 const EvalConfig& config,
                                                 std::uint64_t guard) {
  const int n = static_cast<int>(roster.size());
  const SizeDistribution distribution = quantity_distribution(n, task.m);
  const std::uint64_t total = count_constrained_partitions(n, distribution);
  if (total > guard) {
    throw GuardExceeded("instance has " + std::to_string(total) +
                        " constrained partitions, above the brute-force guard of " +
                        std::to_string(guard));
  }
  const TeamEvaluator evaluator(roster, task, config);
  PartitionSearch search{evaluator, n,  task.m, {0, 0}, std::vector<bool>(n, false),
                         {},        {}, {},     -1.0,   0};
  for (const auto& e : distribution.entries) search.remaining[e.size - task.m] = e.count;
  search.Visit();

  BruteForcePartitionResult result;
  result.partition.teams = search.best;
  result.partitions_enumerated = search.count;
  std::vector<double> values;
  for (const Team& team : search.best) values.push_back(evaluator.Synergy(team));
  result.score = ScoreFromTeamValues(values, config.epsilon_floor);
  return result;
}

}  // namespace teamcomp
