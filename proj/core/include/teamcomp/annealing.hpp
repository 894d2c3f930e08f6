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

// Simulated-annealing baseline over cross-team student swaps.
//
// Temperature decays exponentially in elapsed time, T(x) = r^x * tau_max,
// calibrated so that a move worsening the objective by the reference
// fraction delta is accepted with probability p_start at x = 0 and p_end at
// x = t_max.

#ifndef TEAMCOMP_ANNEALING_HPP_
#define TEAMCOMP_ANNEALING_HPP_

#include <cstdint>

#include "teamcomp/evaluation.hpp"
#include "teamcomp/solution.hpp"

namespace teamcomp {

struct SAParams {
  double t_max_s = 1.0;
  double delta_ref = 0.01;
  double p_start = 0.9;
  double p_end = 0.1;
  std::uint64_t seed = 0;
  // When non-zero, run exactly this many steps and measure "time" in steps:
  // step i sits at x = t_max_s * i / max_steps. Gives reproducible runs.
  std::uint64_t max_steps = 0;

  void Validate() const;
};

// tau_max = -delta / ln(p_start).
double initial_temperature(const SAParams& params);

// r^x * tau_max with r = (delta / (ln(1 / p_end) * tau_max))^(1 / t_max).
double temperature(double x, const SAParams& params);

// exp(-delta / T); 1 for delta <= 0, 0 for an infinite delta.
double acceptance_probability(double delta, double temperature);

// Relative loss (S - S') / S of moving from log value `log_current` to
// `log_candidate`; +inf when the current objective is zero.
double relative_worsening(double log_current, double log_candidate, bool current_is_zero);

SolverResult run_sa(const TeamEvaluator& evaluator, const SAParams& params);

SolverResult run_sa(const Roster& roster, const Task& task, const EvalConfig& config,
                    const SAParams& params);

}  // namespace teamcomp

#endif  // TEAMCOMP_ANNEALING_HPP_
