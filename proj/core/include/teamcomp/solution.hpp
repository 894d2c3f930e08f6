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

#ifndef TEAMCOMP_SOLUTION_HPP_
#define TEAMCOMP_SOLUTION_HPP_

#include <chrono>
#include <cstdint>
#include <vector>

#include "teamcomp/evaluation.hpp"
#include "teamcomp/model.hpp"

namespace teamcomp {

struct TracePoint {
  double elapsed_s = 0.0;
  double best_S = 0.0;
};

// Best objective seen so far, one point per improvement.
using AnytimeTrace = std::vector<TracePoint>;

inline bool IsMonotone(const AnytimeTrace& trace) {
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace[i].best_S < trace[i - 1].best_S ||
        trace[i].elapsed_s < trace[i - 1].elapsed_s) {
      return false;
    }
  }
  return true;
}

// What every solver returns.
struct SolverResult {
  Partition partition;
  PartitionScore score;
  AnytimeTrace trace;
  double gen_time_s = 0.0;    // team enumeration and scoring (exact only)
  double solve_time_s = 0.0;  // search proper
  std::uint64_t iterations = 0;
  bool optimal = false;  // proven optimal (exact, run to completion)
};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace teamcomp

#endif  // TEAMCOMP_SOLUTION_HPP_
