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

#ifndef TEAMCOMP_ERRORS_HPP_
#define TEAMCOMP_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace teamcomp {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-range input: rosters, tasks, partitions, parameters.
// Carries one entry per violation so callers can report all of them.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::string message)
      : Error(message), issues_{std::move(message)} {}
  explicit ValidationError(std::vector<std::string> issues);

  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

// An instance is too large for an enumeration-based routine.
class GuardExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace teamcomp

#endif  // TEAMCOMP_ERRORS_HPP_
