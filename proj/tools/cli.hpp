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

#ifndef TEAMCOMP_TOOLS_CLI_HPP_
#define TEAMCOMP_TOOLS_CLI_HPP_

#include <iosfwd>

namespace teamcomp {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitInput = 3,
  kExitGuard = 4,
  kExitInternal = 5,
};

// Entry point of the `teamcomp` tool. Results go to `out`, diagnostics and
// usage text to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace teamcomp

#endif  // TEAMCOMP_TOOLS_CLI_HPP_
