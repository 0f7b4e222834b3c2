// Copyright (c) 2026 The LPM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LPM_CLI_H_
#define LPM_CLI_H_

#include <ostream>

namespace lpm {

// Environment variable holding the default --weights path.
inline constexpr char kWeightsEnvVar[] = "LPM_WEIGHTS";

// Entry point of the `lpm` tool (subcommands enroll, detect, eval).
// Results go to `out` as one JSON object per line; diagnostics go to `err`.
// Returns 0 on success, 1 on a processing error, other nonzero values on
// usage errors.
int RunCli(int argc, const char *const *argv, std::ostream &out,
           std::ostream &err);

}  // namespace lpm

#endif  // LPM_CLI_H_
