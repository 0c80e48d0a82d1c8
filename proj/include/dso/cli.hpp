/*
 * Copyright 2026 The DSO Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DSO_CLI_HPP_
#define DSO_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace dso {

// Process exit statuses of the dso tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitVerification = 3,
};

/// Entry point of the `dso` tool. Subcommands: train, psgd-train, replay,
/// eval, scale, stats, synth. Results go to `out` as JSON, diagnostics to `err`.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cli_main(int argc, char** argv);

}  // namespace dso

#endif  // DSO_CLI_HPP_
