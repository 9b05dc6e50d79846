// Copyright 2026 The zrc-eval Authors.
//
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

#ifndef ZRC_CLI_HPP_
#define ZRC_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace zrc {

/// Entry point of the zrc-eval tool. `args` excludes the program name.
/// Returns 0 on success, 1 on a data/validation error (one diagnostic line
/// on `err`) and 2 on a usage error (usage text on `err`).
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zrc

#endif  // ZRC_CLI_HPP_
