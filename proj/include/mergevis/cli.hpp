// Copyright 2026 The mergevis Authors
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

#ifndef MERGEVIS__CLI_HPP_
#define MERGEVIS__CLI_HPP_

#include <ostream>

namespace mergevis
{

/// Exit codes of the command-line tool.
constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

/// Entry point of the `mergevis` tool with injectable streams, so the
/// subcommands can be driven in-process.
int run_cli(int argc, const char * const * argv, std::ostream & out, std::ostream & err);

}  // namespace mergevis

#endif  // MERGEVIS__CLI_HPP_
