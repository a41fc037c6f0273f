//
// Copyright 2026 The bioaug Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef BIOAUG_TOOLS_CLI_H_
#define BIOAUG_TOOLS_CLI_H_

#include <ostream>

namespace bioaug::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

// Entry point of the bioaug tool. Verbs: augment, attribute, debate, eval,
// prompts. Returns 0 on success, 2 on configuration errors and 1 when the
// run itself fails.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace bioaug::cli

#endif  // BIOAUG_TOOLS_CLI_H_
