// Copyright 2026 The modelshare Authors
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

// Command-line front end. Exit codes: 0 success, 1 invalid input, 2 an
// exhaustive search beyond its cap.

#ifndef MODELSHARE_CLI_CLI_HPP
#define MODELSHARE_CLI_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace modelshare::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitCap = 2;

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace modelshare::cli

#endif  // MODELSHARE_CLI_CLI_HPP
