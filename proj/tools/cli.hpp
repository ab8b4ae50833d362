// Copyright 2026 The DPCBF Safety Filter Authors
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

#ifndef DPCBF__TOOLS__CLI_HPP_
#define DPCBF__TOOLS__CLI_HPP_

#include <iosfwd>

namespace dpcbf::cli
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char * kOutDirEnv = "DPCBF_OUT_DIR";

/// Entry point shared by the binary and the tests.
int run(int argc, const char * const * argv, std::ostream & out, std::ostream & err);

}  // namespace dpcbf::cli

#endif  // DPCBF__TOOLS__CLI_HPP_
