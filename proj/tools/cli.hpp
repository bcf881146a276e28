// Copyright 2026 The pnpdeclip Authors. All Rights Reserved.
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

#ifndef PNPDECLIP_TOOLS_CLI_HPP_
#define PNPDECLIP_TOOLS_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace pnpdeclip::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kBadArgs = 2,
  kIo = 3,
  kDivergence = 4,
};

// Entry point shared by the binary and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace pnpdeclip::cli

#endif  // PNPDECLIP_TOOLS_CLI_HPP_
