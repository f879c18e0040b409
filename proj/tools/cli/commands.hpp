// Copyright 2026 The gaussmoser Authors
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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gaussmoser::cli {

enum ExitCode : int {
  kOk = 0,
  kArgumentError = 2,
  kNonConvergence = 3,
  kDivergence = 4,
};

// Parses argv, runs one subcommand and writes its document to `out`
// (or to --output). Diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct OperationEntry {
  std::string operation;
  std::string subcommand;
};

// Library operations and the subcommand exposing each.
const std::vector<OperationEntry>& operation_registry();

const std::vector<std::string>& subcommand_names();

}  // namespace gaussmoser::cli
