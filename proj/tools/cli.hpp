// Copyright 2026 The plab Authors.
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

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace plab::cli {

/// Runs one `plab` invocation. `args` excludes the program name.
/// Returns 0 on success, 1 on a runtime failure (one JSON line on `err`)
/// and 2 on a usage error (usage text on `err`).
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace plab::cli
