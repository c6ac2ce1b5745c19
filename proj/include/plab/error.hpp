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

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace plab {

enum class ErrorKind {
  kIo,
  kFormat,
  kInvalidArgument,
  kNotFound,
  kEmpty,
};

std::string_view to_string(ErrorKind kind);

/// The single exception type thrown by the library. `kind()` is what the CLI
/// reports in its machine-readable error line.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Non-fatal diagnostics (empty inputs, skipped queries, ...) go through a
// process-wide sink. The default writes "warning: <msg>" to stderr.
using WarningSink = std::function<void(std::string_view)>;

WarningSink set_warning_sink(WarningSink sink);
void warn(std::string_view message);

}  // namespace plab
