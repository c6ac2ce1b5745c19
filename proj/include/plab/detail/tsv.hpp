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

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace plab::detail {

std::ifstream open_input(const std::filesystem::path& path,
                         bool binary = false);
std::ofstream open_output(const std::filesystem::path& path,
                          bool binary = false);

/// Calls `fn(line_number, line)` for every line (1-based). A trailing '\r' is
/// stripped so CRLF files read like LF files.
void for_each_line(const std::filesystem::path& path,
                   const std::function<void(std::size_t, std::string_view)>& fn);

std::vector<std::string_view> split(std::string_view line, char sep);

/// Splits on runs of ASCII whitespace, dropping empty fields.
std::vector<std::string_view> split_whitespace(std::string_view line);

double parse_double(std::string_view field, std::string_view what);
std::uint64_t parse_u64(std::string_view field, std::string_view what);
long long parse_i64(std::string_view field, std::string_view what);

/// Shortest representation that parses back to the same double.
std::string format_double(double value);

/// Replaces TAB, CR and LF with spaces so free text stays in one TSV cell.
std::string sanitize_cell(std::string_view text);

std::string location(const std::filesystem::path& path, std::size_t line);

}  // namespace plab::detail
