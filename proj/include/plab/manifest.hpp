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

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace plab {

inline constexpr std::string_view kToolkitVersion = "0.1.0";

std::string sha256_hex(std::string_view data);
/// Digest of a file's bytes. For a directory: digest over the sorted list of
/// (relative path, file digest) pairs.
std::string sha256_path(const std::filesystem::path& path);

/// Provenance record written next to every artifact: the effective config,
/// the seed and SHA-256 digests of inputs and outputs. It carries no
/// timestamps, so re-running a command reproduces it byte for byte.
class Manifest {
 public:
  explicit Manifest(std::string command) : command_(std::move(command)) {}

  void set_config(std::string config_text) { config_ = std::move(config_text); }
  void set_seed(std::uint64_t seed) { seed_ = seed; }
  void add_input(const std::filesystem::path& path);
  void add_output(const std::filesystem::path& path);
  void add_stat(std::string key, double value) { stats_[std::move(key)] = value; }

  std::string to_json() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::string command_;
  std::string config_;
  std::uint64_t seed_ = 0;
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::vector<std::pair<std::string, std::string>> outputs_;
  std::map<std::string, double> stats_;
};

}  // namespace plab
