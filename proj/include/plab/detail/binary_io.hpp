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
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

namespace plab::detail {

// Little-endian fixed-width encoding for the on-disk formats. Strings are a
// u32 byte length followed by the raw bytes.
class BinaryWriter {
 public:
  explicit BinaryWriter(std::ostream& out) : out_(out) {}

  void bytes(std::string_view raw);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f32(float v);
  void f64(double v);
  void string(std::string_view s);
  void f32_array(std::span<const float> values);

 private:
  std::ostream& out_;
};

class BinaryReader {
 public:
  /// `source` names the file in error messages.
  BinaryReader(std::istream& in, std::string source)
      : in_(in), source_(std::move(source)) {}

  std::string bytes(std::size_t n);
  std::uint32_t u32();
  std::uint64_t u64();
  float f32();
  double f64();
  std::string string();
  void f32_array(std::span<float> out);

  /// Throws unless the stream is exhausted.
  void expect_end();
  const std::string& source() const { return source_; }

 private:
  void read_exact(char* dst, std::size_t n);

  std::istream& in_;
  std::string source_;
};

}  // namespace plab::detail
