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

#include "plab/detail/binary_io.hpp"

#include <bit>
#include <cstring>
#include <vector>

#include "plab/error.hpp"

namespace plab::detail {

namespace {

template <typename T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) {
      std::swap(buf[i], buf[sizeof(T) - 1 - i]);
    }
    std::memcpy(&v, buf, sizeof(T));
  }
  return v;
}

}  // namespace

void BinaryWriter::bytes(std::string_view raw) {
  out_.write(raw.data(), static_cast<std::streamsize>(raw.size()));
}

void BinaryWriter::u32(std::uint32_t v) {
  v = to_little(v);
  out_.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void BinaryWriter::u64(std::uint64_t v) {
  v = to_little(v);
  out_.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void BinaryWriter::f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }

void BinaryWriter::f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

void BinaryWriter::string(std::string_view s) {
  u32(static_cast<std::uint32_t>(s.size()));
  bytes(s);
}

void BinaryWriter::f32_array(std::span<const float> values) {
  if constexpr (std::endian::native == std::endian::little) {
    out_.write(reinterpret_cast<const char*>(values.data()),
               static_cast<std::streamsize>(values.size_bytes()));
  } else {
    for (float v : values) f32(v);
  }
}

void BinaryReader::read_exact(char* dst, std::size_t n) {
  in_.read(dst, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in_.gcount()) != n) {
    throw Error(ErrorKind::kFormat,
                source_ + ": payload size mismatch (file truncated)");
  }
}

std::string BinaryReader::bytes(std::size_t n) {
  std::string out(n, '\0');
  read_exact(out.data(), n);
  return out;
}

std::uint32_t BinaryReader::u32() {
  std::uint32_t v;
  read_exact(reinterpret_cast<char*>(&v), sizeof(v));
  return to_little(v);
}

std::uint64_t BinaryReader::u64() {
  std::uint64_t v;
  read_exact(reinterpret_cast<char*>(&v), sizeof(v));
  return to_little(v);
}

float BinaryReader::f32() { return std::bit_cast<float>(u32()); }

double BinaryReader::f64() { return std::bit_cast<double>(u64()); }

std::string BinaryReader::string() {
  auto n = u32();
  return bytes(n);
}

void BinaryReader::f32_array(std::span<float> out) {
  read_exact(reinterpret_cast<char*>(out.data()), out.size_bytes());
  if constexpr (std::endian::native == std::endian::big) {
    for (float& v : out) v = std::bit_cast<float>(to_little(std::bit_cast<std::uint32_t>(v)));
  }
}

void BinaryReader::expect_end() {
  if (in_.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorKind::kFormat,
                source_ + ": payload size mismatch (trailing bytes)");
  }
}

}  // namespace plab::detail
