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

#include "plab/manifest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <json.hpp>
#include <memory>

#include "plab/detail/tsv.hpp"
#include "plab/error.hpp"

namespace plab {

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), &EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw Error(ErrorKind::kIo, "sha256: digest initialisation failed");
    }
  }

  void update(const void* data, std::size_t n) { EVP_DigestUpdate(ctx_.get(), data, n); }

  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_.get(), digest.data(), &len);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
      out.push_back(kHex[digest[i] >> 4]);
      out.push_back(kHex[digest[i] & 0xf]);
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

std::string sha256_file(const std::filesystem::path& path) {
  auto in = detail::open_input(path, true);
  Sha256 h;
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return h.hex();
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  Sha256 h;
  h.update(data.data(), data.size());
  return h.hex();
}

std::string sha256_path(const std::filesystem::path& path) {
  if (!std::filesystem::is_directory(path)) return sha256_file(path);
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(path)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::string listing;
  for (const auto& f : files) {
    const auto rel = std::filesystem::relative(f, path).generic_string();
    if (rel == "manifest.json") continue;
    listing += rel + '\t' + sha256_file(f) + '\n';
  }
  return sha256_hex(listing);
}

void Manifest::add_input(const std::filesystem::path& path) {
  inputs_.emplace_back(path.string(), sha256_path(path));
}

void Manifest::add_output(const std::filesystem::path& path) {
  outputs_.emplace_back(path.string(), sha256_path(path));
}

std::string Manifest::to_json() const {
  nlohmann::ordered_json j;
  j["toolkit"] = "plab";
  j["version"] = kToolkitVersion;
  j["command"] = command_;
  j["seed"] = seed_;
  j["config"] = config_;
  auto files = [](const auto& list) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& [path, digest] : list) {
      arr.push_back({{"path", path}, {"sha256", digest}});
    }
    return arr;
  };
  j["inputs"] = files(inputs_);
  j["outputs"] = files(outputs_);
  j["stats"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : stats_) j["stats"][k] = v;
  return j.dump(2) + "\n";
}

void Manifest::write(const std::filesystem::path& path) const {
  auto out = detail::open_output(path);
  out << to_json();
}

}  // namespace plab
