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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "plab/detail/string_map.hpp"

namespace plab {

/// Lowercases ASCII letters and splits on every byte that is not an ASCII
/// letter or digit. Bytes >= 0x80 are kept inside tokens so multi-byte UTF-8
/// characters are never cut in half. No stemming.
std::vector<std::string> tokenize(std::string_view text);

/// tokenize() plus an optional stopword filter.
class Tokenizer {
 public:
  Tokenizer() = default;
  explicit Tokenizer(std::vector<std::string> stopwords);

  std::vector<std::string> operator()(std::string_view text) const;

  /// Sorted, lowercase.
  const std::vector<std::string>& stopwords() const { return stopword_list_; }

 private:
  std::vector<std::string> stopword_list_;
  detail::StringSet stopwords_;
};

/// One stopword per line; blank lines are ignored.
std::vector<std::string> load_stopwords(const std::filesystem::path& path);

}  // namespace plab
