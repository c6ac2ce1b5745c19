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

#include "plab/tokenizer.hpp"

#include <algorithm>

#include "plab/detail/tsv.hpp"

namespace plab {

namespace {

bool is_token_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c >= 0x80;
}

char lower(unsigned char c) {
  return static_cast<char>((c >= 'A' && c <= 'Z') ? c - 'A' + 'a' : c);
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_token_byte(c)) {
      current.push_back(lower(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

Tokenizer::Tokenizer(std::vector<std::string> stopwords) {
  for (auto& w : stopwords) {
    for (auto& t : tokenize(w)) stopwords_.insert(std::move(t));
  }
  stopword_list_.assign(stopwords_.begin(), stopwords_.end());
  std::sort(stopword_list_.begin(), stopword_list_.end());
}

std::vector<std::string> Tokenizer::operator()(std::string_view text) const {
  auto tokens = tokenize(text);
  if (!stopwords_.empty()) {
    std::erase_if(tokens, [&](const std::string& t) { return stopwords_.contains(t); });
  }
  return tokens;
}

std::vector<std::string> load_stopwords(const std::filesystem::path& path) {
  std::vector<std::string> words;
  detail::for_each_line(path, [&](std::size_t, std::string_view line) {
    for (auto w : detail::split_whitespace(line)) words.emplace_back(w);
  });
  return words;
}

}  // namespace plab
