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

#include <doctest.h>

#include "plab/tokenizer.hpp"
#include "support.hpp"

using namespace plab;
using Tokens = std::vector<std::string>;

TEST_CASE("tokenize lowercases and splits on non-alphanumerics") {
  CHECK(tokenize("Heart-Attack risk!") == Tokens{"heart", "attack", "risk"});
  CHECK(tokenize("") == Tokens{});
  CHECK(tokenize("COVID-19") == Tokens{"covid", "19"});
  CHECK(tokenize("  --  ") == Tokens{});
  CHECK(tokenize("a_b\tc\nd") == Tokens{"a", "b", "c", "d"});
}

TEST_CASE("non-ASCII bytes stay inside tokens") {
  CHECK(tokenize("Naïve café") == Tokens{"naïve", "café"});
}

TEST_CASE("stopwords are dropped after lowercasing") {
  Tokenizer tok({"the", "of"});
  CHECK(tok("The risk OF stroke") == Tokens{"risk", "stroke"});
  CHECK(tok.stopwords() == Tokens{"of", "the"});
  CHECK(Tokenizer{}("The risk") == Tokens{"the", "risk"});
}

TEST_CASE("load_stopwords ignores blank lines") {
  test::TempDir dir;
  test::write_file(dir / "stop.txt", "the\n\nOf\n");
  CHECK(load_stopwords(dir / "stop.txt") == Tokens{"the", "Of"});
  CHECK(Tokenizer(load_stopwords(dir / "stop.txt"))("OF the x") == Tokens{"x"});
}
