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

#include <cmath>
#include <cstring>
#include <limits>

#include "plab/detail/binary_io.hpp"
#include "plab/embeddings.hpp"
#include "plab/error.hpp"
#include "plab/random.hpp"
#include "support.hpp"

using namespace plab;

namespace {

VectorStore random_vectors(std::size_t n, Eigen::Index dim, std::uint64_t seed) {
  Rng rng(seed);
  RowMatrix<float> m(static_cast<Eigen::Index>(n), dim);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = static_cast<float>(rng.normal());
  }
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back("id" + std::to_string(i));
  return VectorStore(std::move(ids), std::move(m));
}

std::string le32(std::uint32_t v) {
  std::string s(4, '\0');
  for (int i = 0; i < 4; ++i) s[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  return s;
}

std::string lef32(float f) {
  std::uint32_t bits;
  std::memcpy(&bits, &f, 4);
  return le32(bits);
}

}  // namespace

TEST_CASE("a hand-built TKV1 file with two 4-dim vectors loads") {
  std::string bytes = "TKV1" + le32(2) + le32(4);
  bytes += le32(2) + "d1" + le32(2) + "d2";
  for (int i = 0; i < 8; ++i) bytes += lef32(static_cast<float>(i) * 0.5f);
  test::TempDir dir;
  test::write_file(dir / "v.tkv", bytes);
  const auto store = load_vectors(dir / "v.tkv");
  REQUIRE(store.size() == 2);
  CHECK(store.dim() == 4);
  CHECK(store.ids()[1] == "d2");
  CHECK(store.row(1)(3) == 3.5f);
  CHECK(*store.find("d1") == 0);
  CHECK_FALSE(store.find("d3").has_value());

  SUBCASE("truncated payload") {
    test::write_file(dir / "v.tkv", bytes.substr(0, bytes.size() - 4));
    try {
      load_vectors(dir / "v.tkv");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("size mismatch") != std::string::npos);
    }
  }
  SUBCASE("trailing bytes") {
    test::write_file(dir / "v.tkv", bytes + "x");
    CHECK_THROWS_AS(load_vectors(dir / "v.tkv"), Error);
  }
  SUBCASE("bad magic") {
    test::write_file(dir / "v.tkv", "TKM1" + bytes.substr(4));
    CHECK_THROWS_AS(load_vectors(dir / "v.tkv"), Error);
  }
  SUBCASE("NaN component names the id") {
    std::string nan_bytes = "TKV1" + le32(1) + le32(2) + le32(3) + "bad" + lef32(1.0f) +
                            lef32(std::numeric_limits<float>::quiet_NaN());
    test::write_file(dir / "v.tkv", nan_bytes);
    try {
      load_vectors(dir / "v.tkv");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("bad") != std::string::npos);
    }
  }
}

TEST_CASE("1k random vectors round-trip bitwise") {
  const auto store = random_vectors(1000, 48, 3);
  test::TempDir dir;
  write_vectors(store, dir / "v.tkv");
  const auto back = load_vectors(dir / "v.tkv");
  CHECK(back.ids() == store.ids());
  REQUIRE(back.matrix().size() == store.matrix().size());
  CHECK(std::memcmp(back.matrix().data(), store.matrix().data(),
                    sizeof(float) * static_cast<std::size_t>(store.matrix().size())) == 0);
  write_vectors(back, dir / "again.tkv");
  CHECK(test::read_file(dir / "v.tkv") == test::read_file(dir / "again.tkv"));
}

TEST_CASE("vector store invariants") {
  RowMatrix<float> m = RowMatrix<float>::Zero(2, 3);
  CHECK_THROWS_AS(VectorStore({"a", "a"}, m), Error);
  CHECK_THROWS_AS(VectorStore({"a"}, m), Error);
  CHECK_THROWS_AS(VectorStore({"a", ""}, m), Error);
  m(1, 2) = std::numeric_limits<float>::infinity();
  CHECK_THROWS_AS(VectorStore({"a", "b"}, m), Error);
}

TEST_CASE("vector stores are templated on the scalar") {
  const auto store = random_vectors(3, 5, 1);
  const BasicVectorStore<double> wide = store.cast<double>();
  CHECK(wide.row(2)(4) == static_cast<double>(store.row(2)(4)));
}

TEST_CASE("token matrices round-trip and validate") {
  Rng rng(4);
  TokenMatrixStore store(3);
  for (int i = 0; i < 50; ++i) {
    RowMatrix<float> m(static_cast<Eigen::Index>(1 + rng.below(6)), 3);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < 3; ++c) m(r, c) = static_cast<float>(rng.normal());
    }
    store.add("t" + std::to_string(i), m);
  }
  test::TempDir dir;
  write_token_matrices(store, dir / "t.tkm");
  const auto back = load_token_matrices(dir / "t.tkm");
  REQUIRE(back.size() == store.size());
  CHECK(back.dim() == 3);
  for (std::size_t i = 0; i < store.size(); ++i) {
    CHECK(back.ids()[i] == store.ids()[i]);
    CHECK(back.matrix(i) == store.matrix(i));
  }
  CHECK(back.find("t7") != nullptr);
  CHECK(back.find("zz") == nullptr);

  CHECK_THROWS_AS(store.add("empty", RowMatrix<float>(0, 3)), Error);
  CHECK_THROWS_AS(store.add("wide", RowMatrix<float>::Zero(1, 4)), Error);
  CHECK_THROWS_AS(store.add("t0", RowMatrix<float>::Zero(1, 3)), Error);

  auto bytes = test::read_file(dir / "t.tkm");
  test::write_file(dir / "t.tkm", bytes.substr(0, bytes.size() - 1));
  CHECK_THROWS_AS(load_token_matrices(dir / "t.tkm"), Error);
}

TEST_CASE("static embedding text format") {
  test::TempDir dir;
  test::write_file(dir / "e.vec", "3 2\nheart 1 0\nattack 0 1\nrisk 0.5 0.5\n");
  const auto emb = load_static_embedding(dir / "e.vec");
  CHECK(emb.size() == 3);
  CHECK(emb.dim() == 2);
  CHECK(*emb.find("attack") == 1);

  write_static_embedding(emb, dir / "copy.vec");
  const auto again = load_static_embedding(dir / "copy.vec");
  CHECK(again.terms() == emb.terms());
  CHECK(again.table() == emb.table());

  test::write_file(dir / "bad.vec", "heart 1 0\nattack 1\n");
  CHECK_THROWS_AS(load_static_embedding(dir / "bad.vec"), Error);
  test::write_file(dir / "dup.vec", "heart 1 0\nheart 0 1\n");
  CHECK_THROWS_AS(load_static_embedding(dir / "dup.vec"), Error);
}

TEST_CASE("embed_tokens_static") {
  RowMatrix<float> table(3, 2);
  table << 1, 0, 0, 1, 0.5f, 0.5f;
  const StaticEmbedding emb({"heart", "attack", "risk"}, table);
  const Tokenizer tok;

  const auto m = embed_tokens_static("Heart attack, unknown RISK", emb, tok);
  REQUIRE(m.matrix.rows() == 3);
  CHECK(m.oov_count == 1);
  CHECK(m.matrix.row(0) == table.row(0));
  CHECK(m.matrix.row(1) == table.row(1));
  CHECK(m.matrix.row(2) == table.row(2));

  try {
    embed_tokens_static("nothing known", emb, tok);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kEmpty);
  }

  const PassageStore passages({{"p1", "heart heart"}, {"p2", "zzz"}, {"p3", "risk x"}});
  StaticEmbeddingReport report;
  const auto store = embed_passages_static(passages, emb, tok, &report);
  CHECK(store.size() == 2);
  CHECK(report.embedded == 2);
  CHECK(report.skipped_all_oov == 1);
  CHECK(report.oov_tokens == 2);
  CHECK(store.find("p1")->rows() == 2);
}
