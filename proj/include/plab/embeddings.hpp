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

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plab/corpus.hpp"
#include "plab/detail/string_map.hpp"
#include "plab/error.hpp"
#include "plab/tokenizer.hpp"

namespace plab {

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

namespace detail {

inline void check_unique_id(StringMap<Eigen::Index>& index, const std::string& id,
                            Eigen::Index row) {
  if (id.empty()) throw Error(ErrorKind::kInvalidArgument, "empty embedding id");
  if (!index.emplace(id, row).second) {
    throw Error(ErrorKind::kInvalidArgument, "duplicate embedding id '" + id + "'");
  }
}

template <typename Derived>
void check_finite(const Eigen::MatrixBase<Derived>& m, const std::string& id) {
  if (!m.allFinite()) {
    throw Error(ErrorKind::kFormat, "non-finite component in embedding '" + id + "'");
  }
}

}  // namespace detail

/// One vector per id, stored as the rows of a row-major matrix.
template <typename Scalar>
class BasicVectorStore {
 public:
  using Matrix = RowMatrix<Scalar>;

  BasicVectorStore() = default;
  BasicVectorStore(std::vector<std::string> ids, Matrix vectors)
      : ids_(std::move(ids)), vectors_(std::move(vectors)) {
    if (static_cast<Eigen::Index>(ids_.size()) != vectors_.rows()) {
      throw Error(ErrorKind::kInvalidArgument, "vector store: id count != row count");
    }
    index_.reserve(ids_.size());
    for (Eigen::Index r = 0; r < vectors_.rows(); ++r) {
      detail::check_unique_id(index_, ids_[r], r);
      detail::check_finite(vectors_.row(r), ids_[r]);
    }
  }

  Eigen::Index dim() const { return vectors_.cols(); }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  const std::vector<std::string>& ids() const { return ids_; }
  const Matrix& matrix() const { return vectors_; }
  auto row(Eigen::Index r) const { return vectors_.row(r); }

  std::optional<Eigen::Index> find(std::string_view id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  template <typename Other>
  BasicVectorStore<Other> cast() const {
    return BasicVectorStore<Other>(ids_, vectors_.template cast<Other>());
  }

 private:
  std::vector<std::string> ids_;
  Matrix vectors_;
  detail::StringMap<Eigen::Index> index_;
};

/// One (n_tokens x dim) matrix per id; n_tokens >= 1.
template <typename Scalar>
class BasicTokenMatrixStore {
 public:
  using Matrix = RowMatrix<Scalar>;

  explicit BasicTokenMatrixStore(Eigen::Index dim = 0) : dim_(dim) {}

  void add(std::string id, Matrix tokens) {
    if (tokens.rows() < 1) {
      throw Error(ErrorKind::kInvalidArgument, "token matrix '" + id + "' has no rows");
    }
    if (tokens.cols() != dim_) {
      throw Error(ErrorKind::kInvalidArgument,
                  "token matrix '" + id + "' has dim " + std::to_string(tokens.cols()) +
                      ", store dim is " + std::to_string(dim_));
    }
    detail::check_finite(tokens, id);
    detail::check_unique_id(index_, id, static_cast<Eigen::Index>(ids_.size()));
    ids_.push_back(std::move(id));
    matrices_.push_back(std::move(tokens));
  }

  Eigen::Index dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  const std::vector<std::string>& ids() const { return ids_; }
  const Matrix& matrix(std::size_t i) const { return matrices_[i]; }

  /// nullptr when absent.
  const Matrix* find(std::string_view id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &matrices_[static_cast<std::size_t>(it->second)];
  }

 private:
  Eigen::Index dim_;
  std::vector<std::string> ids_;
  std::vector<Matrix> matrices_;
  detail::StringMap<Eigen::Index> index_;
};

using VectorStore = BasicVectorStore<float>;
using TokenMatrixStore = BasicTokenMatrixStore<float>;

/// Word vectors keyed by term.
class StaticEmbedding {
 public:
  StaticEmbedding() = default;
  StaticEmbedding(std::vector<std::string> terms, RowMatrix<float> table);

  Eigen::Index dim() const { return table_.cols(); }
  std::size_t size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }
  const RowMatrix<float>& table() const { return table_; }
  std::optional<Eigen::Index> find(std::string_view term) const;

 private:
  std::vector<std::string> terms_;
  RowMatrix<float> table_;
  detail::StringMap<Eigen::Index> index_;
};

// Vector file: "TKV1", u32 count, u32 dim, count length-prefixed ids
// (u32 byte length + UTF-8), then count*dim float32, all little-endian.
VectorStore load_vectors(const std::filesystem::path& path);
void write_vectors(const VectorStore& store, const std::filesystem::path& path);

// Token-matrix file: "TKM1", u32 count, u32 dim, then per entry a
// length-prefixed id, u32 n_tokens and n_tokens*dim float32.
TokenMatrixStore load_token_matrices(const std::filesystem::path& path);
void write_token_matrices(const TokenMatrixStore& store,
                          const std::filesystem::path& path);

/// Text format `term v1 ... v_dim` per line. A leading word2vec-style
/// `count dim` header line is accepted.
StaticEmbedding load_static_embedding(const std::filesystem::path& path);
void write_static_embedding(const StaticEmbedding& embedding,
                            const std::filesystem::path& path);

struct StaticTokenMatrix {
  RowMatrix<float> matrix;
  std::size_t oov_count = 0;
};

/// One row per in-vocabulary token, in text order. Throws kEmpty when no
/// token is in the vocabulary.
StaticTokenMatrix embed_tokens_static(std::string_view text,
                                      const StaticEmbedding& embedding,
                                      const Tokenizer& tokenizer);

struct StaticEmbeddingReport {
  std::size_t embedded = 0;
  std::size_t skipped_all_oov = 0;
  std::size_t oov_tokens = 0;
};

/// embed_tokens_static() over a whole collection or query set. Texts with no
/// known token are skipped and counted.
TokenMatrixStore embed_passages_static(const PassageStore& passages,
                                       const StaticEmbedding& embedding,
                                       const Tokenizer& tokenizer,
                                       StaticEmbeddingReport* report = nullptr);
TokenMatrixStore embed_queries_static(const QuerySet& queries,
                                      const StaticEmbedding& embedding,
                                      const Tokenizer& tokenizer,
                                      StaticEmbeddingReport* report = nullptr);

}  // namespace plab
