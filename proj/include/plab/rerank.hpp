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
#include <optional>
#include <string>
#include <string_view>

#include "plab/detail/string_map.hpp"
#include "plab/embeddings.hpp"
#include "plab/ranked_run.hpp"
#include "plab/scoring.hpp"

namespace plab {

/// Exact top-k by dense_score over every row of `store`, in rank order.
template <typename Scalar, typename Derived>
Ranking dense_retrieve(const BasicVectorStore<Scalar>& store,
                       const Eigen::MatrixBase<Derived>& query, std::size_t k) {
  if (store.empty()) throw Error(ErrorKind::kEmpty, "dense_retrieve: empty vector store");
  if (k == 0) throw Error(ErrorKind::kInvalidArgument, "dense_retrieve: k must be >= 1");
  if (query.size() != store.dim()) {
    throw Error(ErrorKind::kInvalidArgument, "dense_retrieve: query dimension mismatch");
  }
  Ranking all(store.size());
  for (std::size_t r = 0; r < store.size(); ++r) {
    const auto row = static_cast<Eigen::Index>(r);
    all[r] = {store.ids()[r], dense_score(query, store.row(row))};
  }
  const std::size_t n = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n), all.end(),
                    ranks_before);
  all.resize(n);
  return all;
}

/// dense_retrieve() for every query vector; the run is keyed by query id.
RankedRun dense_retrieve_all(const VectorStore& passages, const VectorStore& queries,
                             std::size_t k, std::string run_name = "dense",
                             unsigned threads = 1);

/// Re-scores one candidate. std::nullopt means "no representation for this
/// query or passage". Implementations must be safe for concurrent calls.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual std::optional<double> score(std::string_view query_id,
                                      const ScoredPassage& candidate) const = 0;
  virtual std::string name() const = 0;
};

class DenseScorer final : public Scorer {
 public:
  DenseScorer(const VectorStore& queries, const VectorStore& passages);
  std::optional<double> score(std::string_view query_id,
                              const ScoredPassage& candidate) const override;
  std::string name() const override { return "dense"; }

 private:
  const VectorStore& queries_;
  const VectorStore& passages_;
};

class LateInteractionScorer final : public Scorer {
 public:
  LateInteractionScorer(const TokenMatrixStore& queries, const TokenMatrixStore& passages);
  std::optional<double> score(std::string_view query_id,
                              const ScoredPassage& candidate) const override;
  std::string name() const override { return "colbert"; }

 private:
  const TokenMatrixStore& queries_;
  const TokenMatrixStore& passages_;
};

class KernelScorer final : public Scorer {
 public:
  KernelScorer(const TokenMatrixStore& queries, const TokenMatrixStore& passages,
               KernelBank bank, KernelWeights weights);
  std::optional<double> score(std::string_view query_id,
                              const ScoredPassage& candidate) const override;
  std::string name() const override { return "kernel"; }

 private:
  const TokenMatrixStore& queries_;
  const TokenMatrixStore& passages_;
  KernelBank bank_;
  KernelWeights weights_;
};

/// Scores produced outside the toolkit, e.g. by a cross-encoder.
class ExternalScores {
 public:
  void set(std::string_view query_id, std::string_view passage_id, double score);
  std::optional<double> find(std::string_view query_id, std::string_view passage_id) const;
  std::size_t size() const { return size_; }

 private:
  detail::StringMap<detail::StringMap<double>> scores_;
  std::size_t size_ = 0;
};

/// Reads `query_id<TAB>passage_id<TAB>score`; a repeated pair is an error.
ExternalScores load_external_scores(const std::filesystem::path& path);

class ExternalScoreScorer final : public Scorer {
 public:
  explicit ExternalScoreScorer(const ExternalScores& scores) : scores_(scores) {}
  std::optional<double> score(std::string_view query_id,
                              const ScoredPassage& candidate) const override {
    return scores_.find(query_id, candidate.passage_id);
  }
  std::string name() const override { return "scores"; }

 private:
  const ExternalScores& scores_;
};

/// Keeps the first-stage score.
class FirstStageScorer final : public Scorer {
 public:
  std::optional<double> score(std::string_view, const ScoredPassage& candidate) const override {
    return candidate.score;
  }
  std::string name() const override { return "first-stage"; }
};

class ConstantScorer final : public Scorer {
 public:
  explicit ConstantScorer(double value = 0.0) : value_(value) {}
  std::optional<double> score(std::string_view, const ScoredPassage&) const override {
    return value_;
  }
  std::string name() const override { return "constant"; }

 private:
  double value_;
};

enum class MissingPolicy { kError, kSkip };

MissingPolicy parse_missing_policy(std::string_view name);

struct RerankStats {
  std::size_t rescored = 0;
  std::size_t skipped = 0;
};

/// Takes the top `depth` candidates of every query, re-scores them and
/// re-sorts. Candidates beyond `depth` are dropped; no passage is ever
/// added. With kError a missing representation throws, with kSkip the
/// candidate is dropped and counted.
RankedRun rerank(const RankedRun& first_stage, std::size_t depth, const Scorer& scorer,
                 MissingPolicy on_missing = MissingPolicy::kError,
                 RerankStats* stats = nullptr, unsigned threads = 1);

}  // namespace plab
