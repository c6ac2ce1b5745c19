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
#include <ostream>
#include <span>
#include <vector>

#include "plab/corpus.hpp"
#include "plab/metrics.hpp"
#include "plab/rerank.hpp"

namespace plab {

/// Scores a candidate with its qrels grade (unjudged -> 0): the ideal
/// re-ranker for a given judgment set.
class OracleScorer final : public Scorer {
 public:
  explicit OracleScorer(const Qrels& qrels) : qrels_(qrels) {}
  std::optional<double> score(std::string_view query_id,
                              const ScoredPassage& candidate) const override;
  std::string name() const override { return "oracle"; }

 private:
  const Qrels& qrels_;
};

/// Keeps the first-stage score, except that a seeded fraction `rate` of the
/// non-relevant candidates is pushed above every other candidate. Deeper
/// re-ranking admits more of them, so quality drops with depth: the
/// signature of a re-ranker trained on false negatives.
class CorruptedScorer final : public Scorer {
 public:
  CorruptedScorer(const Qrels& qrels, double rate, std::uint64_t seed);
  std::optional<double> score(std::string_view query_id,
                              const ScoredPassage& candidate) const override;
  std::string name() const override { return "corrupted"; }

 private:
  const Qrels& qrels_;
  double rate_;
  std::uint64_t seed_;
};

struct SweepRow {
  std::size_t depth = 0;
  MetricsReport report;
  RerankStats stats;
};

/// rerank() + evaluate_run() at each depth. Depths must be strictly
/// ascending.
std::vector<SweepRow> depth_sweep(const RankedRun& first_stage, const Scorer& scorer,
                                  std::span<const std::size_t> depths, const Qrels& qrels,
                                  const SplitMap& splits, const MetricsConfig& config = {},
                                  MissingPolicy on_missing = MissingPolicy::kError,
                                  unsigned threads = 1);

/// One row per (depth, split) with the report's summary columns.
void write_sweep_tsv(std::span<const SweepRow> rows, std::ostream& out);

}  // namespace plab
