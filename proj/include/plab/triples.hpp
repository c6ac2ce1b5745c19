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

#include <compare>
#include <cstdint>
#include <filesystem>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "plab/bm25.hpp"
#include "plab/corpus.hpp"
#include "plab/random.hpp"

namespace plab {

struct TrainingTriple {
  std::string query_id;
  std::string positive_id;
  std::string negative_id;

  friend auto operator<=>(const TrainingTriple&, const TrainingTriple&) = default;
};

struct SamplingConfig {
  std::size_t candidate_depth = 500;
  std::size_t max_negatives_per_positive = 20;
  std::size_t triple_cap = 10'000'000;
  std::uint64_t seed = 0;
  /// Reproduces the flawed policy for A/B diagnosis: only the positive itself
  /// is excluded, so other relevant passages can become negatives.
  bool legacy_mode = false;

  /// Throws unless depth >= max_negatives_per_positive >= 1 and cap >= 1.
  void validate() const;
};

/// Passage ids of the top-`depth` BM25 results, in rank order.
std::vector<std::string> candidate_pool(const InvertedIndex& index,
                                        std::string_view query_text,
                                        std::size_t depth);

using RelevantPool = std::set<std::string, std::less<>>;

/// Uniform sample without replacement of min(max_n, |eligible|) ids from the
/// candidates that are not in `relevant_pool`. The output order is the draw
/// order; candidate rank positions play no role beyond defining the pool.
std::vector<std::string> sample_negatives(std::span<const std::string> candidates,
                                          const RelevantPool& relevant_pool,
                                          std::size_t max_n, Rng& rng);

/// Per-query stream: seed xor FNV-1a(query id).
Rng query_rng(std::uint64_t seed, std::string_view query_id);

struct GenerationReport {
  std::size_t queries_seen = 0;
  std::size_t queries_without_qrels = 0;
  std::size_t queries_without_positives = 0;
  std::size_t queries_without_negatives = 0;
  std::size_t positive_pairs = 0;
  std::size_t triples_generated = 0;
  std::size_t triples_written = 0;
};

struct GenerationResult {
  std::vector<TrainingTriple> triples;
  GenerationReport report;
};

/// For every (query, positive) pair draws up to max_n negatives from the
/// query's BM25 candidates minus its whole judged pool (any grade), then
/// shuffles all triples with `seed` and keeps the first `triple_cap`.
/// Queries without judgments or negatives are skipped and counted. The
/// output is fully determined by the inputs and the seed, independent of
/// `threads`. Throws when no triple is produced.
GenerationResult generate_triples(const QuerySet& queries, const Qrels& qrels,
                                  const InvertedIndex& index,
                                  const SamplingConfig& config, unsigned threads = 1);

/// `query_id<TAB>positive_id<TAB>negative_id`.
void write_triples(std::span<const TrainingTriple> triples, std::ostream& out);
void write_triples(std::span<const TrainingTriple> triples,
                   const std::filesystem::path& path);
std::vector<TrainingTriple> load_triples(const std::filesystem::path& path);

/// `query_text<TAB>positive_text<TAB>negative_text`. Throws on unknown ids.
void write_text_triples(std::span<const TrainingTriple> triples,
                        const QuerySet& queries, const PassageStore& passages,
                        std::ostream& out);

}  // namespace plab
