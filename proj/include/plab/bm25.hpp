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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "plab/corpus.hpp"
#include "plab/detail/string_map.hpp"
#include "plab/ranked_run.hpp"
#include "plab/tokenizer.hpp"

namespace plab {

struct Bm25Params {
  double k1 = 0.9;
  double b = 0.4;
};

struct Posting {
  std::uint32_t doc = 0;
  std::uint32_t tf = 0;

  friend bool operator==(const Posting&, const Posting&) = default;
};

/// Term -> postings index over a PassageStore.
///
/// Internal document numbers follow ascending passage id, so postings sorted
/// by document number are also sorted by passage id and the rank tie-break
/// reduces to comparing integers.
class InvertedIndex {
 public:
  /// Throws on an empty store. The result does not depend on `threads`.
  static InvertedIndex build(const PassageStore& store, Bm25Params params = {},
                             Tokenizer tokenizer = {}, unsigned threads = 1);

  /// Persists to `dir/index.bin` behind a versioned text header.
  void save(const std::filesystem::path& dir) const;
  static InvertedIndex load(const std::filesystem::path& dir);

  std::size_t doc_count() const { return doc_ids_.size(); }
  std::size_t term_count() const { return terms_.size(); }
  double avg_doc_length() const { return avg_doc_length_; }
  const Bm25Params& params() const { return params_; }
  const Tokenizer& tokenizer() const { return tokenizer_; }

  /// Empty span for unknown terms.
  std::span<const Posting> postings(std::string_view term) const;
  std::uint32_t document_frequency(std::string_view term) const {
    return static_cast<std::uint32_t>(postings(term).size());
  }

  const std::string& doc_id(std::uint32_t doc) const { return doc_ids_[doc]; }
  std::uint32_t doc_length(std::uint32_t doc) const { return doc_lengths_[doc]; }
  std::optional<std::uint32_t> find_doc(std::string_view passage_id) const;

  /// ln(1 + (N - df + 0.5) / (df + 0.5)); always positive.
  double idf(std::uint32_t df) const;
  /// k1 * (1 - b + b * len / avgdl) for one document.
  double length_norm(std::uint32_t doc) const { return norms_[doc]; }

  /// Sorted term list, mostly for inspection and tests.
  const std::vector<std::string>& terms() const { return terms_; }

  friend bool operator==(const InvertedIndex& a, const InvertedIndex& b);

 private:
  void finalize();

  Bm25Params params_;
  Tokenizer tokenizer_;
  std::vector<std::string> doc_ids_;
  std::vector<std::uint32_t> doc_lengths_;
  std::vector<double> norms_;
  double avg_doc_length_ = 0.0;
  std::vector<std::string> terms_;
  std::vector<std::vector<Posting>> postings_;
  detail::StringMap<std::uint32_t> term_index_;
  detail::StringMap<std::uint32_t> doc_index_;
};

/// Contribution of one query-term occurrence to a document's score.
inline double bm25_term_weight(double idf, std::uint32_t tf, double length_norm,
                               double k1) {
  const double f = static_cast<double>(tf);
  return idf * f * (k1 + 1.0) / (f + length_norm);
}

/// Sums term weights (ascending) over the query tokens, repeats included;
/// terms absent from the passage add nothing. Throws for an unknown id.
double bm25_score(const InvertedIndex& index,
                  std::span<const std::string> query_tokens,
                  std::string_view passage_id);

/// Top-k passages with at least one matching term, in rank order. Scores are
/// bit-identical to bm25_score().
Ranking search_tokens(const InvertedIndex& index,
                      std::span<const std::string> query_tokens, std::size_t k);
Ranking search(const InvertedIndex& index, std::string_view query_text,
               std::size_t k);

/// Runs search() for every query; output is keyed by query id.
RankedRun search_all(const InvertedIndex& index, const QuerySet& queries,
                     std::size_t k, std::string run_name = "bm25",
                     unsigned threads = 1);

}  // namespace plab
