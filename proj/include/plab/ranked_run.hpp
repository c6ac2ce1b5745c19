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
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace plab {

struct ScoredPassage {
  std::string passage_id;
  double score = 0.0;

  friend bool operator==(const ScoredPassage&, const ScoredPassage&) = default;
};

/// Rank order: higher score first, ties by ascending passage id.
inline bool ranks_before(const ScoredPassage& a, const ScoredPassage& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.passage_id < b.passage_id;
}

/// One query's result list; kept in ranks_before order.
using Ranking = std::vector<ScoredPassage>;

/// Sorts into rank order and rejects duplicate passages.
void normalize_ranking(Ranking& ranking, std::string_view query_id);

/// Per-query ranked lists, keyed (and written) in query id order.
struct RankedRun {
  std::string name = "run";
  std::string stage;
  std::map<std::string, Ranking, std::less<>> queries;

  const Ranking* find(std::string_view query_id) const {
    auto it = queries.find(query_id);
    return it == queries.end() ? nullptr : &it->second;
  }

  friend bool operator==(const RankedRun&, const RankedRun&) = default;
};

/// TREC run format: `qid Q0 pid rank score run_name`, ranks from 1. Scores
/// use the shortest round-trip decimal form.
void write_trec_run(const RankedRun& run, std::ostream& out);
void write_trec_run(const RankedRun& run, const std::filesystem::path& path);

/// Lines may come in any order; each query's list is re-sorted by score with
/// the passage id tie-break. The rank column is informational only.
RankedRun load_trec_run(const std::filesystem::path& path);

/// Keeps the first `depth` entries of every query.
RankedRun truncate_run(const RankedRun& run, std::size_t depth);

}  // namespace plab
