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
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "plab/detail/string_map.hpp"

namespace plab {

struct Passage {
  std::string id;
  std::string text;
};

/// Immutable id -> text collection. Iteration follows insertion (file) order.
class PassageStore {
 public:
  PassageStore() = default;
  /// Throws on an empty or duplicate id.
  explicit PassageStore(std::vector<Passage> passages);

  std::size_t size() const { return passages_.size(); }
  bool empty() const { return passages_.empty(); }
  const Passage& operator[](std::size_t i) const { return passages_[i]; }
  const Passage* find(std::string_view id) const;

  auto begin() const { return passages_.begin(); }
  auto end() const { return passages_.end(); }

 private:
  std::vector<Passage> passages_;
  detail::StringMap<std::size_t> index_;
};

enum class QuerySplit { kHead, kTorso, kTail, kTrain, kValidation };

std::string_view to_string(QuerySplit split);
QuerySplit parse_split(std::string_view name);

struct Query {
  std::string id;
  std::string text;
  QuerySplit split = QuerySplit::kTrain;
};

class QuerySet {
 public:
  QuerySet() = default;
  explicit QuerySet(std::vector<Query> queries);

  std::size_t size() const { return queries_.size(); }
  bool empty() const { return queries_.empty(); }
  const Query& operator[](std::size_t i) const { return queries_[i]; }
  const Query* find(std::string_view id) const;

  /// Union of two sets; a query id present in both is an error.
  QuerySet merged(const QuerySet& other) const;

  auto begin() const { return queries_.begin(); }
  auto end() const { return queries_.end(); }

 private:
  std::vector<Query> queries_;
  detail::StringMap<std::size_t> index_;
};

/// Reads `id<TAB>text` lines. Duplicate ids and lines without a tab are
/// errors that name the id or the line number.
PassageStore load_collection(const std::filesystem::path& path);
QuerySet load_queries(const std::filesystem::path& path, QuerySplit split);

void write_collection(const PassageStore& store, const std::filesystem::path& path);
void write_queries(const QuerySet& queries, const std::filesystem::path& path);

struct ClickRecord {
  std::string query_id;
  std::string passage_id;
  std::uint64_t impressions = 0;
  std::uint64_t clicks = 0;
};

/// Reads `query_id<TAB>passage_id<TAB>impressions<TAB>clicks`.
std::vector<ClickRecord> load_clicks(const std::filesystem::path& path);
void write_clicks(std::span<const ClickRecord> records,
                  const std::filesystem::path& path);

/// Click-through rate clicks / impressions. Throws when impressions == 0 or
/// clicks > impressions.
double ctr(const ClickRecord& record);

/// Graded judgments per query. Grade 0 entries are "judged, not relevant".
class Qrels {
 public:
  using Judgments = std::map<std::string, int, std::less<>>;

  void set(std::string_view query_id, std::string_view passage_id, int grade);

  std::optional<int> grade(std::string_view query_id,
                           std::string_view passage_id) const;
  /// nullptr when the query has no entries.
  const Judgments* judgments(std::string_view query_id) const;

  std::size_t query_count() const { return by_query_.size(); }
  std::size_t entry_count() const;

  auto begin() const { return by_query_.begin(); }
  auto end() const { return by_query_.end(); }

  friend bool operator==(const Qrels&, const Qrels&) = default;

 private:
  std::map<std::string, Judgments, std::less<>> by_query_;
};

enum class LabelMode { kRaw, kDctr };

LabelMode parse_label_mode(std::string_view name);

inline constexpr double kDefaultDctrThresholds[] = {0.1, 0.3};

/// Derives judgments from click counts. Repeated (query, passage) records are
/// summed first.
///   raw:  grade 1 when clicks >= 1, otherwise no entry.
///   dctr: grade = number of thresholds <= ctr; grade-0 entries are kept.
/// Thresholds must be strictly ascending and lie in (0, 1].
Qrels build_qrels_from_clicks(std::span<const ClickRecord> records,
                              LabelMode mode,
                              std::span<const double> thresholds);

/// TREC qrels: `qid 0 pid grade`, whitespace separated.
Qrels load_qrels(const std::filesystem::path& path);
void write_qrels(const Qrels& qrels, std::ostream& out);
void write_qrels(const Qrels& qrels, const std::filesystem::path& path);

struct CorpusStats {
  std::size_t passage_count = 0;
  std::size_t query_count = 0;
  double avg_passage_words = 0.0;
  double avg_query_words = 0.0;
  std::size_t empty_text_count = 0;
};

/// Word counts use whitespace splitting, not the index tokenizer.
CorpusStats corpus_stats(const PassageStore& store, const QuerySet& queries);

/// Assigns every evaluated query to exactly one named split.
class SplitMap {
 public:
  /// Re-assigning a query to a different split throws.
  void assign(std::string_view query_id, std::string_view split);

  /// nullptr when the query is unassigned.
  const std::string* split_of(std::string_view query_id) const;
  bool empty() const { return by_query_.empty(); }
  std::size_t size() const { return by_query_.size(); }

  /// Split names in first-seen order.
  const std::vector<std::string>& splits() const { return order_; }

  auto begin() const { return by_query_.begin(); }
  auto end() const { return by_query_.end(); }

 private:
  std::map<std::string, std::string, std::less<>> by_query_;
  std::vector<std::string> order_;
};

SplitMap split_map_from(const QuerySet& queries);
/// Reads `query_id<TAB>split` lines.
SplitMap load_split_map(const std::filesystem::path& path);
void write_split_map(const SplitMap& splits, const std::filesystem::path& path);

}  // namespace plab
