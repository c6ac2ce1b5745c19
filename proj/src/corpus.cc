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

#include "plab/corpus.hpp"

#include <algorithm>
#include <fstream>

#include "plab/detail/tsv.hpp"
#include "plab/error.hpp"

namespace plab {

namespace {

struct IdText {
  std::string id;
  std::string text;
};

std::vector<IdText> read_id_text(const std::filesystem::path& path) {
  std::vector<IdText> rows;
  detail::StringMap<std::size_t> seen;
  detail::for_each_line(path, [&](std::size_t line_no, std::string_view line) {
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw Error(ErrorKind::kFormat, detail::location(path, line_no) +
                                          ": malformed line (expected id<TAB>text)");
    }
    auto id = line.substr(0, tab);
    if (id.empty()) {
      throw Error(ErrorKind::kFormat,
                  detail::location(path, line_no) + ": empty id");
    }
    if (auto it = seen.find(id); it != seen.end()) {
      throw Error(ErrorKind::kFormat, detail::location(path, line_no) +
                                          ": duplicate id '" + std::string(id) +
                                          "' (first seen on line " +
                                          std::to_string(it->second) + ")");
    }
    seen.emplace(std::string(id), line_no);
    rows.push_back({std::string(id), std::string(line.substr(tab + 1))});
  });
  return rows;
}

std::size_t word_count(std::string_view text) {
  return detail::split_whitespace(text).size();
}

}  // namespace

PassageStore::PassageStore(std::vector<Passage> passages)
    : passages_(std::move(passages)) {
  index_.reserve(passages_.size());
  for (std::size_t i = 0; i < passages_.size(); ++i) {
    const auto& id = passages_[i].id;
    if (id.empty()) throw Error(ErrorKind::kInvalidArgument, "empty passage id");
    if (!index_.emplace(id, i).second) {
      throw Error(ErrorKind::kInvalidArgument, "duplicate passage id '" + id + "'");
    }
  }
}

const Passage* PassageStore::find(std::string_view id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &passages_[it->second];
}

std::string_view to_string(QuerySplit split) {
  switch (split) {
    case QuerySplit::kHead:
      return "head";
    case QuerySplit::kTorso:
      return "torso";
    case QuerySplit::kTail:
      return "tail";
    case QuerySplit::kTrain:
      return "train";
    case QuerySplit::kValidation:
      return "validation";
  }
  return "train";
}

QuerySplit parse_split(std::string_view name) {
  for (auto s : {QuerySplit::kHead, QuerySplit::kTorso, QuerySplit::kTail,
                 QuerySplit::kTrain, QuerySplit::kValidation}) {
    if (to_string(s) == name) return s;
  }
  throw Error(ErrorKind::kInvalidArgument,
              "unknown query split '" + std::string(name) +
                  "' (expected head, torso, tail, train or validation)");
}

QuerySet::QuerySet(std::vector<Query> queries) : queries_(std::move(queries)) {
  index_.reserve(queries_.size());
  for (std::size_t i = 0; i < queries_.size(); ++i) {
    const auto& id = queries_[i].id;
    if (id.empty()) throw Error(ErrorKind::kInvalidArgument, "empty query id");
    if (!index_.emplace(id, i).second) {
      throw Error(ErrorKind::kInvalidArgument, "duplicate query id '" + id + "'");
    }
  }
}

const Query* QuerySet::find(std::string_view id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &queries_[it->second];
}

QuerySet QuerySet::merged(const QuerySet& other) const {
  std::vector<Query> all(queries_);
  all.insert(all.end(), other.queries_.begin(), other.queries_.end());
  return QuerySet(std::move(all));
}

PassageStore load_collection(const std::filesystem::path& path) {
  auto rows = read_id_text(path);
  if (rows.empty()) warn("collection '" + path.string() + "' is empty");
  std::vector<Passage> passages;
  passages.reserve(rows.size());
  for (auto& r : rows) passages.push_back({std::move(r.id), std::move(r.text)});
  return PassageStore(std::move(passages));
}

QuerySet load_queries(const std::filesystem::path& path, QuerySplit split) {
  auto rows = read_id_text(path);
  if (rows.empty()) warn("query file '" + path.string() + "' is empty");
  std::vector<Query> queries;
  queries.reserve(rows.size());
  for (auto& r : rows) queries.push_back({std::move(r.id), std::move(r.text), split});
  return QuerySet(std::move(queries));
}

void write_collection(const PassageStore& store, const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  for (const auto& p : store) out << p.id << '\t' << detail::sanitize_cell(p.text) << '\n';
}

void write_queries(const QuerySet& queries, const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  for (const auto& q : queries) out << q.id << '\t' << detail::sanitize_cell(q.text) << '\n';
}

std::vector<ClickRecord> load_clicks(const std::filesystem::path& path) {
  std::vector<ClickRecord> records;
  detail::for_each_line(path, [&](std::size_t line_no, std::string_view line) {
    auto fields = detail::split(line, '\t');
    if (fields.size() != 4 || fields[0].empty() || fields[1].empty()) {
      throw Error(ErrorKind::kFormat,
                  detail::location(path, line_no) +
                      ": expected query_id<TAB>passage_id<TAB>impressions<TAB>clicks");
    }
    ClickRecord r{std::string(fields[0]), std::string(fields[1]), 0, 0};
    try {
      r.impressions = detail::parse_u64(fields[2], "impressions");
      r.clicks = detail::parse_u64(fields[3], "clicks");
    } catch (const Error& e) {
      throw Error(ErrorKind::kFormat, detail::location(path, line_no) + ": " + e.what());
    }
    if (r.impressions == 0 || r.clicks > r.impressions) {
      throw Error(ErrorKind::kFormat,
                  detail::location(path, line_no) +
                      ": need impressions >= 1 and clicks <= impressions");
    }
    records.push_back(std::move(r));
  });
  return records;
}

void write_clicks(std::span<const ClickRecord> records,
                  const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  for (const auto& r : records) {
    out << r.query_id << '\t' << r.passage_id << '\t' << r.impressions << '\t'
        << r.clicks << '\n';
  }
}

double ctr(const ClickRecord& record) {
  if (record.impressions == 0) {
    throw Error(ErrorKind::kInvalidArgument,
                "click record (" + record.query_id + ", " + record.passage_id +
                    ") has zero impressions");
  }
  if (record.clicks > record.impressions) {
    throw Error(ErrorKind::kInvalidArgument,
                "click record (" + record.query_id + ", " + record.passage_id +
                    ") has more clicks than impressions");
  }
  return static_cast<double>(record.clicks) / static_cast<double>(record.impressions);
}

void Qrels::set(std::string_view query_id, std::string_view passage_id, int grade) {
  if (grade < 0) {
    throw Error(ErrorKind::kInvalidArgument, "negative relevance grade");
  }
  auto it = by_query_.find(query_id);
  if (it == by_query_.end()) it = by_query_.emplace(std::string(query_id), Judgments{}).first;
  it->second.insert_or_assign(std::string(passage_id), grade);
}

std::optional<int> Qrels::grade(std::string_view query_id,
                                std::string_view passage_id) const {
  const auto* j = judgments(query_id);
  if (j == nullptr) return std::nullopt;
  auto it = j->find(passage_id);
  if (it == j->end()) return std::nullopt;
  return it->second;
}

const Qrels::Judgments* Qrels::judgments(std::string_view query_id) const {
  auto it = by_query_.find(query_id);
  return it == by_query_.end() ? nullptr : &it->second;
}

std::size_t Qrels::entry_count() const {
  std::size_t n = 0;
  for (const auto& [q, j] : by_query_) n += j.size();
  return n;
}

LabelMode parse_label_mode(std::string_view name) {
  if (name == "raw") return LabelMode::kRaw;
  if (name == "dctr") return LabelMode::kDctr;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown label mode '" + std::string(name) + "' (expected raw or dctr)");
}

Qrels build_qrels_from_clicks(std::span<const ClickRecord> records, LabelMode mode,
                              std::span<const double> thresholds) {
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > 0.0 && thresholds[i] <= 1.0)) {
      throw Error(ErrorKind::kInvalidArgument, "dctr thresholds must lie in (0, 1]");
    }
    if (i > 0 && !(thresholds[i - 1] < thresholds[i])) {
      throw Error(ErrorKind::kInvalidArgument,
                  "dctr thresholds must be strictly ascending");
    }
  }

  std::map<std::pair<std::string, std::string>, ClickRecord> merged;
  for (const auto& r : records) {
    auto key = std::make_pair(r.query_id, r.passage_id);
    auto [it, inserted] = merged.try_emplace(std::move(key), r);
    if (!inserted) {
      it->second.impressions += r.impressions;
      it->second.clicks += r.clicks;
    }
  }

  Qrels qrels;
  for (const auto& [key, r] : merged) {
    if (mode == LabelMode::kRaw) {
      if (r.clicks >= 1) qrels.set(r.query_id, r.passage_id, 1);
      continue;
    }
    const double rate = ctr(r);
    const auto grade = std::count_if(thresholds.begin(), thresholds.end(),
                                     [rate](double t) { return t <= rate; });
    qrels.set(r.query_id, r.passage_id, static_cast<int>(grade));
  }
  return qrels;
}

Qrels load_qrels(const std::filesystem::path& path) {
  Qrels qrels;
  detail::for_each_line(path, [&](std::size_t line_no, std::string_view line) {
    auto fields = detail::split_whitespace(line);
    if (fields.empty()) return;
    if (fields.size() != 4) {
      throw Error(ErrorKind::kFormat,
                  detail::location(path, line_no) + ": expected 'qid 0 pid grade'");
    }
    long long grade = 0;
    try {
      grade = detail::parse_i64(fields[3], "grade");
    } catch (const Error& e) {
      throw Error(ErrorKind::kFormat, detail::location(path, line_no) + ": " + e.what());
    }
    if (grade < 0) {
      throw Error(ErrorKind::kFormat,
                  detail::location(path, line_no) + ": negative grade");
    }
    qrels.set(fields[0], fields[2], static_cast<int>(grade));
  });
  return qrels;
}

void write_qrels(const Qrels& qrels, std::ostream& out) {
  for (const auto& [qid, judgments] : qrels) {
    for (const auto& [pid, grade] : judgments) {
      out << qid << " 0 " << pid << ' ' << grade << '\n';
    }
  }
}

void write_qrels(const Qrels& qrels, const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  write_qrels(qrels, out);
}

CorpusStats corpus_stats(const PassageStore& store, const QuerySet& queries) {
  CorpusStats stats;
  stats.passage_count = store.size();
  stats.query_count = queries.size();
  std::size_t passage_words = 0;
  for (const auto& p : store) {
    const auto n = word_count(p.text);
    passage_words += n;
    if (n == 0) ++stats.empty_text_count;
  }
  std::size_t query_words = 0;
  for (const auto& q : queries) query_words += word_count(q.text);
  if (!store.empty()) {
    stats.avg_passage_words =
        static_cast<double>(passage_words) / static_cast<double>(store.size());
  }
  if (!queries.empty()) {
    stats.avg_query_words =
        static_cast<double>(query_words) / static_cast<double>(queries.size());
  }
  return stats;
}

void SplitMap::assign(std::string_view query_id, std::string_view split) {
  auto it = by_query_.find(query_id);
  if (it != by_query_.end()) {
    if (it->second != split) {
      throw Error(ErrorKind::kInvalidArgument,
                  "query '" + std::string(query_id) + "' assigned to overlapping splits '" +
                      it->second + "' and '" + std::string(split) + "'");
    }
    return;
  }
  by_query_.emplace(std::string(query_id), std::string(split));
  if (std::find(order_.begin(), order_.end(), split) == order_.end()) {
    order_.emplace_back(split);
  }
}

const std::string* SplitMap::split_of(std::string_view query_id) const {
  auto it = by_query_.find(query_id);
  return it == by_query_.end() ? nullptr : &it->second;
}

SplitMap split_map_from(const QuerySet& queries) {
  SplitMap splits;
  for (const auto& q : queries) splits.assign(q.id, to_string(q.split));
  return splits;
}

SplitMap load_split_map(const std::filesystem::path& path) {
  SplitMap splits;
  detail::for_each_line(path, [&](std::size_t line_no, std::string_view line) {
    if (line.empty()) return;
    auto fields = detail::split(line, '\t');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw Error(ErrorKind::kFormat,
                  detail::location(path, line_no) + ": expected query_id<TAB>split");
    }
    splits.assign(fields[0], fields[1]);
  });
  return splits;
}

void write_split_map(const SplitMap& splits, const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  for (const auto& [qid, split] : splits) out << qid << '\t' << split << '\n';
}

}  // namespace plab
