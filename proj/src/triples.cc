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

#include "plab/triples.hpp"

#include <algorithm>

#include "plab/detail/tsv.hpp"
#include "plab/error.hpp"
#include "plab/parallel.hpp"

namespace plab {

void SamplingConfig::validate() const {
  if (max_negatives_per_positive < 1) {
    throw Error(ErrorKind::kInvalidArgument, "max negatives per positive must be >= 1");
  }
  if (candidate_depth < max_negatives_per_positive) {
    throw Error(ErrorKind::kInvalidArgument,
                "candidate depth must be >= max negatives per positive");
  }
  if (triple_cap < 1) throw Error(ErrorKind::kInvalidArgument, "triple cap must be >= 1");
}

std::vector<std::string> candidate_pool(const InvertedIndex& index,
                                        std::string_view query_text, std::size_t depth) {
  auto ranking = search(index, query_text, depth);
  std::vector<std::string> ids;
  ids.reserve(ranking.size());
  for (auto& e : ranking) ids.push_back(std::move(e.passage_id));
  return ids;
}

std::vector<std::string> sample_negatives(std::span<const std::string> candidates,
                                          const RelevantPool& relevant_pool,
                                          std::size_t max_n, Rng& rng) {
  std::vector<const std::string*> eligible;
  eligible.reserve(candidates.size());
  for (const auto& c : candidates) {
    if (!relevant_pool.contains(c)) eligible.push_back(&c);
  }
  const std::size_t n = std::min(max_n, eligible.size());
  // Partial Fisher-Yates: the first n slots become a uniform n-subset.
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(eligible.size() - i));
    std::swap(eligible[i], eligible[j]);
  }
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(*eligible[i]);
  return out;
}

Rng query_rng(std::uint64_t seed, std::string_view query_id) {
  return Rng(seed ^ fnv1a64(query_id));
}

namespace {

enum class QueryOutcome { kOk, kNoQrels, kNoPositives, kNoNegatives };

struct QueryTriples {
  QueryOutcome outcome = QueryOutcome::kOk;
  std::size_t positives = 0;
  std::vector<TrainingTriple> triples;
};

QueryTriples triples_for_query(const Query& query, const Qrels& qrels,
                               const InvertedIndex& index, const SamplingConfig& config) {
  QueryTriples result;
  const auto* judgments = qrels.judgments(query.id);
  if (judgments == nullptr) {
    result.outcome = QueryOutcome::kNoQrels;
    return result;
  }
  std::vector<std::string> positives;
  RelevantPool pool;
  for (const auto& [pid, grade] : *judgments) {
    pool.insert(pid);
    if (grade >= 1) positives.push_back(pid);
  }
  if (positives.empty()) {
    result.outcome = QueryOutcome::kNoPositives;
    return result;
  }
  result.positives = positives.size();

  const auto candidates = candidate_pool(index, query.text, config.candidate_depth);
  auto rng = query_rng(config.seed, query.id);
  for (const auto& positive : positives) {
    std::vector<std::string> negatives;
    if (config.legacy_mode) {
      negatives = sample_negatives(candidates, RelevantPool{positive},
                                   config.max_negatives_per_positive, rng);
    } else {
      negatives = sample_negatives(candidates, pool, config.max_negatives_per_positive, rng);
    }
    for (auto& negative : negatives) {
      result.triples.push_back({query.id, positive, std::move(negative)});
    }
  }
  if (result.triples.empty()) result.outcome = QueryOutcome::kNoNegatives;
  return result;
}

}  // namespace

GenerationResult generate_triples(const QuerySet& queries, const Qrels& qrels,
                                  const InvertedIndex& index, const SamplingConfig& config,
                                  unsigned threads) {
  config.validate();

  // Query id order fixes the merge order regardless of input order.
  std::vector<const Query*> order;
  order.reserve(queries.size());
  for (const auto& q : queries) order.push_back(&q);
  std::sort(order.begin(), order.end(),
            [](const Query* a, const Query* b) { return a->id < b->id; });

  std::vector<QueryTriples> per_query(order.size());
  parallel_for(order.size(), threads, [&](std::size_t i) {
    per_query[i] = triples_for_query(*order[i], qrels, index, config);
  });

  GenerationResult result;
  auto& report = result.report;
  report.queries_seen = order.size();
  for (auto& q : per_query) {
    switch (q.outcome) {
      case QueryOutcome::kNoQrels:
        ++report.queries_without_qrels;
        break;
      case QueryOutcome::kNoPositives:
        ++report.queries_without_positives;
        break;
      case QueryOutcome::kNoNegatives:
        ++report.queries_without_negatives;
        break;
      case QueryOutcome::kOk:
        break;
    }
    report.positive_pairs += q.positives;
    for (auto& t : q.triples) result.triples.push_back(std::move(t));
  }
  report.triples_generated = result.triples.size();

  if (report.queries_without_qrels > 0) {
    warn(std::to_string(report.queries_without_qrels) +
         " queries have no judgments and were skipped");
  }
  const std::size_t with_positives = report.queries_seen - report.queries_without_qrels -
                                     report.queries_without_positives;
  if (with_positives > 0 && report.queries_without_negatives * 10 > with_positives) {
    warn(std::to_string(report.queries_without_negatives) + " of " +
         std::to_string(with_positives) +
         " queries with positives had no eligible negatives (more than 10%)");
  }
  if (result.triples.empty()) {
    throw Error(ErrorKind::kEmpty, "no training triples were produced");
  }

  Rng shuffle_rng(config.seed);
  shuffle(std::span(result.triples), shuffle_rng);
  if (result.triples.size() > config.triple_cap) result.triples.resize(config.triple_cap);
  report.triples_written = result.triples.size();
  return result;
}

void write_triples(std::span<const TrainingTriple> triples, std::ostream& out) {
  for (const auto& t : triples) {
    out << t.query_id << '\t' << t.positive_id << '\t' << t.negative_id << '\n';
  }
}

void write_triples(std::span<const TrainingTriple> triples,
                   const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  write_triples(triples, out);
}

std::vector<TrainingTriple> load_triples(const std::filesystem::path& path) {
  std::vector<TrainingTriple> triples;
  detail::for_each_line(path, [&](std::size_t line_no, std::string_view line) {
    if (line.empty()) return;
    auto f = detail::split(line, '\t');
    if (f.size() != 3 || f[0].empty() || f[1].empty() || f[2].empty()) {
      throw Error(ErrorKind::kFormat,
                  detail::location(path, line_no) +
                      ": expected query_id<TAB>positive_id<TAB>negative_id");
    }
    triples.push_back({std::string(f[0]), std::string(f[1]), std::string(f[2])});
  });
  return triples;
}

void write_text_triples(std::span<const TrainingTriple> triples, const QuerySet& queries,
                        const PassageStore& passages, std::ostream& out) {
  auto passage_text = [&](const std::string& id) -> const std::string& {
    const auto* p = passages.find(id);
    if (p == nullptr) throw Error(ErrorKind::kNotFound, "unknown passage id '" + id + "'");
    return p->text;
  };
  for (const auto& t : triples) {
    const auto* q = queries.find(t.query_id);
    if (q == nullptr) {
      throw Error(ErrorKind::kNotFound, "unknown query id '" + t.query_id + "'");
    }
    out << detail::sanitize_cell(q->text) << '\t'
        << detail::sanitize_cell(passage_text(t.positive_id)) << '\t'
        << detail::sanitize_cell(passage_text(t.negative_id)) << '\n';
  }
}

}  // namespace plab
