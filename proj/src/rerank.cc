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

#include "plab/rerank.hpp"

#include <atomic>

#include "plab/detail/tsv.hpp"
#include "plab/parallel.hpp"

namespace plab {

RankedRun dense_retrieve_all(const VectorStore& passages, const VectorStore& queries,
                             std::size_t k, std::string run_name, unsigned threads) {
  if (queries.dim() != passages.dim()) {
    throw Error(ErrorKind::kInvalidArgument, "query and passage vectors differ in dimension");
  }
  std::vector<Ranking> results(queries.size());
  parallel_for(queries.size(), threads, [&](std::size_t i) {
    results[i] = dense_retrieve(passages, queries.row(static_cast<Eigen::Index>(i)), k);
  });
  RankedRun run{std::move(run_name), "dense", {}};
  for (std::size_t i = 0; i < queries.size(); ++i) {
    run.queries.emplace(queries.ids()[i], std::move(results[i]));
  }
  return run;
}

DenseScorer::DenseScorer(const VectorStore& queries, const VectorStore& passages)
    : queries_(queries), passages_(passages) {
  if (queries.dim() != passages.dim()) {
    throw Error(ErrorKind::kInvalidArgument, "query and passage vectors differ in dimension");
  }
}

std::optional<double> DenseScorer::score(std::string_view query_id,
                                         const ScoredPassage& candidate) const {
  const auto q = queries_.find(query_id);
  const auto d = passages_.find(candidate.passage_id);
  if (!q || !d) return std::nullopt;
  return dense_score(queries_.row(*q), passages_.row(*d));
}

LateInteractionScorer::LateInteractionScorer(const TokenMatrixStore& queries,
                                             const TokenMatrixStore& passages)
    : queries_(queries), passages_(passages) {
  if (queries.dim() != passages.dim()) {
    throw Error(ErrorKind::kInvalidArgument, "query and passage token matrices differ in dimension");
  }
}

std::optional<double> LateInteractionScorer::score(std::string_view query_id,
                                                   const ScoredPassage& candidate) const {
  const auto* q = queries_.find(query_id);
  const auto* d = passages_.find(candidate.passage_id);
  if (q == nullptr || d == nullptr) return std::nullopt;
  return late_interaction_score(*q, *d);
}

KernelScorer::KernelScorer(const TokenMatrixStore& queries, const TokenMatrixStore& passages,
                           KernelBank bank, KernelWeights weights)
    : queries_(queries), passages_(passages), bank_(std::move(bank)), weights_(std::move(weights)) {
  bank_.validate();
  if (weights_.w.size() != bank_.size()) {
    throw Error(ErrorKind::kInvalidArgument, "kernel weights do not match the kernel bank");
  }
  if (queries.dim() != passages.dim()) {
    throw Error(ErrorKind::kInvalidArgument, "query and passage token matrices differ in dimension");
  }
}

std::optional<double> KernelScorer::score(std::string_view query_id,
                                          const ScoredPassage& candidate) const {
  const auto* q = queries_.find(query_id);
  const auto* d = passages_.find(candidate.passage_id);
  if (q == nullptr || d == nullptr) return std::nullopt;
  return kernel_score(kernel_features(*q, *d, bank_), weights_);
}

void ExternalScores::set(std::string_view query_id, std::string_view passage_id, double score) {
  auto it = scores_.find(query_id);
  if (it == scores_.end()) it = scores_.emplace(std::string(query_id), detail::StringMap<double>{}).first;
  if (!it->second.emplace(std::string(passage_id), score).second) {
    throw Error(ErrorKind::kFormat, "repeated score for (" + std::string(query_id) + ", " +
                                        std::string(passage_id) + ")");
  }
  ++size_;
}

std::optional<double> ExternalScores::find(std::string_view query_id,
                                           std::string_view passage_id) const {
  auto q = scores_.find(query_id);
  if (q == scores_.end()) return std::nullopt;
  auto p = q->second.find(passage_id);
  if (p == q->second.end()) return std::nullopt;
  return p->second;
}

ExternalScores load_external_scores(const std::filesystem::path& path) {
  ExternalScores scores;
  detail::for_each_line(path, [&](std::size_t line_no, std::string_view line) {
    if (line.empty()) return;
    auto f = detail::split(line, '\t');
    if (f.size() != 3 || f[0].empty() || f[1].empty()) {
      throw Error(ErrorKind::kFormat,
                  detail::location(path, line_no) + ": expected query_id<TAB>passage_id<TAB>score");
    }
    try {
      scores.set(f[0], f[1], detail::parse_double(f[2], "score"));
    } catch (const Error& e) {
      throw Error(ErrorKind::kFormat, detail::location(path, line_no) + ": " + e.what());
    }
  });
  return scores;
}

MissingPolicy parse_missing_policy(std::string_view name) {
  if (name == "error") return MissingPolicy::kError;
  if (name == "skip") return MissingPolicy::kSkip;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown missing-embedding policy '" + std::string(name) + "' (expected error or skip)");
}

RankedRun rerank(const RankedRun& first_stage, std::size_t depth, const Scorer& scorer,
                 MissingPolicy on_missing, RerankStats* stats, unsigned threads) {
  if (depth == 0) throw Error(ErrorKind::kInvalidArgument, "re-ranking depth must be >= 1");

  std::vector<const std::pair<const std::string, Ranking>*> entries;
  entries.reserve(first_stage.queries.size());
  for (const auto& entry : first_stage.queries) entries.push_back(&entry);

  std::vector<Ranking> results(entries.size());
  std::atomic<std::size_t> rescored{0};
  std::atomic<std::size_t> skipped{0};
  parallel_for(entries.size(), threads, [&](std::size_t i) {
    const auto& [qid, ranking] = *entries[i];
    const std::size_t n = std::min(depth, ranking.size());
    Ranking& out = results[i];
    out.reserve(n);
    for (std::size_t r = 0; r < n; ++r) {
      const auto value = scorer.score(qid, ranking[r]);
      if (!value) {
        if (on_missing == MissingPolicy::kError) {
          throw Error(ErrorKind::kNotFound, scorer.name() + " scorer has no representation for (" +
                                                qid + ", " + ranking[r].passage_id + ")");
        }
        ++skipped;
        continue;
      }
      out.push_back({ranking[r].passage_id, *value});
      ++rescored;
    }
    std::sort(out.begin(), out.end(), ranks_before);
  });

  RankedRun run{first_stage.name + "+" + scorer.name(), "rerank", {}};
  for (std::size_t i = 0; i < entries.size(); ++i) {
    run.queries.emplace(entries[i]->first, std::move(results[i]));
  }
  if (stats != nullptr) {
    stats->rescored = rescored.load();
    stats->skipped = skipped.load();
  }
  return run;
}

}  // namespace plab
