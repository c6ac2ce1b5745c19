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

#include "plab/sweep.hpp"

#include <iomanip>

#include "plab/random.hpp"

namespace plab {

std::optional<double> OracleScorer::score(std::string_view query_id,
                                          const ScoredPassage& candidate) const {
  return static_cast<double>(qrels_.grade(query_id, candidate.passage_id).value_or(0));
}

CorruptedScorer::CorruptedScorer(const Qrels& qrels, double rate, std::uint64_t seed)
    : qrels_(qrels), rate_(rate), seed_(seed) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "corruption rate must lie in [0, 1]");
  }
}

std::optional<double> CorruptedScorer::score(std::string_view query_id,
                                             const ScoredPassage& candidate) const {
  if (qrels_.grade(query_id, candidate.passage_id).value_or(0) >= 1) return candidate.score;
  std::string key(query_id);
  key += '\t';
  key += candidate.passage_id;
  Rng rng(seed_ ^ fnv1a64(key));
  if (rng.uniform() < rate_) return 1e9 + candidate.score;
  return candidate.score;
}

std::vector<SweepRow> depth_sweep(const RankedRun& first_stage, const Scorer& scorer,
                                  std::span<const std::size_t> depths, const Qrels& qrels,
                                  const SplitMap& splits, const MetricsConfig& config,
                                  MissingPolicy on_missing, unsigned threads) {
  if (depths.empty()) throw Error(ErrorKind::kInvalidArgument, "depth sweep needs at least one depth");
  for (std::size_t i = 1; i < depths.size(); ++i) {
    if (!(depths[i - 1] < depths[i])) {
      throw Error(ErrorKind::kInvalidArgument, "sweep depths must be strictly ascending");
    }
  }
  std::vector<SweepRow> rows;
  for (auto depth : depths) {
    SweepRow row;
    row.depth = depth;
    const auto reranked = rerank(first_stage, depth, scorer, on_missing, &row.stats, threads);
    row.report = evaluate_run(reranked, qrels, splits, config);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_sweep_tsv(std::span<const SweepRow> rows, std::ostream& out) {
  if (rows.empty()) return;
  const auto flags = out.flags();
  out << std::fixed << std::setprecision(6);
  out << "depth\tsplit\tqueries";
  for (const auto& n : rows.front().report.metric_names) out << '\t' << n;
  out << '\n';
  for (const auto& row : rows) {
    for (const auto& s : row.report.splits) {
      out << row.depth << '\t' << s.split << '\t' << s.queries;
      for (double v : s.means) out << '\t' << v;
      out << '\n';
    }
  }
  out.flags(flags);
}

}  // namespace plab
