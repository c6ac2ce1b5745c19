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
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "plab/corpus.hpp"
#include "plab/ranked_run.hpp"

namespace plab {

// Single-query metrics. `judgments` may be nullptr (query has no qrels), in
// which case every result is unjudged. Unjudged results count as not
// relevant; "relevant" means grade >= 1.

/// 1 / rank of the first relevant result within the top k, else 0.
double reciprocal_rank(const Ranking& ranking, const Qrels::Judgments* judgments,
                       std::size_t k);

/// DCG@k with gain 2^grade - 1 and discount 1 / log2(rank + 1), divided by
/// the ideal DCG@k over all judged passages of the query. 0 when the ideal
/// DCG is 0.
double ndcg(const Ranking& ranking, const Qrels::Judgments* judgments, std::size_t k);

/// Relevant passages in the top k over all relevant passages; 0 when the
/// query has none.
double recall(const Ranking& ranking, const Qrels::Judgments* judgments, std::size_t k);

/// Fraction of the top-k results (of those returned) that have any qrels
/// entry, grade 0 included. 0 for an empty ranking.
double judged(const Ranking& ranking, const Qrels::Judgments* judgments, std::size_t k);

std::size_t relevant_count(const Qrels::Judgments* judgments);

/// What to do with queries that have no relevant passage: leave them out of
/// the mean (default) or average them in as 0. Judged@k never excludes.
enum class ZeroPositivePolicy { kExclude, kScoreZero };

struct MetricResult {
  /// Every query in the run; excluded queries carry 0.
  std::map<std::string, double, std::less<>> per_query;
  double mean = 0.0;
  std::size_t counted = 0;
  std::size_t excluded = 0;
  /// Run queries that have no qrels entry at all.
  std::size_t unjudged_queries = 0;
};

MetricResult mrr_at_k(const RankedRun& run, const Qrels& qrels, std::size_t k = 10,
                      ZeroPositivePolicy policy = ZeroPositivePolicy::kExclude);
MetricResult ndcg_at_k(const RankedRun& run, const Qrels& qrels, std::size_t k = 10,
                       ZeroPositivePolicy policy = ZeroPositivePolicy::kExclude);
MetricResult recall_at_k(const RankedRun& run, const Qrels& qrels, std::size_t k,
                         ZeroPositivePolicy policy = ZeroPositivePolicy::kExclude);
MetricResult judged_at_k(const RankedRun& run, const Qrels& qrels, std::size_t k = 10);

struct MetricsConfig {
  /// Cutoff for J, nDCG and MRR.
  std::size_t rank_cutoff = 10;
  std::vector<std::size_t> recall_cutoffs{100, 200, 1000};
  ZeroPositivePolicy zero_positive = ZeroPositivePolicy::kExclude;

  /// First cutoff -> rank_cutoff, the rest -> recall cutoffs. A single
  /// cutoff is used for both.
  static MetricsConfig from_cutoffs(const std::vector<std::size_t>& cutoffs);
};

struct QueryMetrics {
  std::string query_id;
  std::string split;
  bool has_positive = false;
  /// Same order as MetricsReport::metric_names.
  std::vector<double> values;
};

struct SplitSummary {
  std::string split;
  std::size_t queries = 0;
  std::size_t without_positives = 0;
  std::vector<double> means;
};

struct MetricsReport {
  /// J@k, nDCG@k, MRR@k, then R@c for each recall cutoff.
  std::vector<std::string> metric_names;
  /// Splits in split-map order followed by "all".
  std::vector<SplitSummary> splits;
  /// Sorted by query id.
  std::vector<QueryMetrics> queries;
  std::size_t unassigned_run_queries = 0;
  ZeroPositivePolicy zero_positive = ZeroPositivePolicy::kExclude;

  const SplitSummary* split(std::string_view name) const;
  /// Throws for an unknown split or metric.
  double value(std::string_view split, std::string_view metric) const;
};

/// Evaluates every query of the split map (queries missing from the run get
/// an empty ranking). With an empty split map every run query goes to "all".
MetricsReport evaluate_run(const RankedRun& run, const Qrels& qrels, const SplitMap& splits,
                           const MetricsConfig& config = {});

/// Summary table, a blank line, then the per-query table. Excluded values
/// are written as NA.
void write_report_tsv(const MetricsReport& report, std::ostream& out);
/// Same values as JSON text.
std::string report_to_json(const MetricsReport& report);

}  // namespace plab
