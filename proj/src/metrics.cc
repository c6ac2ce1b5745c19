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

#include "plab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <json.hpp>

#include "plab/error.hpp"

namespace plab {

namespace {

int grade_of(const Qrels::Judgments* judgments, std::string_view pid) {
  if (judgments == nullptr) return -1;
  auto it = judgments->find(pid);
  return it == judgments->end() ? -1 : it->second;
}

double gain(int grade) { return std::exp2(static_cast<double>(grade)) - 1.0; }

double discount(std::size_t rank) { return 1.0 / std::log2(static_cast<double>(rank) + 1.0); }

void require_cutoff(std::size_t k) {
  if (k == 0) throw Error(ErrorKind::kInvalidArgument, "metric cutoff must be >= 1");
}

template <typename Fn>
MetricResult aggregate(const RankedRun& run, const Qrels& qrels, bool excludable,
                       ZeroPositivePolicy policy, Fn&& per_query) {
  MetricResult result;
  double sum = 0.0;
  for (const auto& [qid, ranking] : run.queries) {
    const auto* judgments = qrels.judgments(qid);
    if (judgments == nullptr) ++result.unjudged_queries;
    const bool exclude = excludable && policy == ZeroPositivePolicy::kExclude &&
                         relevant_count(judgments) == 0;
    const double value = per_query(ranking, judgments);
    result.per_query.emplace(qid, exclude ? 0.0 : value);
    if (exclude) {
      ++result.excluded;
      continue;
    }
    sum += value;
    ++result.counted;
  }
  if (result.counted > 0) result.mean = sum / static_cast<double>(result.counted);
  return result;
}

}  // namespace

std::size_t relevant_count(const Qrels::Judgments* judgments) {
  if (judgments == nullptr) return 0;
  return static_cast<std::size_t>(std::count_if(judgments->begin(), judgments->end(),
                                                [](const auto& e) { return e.second >= 1; }));
}

double reciprocal_rank(const Ranking& ranking, const Qrels::Judgments* judgments,
                       std::size_t k) {
  require_cutoff(k);
  const std::size_t n = std::min(k, ranking.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (grade_of(judgments, ranking[i].passage_id) >= 1) return 1.0 / static_cast<double>(i + 1);
  }
  return 0.0;
}

double ndcg(const Ranking& ranking, const Qrels::Judgments* judgments, std::size_t k) {
  require_cutoff(k);
  if (judgments == nullptr) return 0.0;
  std::vector<int> grades;
  grades.reserve(judgments->size());
  for (const auto& [pid, g] : *judgments) grades.push_back(g);
  std::sort(grades.begin(), grades.end(), std::greater<>());
  double ideal = 0.0;
  for (std::size_t i = 0; i < std::min(k, grades.size()); ++i) {
    ideal += gain(grades[i]) * discount(i + 1);
  }
  if (ideal <= 0.0) return 0.0;
  double dcg = 0.0;
  const std::size_t n = std::min(k, ranking.size());
  for (std::size_t i = 0; i < n; ++i) {
    const int g = grade_of(judgments, ranking[i].passage_id);
    if (g > 0) dcg += gain(g) * discount(i + 1);
  }
  return dcg / ideal;
}

double recall(const Ranking& ranking, const Qrels::Judgments* judgments, std::size_t k) {
  require_cutoff(k);
  const std::size_t total = relevant_count(judgments);
  if (total == 0) return 0.0;
  std::size_t found = 0;
  const std::size_t n = std::min(k, ranking.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (grade_of(judgments, ranking[i].passage_id) >= 1) ++found;
  }
  return static_cast<double>(found) / static_cast<double>(total);
}

double judged(const Ranking& ranking, const Qrels::Judgments* judgments, std::size_t k) {
  require_cutoff(k);
  const std::size_t n = std::min(k, ranking.size());
  if (n == 0) return 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (grade_of(judgments, ranking[i].passage_id) >= 0) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(n);
}

MetricResult mrr_at_k(const RankedRun& run, const Qrels& qrels, std::size_t k,
                      ZeroPositivePolicy policy) {
  require_cutoff(k);
  auto r = aggregate(run, qrels, true, policy,
                     [k](const Ranking& rk, const Qrels::Judgments* j) { return reciprocal_rank(rk, j, k); });
  if (r.unjudged_queries > 0) {
    warn(std::to_string(r.unjudged_queries) + " run queries have no qrels (scored 0)");
  }
  return r;
}

MetricResult ndcg_at_k(const RankedRun& run, const Qrels& qrels, std::size_t k,
                       ZeroPositivePolicy policy) {
  require_cutoff(k);
  return aggregate(run, qrels, true, policy,
                   [k](const Ranking& rk, const Qrels::Judgments* j) { return ndcg(rk, j, k); });
}

MetricResult recall_at_k(const RankedRun& run, const Qrels& qrels, std::size_t k,
                         ZeroPositivePolicy policy) {
  require_cutoff(k);
  return aggregate(run, qrels, true, policy,
                   [k](const Ranking& rk, const Qrels::Judgments* j) { return recall(rk, j, k); });
}

MetricResult judged_at_k(const RankedRun& run, const Qrels& qrels, std::size_t k) {
  require_cutoff(k);
  return aggregate(run, qrels, false, ZeroPositivePolicy::kScoreZero,
                   [k](const Ranking& rk, const Qrels::Judgments* j) { return judged(rk, j, k); });
}

MetricsConfig MetricsConfig::from_cutoffs(const std::vector<std::size_t>& cutoffs) {
  if (cutoffs.empty()) throw Error(ErrorKind::kInvalidArgument, "at least one cutoff is required");
  for (auto c : cutoffs) require_cutoff(c);
  MetricsConfig config;
  config.rank_cutoff = cutoffs.front();
  config.recall_cutoffs.assign(cutoffs.size() > 1 ? cutoffs.begin() + 1 : cutoffs.begin(),
                               cutoffs.end());
  return config;
}

const SplitSummary* MetricsReport::split(std::string_view name) const {
  for (const auto& s : splits) {
    if (s.split == name) return &s;
  }
  return nullptr;
}

double MetricsReport::value(std::string_view split_name, std::string_view metric) const {
  const auto* s = split(split_name);
  if (s == nullptr) throw Error(ErrorKind::kNotFound, "no split '" + std::string(split_name) + "'");
  auto it = std::find(metric_names.begin(), metric_names.end(), metric);
  if (it == metric_names.end()) {
    throw Error(ErrorKind::kNotFound, "no metric '" + std::string(metric) + "'");
  }
  return s->means[static_cast<std::size_t>(it - metric_names.begin())];
}

MetricsReport evaluate_run(const RankedRun& run, const Qrels& qrels, const SplitMap& splits,
                           const MetricsConfig& config) {
  require_cutoff(config.rank_cutoff);
  for (auto c : config.recall_cutoffs) require_cutoff(c);

  MetricsReport report;
  report.zero_positive = config.zero_positive;
  const auto k = std::to_string(config.rank_cutoff);
  report.metric_names = {"J@" + k, "nDCG@" + k, "MRR@" + k};
  for (auto c : config.recall_cutoffs) report.metric_names.push_back("R@" + std::to_string(c));

  // query id -> split, sorted by id.
  std::map<std::string, std::string, std::less<>> assignment;
  if (splits.empty()) {
    for (const auto& [qid, ranking] : run.queries) assignment.emplace(qid, "all");
  } else {
    for (const auto& [qid, split] : splits) assignment.emplace(qid, split);
    for (const auto& [qid, ranking] : run.queries) {
      if (!assignment.contains(qid)) ++report.unassigned_run_queries;
    }
    if (report.unassigned_run_queries > 0) {
      warn(std::to_string(report.unassigned_run_queries) +
           " run queries are not in the split map and were ignored");
    }
  }

  const Ranking empty;
  for (const auto& [qid, split] : assignment) {
    const auto* ranking = run.find(qid);
    const auto* judgments = qrels.judgments(qid);
    QueryMetrics row{qid, split, relevant_count(judgments) > 0, {}};
    const Ranking& r = ranking ? *ranking : empty;
    row.values.push_back(judged(r, judgments, config.rank_cutoff));
    row.values.push_back(ndcg(r, judgments, config.rank_cutoff));
    row.values.push_back(reciprocal_rank(r, judgments, config.rank_cutoff));
    for (auto c : config.recall_cutoffs) row.values.push_back(recall(r, judgments, c));
    report.queries.push_back(std::move(row));
  }

  std::vector<std::string> order = splits.empty() ? std::vector<std::string>{} : splits.splits();
  order.push_back("all");
  const std::size_t m = report.metric_names.size();
  for (const auto& name : order) {
    SplitSummary summary{name, 0, 0, std::vector<double>(m, 0.0)};
    std::vector<std::size_t> counted(m, 0);
    for (const auto& q : report.queries) {
      if (name != "all" && q.split != name) continue;
      ++summary.queries;
      if (!q.has_positive) ++summary.without_positives;
      for (std::size_t i = 0; i < m; ++i) {
        const bool excluded = i > 0 && !q.has_positive &&
                              config.zero_positive == ZeroPositivePolicy::kExclude;
        if (excluded) continue;
        summary.means[i] += q.values[i];
        ++counted[i];
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (counted[i] > 0) summary.means[i] /= static_cast<double>(counted[i]);
    }
    report.splits.push_back(std::move(summary));
  }
  return report;
}

namespace {

bool is_excluded(const MetricsReport& report, const QueryMetrics& q, std::size_t metric) {
  return metric > 0 && !q.has_positive && report.zero_positive == ZeroPositivePolicy::kExclude;
}

}  // namespace

void write_report_tsv(const MetricsReport& report, std::ostream& out) {
  const auto flags = out.flags();
  out << std::fixed << std::setprecision(6);
  out << "split\tqueries\tno_positive";
  for (const auto& n : report.metric_names) out << '\t' << n;
  out << '\n';
  for (const auto& s : report.splits) {
    out << s.split << '\t' << s.queries << '\t' << s.without_positives;
    for (double v : s.means) out << '\t' << v;
    out << '\n';
  }
  out << "\nquery_id\tsplit";
  for (const auto& n : report.metric_names) out << '\t' << n;
  out << '\n';
  for (const auto& q : report.queries) {
    out << q.query_id << '\t' << q.split;
    for (std::size_t i = 0; i < q.values.size(); ++i) {
      out << '\t';
      if (is_excluded(report, q, i)) {
        out << "NA";
      } else {
        out << q.values[i];
      }
    }
    out << '\n';
  }
  out.flags(flags);
}

std::string report_to_json(const MetricsReport& report) {
  nlohmann::ordered_json j;
  j["metrics"] = report.metric_names;
  j["zero_positive_policy"] =
      report.zero_positive == ZeroPositivePolicy::kExclude ? "exclude" : "score_zero";
  j["unassigned_run_queries"] = report.unassigned_run_queries;
  auto& splits = j["splits"] = nlohmann::ordered_json::array();
  for (const auto& s : report.splits) {
    nlohmann::ordered_json e;
    e["split"] = s.split;
    e["queries"] = s.queries;
    e["no_positive"] = s.without_positives;
    for (std::size_t i = 0; i < s.means.size(); ++i) e[report.metric_names[i]] = s.means[i];
    splits.push_back(std::move(e));
  }
  auto& queries = j["queries"] = nlohmann::ordered_json::array();
  for (const auto& q : report.queries) {
    nlohmann::ordered_json e;
    e["query_id"] = q.query_id;
    e["split"] = q.split;
    for (std::size_t i = 0; i < q.values.size(); ++i) {
      if (is_excluded(report, q, i)) {
        e[report.metric_names[i]] = nullptr;
      } else {
        e[report.metric_names[i]] = q.values[i];
      }
    }
    queries.push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

}  // namespace plab
