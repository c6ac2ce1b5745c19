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

#include "plab/fusion.hpp"

#include <algorithm>
#include <set>

#include "plab/detail/string_map.hpp"
#include "plab/error.hpp"

namespace plab {

FusionMethod parse_fusion_method(std::string_view name) {
  if (name == "minmax") return FusionMethod::kMinMaxMean;
  if (name == "rrf") return FusionMethod::kReciprocalRank;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown fusion method '" + std::string(name) + "' (expected minmax or rrf)");
}

RankedRun fuse_runs(std::span<const RankedRun> runs, FusionMethod method, double rrf_k) {
  if (runs.size() < 2) throw Error(ErrorKind::kInvalidArgument, "fusion needs at least two runs");

  std::set<std::string, std::less<>> all_queries;
  for (const auto& run : runs) {
    for (const auto& [qid, r] : run.queries) all_queries.insert(qid);
  }
  std::vector<std::string> missing;
  for (const auto& qid : all_queries) {
    for (const auto& run : runs) {
      if (!run.queries.contains(qid)) {
        missing.push_back(qid);
        break;
      }
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i) {
      list += (i ? ", " : "") + missing[i];
    }
    if (missing.size() > 20) list += ", ...";
    throw Error(ErrorKind::kInvalidArgument,
                "runs cover different query sets; not in every run: " + list);
  }

  std::string name = "fused";
  for (const auto& run : runs) name += "-" + run.name;
  RankedRun fused{name, "fusion", {}};
  const double n_runs = static_cast<double>(runs.size());

  for (const auto& qid : all_queries) {
    detail::StringMap<double> totals;
    for (const auto& run : runs) {
      const Ranking& ranking = *run.find(qid);
      if (ranking.empty()) continue;
      if (method == FusionMethod::kReciprocalRank) {
        for (std::size_t i = 0; i < ranking.size(); ++i) {
          totals[ranking[i].passage_id] += 1.0 / (rrf_k + static_cast<double>(i + 1));
        }
        continue;
      }
      auto [lo, hi] = std::minmax_element(ranking.begin(), ranking.end(),
                                          [](const auto& a, const auto& b) { return a.score < b.score; });
      const double min = lo->score;
      const double range = hi->score - min;
      for (const auto& e : ranking) {
        totals[e.passage_id] += range > 0.0 ? (e.score - min) / range : 1.0;
      }
    }
    Ranking out;
    out.reserve(totals.size());
    for (auto& [pid, total] : totals) {
      out.push_back({pid, method == FusionMethod::kMinMaxMean ? total / n_runs : total});
    }
    std::sort(out.begin(), out.end(), ranks_before);
    fused.queries.emplace(qid, std::move(out));
  }
  return fused;
}

}  // namespace plab
