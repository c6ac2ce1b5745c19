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

#include "plab/ranked_run.hpp"

#include <algorithm>
#include <cmath>

#include "plab/detail/tsv.hpp"
#include "plab/error.hpp"

namespace plab {

void normalize_ranking(Ranking& ranking, std::string_view query_id) {
  std::sort(ranking.begin(), ranking.end(), ranks_before);
  std::vector<std::string_view> ids;
  ids.reserve(ranking.size());
  for (const auto& e : ranking) ids.push_back(e.passage_id);
  std::sort(ids.begin(), ids.end());
  auto dup = std::adjacent_find(ids.begin(), ids.end());
  if (dup != ids.end()) {
    throw Error(ErrorKind::kFormat, "passage '" + std::string(*dup) +
                                        "' appears twice for query '" +
                                        std::string(query_id) + "'");
  }
}

void write_trec_run(const RankedRun& run, std::ostream& out) {
  for (const auto& [qid, ranking] : run.queries) {
    std::size_t rank = 1;
    for (const auto& e : ranking) {
      out << qid << " Q0 " << e.passage_id << ' ' << rank++ << ' '
          << detail::format_double(e.score) << ' ' << run.name << '\n';
    }
  }
}

void write_trec_run(const RankedRun& run, const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  write_trec_run(run, out);
}

RankedRun load_trec_run(const std::filesystem::path& path) {
  RankedRun run;
  run.stage = "loaded";
  bool named = false;
  detail::for_each_line(path, [&](std::size_t line_no, std::string_view line) {
    auto fields = detail::split_whitespace(line);
    if (fields.empty()) return;
    if (fields.size() != 6) {
      throw Error(ErrorKind::kFormat, detail::location(path, line_no) +
                                          ": expected 'qid Q0 pid rank score run_name'");
    }
    double score = 0.0;
    try {
      score = detail::parse_double(fields[4], "score");
    } catch (const Error& e) {
      throw Error(ErrorKind::kFormat, detail::location(path, line_no) + ": " + e.what());
    }
    if (!std::isfinite(score)) {
      throw Error(ErrorKind::kFormat,
                  detail::location(path, line_no) + ": non-finite score");
    }
    if (!named) {
      run.name = std::string(fields[5]);
      named = true;
    }
    auto it = run.queries.find(fields[0]);
    if (it == run.queries.end()) it = run.queries.emplace(std::string(fields[0]), Ranking{}).first;
    it->second.push_back({std::string(fields[2]), score});
  });
  for (auto& [qid, ranking] : run.queries) normalize_ranking(ranking, qid);
  return run;
}

RankedRun truncate_run(const RankedRun& run, std::size_t depth) {
  RankedRun out{run.name, run.stage, {}};
  for (const auto& [qid, ranking] : run.queries) {
    auto n = std::min(depth, ranking.size());
    out.queries.emplace(qid, Ranking(ranking.begin(), ranking.begin() + static_cast<std::ptrdiff_t>(n)));
  }
  return out;
}

}  // namespace plab
