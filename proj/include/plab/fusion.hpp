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

#include <span>
#include <string_view>

#include "plab/ranked_run.hpp"

namespace plab {

enum class FusionMethod {
  /// Per query, min-max normalise each run's scores to [0, 1] and average
  /// over runs; a passage missing from a run contributes 0. When all of a
  /// run's scores for a query are equal they normalise to 1.
  kMinMaxMean,
  /// Sum of 1 / (rrf_k + rank) over runs.
  kReciprocalRank,
};

FusionMethod parse_fusion_method(std::string_view name);

/// Needs at least two runs over the same query set; otherwise throws and
/// lists the query ids that are not shared.
RankedRun fuse_runs(std::span<const RankedRun> runs,
                    FusionMethod method = FusionMethod::kMinMaxMean, double rrf_k = 60.0);

}  // namespace plab
