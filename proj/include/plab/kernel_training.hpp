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

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "plab/embeddings.hpp"
#include "plab/scoring.hpp"
#include "plab/triples.hpp"

namespace plab {

struct TrainHyper {
  double learning_rate = 0.01;
  int epochs = 50;
  double margin = 1.0;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
};

struct TrainTelemetry {
  /// Fraction of triples with s_pos > s_neg after training.
  double pairwise_accuracy = 0.0;
  /// Mean of s_pos - s_neg after training.
  double mean_margin = 0.0;
  /// Mean hinge loss over all triples, once before training and after
  /// every epoch (epochs + 1 entries).
  std::vector<double> loss_curve;
  std::size_t triples_used = 0;
  std::size_t triples_skipped = 0;
};

/// Kernel features of a (query, positive) and (query, negative) pair.
struct FeaturePair {
  Eigen::VectorXd positive;
  Eigen::VectorXd negative;
};

struct HingeObjective {
  double loss = 0.0;
  Eigen::VectorXd grad_w;
  double grad_bias = 0.0;
};

/// Mean over pairs of max(0, margin - (s_pos - s_neg)) and its gradient with
/// respect to (w, bias). The bias cancels in the difference, so its gradient
/// is always zero.
HingeObjective hinge_objective(const KernelWeights& weights,
                               std::span<const FeaturePair> pairs, double margin);

/// Pairwise accuracy and mean margin of `weights` on `pairs`.
void pairwise_telemetry(const KernelWeights& weights, std::span<const FeaturePair> pairs,
                        TrainTelemetry& telemetry);

/// Weights drawn uniformly from [-scale, scale] with a zero bias.
KernelWeights random_kernel_weights(Eigen::Index size, std::uint64_t seed,
                                    double scale = 0.1);

struct KernelTrainResult {
  KernelWeights weights;
  TrainTelemetry telemetry;
};

/// Mini-batch gradient descent on the hinge objective. The visiting order
/// is reshuffled every epoch from `hyper.seed`; nothing else is random.
KernelTrainResult train_on_features(std::span<const FeaturePair> pairs,
                                    KernelWeights initial, const TrainHyper& hyper);

/// Extracts kernel features for every triple whose query and passages all
/// have token matrices, then calls train_on_features(). Unresolvable triples
/// are skipped and counted; none resolvable is an error. Without `initial`
/// the start point is random_kernel_weights(bank.size(), hyper.seed).
KernelTrainResult train_kernel_weights(std::span<const TrainingTriple> triples,
                                       const TokenMatrixStore& query_tokens,
                                       const TokenMatrixStore& passage_tokens,
                                       const KernelBank& bank, const TrainHyper& hyper,
                                       std::optional<KernelWeights> initial = std::nullopt,
                                       unsigned threads = 1);

}  // namespace plab
