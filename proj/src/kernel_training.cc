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

#include "plab/kernel_training.hpp"

#include <numeric>

#include "plab/parallel.hpp"
#include "plab/random.hpp"

namespace plab {

HingeObjective hinge_objective(const KernelWeights& weights,
                               std::span<const FeaturePair> pairs, double margin) {
  HingeObjective out;
  out.grad_w = Eigen::VectorXd::Zero(weights.w.size());
  if (pairs.empty()) return out;
  for (const auto& p : pairs) {
    const double diff = kernel_score(p.positive, weights) - kernel_score(p.negative, weights);
    const double slack = margin - diff;
    if (slack > 0.0) {
      out.loss += slack;
      out.grad_w -= p.positive - p.negative;
    }
  }
  const double n = static_cast<double>(pairs.size());
  out.loss /= n;
  out.grad_w /= n;
  return out;
}

void pairwise_telemetry(const KernelWeights& weights, std::span<const FeaturePair> pairs,
                        TrainTelemetry& telemetry) {
  std::size_t correct = 0;
  double margin_sum = 0.0;
  for (const auto& p : pairs) {
    const double diff = kernel_score(p.positive, weights) - kernel_score(p.negative, weights);
    if (diff > 0.0) ++correct;
    margin_sum += diff;
  }
  const double n = pairs.empty() ? 1.0 : static_cast<double>(pairs.size());
  telemetry.pairwise_accuracy = static_cast<double>(correct) / n;
  telemetry.mean_margin = margin_sum / n;
}

KernelWeights random_kernel_weights(Eigen::Index size, std::uint64_t seed, double scale) {
  Rng rng(seed);
  KernelWeights w;
  w.w.resize(size);
  for (Eigen::Index k = 0; k < size; ++k) w.w[k] = rng.uniform(-scale, scale);
  return w;
}

KernelTrainResult train_on_features(std::span<const FeaturePair> pairs,
                                    KernelWeights initial, const TrainHyper& hyper) {
  if (pairs.empty()) throw Error(ErrorKind::kEmpty, "no training pairs");
  if (hyper.epochs < 0 || hyper.batch_size == 0 || !(hyper.learning_rate > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "training needs epochs >= 0, batch size >= 1 and a positive learning rate");
  }
  for (const auto& p : pairs) {
    if (p.positive.size() != initial.w.size() || p.negative.size() != initial.w.size()) {
      throw Error(ErrorKind::kInvalidArgument, "feature size does not match weight size");
    }
  }

  KernelTrainResult result{std::move(initial), {}};
  auto& weights = result.weights;
  auto& telemetry = result.telemetry;
  telemetry.triples_used = pairs.size();
  telemetry.loss_curve.push_back(hinge_objective(weights, pairs, hyper.margin).loss);

  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(hyper.seed);
  std::vector<FeaturePair> batch;
  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    shuffle(std::span(order), rng);
    for (std::size_t start = 0; start < order.size(); start += hyper.batch_size) {
      const std::size_t end = std::min(order.size(), start + hyper.batch_size);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(pairs[order[i]]);
      const auto objective = hinge_objective(weights, batch, hyper.margin);
      weights.w -= hyper.learning_rate * objective.grad_w;
      weights.bias -= hyper.learning_rate * objective.grad_bias;
    }
    telemetry.loss_curve.push_back(hinge_objective(weights, pairs, hyper.margin).loss);
  }
  pairwise_telemetry(weights, pairs, telemetry);
  return result;
}

KernelTrainResult train_kernel_weights(std::span<const TrainingTriple> triples,
                                       const TokenMatrixStore& query_tokens,
                                       const TokenMatrixStore& passage_tokens,
                                       const KernelBank& bank, const TrainHyper& hyper,
                                       std::optional<KernelWeights> initial,
                                       unsigned threads) {
  bank.validate();
  std::vector<std::optional<FeaturePair>> extracted(triples.size());
  parallel_for(triples.size(), threads, [&](std::size_t i) {
    const auto& t = triples[i];
    const auto* q = query_tokens.find(t.query_id);
    const auto* pos = passage_tokens.find(t.positive_id);
    const auto* neg = passage_tokens.find(t.negative_id);
    if (q == nullptr || pos == nullptr || neg == nullptr) return;
    extracted[i] = FeaturePair{kernel_features(*q, *pos, bank), kernel_features(*q, *neg, bank)};
  });

  std::vector<FeaturePair> pairs;
  pairs.reserve(triples.size());
  for (auto& e : extracted) {
    if (e) pairs.push_back(std::move(*e));
  }
  const std::size_t skipped = triples.size() - pairs.size();
  if (pairs.empty()) {
    throw Error(ErrorKind::kEmpty, "no training triple has token matrices for its query and passages");
  }
  if (skipped > 0) warn(std::to_string(skipped) + " triples skipped for missing token matrices");

  auto start = initial ? std::move(*initial) : random_kernel_weights(bank.size(), hyper.seed);
  auto result = train_on_features(pairs, std::move(start), hyper);
  result.telemetry.triples_skipped = skipped;
  return result;
}

}  // namespace plab
