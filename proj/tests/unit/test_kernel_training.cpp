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

#include <doctest.h>

#include "oracles.hpp"
#include "plab/error.hpp"
#include "plab/kernel_training.hpp"
#include "support.hpp"

using namespace plab;

namespace {

Eigen::VectorXd random_vector(Rng& rng, Eigen::Index n, double scale = 1.0) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = scale * rng.normal();
  return v;
}

double mean_loss(const KernelWeights& w, std::span<const FeaturePair> pairs, double margin) {
  return hinge_objective(w, pairs, margin).loss;
}

// Pairs whose slack stays away from the hinge kink, so the loss is smooth
// within the finite-difference step.
std::vector<FeaturePair> smooth_pairs(Rng& rng, const KernelWeights& w, std::size_t n) {
  std::vector<FeaturePair> pairs;
  while (pairs.size() < n) {
    FeaturePair p{random_vector(rng, w.w.size()), random_vector(rng, w.w.size())};
    const double slack = 1.0 - (kernel_score(p.positive, w) - kernel_score(p.negative, w));
    if (std::abs(slack) > 1e-2) pairs.push_back(std::move(p));
  }
  return pairs;
}

}  // namespace

TEST_CASE("hinge objective matches central finite differences") {
  Rng rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    const auto w = random_kernel_weights(11, 100 + trial, 0.5);
    const auto pairs = smooth_pairs(rng, w, 20);
    const auto objective = hinge_objective(w, pairs, 1.0);
    const double h = 1e-4;
    for (Eigen::Index k = 0; k < 11; ++k) {
      auto plus = w, minus = w;
      plus.w[k] += h;
      minus.w[k] -= h;
      const double fd = (mean_loss(plus, pairs, 1.0) - mean_loss(minus, pairs, 1.0)) / (2 * h);
      CHECK(std::abs(fd - objective.grad_w[k]) <= 1e-4);
    }
    auto plus = w, minus = w;
    plus.bias += h;
    minus.bias -= h;
    const double fd_bias = (mean_loss(plus, pairs, 1.0) - mean_loss(minus, pairs, 1.0)) / (2 * h);
    CHECK(std::abs(fd_bias - objective.grad_bias) <= 1e-4);
  }
}

TEST_CASE("triples already past the margin give zero loss and unchanged weights") {
  KernelWeights w{Eigen::VectorXd::Unit(3, 0), 0.0};
  std::vector<FeaturePair> pairs{{Eigen::Vector3d(5, 0, 0), Eigen::Vector3d(1, 9, 9)},
                                 {Eigen::Vector3d(3, 1, 1), Eigen::Vector3d(1, 0, 0)}};
  const auto objective = hinge_objective(w, pairs, 1.0);
  CHECK(objective.loss == 0.0);
  CHECK(objective.grad_w.isZero());
  TrainHyper hyper;
  hyper.epochs = 10;
  const auto result = train_on_features(pairs, w, hyper);
  CHECK(result.weights.w == w.w);
  CHECK(result.weights.bias == w.bias);
  CHECK(result.telemetry.pairwise_accuracy == 1.0);
  CHECK(result.telemetry.loss_curve == std::vector<double>(11, 0.0));
}

TEST_CASE("linearly separable features reach pairwise accuracy 1") {
  // Positive minus negative always has a positive projection on `direction`.
  Rng rng(3);
  const Eigen::Index dim = 11;
  const Eigen::VectorXd direction = random_vector(rng, dim).normalized();
  std::vector<FeaturePair> pairs;
  while (pairs.size() < 300) {
    const Eigen::VectorXd neg = random_vector(rng, dim);
    Eigen::VectorXd delta = random_vector(rng, dim);
    const double along = delta.dot(direction);
    delta += (0.5 - along + std::abs(rng.normal())) * direction;
    pairs.push_back({neg + delta, neg});
  }
  TrainHyper hyper;
  hyper.epochs = 200;
  hyper.learning_rate = 0.05;
  hyper.seed = 8;
  const auto result = train_on_features(pairs, random_kernel_weights(dim, 8), hyper);
  CHECK(result.telemetry.pairwise_accuracy == 1.0);
  CHECK(result.telemetry.mean_margin > 0.0);
  CHECK(result.telemetry.loss_curve.size() == 201);
  CHECK(result.telemetry.loss_curve.back() < result.telemetry.loss_curve.front());
  CHECK(result.telemetry.triples_used == 300);
}

TEST_CASE("training is deterministic in the seed") {
  Rng rng(4);
  std::vector<FeaturePair> pairs;
  for (int i = 0; i < 100; ++i) pairs.push_back({random_vector(rng, 5), random_vector(rng, 5)});
  TrainHyper hyper;
  hyper.seed = 1;
  hyper.batch_size = 7;
  const auto a = train_on_features(pairs, random_kernel_weights(5, 1), hyper);
  const auto b = train_on_features(pairs, random_kernel_weights(5, 1), hyper);
  CHECK(a.weights.w == b.weights.w);
  CHECK(a.telemetry.loss_curve == b.telemetry.loss_curve);
  hyper.seed = 2;
  const auto c = train_on_features(pairs, random_kernel_weights(5, 1), hyper);
  CHECK(a.weights.w != c.weights.w);
}

TEST_CASE("telemetry definitions") {
  KernelWeights w{Eigen::Vector2d(1, 0), 0.0};
  std::vector<FeaturePair> pairs{{Eigen::Vector2d(2, 0), Eigen::Vector2d(1, 0)},
                                 {Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0)},
                                 {Eigen::Vector2d(1, 5), Eigen::Vector2d(1, 0)}};
  TrainTelemetry t;
  pairwise_telemetry(w, pairs, t);
  CHECK(t.pairwise_accuracy == doctest::Approx(1.0 / 3.0));
  CHECK(t.mean_margin == doctest::Approx(0.0));
}

TEST_CASE("random weights are seeded and bounded") {
  const auto a = random_kernel_weights(11, 5);
  CHECK(a.w.size() == 11);
  CHECK(a.w.cwiseAbs().maxCoeff() <= 0.1);
  CHECK(a.bias == 0.0);
  CHECK(random_kernel_weights(11, 5).w == a.w);
  CHECK(random_kernel_weights(11, 6).w != a.w);
}

TEST_CASE("train_kernel_weights on token matrices") {
  // Query token e0; positives contain e0 exactly, negatives only e1/e2.
  TokenMatrixStore queries(3), passages(3);
  RowMatrix<float> q(1, 3);
  q << 1, 0, 0;
  queries.add("q", q);
  for (int i = 0; i < 6; ++i) {
    RowMatrix<float> pos(2, 3), neg(2, 3);
    pos << 1, 0, 0, 0, 1, static_cast<float>(i);
    neg << 0, 1, 0, 0.2f, 0, 1;
    passages.add("pos" + std::to_string(i), pos);
    passages.add("neg" + std::to_string(i), neg);
  }
  std::vector<TrainingTriple> triples;
  for (int i = 0; i < 6; ++i) {
    triples.push_back({"q", "pos" + std::to_string(i), "neg" + std::to_string(5 - i)});
  }
  triples.push_back({"q", "pos0", "missing"});
  TrainHyper hyper;
  hyper.epochs = 100;
  test::WarningCapture warnings;
  const auto result =
      train_kernel_weights(triples, queries, passages, KernelBank::standard(), hyper);
  CHECK(result.telemetry.triples_used == 6);
  CHECK(result.telemetry.triples_skipped == 1);
  CHECK(warnings.messages.size() == 1);
  CHECK(result.telemetry.pairwise_accuracy == 1.0);

  const std::vector<TrainingTriple> none{{"nope", "pos0", "neg0"}};
  CHECK_THROWS_AS(train_kernel_weights(none, queries, passages, KernelBank::standard(), hyper),
                  Error);
}

TEST_CASE("training argument validation") {
  std::vector<FeaturePair> pairs{{Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)}};
  TrainHyper hyper;
  CHECK_THROWS_AS(train_on_features({}, random_kernel_weights(2, 1), hyper), Error);
  CHECK_THROWS_AS(train_on_features(pairs, random_kernel_weights(3, 1), hyper), Error);
  hyper.batch_size = 0;
  CHECK_THROWS_AS(train_on_features(pairs, random_kernel_weights(2, 1), hyper), Error);
}
