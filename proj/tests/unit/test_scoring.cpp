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

#include <numeric>

#include "oracles.hpp"
#include "plab/error.hpp"
#include "plab/scoring.hpp"
#include "support.hpp"

using namespace plab;

TEST_CASE("dense_score") {
  Eigen::Vector2d a(1, 0), b(0, 1), c(1, 2);
  CHECK(dense_score(a, b) == 0.0);
  CHECK(dense_score(c, c) == 5.0);
  CHECK_THROWS_AS(dense_score(a, Eigen::Vector3d(1, 2, 3)), Error);

  // Works on float rows and mixed scalar types.
  Eigen::RowVector3f f(1.f, 2.f, 3.f);
  Eigen::Vector3d g(1, 1, 1);
  CHECK(dense_score(f, g) == 6.0);

  Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    const Eigen::VectorXd q = test::random_matrix(rng, 128, 1);
    const Eigen::VectorXd d = test::random_matrix(rng, 128, 1);
    double naive = 0.0;
    for (int i = 0; i < 128; ++i) naive += q[i] * d[i];
    CHECK(dense_score(q, d) == doctest::Approx(naive).epsilon(1e-6));
  }
}

TEST_CASE("late interaction max-sum") {
  Eigen::MatrixXd q(2, 2), d(2, 2);
  q << 1, 0, 0, 1;
  d << 1, 0, 0.5, 0.5;
  CHECK(late_interaction_score(q, d) == doctest::Approx(1.5));

  Eigen::MatrixXd swapped(2, 2);
  swapped << 0.5, 0.5, 1, 0;
  CHECK(late_interaction_score(q, swapped) == late_interaction_score(q, d));

  CHECK_THROWS_AS(late_interaction_score(Eigen::MatrixXd(0, 2), d), Error);
  CHECK_THROWS_AS(late_interaction_score(q, Eigen::MatrixXd(0, 2)), Error);
  CHECK_THROWS_AS(late_interaction_score(q, Eigen::MatrixXd::Ones(2, 3)), Error);
}

TEST_CASE("late interaction permutation invariance and superset monotonicity") {
  Rng rng(17);
  for (int t = 0; t < 200; ++t) {
    const auto qr = static_cast<Eigen::Index>(1 + rng.below(6));
    const auto dr = static_cast<Eigen::Index>(1 + rng.below(12));
    const auto dim = static_cast<Eigen::Index>(2 + rng.below(16));
    const Eigen::MatrixXd q = test::random_matrix(rng, qr, dim);
    const Eigen::MatrixXd d = test::random_matrix(rng, dr, dim);
    const double base = late_interaction_score(q, d);

    std::vector<Eigen::Index> perm(static_cast<std::size_t>(dr));
    std::iota(perm.begin(), perm.end(), 0);
    shuffle(std::span(perm), rng);
    CHECK(late_interaction_score(q, d(perm, Eigen::all)) == base);

    std::vector<Eigen::Index> qperm(static_cast<std::size_t>(qr));
    std::iota(qperm.begin(), qperm.end(), 0);
    shuffle(std::span(qperm), rng);
    CHECK(late_interaction_score(q(qperm, Eigen::all), d) == base);

    Eigen::MatrixXd bigger(dr + 1, dim);
    bigger << d, test::random_matrix(rng, 1, dim);
    CHECK(late_interaction_score(q, bigger) >= base);
  }
}

TEST_CASE("standard kernel bank") {
  const auto bank = KernelBank::standard();
  REQUIRE(bank.size() == 11);
  CHECK(bank.mus[0] == 1.0);
  CHECK(bank.sigmas[0] == 1e-3);
  CHECK(bank.mus[1] == 0.9);
  CHECK(bank.mus[10] == -0.9);
  CHECK(bank.sigmas[5] == 0.1);
  CHECK_NOTHROW(bank.validate());

  KernelBank bad = bank;
  bad.mus[3] = bad.mus[2];
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = bank;
  bad.sigmas[1] = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = bank;
  bad.mus[0] = 1.5;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = bank;
  bad.sigmas.resize(3);
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("exact-match kernel on identical unit vectors") {
  KernelBank bank;
  bank.mus = Eigen::VectorXd::Constant(1, 1.0);
  bank.sigmas = Eigen::VectorXd::Constant(1, 1e-3);
  Eigen::MatrixXd v(1, 3);
  v << 0.6, 0.8, 0.0;
  const auto f = kernel_features(v, v, bank);
  CHECK(f[0] == doctest::Approx(std::log(kKernelEpsilon + 1.0)));
}

TEST_CASE("kernel features match the nested-loop oracle") {
  const auto bank = KernelBank::standard();
  const std::vector<double> mus(bank.mus.data(), bank.mus.data() + bank.size());
  const std::vector<double> sigmas(bank.sigmas.data(), bank.sigmas.data() + bank.size());
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    const auto qr = static_cast<Eigen::Index>(t == 0 ? 3 : 1 + rng.below(5));
    const auto dr = static_cast<Eigen::Index>(t == 0 ? 4 : 1 + rng.below(9));
    const auto dim = static_cast<Eigen::Index>(2 + rng.below(10));
    const Eigen::MatrixXd q = test::random_matrix(rng, qr, dim);
    Eigen::MatrixXd d = test::random_matrix(rng, dr, dim);
    d.row(0) = 2.5 * q.row(0);  // exercise the exact-match kernel
    const auto got = kernel_features(q, d, bank);
    const auto want = test::kernel_features_loop(q, d, mus, sigmas);
    for (std::size_t k = 0; k < mus.size(); ++k) {
      const auto kk = static_cast<Eigen::Index>(k);
      CHECK(std::isfinite(got[kk]));
      CHECK(std::abs(got[kk] - want[k]) <= 1e-6 * std::max(1.0, std::abs(want[k])));
    }
  }
}

TEST_CASE("kernel features accept float matrices") {
  Rng rng(6);
  const Eigen::MatrixXd q = test::random_matrix(rng, 3, 4);
  const Eigen::MatrixXd d = test::random_matrix(rng, 5, 4);
  const Eigen::MatrixXf qf = q.cast<float>();
  const Eigen::MatrixXf df = d.cast<float>();
  const auto a = kernel_features(qf, df, KernelBank::standard());
  const auto b = kernel_features(qf.cast<double>(), df.cast<double>(), KernelBank::standard());
  CHECK(a == b);
}

TEST_CASE("cosines are clamped before kernel evaluation") {
  // Parallel rows whose computed cosine can exceed 1 by rounding still give
  // the full exact-match count.
  KernelBank bank;
  bank.mus = Eigen::VectorXd::Constant(1, 1.0);
  bank.sigmas = Eigen::VectorXd::Constant(1, 1e-3);
  Eigen::MatrixXd q(1, 3), d(1, 3);
  q << 0.1, 0.7, 0.3;
  d << 0.3, 2.1, 0.9;
  const auto f = kernel_features(q, d, bank);
  CHECK(f[0] == doctest::Approx(std::log(1.0 + kKernelEpsilon)).epsilon(1e-9));
}

TEST_CASE("zero-norm rows are reported") {
  Eigen::MatrixXd q = Eigen::MatrixXd::Ones(2, 3);
  Eigen::MatrixXd d = Eigen::MatrixXd::Ones(3, 3);
  d.row(2).setZero();
  try {
    kernel_features(q, d, KernelBank::standard());
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("document row 2") != std::string::npos);
  }
  q.row(1).setZero();
  d.row(2).setOnes();
  try {
    kernel_features(q, d, KernelBank::standard());
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("query row 1") != std::string::npos);
  }
}

TEST_CASE("kernel_score") {
  Eigen::VectorXd f(3);
  f << 0.5, -2.0, 4.0;
  KernelWeights zero{Eigen::VectorXd::Zero(3), 0.25};
  CHECK(kernel_score(f, zero) == 0.25);
  KernelWeights one_hot{Eigen::VectorXd::Unit(3, 2), 0.0};
  CHECK(kernel_score(f, one_hot) == 4.0);
  KernelWeights w{Eigen::Vector3d(0.1, 0.2, -0.3), 1.0};
  CHECK(kernel_score(f, w) == doctest::Approx(0.05 - 0.4 - 1.2 + 1.0).epsilon(1e-12));
  CHECK_THROWS_AS(kernel_score(Eigen::VectorXd::Zero(2), w), Error);
}

TEST_CASE("kernel model file round-trips") {
  const auto bank = KernelBank::standard();
  KernelWeights w{Eigen::VectorXd::LinSpaced(11, -1.0, 1.0), 0.125};
  test::TempDir dir;
  write_kernel_model(bank, w, dir / "m.txt");
  KernelBank b2;
  KernelWeights w2;
  load_kernel_model(dir / "m.txt", b2, w2);
  CHECK(b2.mus == bank.mus);
  CHECK(b2.sigmas == bank.sigmas);
  CHECK(w2.w == w.w);
  CHECK(w2.bias == w.bias);
  CHECK(test::read_file(dir / "m.txt").rfind("1 0.001 -1\n0.9 0.1 -0.8\n", 0) == 0);

  test::write_file(dir / "bad.txt", "1 0.001 0.5\n");
  CHECK_THROWS_AS(load_kernel_model(dir / "bad.txt", b2, w2), Error);
  test::write_file(dir / "bad.txt", "1 0.001\nbias 0\n");
  CHECK_THROWS_AS(load_kernel_model(dir / "bad.txt", b2, w2), Error);
}
