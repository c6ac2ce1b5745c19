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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "plab/error.hpp"

namespace plab {

/// Dot product of two vectors (row or column), accumulated in double.
template <typename DerivedQ, typename DerivedD>
double dense_score(const Eigen::MatrixBase<DerivedQ>& q, const Eigen::MatrixBase<DerivedD>& d) {
  if (q.size() != d.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "dense_score: dimension mismatch (" + std::to_string(q.size()) + " vs " +
                    std::to_string(d.size()) + ")");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    sum += static_cast<double>(q.coeff(i)) * static_cast<double>(d.coeff(i));
  }
  return sum;
}

namespace detail {

// Fixed left-to-right accumulation: the value of a row pair does not depend
// on where either row sits in memory, which keeps max-sum scoring exactly
// invariant to row permutations.
template <typename DerivedA, typename DerivedB>
double row_dot(const Eigen::MatrixBase<DerivedA>& a, Eigen::Index i,
               const Eigen::MatrixBase<DerivedB>& b, Eigen::Index j) {
  double sum = 0.0;
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    sum += static_cast<double>(a.coeff(i, k)) * static_cast<double>(b.coeff(j, k));
  }
  return sum;
}

}  // namespace detail

/// Late-interaction max-sum: for every query row take the best dot product
/// over document rows, then add those maxima up. The maxima are summed in
/// ascending order so permuting query rows cannot change the result.
template <typename DerivedQ, typename DerivedD>
double late_interaction_score(const Eigen::MatrixBase<DerivedQ>& query,
                              const Eigen::MatrixBase<DerivedD>& doc) {
  if (query.rows() == 0 || doc.rows() == 0) {
    throw Error(ErrorKind::kInvalidArgument, "late_interaction_score: empty token matrix");
  }
  if (query.cols() != doc.cols()) {
    throw Error(ErrorKind::kInvalidArgument, "late_interaction_score: dimension mismatch");
  }
  std::vector<double> maxima(static_cast<std::size_t>(query.rows()));
  for (Eigen::Index i = 0; i < query.rows(); ++i) {
    double best = detail::row_dot(query, i, doc, 0);
    for (Eigen::Index j = 1; j < doc.rows(); ++j) {
      best = std::max(best, detail::row_dot(query, i, doc, j));
    }
    maxima[static_cast<std::size_t>(i)] = best;
  }
  std::sort(maxima.begin(), maxima.end());
  double sum = 0.0;
  for (double m : maxima) sum += m;
  return sum;
}

/// RBF kernels over cosine similarities. Mus strictly descending, sigmas > 0.
struct KernelBank {
  Eigen::VectorXd mus;
  Eigen::VectorXd sigmas;

  /// 11 kernels: mu 1.0 (sigma 1e-3, exact match) then 0.9, 0.7, ..., -0.9
  /// (sigma 0.1).
  static KernelBank standard();

  Eigen::Index size() const { return mus.size(); }
  void validate() const;
};

inline constexpr double kKernelEpsilon = 1e-10;

/// Row-normalises both matrices, builds the cosine match matrix (clamped to
/// [-1, 1]) and returns, per kernel k,
///   sum_i ln(eps + sum_j exp(-(M_ij - mu_k)^2 / (2 sigma_k^2))).
/// A zero-norm row is an error naming the matrix and row.
template <typename DerivedQ, typename DerivedD>
Eigen::VectorXd kernel_features(const Eigen::MatrixBase<DerivedQ>& query,
                                const Eigen::MatrixBase<DerivedD>& doc,
                                const KernelBank& bank, double epsilon = kKernelEpsilon) {
  bank.validate();
  if (query.rows() == 0 || doc.rows() == 0) {
    throw Error(ErrorKind::kInvalidArgument, "kernel_features: empty token matrix");
  }
  if (query.cols() != doc.cols()) {
    throw Error(ErrorKind::kInvalidArgument, "kernel_features: dimension mismatch");
  }
  auto normalized = [](const auto& m, const char* which) {
    Eigen::MatrixXd out = m.template cast<double>();
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      const double norm = out.row(r).norm();
      if (!(norm > 0.0)) {
        throw Error(ErrorKind::kInvalidArgument, std::string("kernel_features: ") + which +
                                                     " row " + std::to_string(r) +
                                                     " has zero norm");
      }
      out.row(r) /= norm;
    }
    return out;
  };
  const Eigen::MatrixXd q = normalized(query, "query");
  const Eigen::MatrixXd d = normalized(doc, "document");
  const Eigen::ArrayXXd match = (q * d.transpose()).array().min(1.0).max(-1.0);

  Eigen::VectorXd features(bank.size());
  for (Eigen::Index k = 0; k < bank.size(); ++k) {
    const double denom = 2.0 * bank.sigmas[k] * bank.sigmas[k];
    const Eigen::ArrayXd soft_tf =
        (-(match - bank.mus[k]).square() / denom).exp().rowwise().sum();
    features[k] = (soft_tf + epsilon).log().sum();
  }
  return features;
}

struct KernelWeights {
  Eigen::VectorXd w;
  double bias = 0.0;
};

/// w . features + bias.
template <typename Derived>
double kernel_score(const Eigen::MatrixBase<Derived>& features, const KernelWeights& weights) {
  if (features.size() != weights.w.size()) {
    throw Error(ErrorKind::kInvalidArgument, "kernel_score: feature/weight size mismatch");
  }
  return weights.w.dot(features.template cast<double>()) + weights.bias;
}

/// Text file: one `mu sigma w` row per kernel, then `bias <value>`.
void write_kernel_model(const KernelBank& bank, const KernelWeights& weights,
                        const std::filesystem::path& path);
void load_kernel_model(const std::filesystem::path& path, KernelBank& bank,
                       KernelWeights& weights);

}  // namespace plab
