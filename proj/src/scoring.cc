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

#include "plab/scoring.hpp"

#include <optional>

#include "plab/detail/tsv.hpp"

namespace plab {

KernelBank KernelBank::standard() {
  KernelBank bank;
  bank.mus.resize(11);
  bank.sigmas.resize(11);
  bank.mus[0] = 1.0;
  bank.sigmas[0] = 1e-3;
  for (Eigen::Index k = 1; k < 11; ++k) {
    bank.mus[k] = static_cast<double>(11 - 2 * k) / 10.0;
    bank.sigmas[k] = 0.1;
  }
  return bank;
}

void KernelBank::validate() const {
  if (mus.size() == 0 || mus.size() != sigmas.size()) {
    throw Error(ErrorKind::kInvalidArgument, "kernel bank: need matching, non-empty mus and sigmas");
  }
  for (Eigen::Index k = 0; k < mus.size(); ++k) {
    if (!(mus[k] >= -1.0 && mus[k] <= 1.0)) {
      throw Error(ErrorKind::kInvalidArgument, "kernel bank: mu outside [-1, 1]");
    }
    if (!(sigmas[k] > 0.0)) {
      throw Error(ErrorKind::kInvalidArgument, "kernel bank: sigma must be positive");
    }
    if (k > 0 && !(mus[k] < mus[k - 1])) {
      throw Error(ErrorKind::kInvalidArgument, "kernel bank: mus must be strictly descending");
    }
  }
}

void write_kernel_model(const KernelBank& bank, const KernelWeights& weights,
                        const std::filesystem::path& path) {
  bank.validate();
  if (weights.w.size() != bank.size()) {
    throw Error(ErrorKind::kInvalidArgument, "kernel model: weight count != kernel count");
  }
  auto out = detail::open_output(path);
  for (Eigen::Index k = 0; k < bank.size(); ++k) {
    out << detail::format_double(bank.mus[k]) << ' ' << detail::format_double(bank.sigmas[k])
        << ' ' << detail::format_double(weights.w[k]) << '\n';
  }
  out << "bias " << detail::format_double(weights.bias) << '\n';
}

void load_kernel_model(const std::filesystem::path& path, KernelBank& bank,
                       KernelWeights& weights) {
  std::vector<double> mus, sigmas, ws;
  std::optional<double> bias;
  detail::for_each_line(path, [&](std::size_t line_no, std::string_view line) {
    auto f = detail::split_whitespace(line);
    if (f.empty()) return;
    try {
      if (f.size() == 2 && f[0] == "bias") {
        bias = detail::parse_double(f[1], "bias");
      } else if (f.size() == 3 && !bias) {
        mus.push_back(detail::parse_double(f[0], "mu"));
        sigmas.push_back(detail::parse_double(f[1], "sigma"));
        ws.push_back(detail::parse_double(f[2], "weight"));
      } else {
        throw Error(ErrorKind::kFormat, "expected 'mu sigma w' rows followed by 'bias <value>'");
      }
    } catch (const Error& e) {
      throw Error(ErrorKind::kFormat, detail::location(path, line_no) + ": " + e.what());
    }
  });
  if (!bias) throw Error(ErrorKind::kFormat, path.string() + ": missing bias line");
  KernelBank b;
  b.mus = Eigen::Map<Eigen::VectorXd>(mus.data(), static_cast<Eigen::Index>(mus.size()));
  b.sigmas = Eigen::Map<Eigen::VectorXd>(sigmas.data(), static_cast<Eigen::Index>(sigmas.size()));
  b.validate();
  bank = std::move(b);
  weights.w = Eigen::Map<Eigen::VectorXd>(ws.data(), static_cast<Eigen::Index>(ws.size()));
  weights.bias = *bias;
}

}  // namespace plab
