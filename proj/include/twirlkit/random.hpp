// Copyright 2026 The twirlkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <cstdlib>
#include <random>
#include <string>

#include "twirlkit/channel.hpp"

namespace twirlkit {

/// Seed for random test channels; TWIRLKIT_SEED overrides `fallback`.
inline std::uint64_t seed_from_env(std::uint64_t fallback) {
  if (const char* env = std::getenv("TWIRLKIT_SEED"); env != nullptr && *env != '\0') {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ConfigError(std::string("TWIRLKIT_SEED is not an unsigned integer: ") + env);
    }
  }
  return fallback;
}

/// Random channels, states, and matrices for property tests.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  /// Entries i.i.d. standard complex Gaussian.
  ComplexMatrix ginibre(Index rows, Index cols) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
      for (Index i = 0; i < rows; ++i) m(i, j) = Complex(normal(engine_), normal(engine_));
    }
    return m;
  }

  ComplexMatrix unitary(Index dim) {
    const ComplexMatrix z = ginibre(dim, dim);
    const Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Phase fix makes Q Haar distributed.
    for (Index k = 0; k < dim; ++k) {
      const Complex d = r(k, k);
      if (std::abs(d) > 0.0) q.col(k) *= d / std::abs(d);
    }
    return q;
  }

  /// Haar-random isometry V (rank*d x d) split into `rank` Kraus blocks.
  KrausChannel channel(int n, int rank) {
    if (rank < 1) throw DomainError("RandomSource::channel: rank must be positive");
    const Index dim = pow2(n);
    const ComplexMatrix u = unitary(dim * rank);
    std::vector<ComplexMatrix> kraus;
    kraus.reserve(static_cast<std::size_t>(rank));
    for (int k = 0; k < rank; ++k) kraus.push_back(u.block(k * dim, 0, dim, dim));
    return KrausChannel(std::move(kraus));
  }

  /// Ginibre-ensemble mixed state.
  DensityMatrix density_matrix(int n) {
    const ComplexMatrix g = ginibre(pow2(n), pow2(n));
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace();
    rho = 0.5 * (rho + rho.adjoint());
    return DensityMatrix(std::move(rho));
  }

  ComplexVector state(int n) {
    ComplexVector psi = ginibre(pow2(n), 1).col(0);
    return psi / psi.norm();
  }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace twirlkit
