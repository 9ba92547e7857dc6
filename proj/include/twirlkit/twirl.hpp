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

#include <cmath>
#include <functional>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "twirlkit/channel.hpp"
#include "twirlkit/csv.hpp"

namespace twirlkit {

/// Probabilistic Pauli channel rho -> sum_m probs[m] P_m rho P_m.
struct PauliChannel {
  int n = 0;
  std::vector<double> probs;

  double identity_probability() const { return probs.at(0); }
  double operator[](const PauliString& p) const { return probs.at(p.index()); }

  void validate(double tol = check_tolerance()) const {
    if (probs.size() != pow4(n)) throw DimensionError("PauliChannel: expected 4^n probabilities");
    for (double p : probs) {
      if (!(p >= -1e-12 && p <= 1.0 + 1e-12)) {
        throw ValidationError("PauliChannel: probability " + std::to_string(p) +
                              " outside [0, 1]");
      }
    }
    const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
    if (std::abs(total - 1.0) > tol) {
      throw ValidationError("PauliChannel: probabilities sum to " + std::to_string(total));
    }
  }
};

/// Kraus form {sqrt(p_m) P_m}; tiny negative round-off is clipped to zero.
inline KrausChannel to_kraus(const PauliChannel& pc) {
  pc.validate();
  std::vector<ComplexMatrix> kraus;
  for (std::size_t m = 0; m < pc.probs.size(); ++m) {
    if (pc.probs[m] <= 0.0) continue;
    kraus.push_back(std::sqrt(pc.probs[m]) * pauli_matrix(PauliString::from_index(pc.n, m)));
  }
  return KrausChannel(std::move(kraus));
}

/// Choi matrix J = sum_ab |a><b| (x) Phi(|a><b|) of an arbitrary linear map.
inline ComplexMatrix process_choi(const std::function<ComplexMatrix(const ComplexMatrix&)>& map,
                                  Index dim) {
  ComplexMatrix choi = zeros(dim * dim, dim * dim);
  for (Index a = 0; a < dim; ++a) {
    for (Index b = 0; b < dim; ++b) {
      ComplexMatrix unit = zeros(dim, dim);
      unit(a, b) = 1.0;
      choi.block(a * dim, b * dim, dim, dim) = map(unit);
    }
  }
  return choi;
}

/// <<P|J|P>> / d^2: the coefficient of P rho P in a map with Choi matrix J.
inline double diagonal_pauli_weight(const ComplexMatrix& choi, const ComplexMatrix& pauli) {
  const Index dim = pauli.rows();
  ComplexVector ket(dim * dim);
  for (Index a = 0; a < dim; ++a) {
    for (Index r = 0; r < dim; ++r) ket(a * dim + r) = pauli(r, a);
  }
  const Complex w = ket.adjoint() * choi * ket;
  return w.real() / static_cast<double>(dim * dim);
}

inline constexpr int kMaxBruteforceTwirlQubits = 2;

/// Literal twirl average (1/4^n) sum_m P_m Lambda(P_m rho P_m) P_m, read back
/// through its Choi matrix.
inline PauliChannel twirl_bruteforce(const KrausChannel& ch) {
  const int n = ch.qubits();
  require_qubits(n, kMaxBruteforceTwirlQubits, "twirl_bruteforce");
  const std::size_t count = pow4(n);
  std::vector<ComplexMatrix> paulis;
  paulis.reserve(count);
  for (std::size_t m = 0; m < count; ++m) {
    paulis.push_back(pauli_matrix(PauliString::from_index(n, m)));
  }
  auto twirled = [&](const ComplexMatrix& x) {
    ComplexMatrix out = zeros(x.rows(), x.cols());
    for (const auto& p : paulis) out += p.adjoint() * ch(p * x * p.adjoint()) * p;
    return ComplexMatrix(out / static_cast<double>(count));
  };
  const ComplexMatrix choi = process_choi(twirled, ch.dim());
  PauliChannel pc{n, std::vector<double>(count)};
  for (std::size_t m = 0; m < count; ++m) pc.probs[m] = diagonal_pauli_weight(choi, paulis[m]);
  return pc;
}

/// Twirl through the chi-matrix diagonal: probs[m] = chi_mm.
inline PauliChannel twirl_diagonal(const KrausChannel& ch) {
  const PauliExpansion chi = pauli_expansion(ch);
  PauliChannel pc{chi.n, std::vector<double>(pow4(chi.n))};
  for (std::size_t m = 0; m < pc.probs.size(); ++m) {
    pc.probs[m] = chi.coeffs(static_cast<Index>(m), static_cast<Index>(m)).real();
  }
  return pc;
}

/// Generator rho' = sum_m gamma[m] P_m rho P_m (gamma[0] multiplies rho itself).
struct PtaRates {
  int n = 0;
  std::vector<double> gamma;

  ComplexMatrix operator()(const ComplexMatrix& rho) const {
    ComplexMatrix out = zeros(rho.rows(), rho.cols());
    for (std::size_t m = 0; m < gamma.size(); ++m) {
      if (gamma[m] == 0.0) continue;
      const ComplexMatrix p = pauli_matrix(PauliString::from_index(n, m));
      out += gamma[m] * (p * rho * p);
    }
    return out;
  }

  /// Column-stacking superoperator.
  ComplexMatrix superoperator() const {
    const Index d2 = pow2(n) * pow2(n);
    ComplexMatrix s = zeros(d2, d2);
    for (std::size_t m = 0; m < gamma.size(); ++m) {
      if (gamma[m] == 0.0) continue;
      const ComplexMatrix p = pauli_matrix(PauliString::from_index(n, m));
      s += gamma[m] * kron(p.transpose(), p);
    }
    return s;
  }
};

/// First-order generator whose t_step flow reproduces the Pauli channel to O(t_step^2).
inline PtaRates pta_rates(const PauliChannel& pc, double t_step) {
  if (!(t_step > 0.0)) throw DomainError("pta_rates: t_step must be positive");
  pc.validate();
  if (!(pc.identity_probability() > 0.5)) {
    throw DomainError("pta_rates: identity probability " +
                      std::to_string(pc.identity_probability()) +
                      " <= 0.5, too far from the identity for a generator");
  }
  PtaRates rates{pc.n, std::vector<double>(pc.probs.size())};
  rates.gamma[0] = (pc.probs[0] - 1.0) / t_step;
  for (std::size_t m = 1; m < pc.probs.size(); ++m) rates.gamma[m] = pc.probs[m] / t_step;
  return rates;
}

inline void write_csv(std::ostream& out, const PauliChannel& pc) {
  csv::Writer w(out);
  w.header({"pauli_string", "probability"});
  for (std::size_t m = 0; m < pc.probs.size(); ++m) {
    w.row(PauliString::from_index(pc.n, m).str(), pc.probs[m]);
  }
}

}  // namespace twirlkit
