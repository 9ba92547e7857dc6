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
#include <string>
#include <utility>
#include <vector>

#include "twirlkit/numerics.hpp"
#include "twirlkit/pauli.hpp"

namespace twirlkit {

inline int qubits_for_dimension(Index dim, const char* who) {
  int n = 0;
  while (pow2(n) < dim) ++n;
  if (n < 1 || pow2(n) != dim) {
    throw DimensionError(std::string(who) + ": dimension " + std::to_string(dim) +
                         " is not 2^n with n >= 1");
  }
  return n;
}

/// Unit trace is required for states; the relaxed mode admits the
/// sub-normalized states produced by no-jump evolution.
enum class TraceMode { kUnit, kAtMostOne };

class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix matrix, TraceMode mode = TraceMode::kUnit,
                         double tol = check_tolerance())
      : matrix_(std::move(matrix)) {
    require_square(matrix_, "DensityMatrix");
    n_ = qubits_for_dimension(matrix_.rows(), "DensityMatrix");
    if (!is_hermitian(matrix_, tol)) throw ValidationError("DensityMatrix: not Hermitian");
    const double tr = matrix_.trace().real();
    if (mode == TraceMode::kUnit && std::abs(tr - 1.0) > tol) {
      throw ValidationError("DensityMatrix: trace " + std::to_string(tr) + " != 1");
    }
    if (mode == TraceMode::kAtMostOne && tr > 1.0 + tol) {
      throw ValidationError("DensityMatrix: trace " + std::to_string(tr) + " > 1");
    }
    if (min_eigenvalue(matrix_) < -tol) throw ValidationError("DensityMatrix: negative eigenvalue");
  }

  /// |psi><psi| for a normalized state vector.
  static DensityMatrix pure(const ComplexVector& psi) {
    return DensityMatrix(psi * psi.adjoint());
  }

  /// Computational basis projector |k><k|.
  static DensityMatrix basis_state(int n, Index k) {
    ComplexMatrix m = zeros(pow2(n), pow2(n));
    m(k, k) = 1.0;
    return DensityMatrix(std::move(m));
  }

  int qubits() const noexcept { return n_; }
  Index dim() const noexcept { return matrix_.rows(); }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  double trace() const { return matrix_.trace().real(); }

 private:
  int n_ = 0;
  ComplexMatrix matrix_;
};

/// Completely positive map rho -> sum_m E_m rho E_m^dagger.
class KrausChannel {
 public:
  KrausChannel(std::vector<ComplexMatrix> kraus, bool trace_preserving = true,
               double tol = check_tolerance())
      : kraus_(std::move(kraus)), trace_preserving_(trace_preserving) {
    if (kraus_.empty()) throw ValidationError("KrausChannel: no Kraus operators");
    require_square(kraus_.front(), "KrausChannel");
    n_ = qubits_for_dimension(kraus_.front().rows(), "KrausChannel");
    require_qubits(n_, kMaxQubits, "KrausChannel");
    for (const auto& k : kraus_) {
      if (k.rows() != dim() || k.cols() != dim()) {
        throw DimensionError("KrausChannel: Kraus operators differ in dimension");
      }
    }
    const ComplexMatrix deviation = completeness() - identity(dim());
    if (trace_preserving_) {
      if (max_abs(deviation) > tol) {
        throw ValidationError("KrausChannel: sum E^dagger E deviates from identity by " +
                              std::to_string(max_abs(deviation)));
      }
    } else if (min_eigenvalue(-deviation) < -tol) {
      throw ValidationError("KrausChannel: sum E^dagger E exceeds identity");
    }
  }

  static KrausChannel identity_channel(int n) { return KrausChannel({identity(pow2(n))}); }

  static KrausChannel unitary(const ComplexMatrix& u) { return KrausChannel({u}); }

  int qubits() const noexcept { return n_; }
  Index dim() const noexcept { return kraus_.front().rows(); }
  const std::vector<ComplexMatrix>& kraus() const noexcept { return kraus_; }
  bool trace_preserving() const noexcept { return trace_preserving_; }

  /// sum_m E_m^dagger E_m
  ComplexMatrix completeness() const {
    ComplexMatrix sum = zeros(dim(), dim());
    for (const auto& k : kraus_) sum += k.adjoint() * k;
    return sum;
  }

  /// Action on an arbitrary operator (not necessarily a state).
  ComplexMatrix operator()(const ComplexMatrix& x) const {
    if (x.rows() != dim() || x.cols() != dim()) {
      throw DimensionError("KrausChannel: operand is " + std::to_string(x.rows()) + "x" +
                           std::to_string(x.cols()) + ", channel acts on dimension " +
                           std::to_string(dim()));
    }
    ComplexMatrix out = zeros(dim(), dim());
    for (const auto& k : kraus_) out += k * x * k.adjoint();
    return out;
  }

 private:
  int n_ = 0;
  std::vector<ComplexMatrix> kraus_;
  bool trace_preserving_ = true;
};

/// lambda = 1 - exp(-t_step / T1).
inline double lambda_of_time(double t_step, double t1) {
  if (!(t1 > 0.0)) throw DomainError("lambda_of_time: T1 must be positive");
  if (!(t_step >= 0.0)) throw DomainError("lambda_of_time: t_step must be nonnegative");
  return -std::expm1(-t_step / t1);
}

/// Single-qubit amplitude damping: E1 = diag(1, sqrt(1 - lambda)), E2 = sqrt(lambda) |0><1|.
inline KrausChannel amplitude_damping(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw DomainError("amplitude_damping: lambda " + std::to_string(lambda) + " outside [0, 1]");
  }
  ComplexMatrix e1 = zeros(2, 2);
  e1(0, 0) = 1.0;
  e1(1, 1) = std::sqrt(1.0 - lambda);
  ComplexMatrix e2 = zeros(2, 2);
  e2(0, 1) = std::sqrt(lambda);
  return KrausChannel({std::move(e1), std::move(e2)});
}

inline DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho) {
  if (rho.dim() != ch.dim()) throw DimensionError("apply: dimension mismatch");
  return DensityMatrix(ch(rho.matrix()),
                       ch.trace_preserving() ? TraceMode::kUnit : TraceMode::kAtMostOne);
}

/// outer o inner, Kraus set {A_i B_j}.
inline KrausChannel compose(const KrausChannel& outer, const KrausChannel& inner) {
  if (outer.dim() != inner.dim()) throw DimensionError("compose: dimension mismatch");
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(outer.kraus().size() * inner.kraus().size());
  for (const auto& a : outer.kraus()) {
    for (const auto& b : inner.kraus()) kraus.push_back(a * b);
  }
  return KrausChannel(std::move(kraus), outer.trace_preserving() && inner.trace_preserving());
}

/// Joint channel a (x) b, a acting on the leading qubits.
inline KrausChannel tensor(const KrausChannel& a, const KrausChannel& b) {
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(a.kraus().size() * b.kraus().size());
  for (const auto& ka : a.kraus()) {
    for (const auto& kb : b.kraus()) kraus.push_back(kron(ka, kb));
  }
  return KrausChannel(std::move(kraus), a.trace_preserving() && b.trace_preserving());
}

inline KrausChannel tensor_power(const KrausChannel& ch, int copies) {
  if (copies < 1) throw DomainError("tensor_power: copies must be positive");
  KrausChannel out = ch;
  for (int k = 1; k < copies; ++k) out = tensor(out, ch);
  return out;
}

/// F_kl = tr(G_k Lambda(G_l)) in the normalized Pauli basis.
inline ComplexMatrix transfer_matrix(const KrausChannel& ch, const HermitianBasis& basis) {
  if (basis.n != ch.qubits()) throw DimensionError("transfer_matrix: basis size mismatch");
  const auto size = static_cast<Index>(basis.size());
  ComplexMatrix f(size, size);
  for (Index l = 0; l < size; ++l) {
    f.col(l) = basis.coefficients(ch(basis[static_cast<std::size_t>(l)]));
  }
  return f;
}

inline ComplexMatrix transfer_matrix(const KrausChannel& ch) {
  return transfer_matrix(ch, hermitian_basis(ch.qubits()));
}

/// Matrix S with vec(Lambda(rho)) = S vec(rho) under column-stacking vec.
inline ComplexMatrix superoperator(const KrausChannel& ch) {
  const Index d2 = ch.dim() * ch.dim();
  ComplexMatrix s = zeros(d2, d2);
  for (const auto& k : ch.kraus()) s += kron(k.conjugate(), k);
  return s;
}

/// Lambda(rho) = sum_ij coeffs(i, j) P_i rho P_j over unnormalized Pauli strings.
struct PauliExpansion {
  int n = 0;
  ComplexMatrix coeffs;

  ComplexMatrix operator()(const ComplexMatrix& rho) const {
    const auto size = static_cast<std::size_t>(coeffs.rows());
    std::vector<ComplexMatrix> paulis;
    paulis.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
      paulis.push_back(pauli_matrix(PauliString::from_index(n, i)));
    }
    ComplexMatrix out = zeros(rho.rows(), rho.cols());
    for (std::size_t i = 0; i < size; ++i) {
      const ComplexMatrix left = paulis[i] * rho;
      for (std::size_t j = 0; j < size; ++j) {
        const Complex c = coeffs(static_cast<Index>(i), static_cast<Index>(j));
        if (c != Complex{0.0, 0.0}) out += c * left * paulis[j];
      }
    }
    return out;
  }
};

inline constexpr int kMaxChiQubits = 3;

/// Process (chi) matrix: c_ij = sum_m a_mi conj(a_mj), a_mi = tr(P_i E_m) / 2^n.
inline PauliExpansion pauli_expansion(const KrausChannel& ch) {
  const int n = ch.qubits();
  require_qubits(n, kMaxChiQubits, "pauli_expansion");
  const auto size = static_cast<Index>(pow4(n));
  const double scale = 1.0 / static_cast<double>(pow2(n));
  ComplexMatrix amplitudes(static_cast<Index>(ch.kraus().size()), size);
  for (Index i = 0; i < size; ++i) {
    const ComplexMatrix p = pauli_matrix(PauliString::from_index(n, static_cast<std::size_t>(i)));
    for (std::size_t m = 0; m < ch.kraus().size(); ++m) {
      amplitudes(static_cast<Index>(m), i) =
          scale * (p.transpose().cwiseProduct(ch.kraus()[m])).sum();
    }
  }
  return PauliExpansion{n, amplitudes.transpose() * amplitudes.conjugate()};
}

}  // namespace twirlkit
