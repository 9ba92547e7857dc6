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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twirlkit/channel.hpp"

namespace twirlkit {

/// A one-parameter channel family phi_t with phi_0 = id.
struct ChannelFamily {
  int n = 1;
  std::function<KrausChannel(double)> at;
  std::string label;
  /// Optional exact dF/dt in the normalized Pauli basis.
  std::function<ComplexMatrix(double)> transfer_derivative;
};

/// Throws ValidationError unless phi_0 is the identity map.
inline void check_family(const ChannelFamily& fam, double tol = check_tolerance()) {
  const KrausChannel zero = fam.at(0.0);
  if (zero.qubits() != fam.n) throw DimensionError("ChannelFamily '" + fam.label + "': qubit count");
  const ComplexMatrix deviation = superoperator(zero) - identity(zero.dim() * zero.dim());
  if (max_abs(deviation) > tol) {
    throw ValidationError("ChannelFamily '" + fam.label + "': phi_0 is not the identity");
  }
}

/// phi_t = amplitude damping with lambda(t) = 1 - exp(-t / T1).
inline ChannelFamily amplitude_damping_family(double t1) {
  if (!(t1 > 0.0)) throw DomainError("amplitude_damping_family: T1 must be positive");
  ChannelFamily fam;
  fam.n = 1;
  fam.label = "amplitude_damping";
  fam.at = [t1](double t) { return amplitude_damping(lambda_of_time(t, t1)); };
  fam.transfer_derivative = [t1](double t) {
    const double decay = std::exp(-t / t1);
    const double coherence = -0.5 / t1 * std::exp(-0.5 * t / t1);
    ComplexMatrix d = zeros(4, 4);
    d(1, 1) = coherence;
    d(2, 2) = coherence;
    d(3, 0) = decay / t1;
    d(3, 3) = -decay / t1;
    return d;
  };
  return fam;
}

/// phi_t(rho) = U rho U^dagger with U = exp(-i H t).
inline ChannelFamily unitary_family(const ComplexMatrix& hamiltonian, std::string label = "unitary") {
  require_square(hamiltonian, "unitary_family");
  if (!is_hermitian(hamiltonian)) throw ValidationError("unitary_family: H must be Hermitian");
  ChannelFamily fam;
  fam.n = qubits_for_dimension(hamiltonian.rows(), "unitary_family");
  fam.label = std::move(label);
  fam.at = [hamiltonian](double t) {
    return KrausChannel::unitary(mat_exp(-kI * t * hamiltonian));
  };
  return fam;
}

inline ComplexMatrix f_matrix(const ChannelFamily& fam, double t) {
  if (!(t >= 0.0)) throw DomainError("f_matrix: t must be nonnegative");
  return transfer_matrix(fam.at(t));
}

/// Central difference (F(t+h) - F(t-h)) / 2h for t >= h; the second-order
/// one-sided stencil (-3F(0) + 4F(h) - F(2h)) / 2h at t = 0.
inline ComplexMatrix f_dot(const ChannelFamily& fam, double t, double h) {
  if (!(h > 0.0)) throw DomainError("f_dot: step h must be positive");
  if (t == 0.0) {
    return (-3.0 * f_matrix(fam, 0.0) + 4.0 * f_matrix(fam, h) - f_matrix(fam, 2.0 * h)) /
           (2.0 * h);
  }
  if (!(t >= h)) {
    throw DomainError("f_dot: need t = 0 or t >= h (t = " + std::to_string(t) +
                      ", h = " + std::to_string(h) + ")");
  }
  return (f_matrix(fam, t + h) - f_matrix(fam, t - h)) / (2.0 * h);
}

enum class Derivative { kFiniteDifference, kAnalytic };

inline ComplexMatrix f_dot(const ChannelFamily& fam, double t, double h, Derivative mode) {
  if (mode == Derivative::kFiniteDifference) return f_dot(fam, t, h);
  if (!fam.transfer_derivative) {
    throw DomainError("f_dot: family '" + fam.label + "' has no analytic derivative");
  }
  return fam.transfer_derivative(t);
}

inline constexpr double kConditionCap = 1e12;

/// L = dF/dt F^{-1}, computed as the solution of F^T L^T = (dF/dt)^T.
inline ComplexMatrix generator_L(const ChannelFamily& fam, double t, double h,
                                 Derivative mode = Derivative::kFiniteDifference,
                                 double condition_cap = kConditionCap) {
  const ComplexMatrix f = f_matrix(fam, t);
  const ComplexMatrix fdot = f_dot(fam, t, h, mode);
  return solve_linear(f.transpose(), fdot.transpose(), condition_cap).transpose();
}

/// Applies a generator given by its matrix in the normalized Pauli basis.
inline ComplexMatrix apply_generator(const ComplexMatrix& L, const HermitianBasis& basis,
                                     const ComplexMatrix& rho) {
  return basis.synthesize(L * basis.coefficients(rho));
}

/// Choi matrix over tau-basis pairs, R_ef = <e1| L(|e2><f2|) |f1>, so that
/// L(rho) = sum_ef R_ef tau_e rho tau_f^dagger.
///
/// Each column block is the contraction sum_cd L_dc <f2|G_c|e2> <e1|G_d|f1>.
inline ComplexMatrix choi_from_generator(const ComplexMatrix& L, const HermitianBasis& basis) {
  const Index dim = pow2(basis.n);
  ComplexMatrix r(dim * dim, dim * dim);
  for (Index e2 = 0; e2 < dim; ++e2) {
    for (Index f2 = 0; f2 < dim; ++f2) {
      ComplexMatrix unit = zeros(dim, dim);
      unit(e2, f2) = 1.0;
      const ComplexMatrix image = apply_generator(L, basis, unit);
      for (Index e1 = 0; e1 < dim; ++e1) {
        for (Index f1 = 0; f1 < dim; ++f1) r(e1 * dim + e2, f1 * dim + f2) = image(e1, f1);
      }
    }
  }
  return r;
}

/// sum_ef R_ef tau_e rho tau_f^dagger.
inline ComplexMatrix apply_choi(const ComplexMatrix& r, const ComplexMatrix& rho) {
  const Index dim = rho.rows();
  if (r.rows() != dim * dim || r.cols() != dim * dim) throw DimensionError("apply_choi: shape");
  ComplexMatrix out = zeros(dim, dim);
  for (Index e1 = 0; e1 < dim; ++e1) {
    for (Index f1 = 0; f1 < dim; ++f1) {
      Complex acc = 0.0;
      for (Index e2 = 0; e2 < dim; ++e2) {
        for (Index f2 = 0; f2 < dim; ++f2) acc += r(e1 * dim + e2, f1 * dim + f2) * rho(e2, f2);
      }
      out(e1, f1) = acc;
    }
  }
  return out;
}

inline ComplexMatrix choi_R(const ChannelFamily& fam, double t, double h,
                            Derivative mode = Derivative::kFiniteDifference,
                            double condition_cap = kConditionCap) {
  return choi_from_generator(generator_L(fam, t, h, mode, condition_cap), hermitian_basis(fam.n));
}

struct JumpOperator {
  ComplexMatrix op;
  double rate = 0.0;
};

struct GeneratorDecomposition {
  ComplexMatrix hamiltonian;
  std::vector<JumpOperator> jumps;
};

/// -i[H, rho] + sum_k rate_k (A rho A^dagger - {A^dagger A, rho} / 2)
inline ComplexMatrix lindblad_action(const ComplexMatrix& hamiltonian,
                                     const std::vector<JumpOperator>& jumps,
                                     const ComplexMatrix& rho) {
  ComplexMatrix out = -kI * (hamiltonian * rho - rho * hamiltonian);
  for (const auto& j : jumps) {
    const ComplexMatrix ada = j.op.adjoint() * j.op;
    out += j.rate * (j.op * rho * j.op.adjoint() - 0.5 * (ada * rho + rho * ada));
  }
  return out;
}

/// Column-stacking superoperator of the Lindblad form.
inline ComplexMatrix lindblad_superoperator(const ComplexMatrix& hamiltonian,
                                            const std::vector<JumpOperator>& jumps) {
  const Index dim = hamiltonian.rows();
  const ComplexMatrix id = identity(dim);
  ComplexMatrix s = -kI * (kron(id, hamiltonian) - kron(hamiltonian.transpose(), id));
  for (const auto& j : jumps) {
    const ComplexMatrix ada = j.op.adjoint() * j.op;
    s += j.rate * (kron(j.op.conjugate(), j.op) -
                   0.5 * (kron(id, ada) + kron(ada.transpose(), id)));
  }
  return s;
}

/// L_kl = tr(G_k L(G_l)) for a Lindblad form.
inline ComplexMatrix generator_matrix(const ComplexMatrix& hamiltonian,
                                      const std::vector<JumpOperator>& jumps,
                                      const HermitianBasis& basis) {
  const auto size = static_cast<Index>(basis.size());
  ComplexMatrix L(size, size);
  for (Index l = 0; l < size; ++l) {
    L.col(l) = basis.coefficients(
        lindblad_action(hamiltonian, jumps, basis[static_cast<std::size_t>(l)]));
  }
  return L;
}

inline constexpr double kJumpDropRate = 1e-8;
inline constexpr double kNonMarkovianRate = -1e-6;

/// Splits a generator, given by its tau-basis Choi matrix, into a traceless
/// Hamiltonian and jump operators.
///
/// R is rotated into the normalized Pauli basis (C = U R U^dagger with
/// U_ae = tr(G_a tau_e)). The identity row and column of C carry the
/// Hamiltonian; the remaining block is diagonalized, its eigenvectors give
/// unit-norm jump operators and its eigenvalues the rates. Rates at or below
/// 1e-8 are dropped; anything below -1e-6 throws NonMarkovianError.
inline GeneratorDecomposition decompose_generator(const ComplexMatrix& r) {
  require_square(r, "decompose_generator");
  const int n = qubits_for_dimension(
      static_cast<Index>(std::llround(std::sqrt(static_cast<double>(r.rows())))),
      "decompose_generator");
  const Index dim = pow2(n);
  if (dim * dim != r.rows()) throw DimensionError("decompose_generator: R must be 4^n x 4^n");
  const double scale = std::max(1.0, max_abs(r));
  if (max_abs(r - r.adjoint()) > 1e-6 * scale) {
    throw ValidationError("decompose_generator: R is not Hermitian");
  }
  const auto basis = hermitian_basis(n);
  const Index size = dim * dim;
  ComplexMatrix u(size, size);
  for (Index a = 0; a < size; ++a) {
    const ComplexMatrix& g = basis[static_cast<std::size_t>(a)];
    for (Index e = 0; e < size; ++e) u(a, e) = g(e % dim, e / dim);
  }
  ComplexMatrix c = u * (0.5 * (r + r.adjoint())) * u.adjoint();
  c = 0.5 * (c + c.adjoint());

  const double inv_sqrt_dim = 1.0 / std::sqrt(static_cast<double>(dim));
  ComplexMatrix f = (c(0, 0) / (2.0 * static_cast<double>(dim))) * identity(dim);
  for (Index a = 1; a < size; ++a) {
    f += inv_sqrt_dim * c(a, 0) * basis[static_cast<std::size_t>(a)];
  }
  ComplexMatrix h = 0.5 * kI * (f - f.adjoint());
  h -= (h.trace() / static_cast<double>(dim)) * identity(dim);
  h = 0.5 * (h + h.adjoint());

  GeneratorDecomposition out{h, {}};
  if (size == 1) return out;
  const Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(c.bottomRightCorner(size - 1, size - 1));
  for (Index k = size - 2; k >= 0; --k) {
    const double rate = eig.eigenvalues()(k);
    if (rate < kNonMarkovianRate) {
      throw NonMarkovianError("decompose_generator: negative jump rate", rate);
    }
    if (rate <= kJumpDropRate) continue;
    ComplexMatrix op = zeros(dim, dim);
    for (Index a = 1; a < size; ++a) {
      op += eig.eigenvectors()(a - 1, k) * basis[static_cast<std::size_t>(a)];
    }
    // Fix the global phase so the largest-modulus entry is real positive.
    Index row = 0, col = 0;
    op.cwiseAbs().maxCoeff(&row, &col);
    const Complex pivot = op(row, col);
    op *= std::abs(pivot) / pivot;
    out.jumps.push_back({std::move(op), rate});
  }
  return out;
}

/// Time-local generator of a channel family at one instant.
struct GeneratorSnapshot {
  double t = 0.0;
  ComplexMatrix L;
  ComplexMatrix R;
  ComplexMatrix hamiltonian;
  std::vector<JumpOperator> jumps;

  ComplexMatrix operator()(const ComplexMatrix& rho) const {
    return lindblad_action(hamiltonian, jumps, rho);
  }

  /// max |L - L(hamiltonian, jumps)|
  double reassembly_error() const {
    const auto basis = hermitian_basis(qubits_for_dimension(hamiltonian.rows(), "snapshot"));
    return max_abs(L - generator_matrix(hamiltonian, jumps, basis));
  }
};

inline GeneratorSnapshot snapshot(const ChannelFamily& fam, double t, double h,
                                  Derivative mode = Derivative::kFiniteDifference) {
  GeneratorSnapshot s;
  s.t = t;
  s.L = generator_L(fam, t, h, mode);
  s.R = choi_from_generator(s.L, hermitian_basis(fam.n));
  auto parts = decompose_generator(s.R);
  s.hamiltonian = std::move(parts.hamiltonian);
  s.jumps = std::move(parts.jumps);
  return s;
}

/// Closed-form amplitude-damping generator
///   rho' = -(f'/f) (2 s- rho s+ - {s+ s-, rho}),  f(t) = sqrt(1 - lambda(t)).
inline ComplexMatrix ad_generator_action(double t1, double t, const ComplexMatrix& rho) {
  const double lambda = lambda_of_time(t, t1);
  const double f = std::sqrt(1.0 - lambda);
  const double lambda_dot = std::exp(-t / t1) / t1;
  const double f_dot_value = -lambda_dot / (2.0 * f);
  const ComplexMatrix sm = sigma_minus();
  const ComplexMatrix sp = sigma_plus();
  const ComplexMatrix n_op = sp * sm;
  return -(f_dot_value / f) * (2.0 * sm * rho * sp - (n_op * rho + rho * n_op));
}

/// Fixed probe states for generator comparisons.
inline std::vector<ComplexMatrix> probe_states_single_qubit() {
  std::vector<ComplexMatrix> states;
  auto pure = [](Complex a, Complex b) {
    ComplexVector psi(2);
    psi << a, b;
    psi.normalize();
    return ComplexMatrix(psi * psi.adjoint());
  };
  states.push_back(pure(1.0, 0.0));
  states.push_back(pure(0.0, 1.0));
  states.push_back(pure(1.0, 1.0));
  states.push_back(pure(1.0, kI));
  states.push_back(pure(0.6, Complex(0.48, -0.64)));
  states.push_back(0.5 * identity(2));
  ComplexMatrix mixed(2, 2);
  mixed << 0.3, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.7;
  states.push_back(mixed);
  return states;
}

/// Largest entry deviation between the extracted generator (through choi_R)
/// and the closed-form amplitude-damping generator over the probe states.
inline double verify_ad_generator(double t1, double t, double h) {
  if (!(t1 > 0.0)) throw DomainError("verify_ad_generator: T1 must be positive");
  if (!(t >= 0.0 && t <= 5.0 * t1)) {
    throw DomainError("verify_ad_generator: t must lie in [0, 5 T1]");
  }
  const ComplexMatrix r = choi_R(amplitude_damping_family(t1), t, h);
  double worst = 0.0;
  for (const auto& rho : probe_states_single_qubit()) {
    worst = std::max(worst, max_abs(apply_choi(r, rho) - ad_generator_action(t1, t, rho)));
  }
  return worst;
}

}  // namespace twirlkit
