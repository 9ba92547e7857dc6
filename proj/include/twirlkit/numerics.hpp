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

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "twirlkit/errors.hpp"

namespace twirlkit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

namespace detail {
inline std::atomic<double> g_check_tolerance{1e-10};
}  // namespace detail

// Global tolerance used by Hermiticity, positivity, and CPTP checks.
inline double check_tolerance() noexcept { return detail::g_check_tolerance.load(); }
inline void set_check_tolerance(double tol) {
  if (!(tol > 0.0)) throw DomainError("check tolerance must be positive");
  detail::g_check_tolerance.store(tol);
}

inline ComplexMatrix identity(Index dim) { return ComplexMatrix::Identity(dim, dim); }
inline ComplexMatrix zeros(Index rows, Index cols) { return ComplexMatrix::Zero(rows, cols); }

inline ComplexMatrix dagger(const ComplexMatrix& a) { return a.adjoint(); }
inline Complex trace(const ComplexMatrix& a) { return a.trace(); }

/// Largest entry modulus; the max-norm used for every "within tol" comparison.
inline double max_abs(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("max_abs_diff: shape mismatch");
  }
  return max_abs(a - b);
}

inline void require_square(const ComplexMatrix& a, const char* who) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw DimensionError(std::string(who) + ": matrix must be square and nonempty, got " +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

/// True iff max|A - A^dagger| <= tol.
inline bool is_hermitian(const ComplexMatrix& a, double tol = check_tolerance()) {
  if (a.rows() != a.cols()) return false;
  return max_abs(a - a.adjoint()) <= tol;
}

/// Smallest eigenvalue of the Hermitian part of a.
inline double min_eigenvalue(const ComplexMatrix& a) {
  require_square(a, "min_eigenvalue");
  const ComplexMatrix herm = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

/// Hermitian and every eigenvalue >= -tol.
inline bool is_psd(const ComplexMatrix& a, double tol = check_tolerance()) {
  return is_hermitian(a, tol) && min_eigenvalue(a) >= -tol;
}

/// Kronecker product; (A (x) B)(i*p + k, j*q + l) = A(i, j) B(k, l).
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Induced 1-norm (maximum absolute column sum).
inline double norm1(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().colwise().sum().maxCoeff();
}

/// Matrix exponential by scaling and squaring around a [13/13] Pade core.
///
/// The scaling exponent is chosen so that ||A/2^s||_1 <= 5.37, the range in
/// which the degree-13 approximant is accurate to double precision.
inline ComplexMatrix mat_exp(const ComplexMatrix& a) {
  require_square(a, "mat_exp");
  const Index dim = a.rows();
  static constexpr double kB[] = {64764752532480000.0,
                                  32382376266240000.0,
                                  7771770303897600.0,
                                  1187353796428800.0,
                                  129060195264000.0,
                                  10559470521600.0,
                                  670442572800.0,
                                  33522128640.0,
                                  1323241920.0,
                                  40840800.0,
                                  960960.0,
                                  16380.0,
                                  182.0,
                                  1.0};
  constexpr double kTheta13 = 5.371920351148152;

  const double norm = norm1(a);
  if (!std::isfinite(norm)) throw DomainError("mat_exp: non-finite input");
  int squarings = 0;
  if (norm > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
  }
  const ComplexMatrix scaled = a / std::ldexp(1.0, squarings);
  const ComplexMatrix id = identity(dim);
  const ComplexMatrix a2 = scaled * scaled;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;

  const ComplexMatrix u_inner = a6 * (kB[13] * a6 + kB[11] * a4 + kB[9] * a2) + kB[7] * a6 +
                                kB[5] * a4 + kB[3] * a2 + kB[1] * id;
  const ComplexMatrix u = scaled * u_inner;
  const ComplexMatrix v = a6 * (kB[12] * a6 + kB[10] * a4 + kB[8] * a2) + kB[6] * a6 +
                          kB[4] * a4 + kB[2] * a2 + kB[0] * id;

  ComplexMatrix result = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) result = result * result;
  return result;
}

/// Solves A X = B.
///
/// Rejects A when its reciprocal condition estimate puts cond_1(A) above
/// `condition_cap`; the thrown SingularityError carries the estimate.
inline ComplexMatrix solve_linear(const ComplexMatrix& a, const ComplexMatrix& b,
                                  double condition_cap = 1e12) {
  require_square(a, "solve_linear");
  if (b.rows() != a.rows()) {
    throw DimensionError("solve_linear: right-hand side has " + std::to_string(b.rows()) +
                         " rows, expected " + std::to_string(a.rows()));
  }
  const Eigen::PartialPivLU<ComplexMatrix> lu(a);
  const double rcond = lu.rcond();
  double condition =
      rcond > 0.0 && std::isfinite(rcond) ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  // The pivot ratio bounds cond_1 from below and catches exact zeros the estimator can miss.
  const Eigen::VectorXd pivots = lu.matrixLU().diagonal().cwiseAbs();
  const double pivot_ratio = pivots.maxCoeff() / pivots.minCoeff();
  if (!(pivot_ratio <= condition)) {
    condition = std::isfinite(pivot_ratio) ? pivot_ratio : std::numeric_limits<double>::infinity();
  }
  if (!(condition <= condition_cap)) {
    throw SingularityError("solve_linear: matrix is singular or ill-conditioned", condition);
  }
  ComplexMatrix x = lu.solve(b);
  // One step of iterative refinement.
  const ComplexMatrix residual = b - a * x;
  x += lu.solve(residual);
  return x;
}

/// Column-stacking vectorization: vec(A rho B) = (B^T (x) A) vec(rho).
inline ComplexVector vec(const ComplexMatrix& a) {
  return Eigen::Map<const ComplexVector>(a.data(), a.size());
}

inline ComplexMatrix unvec(const ComplexVector& v, Index dim) {
  if (v.size() != dim * dim) throw DimensionError("unvec: length is not dim^2");
  return Eigen::Map<const ComplexMatrix>(v.data(), dim, dim);
}

}  // namespace twirlkit
