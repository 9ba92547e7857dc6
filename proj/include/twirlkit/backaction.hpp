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

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "twirlkit/channel.hpp"
#include "twirlkit/csv.hpp"

namespace twirlkit {

/// Decay rate used in the effective Hamiltonian for amplitude damping with
/// f(t) = sqrt(1 - lambda(t)) = exp(-t / 2T1).
enum class NoJumpRate {
  kDerivativeRatio,  ///< gamma = -f'/f = 1 / (2 T1)
  kLindbladRate,     ///< gamma = -2 f'/f = 1 / T1, the jump rate of the generator
};

inline double no_jump_rate(double t1, NoJumpRate convention) {
  if (!(t1 > 0.0)) throw DomainError("no_jump_rate: T1 must be positive");
  return convention == NoJumpRate::kDerivativeRatio ? 0.5 / t1 : 1.0 / t1;
}

/// Bit-flip probability that sets the divergence threshold.
enum class ThresholdRule {
  kPx,   ///< p_X = lambda / 4
  kPxy,  ///< p_X + p_Y = lambda / 2
};

struct BackactionOptions {
  NoJumpRate rate = NoJumpRate::kDerivativeRatio;
  ThresholdRule threshold = ThresholdRule::kPx;
};

/// H_C = H_free - i (gamma / 2) sum_q (s+ s-)_q with H_free = -sum_q Z_q.
struct EffectiveHamiltonian {
  int n = 1;
  double gamma = 0.0;
  ComplexMatrix h_free;
  ComplexMatrix matrix;

  /// -i (H - H^dagger) / 2; negative semidefinite for trace-decreasing evolution.
  ComplexMatrix anti_hermitian_part() const {
    return -0.5 * kI * (matrix - matrix.adjoint());
  }

  ComplexMatrix propagator(double t) const { return mat_exp(-kI * t * matrix); }
};

inline EffectiveHamiltonian effective_hamiltonian(int n, double gamma) {
  require_qubits(n, kMaxQubits, "effective_hamiltonian");
  if (!(gamma >= 0.0)) throw DomainError("effective_hamiltonian: gamma must be nonnegative");
  const Index dim = pow2(n);
  EffectiveHamiltonian h;
  h.n = n;
  h.gamma = gamma;
  h.h_free = zeros(dim, dim);
  ComplexMatrix excitations = zeros(dim, dim);
  const ComplexMatrix z = pauli_matrix(PauliString::parse("Z"));
  const ComplexMatrix number = sigma_plus() * sigma_minus();
  for (int q = 0; q < n; ++q) {
    h.h_free -= embed(z, q, n);
    excitations += embed(number, q, n);
  }
  h.matrix = h.h_free - kI * (gamma / 2.0) * excitations;
  return h;
}

/// |1...1><1...1|
inline ComplexMatrix all_excited_state(int n) {
  const Index dim = pow2(n);
  ComplexMatrix rho = zeros(dim, dim);
  rho(dim - 1, dim - 1) = 1.0;
  return rho;
}

/// tr(exp(-i H_C t) rho0 exp(i H_C^dagger t)) from the all-excited state.
inline double no_excitation_exact(int n, double t1, double t,
                                  NoJumpRate convention = NoJumpRate::kDerivativeRatio) {
  if (!(t >= 0.0)) throw DomainError("no_excitation_exact: t must be nonnegative");
  const auto h = effective_hamiltonian(n, no_jump_rate(t1, convention));
  const ComplexMatrix u = h.propagator(t);
  return (u * all_excited_state(n) * u.adjoint()).trace().real();
}

/// exp(-n gamma t): the all-excited state is an eigenvector of H_C.
inline double no_excitation_closed_form(int n, double t1, double t,
                                        NoJumpRate convention = NoJumpRate::kDerivativeRatio) {
  return std::exp(-static_cast<double>(n) * no_jump_rate(t1, convention) * t);
}

/// No-jump probability for a time-dependent rate gamma(t), as a time-ordered
/// product of midpoint propagators.
inline double no_excitation_time_ordered(int n, const std::function<double(double)>& gamma,
                                         double t, int steps) {
  if (steps < 1) throw DomainError("no_excitation_time_ordered: steps must be positive");
  if (!(t >= 0.0)) throw DomainError("no_excitation_time_ordered: t must be nonnegative");
  const double dt = t / steps;
  ComplexMatrix u = identity(pow2(n));
  for (int k = 0; k < steps; ++k) {
    u = effective_hamiltonian(n, gamma((k + 0.5) * dt)).propagator(dt) * u;
  }
  return (u * all_excited_state(n) * u.adjoint()).trace().real();
}

/// Per-qubit (I, X, Y, Z) weights of the iterated PTA map after `step_index` steps.
struct PtaMapState {
  std::array<double, 4> probs{1.0, 0.0, 0.0, 0.0};
  std::array<double, 4> single_step{1.0, 0.0, 0.0, 0.0};
  long step_index = 1;

  double no_excitation() const { return probs[0] + probs[3]; }
};

/// Single-step twirled amplitude-damping weights at lambda = lambda_of_time(t_step, T1).
inline PtaMapState pta_step_probs(double t1, double t_step) {
  if (!(t_step > 0.0)) throw DomainError("pta_step_probs: t_step must be positive");
  const double lambda = lambda_of_time(t_step, t1);
  const double s = std::sqrt(1.0 - lambda);
  PtaMapState state;
  state.single_step = {(2.0 + 2.0 * s - lambda) / 4.0, lambda / 4.0, lambda / 4.0,
                       (2.0 - 2.0 * s - lambda) / 4.0};
  state.probs = state.single_step;
  state.step_index = 1;
  return state;
}

/// Composes one more single-step map: weights multiply like the Pauli group
/// modulo phases (XY ~ Z, YZ ~ X, ZX ~ Y).
inline PtaMapState iterate_pta(const PtaMapState& state) {
  const auto& [p1, p2, p3, p4] = state.probs;
  const auto& [q1, q2, q3, q4] = state.single_step;
  PtaMapState next = state;
  next.probs = {q1 * p1 + q2 * p2 + q3 * p3 + q4 * p4,
                p1 * q2 + p2 * q1 + p3 * q4 + p4 * q3,
                p1 * q3 + p3 * q1 + p4 * q2 + p2 * q4,
                p1 * q4 + p4 * q1 + p3 * q2 + p2 * q3};
  ++next.step_index;
  return next;
}

/// (p1 + p4)^n after `steps` applications; 1 at steps = 0.
inline double no_excitation_pta(double t1, double t_step, long steps, int n_qubits = 1) {
  if (steps < 0) throw DomainError("no_excitation_pta: steps must be nonnegative");
  require_qubits(n_qubits, kMaxQubits, "no_excitation_pta");
  if (steps == 0) return 1.0;
  PtaMapState state = pta_step_probs(t1, t_step);
  for (long k = 1; k < steps; ++k) state = iterate_pta(state);
  return std::pow(state.no_excitation(), n_qubits);
}

inline double divergence_threshold(double t1, double t_step, ThresholdRule rule) {
  const double lambda = lambda_of_time(t_step, t1);
  return rule == ThresholdRule::kPx ? lambda / 4.0 : lambda / 2.0;
}

struct ScanRow {
  int n_qubits = 1;
  double t = 0.0;
  double p_exact = 1.0;
  double p_pta = 1.0;
  double gap = 0.0;
  double threshold = 0.0;
  bool crossed = false;
};

/// Exact versus PTA no-excitation probability on the grid t = k t_step, k = 0..K.
///
/// The exact side is stepped with the one-step propagator exp(-i H_C t_step),
/// which is exact for the time-independent H_C.
inline std::vector<ScanRow> backaction_scan(int n_qubits, double t1, double t_step,
                                            double horizon, const BackactionOptions& opts = {}) {
  require_qubits(n_qubits, kMaxQubits, "backaction_scan");
  if (!(t_step > 0.0)) throw DomainError("backaction_scan: t_step must be positive");
  if (!(horizon >= 0.0)) throw DomainError("backaction_scan: horizon must be nonnegative");
  const double threshold = divergence_threshold(t1, t_step, opts.threshold);
  const auto h = effective_hamiltonian(n_qubits, no_jump_rate(t1, opts.rate));
  const ComplexMatrix step = h.propagator(t_step);
  ComplexVector psi = ComplexVector::Zero(pow2(n_qubits));
  psi(psi.size() - 1) = 1.0;

  const auto last = static_cast<long>(std::floor(horizon / t_step * (1.0 + 1e-12)));
  std::vector<ScanRow> rows;
  rows.reserve(static_cast<std::size_t>(last + 1));
  rows.push_back({n_qubits, 0.0, 1.0, 1.0, 0.0, threshold, false});
  PtaMapState pta = pta_step_probs(t1, t_step);
  for (long k = 1; k <= last; ++k) {
    psi = step * psi;
    if (k > 1) pta = iterate_pta(pta);
    ScanRow row;
    row.n_qubits = n_qubits;
    row.t = static_cast<double>(k) * t_step;
    row.p_exact = psi.squaredNorm();
    row.p_pta = std::pow(pta.no_excitation(), n_qubits);
    row.gap = std::abs(row.p_exact - row.p_pta);
    row.threshold = threshold;
    row.crossed = row.gap > threshold;
    rows.push_back(row);
  }
  return rows;
}

/// First grid time k t_step (k >= 1) at which the gap exceeds the threshold.
inline std::optional<double> divergence_time(int n_qubits, double t1, double t_step,
                                             double horizon, const BackactionOptions& opts = {}) {
  if (!(horizon > t_step)) throw DomainError("divergence_time: horizon must exceed t_step");
  for (const auto& row : backaction_scan(n_qubits, t1, t_step, horizon, opts)) {
    if (row.crossed) return row.t;
  }
  return std::nullopt;
}

struct FixedPointTrace {
  std::vector<std::array<double, 4>> history;  ///< history[k] = weights after k + 1 steps
  long converged_at = -1;                      ///< first k with |history[k+1] - history[k]| < tol
};

/// Iterates the PTA map from its single-step weights until successive
/// iterates differ by less than `tol` in max norm.
inline FixedPointTrace iterate_to_fixed_point(const std::array<double, 4>& single_step,
                                              double tol = 1e-10, long max_iterations = 100000) {
  PtaMapState state;
  state.single_step = single_step;
  state.probs = single_step;
  FixedPointTrace trace;
  trace.history.push_back(state.probs);
  for (long k = 0; k < max_iterations; ++k) {
    const PtaMapState next = iterate_pta(state);
    double delta = 0.0;
    for (int i = 0; i < 4; ++i) delta = std::max(delta, std::abs(next.probs[i] - state.probs[i]));
    if (delta < tol) {
      trace.converged_at = k;
      return trace;
    }
    state = next;
    trace.history.push_back(state.probs);
  }
  return trace;
}

inline void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows, bool header = true) {
  csv::Writer w(out);
  if (header) w.header({"n_qubits", "t", "p_exact", "p_pta", "gap", "threshold", "crossed"});
  for (const auto& r : rows) {
    w.row(r.n_qubits, r.t, r.p_exact, r.p_pta, r.gap, r.threshold, r.crossed ? 1 : 0);
  }
}

}  // namespace twirlkit
