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

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "twirlkit/channel.hpp"
#include "twirlkit/csv.hpp"
#include "twirlkit/errors.hpp"
#include "twirlkit/lindblad.hpp"
#include "twirlkit/numerics.hpp"
#include "twirlkit/pauli.hpp"
#include "twirlkit/twirl.hpp"

namespace twirlkit {

/// Syndrome measurement followed by correction.
struct RecoveryMap {
  int n = 0;
  KrausChannel map;

  ComplexMatrix operator()(const ComplexMatrix& rho) const { return map(rho); }
  ComplexMatrix superoperator() const { return twirlkit::superoperator(map); }
};

/// Three-qubit bit-flip code, stabilizers Z1Z2 and Z2Z3. Kraus operators are
/// {P_00, X_1 P_10, X_2 P_11, X_3 P_01} where P_s projects onto syndrome s.
inline RecoveryMap recovery_three_qubit_bitflip() {
  const int n = 3;
  const ComplexMatrix id = identity(pow2(n));
  const ComplexMatrix x = single_qubit_pauli(Pauli::X);
  const ComplexMatrix z = single_qubit_pauli(Pauli::Z);
  const ComplexMatrix z12 = embed(z, 0, n) * embed(z, 1, n);
  const ComplexMatrix z23 = embed(z, 1, n) * embed(z, 2, n);
  auto projector = [&](double s1, double s2) -> ComplexMatrix {
    return 0.25 * (id + s1 * z12) * (id + s2 * z23);
  };
  std::vector<ComplexMatrix> kraus{
      projector(1, 1),
      embed(x, 0, n) * projector(-1, 1),
      embed(x, 1, n) * projector(-1, -1),
      embed(x, 2, n) * projector(1, -1),
  };
  return RecoveryMap{n, KrausChannel(std::move(kraus))};
}

inline RecoveryMap recovery_identity(int n) { return RecoveryMap{n, KrausChannel::identity_channel(n)}; }

/// a|000> + b|111>, normalized.
inline ComplexVector bitflip_codeword(Complex a = 1.0, Complex b = 1.0) {
  const double norm = std::sqrt(std::norm(a) + std::norm(b));
  if (norm == 0.0) throw DomainError("bitflip_codeword: zero amplitudes");
  ComplexVector psi = ComplexVector::Zero(8);
  psi(0) = a / norm;
  psi(7) = b / norm;
  return psi;
}

/// Sum over the listed qubits (all if empty) of a single-qubit Lindblad form,
/// as a column-stacking superoperator.
inline ComplexMatrix local_generator(int n, const ComplexMatrix& h1,
                                     const std::vector<JumpOperator>& jumps1,
                                     std::vector<int> qubits = {}) {
  require_qubits(n, kMaxQubits, "local_generator");
  if (qubits.empty()) {
    for (int q = 0; q < n; ++q) qubits.push_back(q);
  }
  const Index d2 = pow2(n) * pow2(n);
  ComplexMatrix s = zeros(d2, d2);
  for (int q : qubits) {
    std::vector<JumpOperator> jumps;
    for (const auto& j : jumps1) jumps.push_back({embed(j.op, q, n), j.rate});
    s += lindblad_superoperator(embed(h1, q, n), jumps);
  }
  return s;
}

/// Amplitude damping on every qubit, generator extracted by the lindblad module.
inline ComplexMatrix exact_ad_generator(int n, double t1) {
  const auto snap = snapshot(amplitude_damping_family(t1), 0.0, 1e-3 * t1, Derivative::kAnalytic);
  return local_generator(n, snap.hamiltonian, snap.jumps);
}

/// Pauli rate generator from the twirled AD(lambda(t_step)) channel on every qubit.
inline ComplexMatrix pta_generator(int n, double t1, double t_step) {
  const auto rates = pta_rates(twirl_diagonal(amplitude_damping(lambda_of_time(t_step, t1))), t_step);
  std::vector<JumpOperator> jumps;
  for (std::size_t m = 1; m < rates.gamma.size(); ++m) {
    if (rates.gamma[m] == 0.0) continue;
    jumps.push_back({pauli_matrix(PauliString::from_index(1, m)), rates.gamma[m]});
  }
  return local_generator(n, zeros(2, 2), jumps);
}

/// gamma (X rho X - rho) on the listed qubits (all if empty).
inline ComplexMatrix flip_generator(int n, double gamma, std::vector<int> qubits = {}) {
  if (gamma < 0.0) throw DomainError("flip_generator: negative rate");
  return local_generator(n, zeros(2, 2), {{single_qubit_pauli(Pauli::X), gamma}}, std::move(qubits));
}

struct CtqecRun {
  ComplexMatrix noise_generator;
  RecoveryMap recovery = recovery_three_qubit_bitflip();
  double beta = 0.0;
  DensityMatrix rho0 = DensityMatrix::pure(bitflip_codeword());
  ComplexVector codeword = bitflip_codeword();
  double dt = 1e-3;
  double t_end = 1.0;
  int record_stride = 1;

  /// L + beta (R - id)
  ComplexMatrix generator() const {
    const Index d2 = noise_generator.rows();
    return noise_generator + beta * (recovery.superoperator() - identity(d2));
  }

  double max_stable_dt() const { return 0.5 / (norm1(noise_generator) + 2.0 * beta); }

  void validate() const {
    const Index dim = rho0.dim();
    if (noise_generator.rows() != dim * dim || noise_generator.cols() != dim * dim) {
      throw DimensionError("CtqecRun: noise generator does not act on the state space");
    }
    if (recovery.map.dim() != dim) throw DimensionError("CtqecRun: recovery acts on another dimension");
    if (codeword.size() != dim) throw DimensionError("CtqecRun: codeword dimension mismatch");
    if (!(beta >= 0.0)) throw ConfigError("CtqecRun: beta must be nonnegative");
    if (!(dt > 0.0)) throw ConfigError("CtqecRun: dt must be positive");
    if (!(t_end >= 0.0)) throw ConfigError("CtqecRun: t_end must be nonnegative");
    if (record_stride < 1) throw ConfigError("CtqecRun: record_stride must be at least 1");
    if (!(dt < max_stable_dt())) {
      throw ConfigError("CtqecRun: dt = " + csv::number(dt) + " violates the stability bound, need dt < " +
                        csv::number(max_stable_dt()));
    }
  }
};

/// dρ/dt = L(ρ) + β (R(ρ) - ρ)
inline ComplexMatrix rhs(const CtqecRun& run, const ComplexMatrix& rho) {
  const Index dim = run.rho0.dim();
  if (rho.rows() != dim || rho.cols() != dim) throw DimensionError("rhs: state dimension mismatch");
  return unvec(run.noise_generator * vec(rho), dim) + run.beta * (run.recovery(rho) - rho);
}

struct TrajectoryPoint {
  double t = 0.0;
  ComplexMatrix rho;
  double fidelity = 0.0;
  double trace = 0.0;
};

using Trajectory = std::vector<TrajectoryPoint>;

inline double codeword_fidelity(const ComplexVector& psi, const ComplexMatrix& rho) {
  return (psi.adjoint() * rho * psi)(0, 0).real();
}

/// Classical RK4 with a fixed step no larger than run.dt that lands on t_end.
inline Trajectory evolve(const CtqecRun& run) {
  run.validate();
  const Index dim = run.rho0.dim();
  const ComplexMatrix g = run.generator();
  const long steps = std::max(1L, static_cast<long>(std::ceil(run.t_end / run.dt - 1e-9)));
  const double h = run.t_end / static_cast<double>(steps);

  ComplexVector v = vec(run.rho0.matrix());
  const double trace0 = run.rho0.trace();
  Trajectory out;
  auto record = [&](double t) {
    ComplexMatrix rho = unvec(v, dim);
    const double tr = rho.trace().real();
    if (std::abs(tr - trace0) > 1e-8 * std::max(t, 1.0)) {
      throw ValidationError("evolve: trace drifted to " + csv::number(tr) + " at t = " + csv::number(t));
    }
    if (max_abs(rho - rho.adjoint()) > 1e-9) {
      throw ValidationError("evolve: state lost Hermiticity at t = " + csv::number(t));
    }
    const double f = codeword_fidelity(run.codeword, rho);
    out.push_back({t, std::move(rho), f, tr});
  };
  record(0.0);
  for (long k = 1; k <= steps; ++k) {
    const ComplexVector k1 = g * v;
    const ComplexVector k2 = g * (v + 0.5 * h * k1);
    const ComplexVector k3 = g * (v + 0.5 * h * k2);
    const ComplexVector k4 = g * (v + h * k3);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (k % run.record_stride == 0 || k == steps) record(static_cast<double>(k) * h);
  }
  return out;
}

/// ρ(t) = exp(G t) ρ(0) through the superoperator exponential.
inline ComplexMatrix evolve_exponential(const CtqecRun& run, double t) {
  if (t < 0.0) throw DomainError("evolve_exponential: negative time");
  const Index dim = run.rho0.dim();
  return unvec(mat_exp(run.generator() * t) * vec(run.rho0.matrix()), dim);
}

struct NoiseComparison {
  double beta = 0.0;
  Trajectory exact;
  Trajectory pta;
};

struct CompareSettings {
  double t1 = 1.0;
  double beta = 0.0;
  double t_end = 1.0;
  double dt = 1e-3;
  double t_step = 0.01;
  int record_stride = 1;
};

/// Same code, recovery and initial codeword under exact-AD and PTA noise.
inline NoiseComparison compare_noise_models(const CompareSettings& s) {
  CtqecRun run;
  run.beta = s.beta;
  run.dt = s.dt;
  run.t_end = s.t_end;
  run.record_stride = s.record_stride;
  NoiseComparison cmp;
  cmp.beta = s.beta;
  run.noise_generator = exact_ad_generator(3, s.t1);
  cmp.exact = evolve(run);
  run.noise_generator = pta_generator(3, s.t1, s.t_step);
  cmp.pta = evolve(run);
  return cmp;
}

inline void write_comparison_csv(std::ostream& out, const NoiseComparison& cmp) {
  csv::Writer w(out);
  w.header({"t", "fidelity_exact", "fidelity_pta", "gap", "trace_exact", "trace_pta"});
  for (std::size_t k = 0; k < cmp.exact.size() && k < cmp.pta.size(); ++k) {
    const auto& e = cmp.exact[k];
    const auto& p = cmp.pta[k];
    w.row(e.t, e.fidelity, p.fidelity, std::abs(e.fidelity - p.fidelity), e.trace, p.trace);
  }
}

}  // namespace twirlkit
