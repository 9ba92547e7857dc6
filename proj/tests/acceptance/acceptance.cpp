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

// Acceptance gate: one PASS/FAIL line per criterion. Exit status is nonzero
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "twirlkit/backaction.hpp"
#include "twirlkit/channel.hpp"
#include "twirlkit/ctqec.hpp"
#include "twirlkit/lindblad.hpp"
#include "twirlkit/pauli.hpp"
#include "twirlkit/random.hpp"
#include "twirlkit/twirl.hpp"

namespace {

using namespace twirlkit;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Outcome()> body;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

constexpr std::uint64_t kSeed = 20261016;

Outcome twirl_closed_form() {
  double worst = 0.0;
  for (int k = 0; k <= 10; ++k) {
    const double lambda = 0.1 * k;
    const double s = std::sqrt(1.0 - lambda);
    const double expected[4] = {(2 + 2 * s - lambda) / 4, lambda / 4, lambda / 4, (2 - 2 * s - lambda) / 4};
    const auto ch = amplitude_damping(lambda);
    for (const auto& pc : {twirl_diagonal(ch), twirl_bruteforce(ch)}) {
      for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(pc.probs[static_cast<std::size_t>(i)] - expected[i]));
    }
  }
  return {worst <= 1e-12, "max err " + fmt(worst) + " (tol 1e-12)"};
}

Outcome twirl_equivalence() {
  RandomSource rng(seed_from_env(kSeed));
  double worst = 0.0;
  for (int n = 1; n <= 2; ++n) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto ch = rng.channel(n, 1 + trial % static_cast<int>(pow4(n)));
      const auto a = twirl_diagonal(ch);
      const auto b = twirl_bruteforce(ch);
      for (std::size_t m = 0; m < a.probs.size(); ++m) worst = std::max(worst, std::abs(a.probs[m] - b.probs[m]));
    }
  }
  return {worst <= 1e-10, "max diff " + fmt(worst) + " over 40 channels (tol 1e-10)"};
}

Outcome lindblad_extraction() {
  const double t1 = 1.0;
  const double h = 1e-3;
  const auto fam = amplitude_damping_family(t1);
  const ComplexMatrix sm = sigma_minus();
  double action = 0.0, rate = 0.0, overlap = 0.0;
  bool single_jump = true;
  for (double t : {0.1, 0.5, 1.0, 2.0}) {
    const auto snap = snapshot(fam, t, h);
    for (const auto& rho : probe_states_single_qubit()) {
      action = std::max(action, max_abs(snap(rho) - ad_generator_action(t1, t, rho)));
    }
    single_jump = single_jump && snap.jumps.size() == 1;
    if (snap.jumps.empty()) return {false, "no jump operator extracted at t = " + fmt(t)};
    const auto& j = snap.jumps.front();
    rate = std::max(rate, std::abs(j.rate - 1.0 / t1));
    const double cosine = std::abs((sm.adjoint() * j.op).trace()) / (sm.norm() * j.op.norm());
    overlap = std::max(overlap, 1.0 - cosine);
  }
  const double ratio = verify_ad_generator(t1, 0.5, 2e-3) / verify_ad_generator(t1, 0.5, 1e-3);
  const bool order = ratio > 3.5 && ratio < 4.5;
  return {action <= 1e-6 && rate <= 1e-6 && overlap <= 1e-6 && single_jump && order,
          "action err " + fmt(action) + ", rate err " + fmt(rate) + ", 1-|<s-,A>| " + fmt(overlap) +
              ", halving-h ratio " + fmt(ratio)};
}

Outcome pta_fixed_point() {
  double worst_fixed = 0.0, worst_tail = 0.0;
  bool converged = true;
  for (double lambda : {0.01, 0.1, 0.5, 0.99}) {
    const auto pc = twirl_diagonal(amplitude_damping(lambda));
    const auto trace = iterate_to_fixed_point({pc.probs[0], pc.probs[1], pc.probs[2], pc.probs[3]});
    converged = converged && trace.converged_at >= 0;
    for (double p : trace.history.back()) worst_fixed = std::max(worst_fixed, std::abs(p - 0.25));
    const double t_step = -std::log1p(-lambda);
    worst_tail = std::max(worst_tail, std::abs(no_excitation_pta(1.0, t_step, 100000) - 0.5));
  }
  return {converged && worst_fixed <= 1e-6 && worst_tail <= 1e-6,
          "fixed-point err " + fmt(worst_fixed) + ", tail err " + fmt(worst_tail) + " (tol 1e-6)"};
}

Outcome exact_backaction() {
  const double t1 = 1.0;
  double worst = 0.0, path = 0.0, worst_alt = 0.0;
  for (int n = 1; n <= 3; ++n) {
    for (double t : {0.0, 0.5, 1.0, 2.0}) {
      const double target = std::exp(-n * t / t1);
      const double p = no_excitation_exact(n, t1, t * t1);
      worst = std::max(worst, std::abs(p - target));
      path = std::max(path, std::abs(p - no_excitation_closed_form(n, t1, t * t1)));
      worst_alt = std::max(worst_alt,
                           std::abs(no_excitation_exact(n, t1, t * t1, NoJumpRate::kLindbladRate) - target));
    }
  }
  return {worst <= 1e-9 && path <= 1e-9,
          "max |p - exp(-n t/T1)| " + fmt(worst) + " (tol 1e-9), expm vs eigenvalue " + fmt(path) +
              "; no-jump rate 1/T1 would give " + fmt(worst_alt)};
}

Outcome divergence_ordering() {
  const double t_step = 0.01;
  const double horizon = 5.0;
  std::string detail = "t_div(n=1..4) =";
  bool monotone = true;
  double previous = horizon + 1.0;
  for (int n = 1; n <= 4; ++n) {
    const auto t = divergence_time(n, 1.0, t_step, horizon);
    if (!t) return {false, "no divergence within horizon for n = " + std::to_string(n)};
    detail += " " + fmt(*t);
    monotone = monotone && *t <= previous;
    previous = *t;
  }
  const auto fast = divergence_time(1, 0.5, t_step, horizon);
  const auto slow = divergence_time(1, 2.0, t_step, horizon);
  if (!fast || !slow) return {false, detail + "; T1 comparison did not diverge"};
  detail += "; T1=0.5: " + fmt(*fast) + ", T1=2: " + fmt(*slow);
  return {monotone && *fast < *slow, detail};
}

Outcome small_time_agreement() {
  const double t1 = 1.0;
  const double t_step = 0.01 * t1;
  const double gap = std::abs(no_excitation_exact(1, t1, 0.01 * t1) - no_excitation_pta(t1, t_step, 1));
  const double bound = lambda_of_time(t_step, t1) / 4.0;
  return {gap < bound, "gap " + fmt(gap) + " < lambda/4 = " + fmt(bound)};
}

// Noise-only reference: RK4 directly on the Lindblad form, no superoperators.
ComplexMatrix noise_only_rk4(const std::vector<JumpOperator>& jumps, ComplexMatrix rho, double t_end, double dt) {
  const ComplexMatrix h = zeros(rho.rows(), rho.cols());
  const long steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
  const double step = t_end / static_cast<double>(steps);
  auto f = [&](const ComplexMatrix& x) { return lindblad_action(h, jumps, x); };
  for (long k = 0; k < steps; ++k) {
    const ComplexMatrix k1 = f(rho);
    const ComplexMatrix k2 = f(rho + 0.5 * step * k1);
    const ComplexMatrix k3 = f(rho + 0.5 * step * k2);
    const ComplexMatrix k4 = f(rho + step * k3);
    rho += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rho;
}

Outcome ctqec_properties() {
  const double t1 = 1.0;
  std::vector<JumpOperator> ad_jumps;
  for (int q = 0; q < 3; ++q) ad_jumps.push_back({embed(sigma_minus(), q, 3), 1.0 / t1});

  CtqecRun run;
  run.noise_generator = exact_ad_generator(3, t1);
  run.t_end = t1;
  const auto traj = evolve(run);
  const double a = max_abs(traj.back().rho - noise_only_rk4(ad_jumps, run.rho0.matrix(), t1, run.dt));

  std::vector<double> fid;
  bool increasing = true;
  CtqecRun flip = run;
  flip.noise_generator = flip_generator(3, 1.0 / t1);
  for (double beta : {0.0, 1.0, 10.0, 100.0}) {
    flip.beta = beta / t1;
    fid.push_back(evolve(flip).back().fidelity);
    if (fid.size() > 1) increasing = increasing && fid[fid.size() - 1] > fid[fid.size() - 2];
  }

  double c = 0.0;
  for (auto [noise, beta] : {std::pair{0, 1.0}, std::pair{1, 10.0}, std::pair{0, 100.0}}) {
    CtqecRun r = run;
    r.noise_generator = noise == 0 ? exact_ad_generator(3, t1) : flip_generator(3, 1.0 / t1);
    r.beta = beta / t1;
    c = std::max(c, max_abs(evolve(r).back().rho - evolve_exponential(r, t1)));
  }

  const auto cmp = compare_noise_models({t1, 1.0 / t1, t1, 1e-3, 0.01 * t1, 1});
  auto gap_at = [&](std::size_t k) { return std::abs(cmp.exact[k].fidelity - cmp.pta[k].fidelity); };
  const double gap_end = gap_at(cmp.exact.size() - 1);
  bool shrinking = gap_at(0) == 0.0;
  for (std::size_t k : {1000u, 100u, 10u, 1u}) shrinking = shrinking && gap_at(k) <= gap_end;
  shrinking = shrinking && gap_at(1) < gap_at(10) && gap_at(10) < gap_at(100) && gap_at(1) < 1e-5;

  const bool pass = a <= 1e-10 && increasing && c <= 1e-6 && gap_end > 1e-6 && shrinking;
  return {pass, "(a) " + fmt(a) + " (b) F = " + fmt(fid[0]) + " < " + fmt(fid[1]) + " < " + fmt(fid[2]) + " < " +
                    fmt(fid[3]) + " (c) " + fmt(c) + " (d) gap(T1) " + fmt(gap_end) + ", gap(dt) " + fmt(gap_at(1))};
}

Outcome structural_invariants() {
  RandomSource rng(seed_from_env(kSeed) + 9);
  std::vector<std::string> failed;
  auto check = [&](bool ok, const char* what) {
    if (!ok) failed.emplace_back(what);
  };

  // CPTP validation and chi matrices.
  bool rejected = false;
  try {
    KrausChannel({identity(2), 0.5 * sigma_minus()});
  } catch (const ValidationError&) {
    rejected = true;
  }
  check(rejected, "non-CPTP rejected");
  for (int n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto ch = rng.channel(n, 2);
      check(max_abs(ch.completeness() - identity(ch.dim())) <= 1e-10, "completeness");
      const auto chi = pauli_expansion(ch);
      check(is_hermitian(chi.coeffs, 1e-10) && min_eigenvalue(chi.coeffs) >= -1e-10, "chi PSD");
      check(std::abs(chi.coeffs.trace() - 1.0) <= 1e-10, "chi trace");
    }
  }

  // Basis orthonormality.
  for (int n = 1; n <= 3; ++n) {
    const auto basis = hermitian_basis(n);
    double worst = 0.0;
    for (std::size_t a = 0; a < basis.size(); ++a) {
      for (std::size_t b = 0; b < basis.size(); ++b) {
        const Complex g = (basis[a] * basis[b]).trace();
        worst = std::max(worst, std::abs(g - (a == b ? 1.0 : 0.0)));
      }
    }
    check(worst <= 1e-12, "basis orthonormality");
  }

  // F(0) = I and F' = L F.
  const ComplexMatrix hz = 0.7 * pauli_matrix(PauliString::parse("Z")) + 0.2 * pauli_matrix(PauliString::parse("X"));
  for (const auto& fam : {amplitude_damping_family(1.0), unitary_family(hz)}) {
    check(max_abs(f_matrix(fam, 0.0) - identity(4)) <= 1e-12, "F(0) = I");
    for (double t : {0.1, 0.7, 1.5}) {
      const ComplexMatrix L = generator_L(fam, t, 1e-3);
      check(max_abs(L * f_matrix(fam, t) - f_dot(fam, t, 1e-3)) <= 1e-9, "F' = L F");
    }
  }
  {
    const auto fam = amplitude_damping_family(1.0);
    const ComplexMatrix L = generator_L(fam, 0.5, 1e-3);
    check(max_abs(L * f_matrix(fam, 0.5) - f_dot(fam, 0.5, 1e-3, Derivative::kAnalytic)) <= 1e-6,
          "F' = L F against the analytic derivative");
  }

  // Generator outputs are traceless and Hermitian on Hermitian inputs.
  const auto snap = snapshot(amplitude_damping_family(1.0), 0.5, 1e-3);
  for (const auto& rho : probe_states_single_qubit()) {
    const ComplexMatrix d = snap(rho);
    check(std::abs(d.trace()) <= 1e-10 && is_hermitian(d, 1e-10), "generator preserves trace and Hermiticity");
  }

  // Evolutions: channels, PTA iteration, back-action scan, CTQEC trajectories.
  for (int trial = 0; trial < 5; ++trial) {
    const auto rho = rng.density_matrix(2);
    const auto out = apply(tensor(amplitude_damping(0.3), amplitude_damping(0.6)), rho);
    check(std::abs(out.trace() - 1.0) <= 1e-10 && is_hermitian(out.matrix(), 1e-10), "channel output state");
  }
  PtaMapState state = pta_step_probs(1.0, 0.05);
  for (int k = 0; k < 10000; ++k) state = iterate_pta(state);
  check(std::abs(state.probs[0] + state.probs[1] + state.probs[2] + state.probs[3] - 1.0) <= 1e-12,
        "PTA weights stay normalized");
  for (const auto& row : backaction_scan(3, 1.0, 0.01, 2.0)) {
    check(row.p_exact >= 0.0 && row.p_exact <= 1.0 && row.p_pta >= 0.0 && row.p_pta <= 1.0, "probabilities in [0, 1]");
  }
  for (double beta : {0.0, 10.0}) {
    const auto cmp = compare_noise_models({1.0, beta, 1.0, 1e-3, 0.01, 1});
    for (const auto* traj : {&cmp.exact, &cmp.pta}) {
      for (const auto& p : *traj) {
        check(std::abs(p.trace - 1.0) <= 1e-8 && max_abs(p.rho - p.rho.adjoint()) <= 1e-9,
              "CTQEC trace and Hermiticity");
      }
    }
  }

  std::sort(failed.begin(), failed.end());
  failed.erase(std::unique(failed.begin(), failed.end()), failed.end());
  std::string detail = failed.empty() ? "all invariants hold" : "violated:";
  for (const auto& f : failed) detail += " [" + f + "]";
  return {failed.empty(), detail};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "twirled amplitude damping closed form", 1.0, twirl_closed_form},
      {2, "twirl path equivalence on random channels", 30.0, twirl_equivalence},
      {3, "Lindblad extraction for amplitude damping", 10.0, lindblad_extraction},
      {4, "iterated PTA fixed point", 1.0, pta_fixed_point},
      {5, "exact back-action closed form", 5.0, exact_backaction},
      {6, "divergence-time ordering", 60.0, divergence_ordering},
      {7, "small-time agreement", 1.0, small_time_agreement},
      {8, "CTQEC properties", 60.0, ctqec_properties},
      {9, "structural invariants", 60.0, structural_invariants},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.body();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.budget_seconds;
    const bool pass = outcome.pass && in_time;
    if (!pass) ++failures;
    std::printf("[%s] criterion %d: %s: %s; %.3f s (budget %g s)%s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                outcome.detail.c_str(), seconds, c.budget_seconds, in_time ? "" : ", over budget");
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
