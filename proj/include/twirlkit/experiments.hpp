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
#include <exception>
#include <ostream>
#include <string>
#include <vector>

#include "twirlkit/backaction.hpp"
#include "twirlkit/channel.hpp"
#include "twirlkit/channel_io.hpp"
#include "twirlkit/config.hpp"
#include "twirlkit/csv.hpp"
#include "twirlkit/ctqec.hpp"
#include "twirlkit/errors.hpp"
#include "twirlkit/lindblad.hpp"
#include "twirlkit/twirl.hpp"

namespace twirlkit {

enum ExitCode : int { kExitOk = 0, kExitInput = 2, kExitValidation = 3 };

/// Maps library exceptions onto the exit-code contract.
template <class Body>
int run_guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

/// "ad:<lambda>" or a channel file path.
inline KrausChannel load_channel(const std::string& source) {
  if (source.rfind("ad:", 0) == 0) {
    const double lambda = detail::parse_double(std::string_view(source).substr(3), "ad:<lambda>");
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
      throw ConfigError("amplitude damping lambda must lie in [0, 1], got " + source.substr(3));
    }
    return amplitude_damping(lambda);
  }
  return read_channel_file(source);
}

inline int cmd_twirl(const ExperimentConfig& cfg, const std::string& source, std::ostream& out,
                     std::ostream& err) {
  return run_guarded(err, [&] {
    cfg.validate();
    write_csv(out, twirl_diagonal(load_channel(source)));
    return kExitOk;
  });
}

/// Per grid time: extracted jump rate, worst deviation from the closed-form
/// amplitude-damping generator over the probe states, and a status flag.
inline int cmd_lindblad(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&] {
    cfg.validate();
    if (cfg.t_grid.empty()) throw ConfigError("t_grid is empty");
    const auto fam = amplitude_damping_family(cfg.t1);
    const auto probes = probe_states_single_qubit();
    csv::Writer w(out);
    w.header({"t", "rate", "deviation", "status"});
    for (double t : cfg.t_grid) {
      try {
        const auto snap = snapshot(fam, t, cfg.fd_step);
        double rate = 0.0;
        for (const auto& j : snap.jumps) rate = std::max(rate, j.rate);
        double deviation = 0.0;
        for (const auto& rho : probes) {
          deviation = std::max(deviation, max_abs(snap(rho) - ad_generator_action(cfg.t1, t, rho)));
        }
        w.row(t, rate, deviation, "ok");
      } catch (const SingularityError&) {
        w.row(t, "", "", "singular");
      } catch (const NonMarkovianError&) {
        w.row(t, "", "", "non_markovian");
      } catch (const DomainError&) {
        w.row(t, "", "", "domain");
      }
    }
    return kExitOk;
  });
}

inline int cmd_backaction(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&] {
    cfg.validate();
    const auto opts = cfg.backaction_options();
    csv::Writer w(out);
    bool header = true;
    for (int n = cfg.qubit_first; n <= cfg.qubit_last; ++n) {
      write_scan_csv(out, backaction_scan(n, cfg.t1, cfg.t_step, cfg.horizon, opts), header);
      header = false;
    }
    for (int n = cfg.qubit_first; n <= cfg.qubit_last; ++n) {
      const auto t = cfg.horizon > cfg.t_step
                         ? divergence_time(n, cfg.t1, cfg.t_step, cfg.horizon, opts)
                         : std::nullopt;
      w.comment("divergence n_qubits=" + std::to_string(n) + " t=" + (t ? csv::number(*t) : "none"));
    }
    return kExitOk;
  });
}

inline int cmd_fixedpoint(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&] {
    cfg.validate();
    std::array<double, 4> start{};
    if (cfg.lambda) {
      const auto pc = twirl_diagonal(amplitude_damping(*cfg.lambda));
      std::copy(pc.probs.begin(), pc.probs.end(), start.begin());
    } else {
      start = pta_step_probs(cfg.t1, cfg.t_step).single_step;
    }
    const auto trace = iterate_to_fixed_point(start);
    csv::Writer w(out);
    w.header({"iteration", "p1", "p2", "p3", "p4"});
    for (std::size_t k = 0; k < trace.history.size(); ++k) {
      const auto& p = trace.history[k];
      w.row(k, p[0], p[1], p[2], p[3]);
    }
    w.comment(trace.converged_at >= 0 ? "converged_at=" + std::to_string(trace.converged_at)
                                      : std::string("not converged"));
    return kExitOk;
  });
}

/// One trajectory block per beta, each preceded by a "# beta=" comment.
inline int cmd_ctqec(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&] {
    cfg.validate();
    if (cfg.beta_grid.empty()) throw ConfigError("beta grid is empty");
    std::vector<NoiseComparison> results;
    for (double beta : cfg.beta_grid) {
      results.push_back(compare_noise_models({cfg.t1, beta, cfg.t_end, cfg.dt, cfg.t_step, cfg.stride}));
    }
    csv::Writer w(out);
    for (const auto& cmp : results) {
      w.comment("beta=" + csv::number(cmp.beta));
      write_comparison_csv(out, cmp);
    }
    return kExitOk;
  });
}

}  // namespace twirlkit
