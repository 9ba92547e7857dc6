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

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "twirlkit/config.hpp"
#include "twirlkit/experiments.hpp"

int main(int argc, char** argv) {
  using namespace twirlkit;

  CLI::App app{"twirlkit: Pauli twirling, time-local generators and back-action experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::string> t1, t_step, horizon, qubits, beta, dt, fd_step, threshold, out;
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--t1", t1, "relaxation time T1");
  app.add_option("--t-step", t_step, "PTA time step");
  app.add_option("--horizon", horizon, "scan horizon");
  app.add_option("--qubits", qubits, "qubit range a..b");
  app.add_option("--beta", beta, "comma-separated correction rates");
  app.add_option("--dt", dt, "integrator step");
  app.add_option("--fd-step", fd_step, "finite-difference step");
  app.add_option("--threshold", threshold, "divergence threshold rule")->check(CLI::IsMember({"px", "pxy"}));
  app.add_option("--out", out, "output CSV path (stdout if omitted)");

  std::string channel;
  auto* twirl = app.add_subcommand("twirl", "Pauli-twirl a channel (ad:<lambda> or a channel file)");
  twirl->add_option("channel", channel, "channel source")->required();
  auto* lindblad = app.add_subcommand("lindblad", "time-local generator of amplitude damping over a t grid");
  auto* backaction = app.add_subcommand("backaction", "no-excitation probability, exact vs iterated PTA");
  auto* fixedpoint = app.add_subcommand("fixedpoint", "iterate the PTA recurrences to their fixed point");
  auto* ctqec = app.add_subcommand("ctqec", "continuous-time correction of the 3-qubit bit-flip code");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  ExperimentConfig cfg;
  try {
    if (!config_path.empty()) cfg = read_config_file(config_path);
    auto override = [&](const char* key, const std::optional<std::string>& v) {
      if (v) apply_setting(cfg, key, *v);
    };
    override("t1", t1);
    override("t_step", t_step);
    override("horizon", horizon);
    override("qubits", qubits);
    override("beta", beta);
    override("dt", dt);
    override("fd_step", fd_step);
    override("threshold", threshold);
    override("out", out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }

  std::ofstream file;
  if (!cfg.output_path.empty()) {
    file.open(cfg.output_path);
    if (!file) {
      std::cerr << "error: cannot write " << cfg.output_path << '\n';
      return kExitInput;
    }
  }
  std::ostream& sink = cfg.output_path.empty() ? std::cout : file;

  if (*twirl) return cmd_twirl(cfg, channel, sink, std::cerr);
  if (*lindblad) return cmd_lindblad(cfg, sink, std::cerr);
  if (*backaction) return cmd_backaction(cfg, sink, std::cerr);
  if (*fixedpoint) return cmd_fixedpoint(cfg, sink, std::cerr);
  if (*ctqec) return cmd_ctqec(cfg, sink, std::cerr);
  return kExitInput;
}
