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

#include "twirlkit/config.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "twirlkit/experiments.hpp"

namespace twirlkit {
namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  ExperimentConfig cfg;
  read_config(in, cfg);
  return cfg;
}

TEST(Config, DefaultsAreValid) { EXPECT_NO_THROW(ExperimentConfig{}.validate()); }

TEST(Config, ParsesEveryKey) {
  const auto cfg = parse(
      "# comment\n"
      "t1 = 2.5\n"
      "t_step=0.02  # trailing comment\n"
      "horizon = 3\n"
      "qubits = 2..5\n"
      "beta = 0, 0.5,2\n"
      "dt = 2e-4\n"
      "fd_step = 1e-4\n"
      "threshold = pxy\n"
      "no_jump_rate = lindblad\n"
      "out = results.csv\n"
      "t_grid = 0.25\n"
      "lambda = 0.3\n"
      "t_end = 0.5\n"
      "stride = 4\n");
  EXPECT_EQ(cfg.t1, 2.5);
  EXPECT_EQ(cfg.t_step, 0.02);
  EXPECT_EQ(cfg.horizon, 3.0);
  EXPECT_EQ(cfg.qubit_first, 2);
  EXPECT_EQ(cfg.qubit_last, 5);
  EXPECT_EQ(cfg.beta_grid, (std::vector<double>{0.0, 0.5, 2.0}));
  EXPECT_EQ(cfg.dt, 2e-4);
  EXPECT_EQ(cfg.fd_step, 1e-4);
  EXPECT_EQ(cfg.threshold, ThresholdRule::kPxy);
  EXPECT_EQ(cfg.no_jump_rate, NoJumpRate::kLindbladRate);
  EXPECT_EQ(cfg.output_path, "results.csv");
  EXPECT_EQ(cfg.t_grid, (std::vector<double>{0.25}));
  EXPECT_EQ(cfg.lambda, 0.3);
  EXPECT_EQ(cfg.t_end, 0.5);
  EXPECT_EQ(cfg.stride, 4);
  EXPECT_NO_THROW(cfg.validate());
}

TEST(Config, SingleQubitRange) {
  const auto r = parse_qubit_range("3");
  EXPECT_EQ(r.first, 3);
  EXPECT_EQ(r.second, 3);
  EXPECT_THROW(parse_qubit_range("1..x"), ConfigError);
  EXPECT_THROW(parse_qubit_range("1.5"), ConfigError);
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_THROW(parse("t1 2\n"), ConfigError);
  EXPECT_THROW(parse("colour = red\n"), ConfigError);
  EXPECT_THROW(parse("t1 = fast\n"), ConfigError);
  EXPECT_THROW(parse("threshold = pz\n"), ConfigError);
  try {
    parse("t1 = 1\n\nbogus = 1\n");
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(Config, ValidationRules) {
  auto invalid = [](const std::string& text) {
    EXPECT_THROW(parse(text).validate(), ConfigError) << text;
  };
  invalid("t1 = 0\n");
  invalid("t_step = -1\n");
  invalid("horizon = 0\n");
  invalid("qubits = 0..2\n");
  invalid("qubits = 1..6\n");
  invalid("qubits = 3..2\n");
  invalid("fd_step = 0.01\n");
  invalid("beta = 1, -1\n");
  invalid("lambda = 1.5\n");
  invalid("dt = 0\n");
}

TEST(Config, SampleFileLoads) {
  const auto cfg = read_config_file(std::string(TWIRLKIT_SAMPLES_DIR) + "/experiment.cfg");
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.qubit_last, 4);
  EXPECT_THROW(read_config_file(std::string(TWIRLKIT_TEST_DATA_DIR) + "/missing.cfg"), ConfigError);
}

TEST(Experiments, TwirlExitCodes) {
  ExperimentConfig cfg;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_twirl(cfg, "ad:0.5", out, err), kExitOk);
  EXPECT_EQ(out.str(), "pauli_string,probability\nI,0.728553390593\nX,0.125\nY,0.125\nZ,0.0214466094067\n");
  EXPECT_EQ(cmd_twirl(cfg, "ad:-0.1", out, err), kExitInput);
  EXPECT_EQ(cmd_twirl(cfg, "ad:abc", out, err), kExitInput);
  EXPECT_EQ(cmd_twirl(cfg, std::string(TWIRLKIT_TEST_DATA_DIR) + "/not_cptp.channel", out, err),
            kExitValidation);
  EXPECT_EQ(cmd_twirl(cfg, std::string(TWIRLKIT_TEST_DATA_DIR) + "/malformed.channel", out, err),
            kExitInput);
}

TEST(Experiments, LindbladRows) {
  ExperimentConfig cfg;
  cfg.t_grid = {0.1, 1.0, 2.0};
  std::ostringstream out, err;
  ASSERT_EQ(cmd_lindblad(cfg, out, err), kExitOk);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "t,rate,deviation,status");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    std::istringstream fields(line);
    std::string t, rate, deviation, status;
    std::getline(fields, t, ',');
    std::getline(fields, rate, ',');
    std::getline(fields, deviation, ',');
    std::getline(fields, status, ',');
    EXPECT_NEAR(std::stod(rate), 1.0, 1e-6);
    EXPECT_LT(std::stod(deviation), 1e-6);
    EXPECT_EQ(status, "ok");
  }
  EXPECT_EQ(rows, 3);
  cfg.t_grid.clear();
  EXPECT_EQ(cmd_lindblad(cfg, out, err), kExitInput);
}

TEST(Experiments, BackactionTailAndSummary) {
  ExperimentConfig cfg;
  cfg.qubit_first = 1;
  cfg.qubit_last = 2;
  cfg.t_step = 0.5;
  cfg.fd_step = 0.1;
  cfg.horizon = 300.0;
  std::ostringstream out, err;
  ASSERT_EQ(cmd_backaction(cfg, out, err), kExitOk);
  const std::string text = out.str();
  EXPECT_NE(text.find("1,300,"), std::string::npos);
  EXPECT_NE(text.find("1,0,1,1,0,"), std::string::npos);
  const auto rows = backaction_scan(2, 1.0, 0.5, 300.0);
  EXPECT_NEAR(rows.back().p_pta, 0.25, 1e-9);
  EXPECT_NE(text.find("# divergence n_qubits=1 t="), std::string::npos);
  EXPECT_NE(text.find("# divergence n_qubits=2 t="), std::string::npos);
}

TEST(Experiments, FixedpointConvergesToUniform) {
  ExperimentConfig cfg;
  cfg.lambda = 0.5;
  std::ostringstream out, err;
  ASSERT_EQ(cmd_fixedpoint(cfg, out, err), kExitOk);
  const std::string text = out.str();
  const auto comment = text.rfind("# converged_at=");
  ASSERT_NE(comment, std::string::npos);
  const auto last_row_end = text.rfind('\n', comment - 1);
  const auto last_row_start = text.rfind('\n', last_row_end - 1) + 1;
  std::istringstream fields(text.substr(last_row_start, last_row_end - last_row_start));
  std::string cell;
  std::getline(fields, cell, ',');
  for (int i = 0; i < 4; ++i) {
    std::getline(fields, cell, ',');
    EXPECT_NEAR(std::stod(cell), 0.25, 1e-6);
  }
}

TEST(Experiments, FixedpointIterationsDropAsLambdaGrows) {
  long previous = -1;
  for (double lambda : {0.99, 0.5, 0.1, 0.01}) {
    const auto pc = twirl_diagonal(amplitude_damping(lambda));
    const auto trace = iterate_to_fixed_point({pc.probs[0], pc.probs[1], pc.probs[2], pc.probs[3]});
    EXPECT_GT(trace.converged_at, previous) << "lambda = " << lambda;
    previous = trace.converged_at;
  }
}

TEST(Experiments, CtqecBlocksAndStability) {
  ExperimentConfig cfg;
  cfg.beta_grid = {0.0, 10.0};
  cfg.t_end = 0.1;
  std::ostringstream out, err;
  ASSERT_EQ(cmd_ctqec(cfg, out, err), kExitOk);
  EXPECT_EQ(out.str().rfind("# beta=0\nt,fidelity_exact,fidelity_pta,gap,trace_exact,trace_pta\n0,1,1,0,1,1\n", 0), 0u);
  EXPECT_NE(out.str().find("# beta=10\n"), std::string::npos);
  cfg.dt = 0.01;
  cfg.beta_grid = {100.0};
  std::ostringstream out2, err2;
  EXPECT_EQ(cmd_ctqec(cfg, out2, err2), kExitInput);
  EXPECT_TRUE(out2.str().empty());
  EXPECT_NE(err2.str().find("need dt <"), std::string::npos);
}

}  // namespace
}  // namespace twirlkit
