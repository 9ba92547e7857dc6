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

#include <fstream>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twirlkit/backaction.hpp"
#include "twirlkit/channel_io.hpp"
#include "twirlkit/errors.hpp"
#include "twirlkit/pauli.hpp"

namespace twirlkit {

struct ExperimentConfig {
  double t1 = 1.0;
  double t_step = 0.01;
  double horizon = 5.0;
  int qubit_first = 1;
  int qubit_last = 4;
  std::vector<double> beta_grid{0.0, 1.0, 10.0, 100.0};
  double dt = 1e-3;
  double fd_step = 1e-3;
  ThresholdRule threshold = ThresholdRule::kPx;
  NoJumpRate no_jump_rate = NoJumpRate::kDerivativeRatio;
  std::string output_path;
  std::vector<double> t_grid{0.1, 0.5, 1.0, 2.0};
  std::optional<double> lambda;
  double t_end = 1.0;
  int stride = 10;

  BackactionOptions backaction_options() const { return {no_jump_rate, threshold}; }

  void validate() const {
    auto positive = [](double v, const char* key) {
      if (!(v > 0.0)) throw ConfigError(std::string(key) + " must be positive");
    };
    positive(t1, "t1");
    positive(t_step, "t_step");
    positive(horizon, "horizon");
    positive(dt, "dt");
    positive(fd_step, "fd_step");
    positive(t_end, "t_end");
    if (qubit_first < 1 || qubit_last > kMaxQubits || qubit_first > qubit_last) {
      throw ConfigError("qubits must be a range a..b with 1 <= a <= b <= " + std::to_string(kMaxQubits));
    }
    if (!(fd_step < t_step)) throw ConfigError("fd_step must be smaller than t_step");
    for (double b : beta_grid) {
      if (!(b >= 0.0)) throw ConfigError("beta values must be nonnegative");
    }
    for (double t : t_grid) {
      if (!(t >= 0.0)) throw ConfigError("t_grid values must be nonnegative");
    }
    if (lambda && !(*lambda >= 0.0 && *lambda <= 1.0)) throw ConfigError("lambda must lie in [0, 1]");
    if (stride < 1) throw ConfigError("stride must be at least 1");
  }
};

namespace detail {

inline std::vector<double> parse_list(std::string_view text, std::string_view key) {
  std::vector<double> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_double(text.substr(start, comma - start), key));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline int parse_int(std::string_view text, std::string_view key) {
  const double v = parse_double(text, key);
  if (v != static_cast<double>(static_cast<int>(v))) {
    throw ConfigError("expected an integer for " + std::string(key));
  }
  return static_cast<int>(v);
}

}  // namespace detail

/// Parses "a..b" or "a".
inline std::pair<int, int> parse_qubit_range(std::string_view text) {
  text = detail::trim(text);
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) {
    const int q = detail::parse_int(text, "qubits");
    return {q, q};
  }
  return {detail::parse_int(text.substr(0, dots), "qubits"),
          detail::parse_int(text.substr(dots + 2), "qubits")};
}

/// Applies one key/value pair. Keys match the config file; CLI flags map onto them.
inline void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  key = detail::trim(key);
  value = detail::trim(value);
  if (key == "t1") {
    cfg.t1 = detail::parse_double(value, key);
  } else if (key == "t_step") {
    cfg.t_step = detail::parse_double(value, key);
  } else if (key == "horizon") {
    cfg.horizon = detail::parse_double(value, key);
  } else if (key == "qubits") {
    std::tie(cfg.qubit_first, cfg.qubit_last) = parse_qubit_range(value);
  } else if (key == "beta") {
    cfg.beta_grid = detail::parse_list(value, key);
  } else if (key == "dt") {
    cfg.dt = detail::parse_double(value, key);
  } else if (key == "fd_step") {
    cfg.fd_step = detail::parse_double(value, key);
  } else if (key == "threshold") {
    if (value == "px") {
      cfg.threshold = ThresholdRule::kPx;
    } else if (value == "pxy") {
      cfg.threshold = ThresholdRule::kPxy;
    } else {
      throw ConfigError("threshold must be px or pxy");
    }
  } else if (key == "no_jump_rate") {
    if (value == "derivative") {
      cfg.no_jump_rate = NoJumpRate::kDerivativeRatio;
    } else if (value == "lindblad") {
      cfg.no_jump_rate = NoJumpRate::kLindbladRate;
    } else {
      throw ConfigError("no_jump_rate must be derivative or lindblad");
    }
  } else if (key == "out") {
    cfg.output_path = std::string(value);
  } else if (key == "t_grid") {
    cfg.t_grid = detail::parse_list(value, key);
  } else if (key == "lambda") {
    cfg.lambda = detail::parse_double(value, key);
  } else if (key == "t_end") {
    cfg.t_end = detail::parse_double(value, key);
  } else if (key == "stride") {
    cfg.stride = detail::parse_int(value, key);
  } else {
    throw ConfigError("unknown config key \"" + std::string(key) + "\"");
  }
}

/// Flat "key = value" lines; '#' starts a comment.
inline void read_config(std::istream& in, ExperimentConfig& cfg) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = detail::trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    try {
      apply_setting(cfg, text.substr(0, eq), text.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

inline ExperimentConfig read_config_file(const std::string& path, ExperimentConfig cfg = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  read_config(in, cfg);
  return cfg;
}

}  // namespace twirlkit
