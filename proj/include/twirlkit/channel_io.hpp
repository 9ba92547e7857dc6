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

// Plain-text channel files:
//
//   # comment
//   n = 1
//   trace_preserving = true
//   kraus
//   1+0j, 0+0j
//   0+0j, 0.8+0j
//   kraus
//   0+0j, 0.6+0j
//   0+0j, 0+0j
//
// Each "kraus" line opens a 2^n x 2^n matrix given as 2^n rows of
// comma-separated "re+imj" entries.

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "twirlkit/channel.hpp"

namespace twirlkit {

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline double parse_double(std::string_view text, std::string_view context) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError("cannot parse number \"" + std::string(text) + "\" in " +
                      std::string(context));
  }
  return value;
}

}  // namespace detail

/// Parses "re+imj", "re-imj", "re", or "imj".
inline Complex parse_complex(std::string_view text) {
  text = detail::trim(text);
  if (text.empty()) throw ConfigError("empty complex entry");
  if (text.back() != 'j') return {detail::parse_double(text, "real entry"), 0.0};
  const std::string_view body = text.substr(0, text.size() - 1);
  // Split at the last sign that is neither leading nor part of an exponent.
  for (std::size_t pos = body.size(); pos-- > 1;) {
    const char c = body[pos];
    if ((c == '+' || c == '-') && body[pos - 1] != 'e' && body[pos - 1] != 'E') {
      const double re = detail::parse_double(body.substr(0, pos), text);
      const std::string_view imag = body.substr(pos);
      const double im = imag.size() == 1 ? (c == '-' ? -1.0 : 1.0)
                                         : detail::parse_double(imag, text);
      return {re, im};
    }
  }
  if (body.empty() || body == "+") return {0.0, 1.0};
  if (body == "-") return {0.0, -1.0};
  return {0.0, detail::parse_double(body, text)};
}

inline std::string format_complex(Complex z) {
  char buf[64];
  auto write = [&](char* first, double v) {
    return std::to_chars(first, buf + sizeof(buf), v, std::chars_format::general, 17).ptr;
  };
  char* p = write(buf, z.real());
  if (!std::signbit(z.imag())) *p++ = '+';
  p = write(p, z.imag());
  *p++ = 'j';
  return std::string(buf, p);
}

inline KrausChannel read_channel(std::istream& in) {
  int n = 0;
  bool trace_preserving = true;
  bool tp_seen = false;
  std::vector<ComplexMatrix> kraus;
  Index row = 0;
  bool in_matrix = false;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw ConfigError("channel file line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) {
      text = text.substr(0, hash);
    }
    text = detail::trim(text);
    if (text.empty()) continue;
    if (in_matrix) {
      const Index dim = pow2(n);
      Index col = 0;
      std::size_t start = 0;
      while (true) {
        const auto comma = text.find(',', start);
        const auto token = text.substr(start, comma == std::string_view::npos
                                                  ? std::string_view::npos
                                                  : comma - start);
        if (col >= dim) fail("too many entries in row");
        try {
          kraus.back()(row, col++) = parse_complex(token);
        } catch (const ConfigError& e) {
          fail(e.what());
        }
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
      if (col != dim) fail("expected " + std::to_string(dim) + " entries in row");
      if (++row == dim) in_matrix = false;
      continue;
    }
    if (text == "kraus") {
      if (n < 1) fail("'kraus' before 'n = <qubits>'");
      kraus.push_back(zeros(pow2(n), pow2(n)));
      row = 0;
      in_matrix = true;
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) fail("expected 'key = value' or 'kraus'");
    const auto key = detail::trim(text.substr(0, eq));
    const auto value = detail::trim(text.substr(eq + 1));
    if (key == "n") {
      if (!kraus.empty()) fail("'n' must precede Kraus matrices");
      const double v = detail::parse_double(value, "n");
      n = static_cast<int>(v);
      if (v != n || n < 1 || n > kMaxQubits) fail("n must be an integer in [1, 5]");
    } else if (key == "trace_preserving") {
      tp_seen = true;
      if (value == "true" || value == "1") {
        trace_preserving = true;
      } else if (value == "false" || value == "0") {
        trace_preserving = false;
      } else {
        fail("trace_preserving must be true or false");
      }
    } else {
      fail("unknown key '" + std::string(key) + "'");
    }
  }
  if (in_matrix) throw ConfigError("channel file: truncated Kraus matrix");
  if (n < 1) throw ConfigError("channel file: missing 'n'");
  if (!tp_seen) throw ConfigError("channel file: missing 'trace_preserving'");
  if (kraus.empty()) throw ConfigError("channel file: no Kraus matrices");
  return KrausChannel(std::move(kraus), trace_preserving);
}

inline KrausChannel read_channel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open channel file '" + path + "'");
  return read_channel(in);
}

inline void write_channel(std::ostream& out, const KrausChannel& ch) {
  out << "n = " << ch.qubits() << '\n';
  out << "trace_preserving = " << (ch.trace_preserving() ? "true" : "false") << '\n';
  for (const auto& k : ch.kraus()) {
    out << "kraus\n";
    for (Index r = 0; r < k.rows(); ++r) {
      for (Index c = 0; c < k.cols(); ++c) {
        if (c) out << ", ";
        out << format_complex(k(r, c));
      }
      out << '\n';
    }
  }
}

}  // namespace twirlkit
