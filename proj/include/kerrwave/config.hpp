// Copyright (c) 2026 the kerrwave authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "kerrwave/errors.hpp"
#include "kerrwave/trajectory.hpp"

namespace kerrwave {

enum class RunMode { single, ladder_h, ladder_tau };

inline std::string to_string(SchemeKind s) {
  switch (s) {
    case SchemeKind::eh: return "eh";
    case SchemeKind::ea: return "ea";
    case SchemeKind::oracle: return "oracle";
  }
  return "?";
}

inline std::string to_string(RunMode m) {
  switch (m) {
    case RunMode::single: return "single";
    case RunMode::ladder_h: return "ladder-h";
    case RunMode::ladder_tau: return "ladder-tau";
  }
  return "?";
}

/// Double formatted with 17 significant digits (round-trips exactly).
inline std::string fmt_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

/// Full description of one experiment. Sections of the config file map onto
/// the library modules; every key has a flat `section.key` identity.
struct RunConfig {
  // [run]
  SchemeKind scheme = SchemeKind::ea;
  RunMode mode = RunMode::single;
  int p = 3;
  int k = 1;
  int cells = 100;
  double T = 0.8;
  double tau = 0.0;  // at most one of tau/steps may be left unset (0)
  int steps = 0;
  int ladder_rungs = 4;
  int workers = 0;  // 0: resolve from KERRWAVE_WORKERS, then hardware
  // [material]
  double eps0 = 1.0, mu0 = 1.0, chi1 = 1.0, chi3 = 0.1;
  // [initial]
  std::string initial = "gaussian";
  // [fixed_point]
  double fp_tol = 1e-12;
  int fp_max_iters = 200;
  // [output]
  std::string out_dir = "out";
  std::vector<double> snapshot_times;
  bool snapshots_set = false;

  /// Resolve tau/steps against T and check all invariants. Grid alignment of
  /// explicitly requested snapshot times is enforced; unset snapshots default
  /// to the grid-aligned subset of {0, 0.2, 0.4, 0.6, 0.8}.
  void validate() {
    if (p < 1) throw std::invalid_argument("config: p must be >= 1");
    if (k < 0) throw std::invalid_argument("config: k must be >= 0");
    if (cells < 1) throw std::invalid_argument("config: cells must be >= 1");
    if (T < 0.0) throw std::invalid_argument("config: T must be nonnegative");
    if (chi3 < 0.0) throw std::invalid_argument("config: chi3 must be nonnegative");
    if (!(fp_tol > 0.0)) throw std::invalid_argument("config: fixed_point.tol must be positive");
    if (fp_max_iters < 1) throw std::invalid_argument("config: fixed_point.max_iters must be >= 1");
    if (ladder_rungs < 1) throw std::invalid_argument("config: ladder_rungs must be >= 1");

    if (T == 0.0) {
      steps = 0;
      tau = 0.0;
    } else if (steps > 0 && tau > 0.0) {
      if (std::abs(steps * tau - T) > 1e-12 * std::max(1.0, T))
        throw std::invalid_argument("config: steps * tau must equal T");
    } else if (tau > 0.0) {
      steps = static_cast<int>(std::llround(T / tau));
      if (steps < 1 || std::abs(steps * tau - T) > 1e-12 * std::max(1.0, T))
        throw std::invalid_argument("config: tau does not divide T");
    } else if (steps > 0) {
      tau = T / steps;
    } else {
      throw std::invalid_argument("config: set tau or steps (for T > 0)");
    }

    if (initial != "gaussian" && initial != "zero")
      throw std::invalid_argument("config: initial.e0 must be 'gaussian' or 'zero'");

    std::vector<double> snaps;
    if (snapshots_set) {
      for (double t : snapshot_times) {
        if (t < -1e-12 || t > T + 1e-12)
          throw std::invalid_argument("config: snapshot time outside [0, T]");
        if (T > 0.0) {
          const double n = t / tau;
          if (std::abs(n - std::round(n)) > 1e-9)
            throw std::invalid_argument("config: snapshot time " + fmt_g(t) +
                                        " is not on the time grid");
        }
        snaps.push_back(t);
      }
    } else {
      for (double t : {0.0, 0.2, 0.4, 0.6, 0.8}) {
        if (t > T + 1e-12) continue;
        if (T > 0.0) {
          const double n = t / tau;
          if (std::abs(n - std::round(n)) > 1e-9) continue;
        }
        snaps.push_back(t);
      }
    }
    std::sort(snaps.begin(), snaps.end());
    snapshot_times = std::move(snaps);
    snapshots_set = true;
  }

  int resolved_workers() const {
    if (workers > 0) return workers;
    if (const char* env = std::getenv("KERRWAVE_WORKERS")) {
      const int w = std::atoi(env);
      if (w > 0) return w;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::min(8u, hw > 0 ? hw : 1u));
  }

  /// Serialize in the same section/key format the parser reads.
  std::string serialize() const {
    std::ostringstream os;
    os << "[run]\n";
    os << "scheme = " << to_string(scheme) << "\n";
    os << "mode = " << to_string(mode) << "\n";
    os << "p = " << p << "\n";
    os << "k = " << k << "\n";
    os << "cells = " << cells << "\n";
    os << "T = " << fmt_g17(T) << "\n";
    if (tau > 0.0) os << "tau = " << fmt_g17(tau) << "\n";
    if (steps > 0) os << "steps = " << steps << "\n";
    os << "ladder_rungs = " << ladder_rungs << "\n";
    if (workers > 0) os << "workers = " << workers << "\n";
    os << "\n[material]\n";
    os << "eps0 = " << fmt_g17(eps0) << "\n";
    os << "mu0 = " << fmt_g17(mu0) << "\n";
    os << "chi1 = " << fmt_g17(chi1) << "\n";
    os << "chi3 = " << fmt_g17(chi3) << "\n";
    os << "\n[initial]\n";
    os << "e0 = " << initial << "\n";
    os << "\n[fixed_point]\n";
    os << "tol = " << fmt_g17(fp_tol) << "\n";
    os << "max_iters = " << fp_max_iters << "\n";
    os << "\n[output]\n";
    os << "dir = " << out_dir << "\n";
    if (snapshots_set) {
      os << "snapshot_times =";
      for (std::size_t i = 0; i < snapshot_times.size(); ++i)
        os << (i ? ", " : " ") << fmt_g17(snapshot_times[i]);
      os << "\n";
    }
    return os.str();
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& file, int line, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    throw ConfigError(file, line, "expected a number, got '" + v + "'");
  }
}

inline int parse_int(const std::string& file, int line, const std::string& v) {
  try {
    std::size_t pos = 0;
    const int i = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return i;
  } catch (...) {
    throw ConfigError(file, line, "expected an integer, got '" + v + "'");
  }
}

}  // namespace detail

/// Parse a config from text. `filename` only labels error messages.
inline RunConfig parse_config_text(const std::string& text, const std::string& filename = "<config>") {
  RunConfig cfg;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    const auto hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = detail::trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError(filename, line, "unterminated section header");
      section = detail::trim(s.substr(1, s.size() - 2));
      if (section != "run" && section != "material" && section != "initial" &&
          section != "fixed_point" && section != "output")
        throw ConfigError(filename, line, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(filename, line, "expected key = value");
    const std::string key = detail::trim(s.substr(0, eq));
    const std::string val = detail::trim(s.substr(eq + 1));
    if (section.empty()) throw ConfigError(filename, line, "key outside any [section]");

    auto unknown = [&]() -> ConfigError {
      return ConfigError(filename, line, "unknown key '" + key + "' in section [" + section + "]");
    };
    if (section == "run") {
      if (key == "scheme") {
        if (val == "eh") cfg.scheme = SchemeKind::eh;
        else if (val == "ea") cfg.scheme = SchemeKind::ea;
        else if (val == "oracle") cfg.scheme = SchemeKind::oracle;
        else throw ConfigError(filename, line, "scheme must be eh, ea or oracle");
      } else if (key == "mode") {
        if (val == "single") cfg.mode = RunMode::single;
        else if (val == "ladder-h") cfg.mode = RunMode::ladder_h;
        else if (val == "ladder-tau") cfg.mode = RunMode::ladder_tau;
        else throw ConfigError(filename, line, "mode must be single, ladder-h or ladder-tau");
      } else if (key == "p") cfg.p = detail::parse_int(filename, line, val);
      else if (key == "k") cfg.k = detail::parse_int(filename, line, val);
      else if (key == "cells") cfg.cells = detail::parse_int(filename, line, val);
      else if (key == "T") cfg.T = detail::parse_double(filename, line, val);
      else if (key == "tau") cfg.tau = detail::parse_double(filename, line, val);
      else if (key == "steps") cfg.steps = detail::parse_int(filename, line, val);
      else if (key == "ladder_rungs") cfg.ladder_rungs = detail::parse_int(filename, line, val);
      else if (key == "workers") cfg.workers = detail::parse_int(filename, line, val);
      else throw unknown();
    } else if (section == "material") {
      if (key == "eps0") cfg.eps0 = detail::parse_double(filename, line, val);
      else if (key == "mu0") cfg.mu0 = detail::parse_double(filename, line, val);
      else if (key == "chi1") cfg.chi1 = detail::parse_double(filename, line, val);
      else if (key == "chi3") cfg.chi3 = detail::parse_double(filename, line, val);
      else throw unknown();
    } else if (section == "initial") {
      if (key == "e0") cfg.initial = val;
      else throw unknown();
    } else if (section == "fixed_point") {
      if (key == "tol") cfg.fp_tol = detail::parse_double(filename, line, val);
      else if (key == "max_iters") cfg.fp_max_iters = detail::parse_int(filename, line, val);
      else throw unknown();
    } else {  // output
      if (key == "dir") cfg.out_dir = val;
      else if (key == "snapshot_times") {
        cfg.snapshot_times.clear();
        cfg.snapshots_set = true;
        std::string item;
        std::istringstream list(val);
        while (std::getline(list, item, ',')) {
          item = detail::trim(item);
          if (!item.empty()) cfg.snapshot_times.push_back(detail::parse_double(filename, line, item));
        }
      } else throw unknown();
    }
  }
  return cfg;
}

inline RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

}  // namespace kerrwave
