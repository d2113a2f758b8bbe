// Copyright (c) 2026 the kerrwave authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace kerrwave {

/// Lumped mass operator with a nonpositive diagonal entry.
class SingularMassError : public std::runtime_error {
public:
  explicit SingularMassError(const std::string& what) : std::runtime_error(what) {}
};

/// Fixed-point (or Runge-Kutta stage) iteration exhausted its budget.
class SolverDivergedError : public std::runtime_error {
public:
  SolverDivergedError(const std::string& what, double last_residual, int iterations)
      : std::runtime_error(what + " (last residual " + std::to_string(last_residual) +
                           " after " + std::to_string(iterations) + " iterations)"),
        last_residual_(last_residual),
        iterations_(iterations) {}

  double last_residual() const { return last_residual_; }
  int iterations() const { return iterations_; }

private:
  double last_residual_;
  int iterations_;
};

class NotImplementedError : public std::runtime_error {
public:
  explicit NotImplementedError(const std::string& what) : std::runtime_error(what) {}
};

/// Configuration problem, annotated with the 1-based source line.
class ConfigError : public std::runtime_error {
public:
  ConfigError(const std::string& file, int line, const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + what), line_(line) {}

  int line() const { return line_; }

private:
  int line_;
};

}  // namespace kerrwave
