// Copyright (c) 2026 the kerrwave authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "kerrwave/quadrature.hpp"

namespace kerrwave {

/// Right Gauss-Radau points on [0,1] (last node is 1); the dG(k) temporal
/// nodal basis lives on count = k+1 of these.
inline std::vector<double> radau_right_nodes01(int count) {
  return gauss_radau_right(count).on_unit_interval().points;
}

/// Gauss-Lobatto points on [0,1] (first node 0, last node 1); the cG(k+1)
/// temporal nodal basis lives on count = k+2 of these.
inline std::vector<double> lobatto_nodes01(int count) {
  return gauss_lobatto(count).on_unit_interval().points;
}

/// Shifted Legendre polynomial P_r(2s-1) on [0,1].
inline double shifted_legendre(int r, double s) {
  return detail::legendre(r, 2.0 * s - 1.0).first;
}

/// Nodal Lagrange basis on [0,1] with barycentric evaluation.
class TimeBasis {
public:
  explicit TimeBasis(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    const int n = size();
    bary_.assign(n, 1.0);
    for (int l = 0; l < n; ++l)
      for (int m = 0; m < n; ++m)
        if (m != l) bary_[l] /= (nodes_[l] - nodes_[m]);
  }

  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }

  void values(double s, std::span<double> out) const {
    const int n = size();
    for (int l = 0; l < n; ++l) {
      if (std::abs(s - nodes_[l]) < 1e-15) {
        for (int m = 0; m < n; ++m) out[m] = (m == l) ? 1.0 : 0.0;
        return;
      }
    }
    double denom = 0.0;
    for (int l = 0; l < n; ++l) {
      out[l] = bary_[l] / (s - nodes_[l]);
      denom += out[l];
    }
    for (int l = 0; l < n; ++l) out[l] /= denom;
  }

  void derivs(double s, std::span<double> out) const {
    const int n = size();
    if (n == 1) {
      out[0] = 0.0;
      return;
    }
    for (int i = 0; i < n; ++i) {
      if (std::abs(s - nodes_[i]) < 1e-15) {
        double diag = 0.0;
        for (int j = 0; j < n; ++j) {
          if (j == i) continue;
          out[j] = (bary_[j] / bary_[i]) / (nodes_[i] - nodes_[j]);
          diag -= out[j];
        }
        out[i] = diag;
        return;
      }
    }
    std::vector<double> vals(n);
    values(s, vals);
    double sum = 0.0;
    for (int m = 0; m < n; ++m) sum += 1.0 / (s - nodes_[m]);
    for (int j = 0; j < n; ++j) out[j] = vals[j] * (sum - 1.0 / (s - nodes_[j]));
  }

  double eval(std::span<const double> coeff, double s) const {
    const int n = size();
    std::vector<double> v(n);
    values(s, v);
    double r = 0.0;
    for (int l = 0; l < n; ++l) r += v[l] * coeff[l];
    return r;
  }

private:
  std::vector<double> nodes_;
  std::vector<double> bary_;
};

}  // namespace kerrwave
