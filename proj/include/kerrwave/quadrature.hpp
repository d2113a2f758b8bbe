// Copyright (c) 2026 the kerrwave authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kerrwave/errors.hpp"

namespace kerrwave {

enum class QuadKind { gauss_lobatto, gauss_legendre, gauss_radau_right };

/// Quadrature rule on the reference interval [-1,1].
struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;
  QuadKind kind = QuadKind::gauss_legendre;

  int size() const { return static_cast<int>(points.size()); }

  /// Affine image of the rule on [0,1].
  QuadratureRule on_unit_interval() const {
    QuadratureRule r;
    r.kind = kind;
    r.points.reserve(points.size());
    r.weights.reserve(weights.size());
    for (std::size_t q = 0; q < points.size(); ++q) {
      r.points.push_back(0.5 * (points[q] + 1.0));
      r.weights.push_back(0.5 * weights[q]);
    }
    return r;
  }
};

namespace detail {

/// Legendre polynomial P_n and its first derivative at x.
inline std::pair<double, double> legendre(int n, double x) {
  if (n == 0) return {1.0, 0.0};
  double pm1 = 1.0, p = x;
  for (int m = 1; m < n; ++m) {
    const double pp1 = ((2 * m + 1) * x * p - m * pm1) / (m + 1);
    pm1 = p;
    p = pp1;
  }
  double dp;
  if (std::abs(x) == 1.0) {
    dp = 0.5 * n * (n + 1) * (x > 0 ? 1.0 : ((n % 2 == 0) ? -1.0 : 1.0));
  } else {
    dp = n * (x * p - pm1) / (x * x - 1.0);
  }
  return {p, dp};
}

}  // namespace detail

/// Gauss-Legendre rule with n nodes on [-1,1]; exact for degree <= 2n-1.
inline QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need n >= 1 nodes");
  QuadratureRule rule;
  rule.kind = QuadKind::gauss_legendre;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Chebyshev initial guess, then Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = detail::legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const auto [p, dp] = detail::legendre(n, x);
    (void)p;
    rule.points[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  // Newton iterates arrive in descending order; store ascending and symmetrize.
  for (int i = 0; i < n / 2; ++i) {
    std::swap(rule.points[i], rule.points[n - 1 - i]);
    std::swap(rule.weights[i], rule.weights[n - 1 - i]);
  }
  for (int i = 0; i < n / 2; ++i) {
    const double x = 0.5 * (rule.points[n - 1 - i] - rule.points[i]);
    rule.points[i] = -x;
    rule.points[n - 1 - i] = x;
    const double w = 0.5 * (rule.weights[i] + rule.weights[n - 1 - i]);
    rule.weights[i] = rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.points[n / 2] = 0.0;
  return rule;
}

/// Gauss-Lobatto rule with n >= 2 nodes on [-1,1]; includes both endpoints,
/// exact for degree <= 2n-3.
inline QuadratureRule gauss_lobatto(int n) {
  if (n < 2) throw std::invalid_argument("gauss_lobatto: need n >= 2 nodes");
  QuadratureRule rule;
  rule.kind = QuadKind::gauss_lobatto;
  rule.points.resize(n);
  rule.weights.resize(n);
  rule.points.front() = -1.0;
  rule.points.back() = 1.0;
  if (n > 2) {
    // Interior nodes are the roots of P'_{n-1}; they interlace the roots of
    // P_{n-1}, which gives safe brackets for bisection + Newton.
    const QuadratureRule inner = gauss_legendre(n - 1);
    for (int i = 0; i < n - 2; ++i) {
      double lo = inner.points[i], hi = inner.points[i + 1];
      double x = 0.5 * (lo + hi);
      for (int it = 0; it < 200; ++it) {
        const auto [p, dp] = detail::legendre(n - 1, x);
        (void)p;
        // f = P'_{n-1}, f' from the Legendre ODE.
        const auto [pv, dpv] = detail::legendre(n - 1, x);
        const double ddp = (2.0 * x * dpv - (n - 1) * n * pv) / (1.0 - x * x);
        double xn = x - dp / ddp;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        const auto [p2, dp2] = detail::legendre(n - 1, xn);
        (void)p2;
        if (dp2 == 0.0 || std::abs(xn - x) < 1e-16) {
          x = xn;
          break;
        }
        const auto [plo, dplo] = detail::legendre(n - 1, lo);
        (void)plo;
        if ((dplo > 0) == (dp2 > 0)) {
          lo = xn;
        } else {
          hi = xn;
        }
        x = xn;
      }
      rule.points[i + 1] = x;
    }
    // Symmetrize.
    for (int i = 1; i < n / 2; ++i) {
      const double x = 0.5 * (rule.points[n - 1 - i] - rule.points[i]);
      rule.points[i] = -x;
      rule.points[n - 1 - i] = x;
    }
    if (n % 2 == 1) rule.points[n / 2] = 0.0;
  }
  for (int i = 0; i < n; ++i) {
    const auto [p, dp] = detail::legendre(n - 1, rule.points[i]);
    (void)dp;
    rule.weights[i] = 2.0 / (n * (n - 1) * p * p);
  }
  return rule;
}

/// Right Gauss-Radau rule with n >= 1 nodes on [-1,1]; the last node is +1,
/// exact for degree <= 2n-2. Its nodes are the Radau IIA abscissae.
inline QuadratureRule gauss_radau_right(int n) {
  if (n < 1) throw std::invalid_argument("gauss_radau_right: need n >= 1 nodes");
  QuadratureRule rule;
  rule.kind = QuadKind::gauss_radau_right;
  rule.points.resize(n);
  rule.weights.assign(n, 0.0);
  rule.points.back() = 1.0;
  if (n > 1) {
    // Free nodes solve P_{n-1}(x) - P_n(x) = 0 in (-1,1); locate sign changes
    // on a fine grid, then polish with Newton.
    auto f = [n](double x) {
      return detail::legendre(n - 1, x).first - detail::legendre(n, x).first;
    };
    auto fp = [n](double x) {
      return detail::legendre(n - 1, x).second - detail::legendre(n, x).second;
    };
    const int grid = 64 * n;
    int found = 0;
    double xprev = -1.0, fprev = f(xprev);
    for (int g = 1; g <= grid && found < n - 1; ++g) {
      const double xcur = -1.0 + 2.0 * g / grid * (1.0 - 1e-9);
      const double fcur = f(xcur);
      if (fprev == 0.0) {
        rule.points[found++] = xprev;
      } else if ((fprev > 0) != (fcur > 0)) {
        double lo = xprev, hi = xcur, flo = fprev;
        for (int it = 0; it < 80; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double fm = f(mid);
          if ((flo > 0) == (fm > 0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        double x = 0.5 * (lo + hi);
        for (int it = 0; it < 50; ++it) {
          const double dx = f(x) / fp(x);
          x -= dx;
          if (std::abs(dx) < 1e-16) break;
        }
        rule.points[found++] = x;
      }
      xprev = xcur;
      fprev = fcur;
    }
    if (found != n - 1)
      throw std::runtime_error("gauss_radau_right: node search failed");
  }
  // Weights from the moment equations sum w_i x_i^j = int x^j dx, j < n.
  // The resulting Vandermonde systems stay tiny (n <= ~8) and well behaved.
  std::vector<double> vandermonde(static_cast<std::size_t>(n) * n), rhs(n);
  for (int j = 0; j < n; ++j) {
    rhs[j] = (j % 2 == 0) ? 2.0 / (j + 1) : 0.0;
    for (int i = 0; i < n; ++i)
      vandermonde[static_cast<std::size_t>(j) * n + i] = std::pow(rule.points[i], j);
  }
  // In-place Gaussian elimination with partial pivoting.
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(vandermonde[static_cast<std::size_t>(r) * n + c]) >
          std::abs(vandermonde[static_cast<std::size_t>(piv) * n + c]))
        piv = r;
    if (piv != c) {
      for (int cc = 0; cc < n; ++cc)
        std::swap(vandermonde[static_cast<std::size_t>(c) * n + cc],
                  vandermonde[static_cast<std::size_t>(piv) * n + cc]);
      std::swap(rhs[c], rhs[piv]);
    }
    for (int r = c + 1; r < n; ++r) {
      const double m = vandermonde[static_cast<std::size_t>(r) * n + c] /
                       vandermonde[static_cast<std::size_t>(c) * n + c];
      for (int cc = c; cc < n; ++cc)
        vandermonde[static_cast<std::size_t>(r) * n + cc] -=
            m * vandermonde[static_cast<std::size_t>(c) * n + cc];
      rhs[r] -= m * rhs[c];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    double s = rhs[r];
    for (int c = r + 1; c < n; ++c)
      s -= vandermonde[static_cast<std::size_t>(r) * n + c] * rule.weights[c];
    rule.weights[r] = s / vandermonde[static_cast<std::size_t>(r) * n + r];
  }
  return rule;
}

}  // namespace kerrwave
