// Copyright (c) 2026 the kerrwave authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include <lapacke.h>

namespace kerrwave {

/// Dense row-major matrix; sized for temporal blocks and small stage systems.
class DenseMatrix {
public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, 0.0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }

  void set_zero() { std::fill(a_.begin(), a_.end(), 0.0); }

  void mult(std::span<const double> x, std::span<double> y) const {
    assert(static_cast<int>(x.size()) == cols_ && static_cast<int>(y.size()) == rows_);
    for (int i = 0; i < rows_; ++i) {
      double s = 0.0;
      const double* row = a_.data() + static_cast<std::size_t>(i) * cols_;
      for (int j = 0; j < cols_; ++j) s += row[j] * x[j];
      y[i] = s;
    }
  }

  void mult_transpose(std::span<const double> x, std::span<double> y) const {
    assert(static_cast<int>(x.size()) == rows_ && static_cast<int>(y.size()) == cols_);
    std::fill(y.begin(), y.end(), 0.0);
    for (int i = 0; i < rows_; ++i) {
      const double* row = a_.data() + static_cast<std::size_t>(i) * cols_;
      for (int j = 0; j < cols_; ++j) y[j] += row[j] * x[i];
    }
  }

  DenseMatrix matmul(const DenseMatrix& b) const {
    assert(cols_ == b.rows_);
    DenseMatrix c(rows_, b.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const double aik = (*this)(i, k);
        if (aik == 0.0) continue;
        for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

/// LU factorization with partial pivoting of a small square dense matrix.
class DenseLu {
public:
  DenseLu() = default;

  explicit DenseLu(DenseMatrix m) : lu_(std::move(m)), piv_(lu_.rows()) {
    const int n = lu_.rows();
    if (n != lu_.cols()) throw std::invalid_argument("DenseLu: matrix must be square");
    for (int c = 0; c < n; ++c) {
      int p = c;
      for (int r = c + 1; r < n; ++r)
        if (std::abs(lu_(r, c)) > std::abs(lu_(p, c))) p = r;
      piv_[c] = p;
      if (p != c)
        for (int j = 0; j < n; ++j) std::swap(lu_(c, j), lu_(p, j));
      const double d = lu_(c, c);
      if (d == 0.0) throw std::runtime_error("DenseLu: singular matrix");
      for (int r = c + 1; r < n; ++r) {
        const double m = lu_(r, c) / d;
        lu_(r, c) = m;
        for (int j = c + 1; j < n; ++j) lu_(r, j) -= m * lu_(c, j);
      }
    }
  }

  void solve(std::span<double> b) const {
    const int n = lu_.rows();
    assert(static_cast<int>(b.size()) == n);
    // Row interchanges first (the stored multipliers are the fully pivoted
    // ones), then the two triangular solves.
    for (int c = 0; c < n; ++c)
      if (piv_[c] != c) std::swap(b[c], b[piv_[c]]);
    for (int c = 0; c < n; ++c)
      for (int r = c + 1; r < n; ++r) b[r] -= lu_(r, c) * b[c];
    for (int r = n - 1; r >= 0; --r) {
      for (int c = r + 1; c < n; ++c) b[r] -= lu_(r, c) * b[c];
      b[r] /= lu_(r, r);
    }
  }

  std::vector<double> solve_copy(std::span<const double> b) const {
    std::vector<double> x(b.begin(), b.end());
    solve(std::span<double>(x));
    return x;
  }

  /// Columns of the inverse, as a dense matrix.
  DenseMatrix inverse() const {
    const int n = lu_.rows();
    DenseMatrix inv(n, n);
    std::vector<double> e(n);
    for (int j = 0; j < n; ++j) {
      std::fill(e.begin(), e.end(), 0.0);
      e[j] = 1.0;
      solve(std::span<double>(e));
      for (int i = 0; i < n; ++i) inv(i, j) = e[i];
    }
    return inv;
  }

private:
  DenseMatrix lu_;
  std::vector<int> piv_;
};

/// Square banded matrix in LAPACK band storage (kl = ku), factorized and
/// solved with dgbtrf/dgbtrs. All 1D slab systems in this library are banded
/// with a small, mesh-independent bandwidth.
class BandMatrix {
public:
  BandMatrix(int n, int half_bandwidth)
      : n_(n),
        kd_(half_bandwidth),
        ldab_(3 * half_bandwidth + 1),
        ab_(static_cast<std::size_t>(ldab_) * n, 0.0) {}

  int size() const { return n_; }
  int half_bandwidth() const { return kd_; }

  void set_zero() {
    std::fill(ab_.begin(), ab_.end(), 0.0);
    factored_ = false;
  }

  /// Entry accessor; (i,j) must satisfy |i-j| <= half_bandwidth.
  double& at(int i, int j) {
    assert(std::abs(i - j) <= kd_ && i >= 0 && i < n_ && j >= 0 && j < n_);
    return ab_[static_cast<std::size_t>(j) * ldab_ + (2 * kd_ + i - j)];
  }

  double get(int i, int j) const {
    if (std::abs(i - j) > kd_) return 0.0;
    return ab_[static_cast<std::size_t>(j) * ldab_ + (2 * kd_ + i - j)];
  }

  void mult(std::span<const double> x, std::span<double> y) const {
    assert(!factored_);
    for (int i = 0; i < n_; ++i) {
      double s = 0.0;
      const int j0 = std::max(0, i - kd_), j1 = std::min(n_ - 1, i + kd_);
      for (int j = j0; j <= j1; ++j) s += get(i, j) * x[j];
      y[i] = s;
    }
  }

  void factor() {
    ipiv_.resize(n_);
    const lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n_, n_, kd_, kd_,
                                           ab_.data(), ldab_, ipiv_.data());
    if (info != 0) throw std::runtime_error("BandMatrix::factor: dgbtrf failed, info=" + std::to_string(info));
    factored_ = true;
  }

  void solve(std::span<double> b) const {
    assert(factored_ && static_cast<int>(b.size()) == n_);
    const lapack_int info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n_, kd_, kd_, 1,
                                           ab_.data(), ldab_, ipiv_.data(), b.data(), n_);
    if (info != 0) throw std::runtime_error("BandMatrix::solve: dgbtrs failed, info=" + std::to_string(info));
  }

private:
  int n_, kd_, ldab_;
  std::vector<double> ab_;
  std::vector<lapack_int> ipiv_;
  bool factored_ = false;
};

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (const double v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace kerrwave
