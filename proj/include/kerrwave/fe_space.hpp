// Copyright (c) 2026 the kerrwave authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "kerrwave/errors.hpp"
#include "kerrwave/quadrature.hpp"

namespace kerrwave {

/// Uniform mesh of the unit interval (0,1).
struct Mesh1D {
  int cells = 0;
  double h = 0.0;
  std::vector<double> nodes;

  static Mesh1D uniform(int cell_count) {
    if (cell_count < 1) throw std::invalid_argument("Mesh1D: need at least one cell");
    Mesh1D m;
    m.cells = cell_count;
    m.h = 1.0 / cell_count;
    m.nodes.resize(cell_count + 1);
    for (int i = 0; i <= cell_count; ++i) m.nodes[i] = static_cast<double>(i) * m.h;
    return m;
  }
};

enum class Continuity { continuous, discontinuous };

/// Piecewise-polynomial space on a uniform 1D mesh with a nodal Lagrange
/// basis placed at the Gauss-Lobatto points of every element (midpoint for
/// degree 0). The quadrature rule collocated with these nodes makes every
/// coefficient-weighted mass operator diagonal.
class FeSpace1D {
public:
  static std::shared_ptr<const FeSpace1D> make_continuous(const Mesh1D& mesh, int degree) {
    if (degree < 1) throw std::invalid_argument("continuous space needs degree >= 1");
    return std::shared_ptr<const FeSpace1D>(new FeSpace1D(mesh, degree, Continuity::continuous));
  }

  static std::shared_ptr<const FeSpace1D> make_discontinuous(const Mesh1D& mesh, int degree) {
    if (degree < 0) throw std::invalid_argument("discontinuous space needs degree >= 0");
    return std::shared_ptr<const FeSpace1D>(new FeSpace1D(mesh, degree, Continuity::discontinuous));
  }

  const Mesh1D& mesh() const { return mesh_; }
  int degree() const { return degree_; }
  Continuity continuity() const { return continuity_; }
  int local_dof_count() const { return degree_ + 1; }
  int dof_count() const { return dof_count_; }

  int global_dof(int element, int local) const {
    return continuity_ == Continuity::continuous ? element * degree_ + local
                                                 : element * (degree_ + 1) + local;
  }

  /// Physical position of a local node; shared interface dofs evaluate to the
  /// same expression from either side.
  double node_position(int element, int local) const {
    return (element + 0.5 * (ref_nodes_[local] + 1.0)) * mesh_.h;
  }

  double dof_position(int dof) const { return dof_positions_[dof]; }

  const std::vector<double>& ref_nodes() const { return ref_nodes_; }

  /// Nodal quadrature rule of this space on the reference element.
  const QuadratureRule& node_rule() const { return node_rule_; }

  bool compatible_with(const FeSpace1D& o) const {
    return degree_ == o.degree_ && continuity_ == o.continuity_ && mesh_.cells == o.mesh_.cells;
  }

  bool same_mesh(const FeSpace1D& o) const { return mesh_.cells == o.mesh_.cells; }

  /// Values of all local basis functions at reference coordinate xi.
  void basis_values(double xi, std::span<double> out) const {
    const int nl = local_dof_count();
    for (int l = 0; l < nl; ++l) {
      if (std::abs(xi - ref_nodes_[l]) < 1e-14) {
        for (int m = 0; m < nl; ++m) out[m] = (m == l) ? 1.0 : 0.0;
        return;
      }
    }
    double denom = 0.0;
    for (int l = 0; l < nl; ++l) {
      out[l] = bary_[l] / (xi - ref_nodes_[l]);
      denom += out[l];
    }
    for (int l = 0; l < nl; ++l) out[l] /= denom;
  }

  /// Derivatives (w.r.t. the reference coordinate) of all local basis
  /// functions at xi.
  void basis_derivs(double xi, std::span<double> out) const {
    const int nl = local_dof_count();
    if (nl == 1) {
      out[0] = 0.0;
      return;
    }
    for (int i = 0; i < nl; ++i) {
      if (std::abs(xi - ref_nodes_[i]) < 1e-14) {
        double diag = 0.0;
        for (int j = 0; j < nl; ++j) {
          if (j == i) continue;
          out[j] = (bary_[j] / bary_[i]) / (ref_nodes_[i] - ref_nodes_[j]);
          diag -= out[j];
        }
        out[i] = diag;
        return;
      }
    }
    // l_j'(x) = l_j(x) * (s(x) - 1/(x - x_j)) with s(x) = sum_m 1/(x - x_m).
    std::vector<double> vals(nl);
    basis_values(xi, vals);
    double s = 0.0;
    for (int m = 0; m < nl; ++m) s += 1.0 / (xi - ref_nodes_[m]);
    for (int j = 0; j < nl; ++j) out[j] = vals[j] * (s - 1.0 / (xi - ref_nodes_[j]));
  }

  /// Evaluate a coefficient vector at reference coordinate xi of an element.
  double eval_local(std::span<const double> dofs, int element, double xi) const {
    const int nl = local_dof_count();
    std::vector<double> vals(nl);
    basis_values(xi, vals);
    double s = 0.0;
    for (int l = 0; l < nl; ++l) s += vals[l] * dofs[global_dof(element, l)];
    return s;
  }

private:
  FeSpace1D(const Mesh1D& mesh, int degree, Continuity cont)
      : mesh_(mesh), degree_(degree), continuity_(cont) {
    if (degree == 0) {
      ref_nodes_ = {0.0};
      node_rule_ = gauss_legendre(1);
    } else {
      node_rule_ = gauss_lobatto(degree + 1);
      ref_nodes_ = node_rule_.points;
    }
    const int nl = degree + 1;
    bary_.assign(nl, 1.0);
    for (int l = 0; l < nl; ++l)
      for (int m = 0; m < nl; ++m)
        if (m != l) bary_[l] /= (ref_nodes_[l] - ref_nodes_[m]);
    dof_count_ = continuity_ == Continuity::continuous ? mesh_.cells * degree + 1
                                                       : mesh_.cells * (degree + 1);
    dof_positions_.resize(dof_count_);
    for (int e = 0; e < mesh_.cells; ++e)
      for (int l = 0; l < nl; ++l) dof_positions_[global_dof(e, l)] = node_position(e, l);
  }

  Mesh1D mesh_;
  int degree_;
  Continuity continuity_;
  int dof_count_ = 0;
  std::vector<double> ref_nodes_;
  std::vector<double> bary_;
  std::vector<double> dof_positions_;
  QuadratureRule node_rule_;
};

/// Coefficient vector bound to its space.
struct DofVector {
  std::shared_ptr<const FeSpace1D> space;
  std::vector<double> values;

  DofVector() = default;
  explicit DofVector(std::shared_ptr<const FeSpace1D> s)
      : space(std::move(s)), values(space->dof_count(), 0.0) {}
  DofVector(std::shared_ptr<const FeSpace1D> s, std::vector<double> v)
      : space(std::move(s)), values(std::move(v)) {
    if (static_cast<int>(values.size()) != space->dof_count())
      throw std::invalid_argument("DofVector: size does not match space");
  }

  int size() const { return static_cast<int>(values.size()); }
  double& operator[](int i) { return values[i]; }
  double operator[](int i) const { return values[i]; }
};

/// Nodal interpolant of a scalar function.
inline DofVector interpolate(std::shared_ptr<const FeSpace1D> space,
                             const std::function<double(double)>& f) {
  DofVector v(space);
  for (int i = 0; i < v.size(); ++i) v.values[i] = f(space->dof_position(i));
  return v;
}

/// Exact re-representation of a coarse function on the uniformly bisected
/// mesh (same degree and continuity class).
inline DofVector prolong(const DofVector& coarse, std::shared_ptr<const FeSpace1D> fine_space) {
  const FeSpace1D& cs = *coarse.space;
  const FeSpace1D& fs = *fine_space;
  if (fs.mesh().cells != 2 * cs.mesh().cells || fs.degree() != cs.degree() ||
      fs.continuity() != cs.continuity())
    throw std::invalid_argument("prolong: fine space is not the bisection of the coarse space");
  DofVector out(fine_space);
  const int nl = fs.local_dof_count();
  for (int fe = 0; fe < fs.mesh().cells; ++fe) {
    const int ce = fe / 2;
    const double shift = (fe % 2 == 0) ? -0.5 : 0.5;
    for (int l = 0; l < nl; ++l) {
      const double xi_c = 0.5 * fs.ref_nodes()[l] + shift;
      out.values[fs.global_dof(fe, l)] = cs.eval_local(coarse.values, ce, xi_c);
    }
  }
  return out;
}

}  // namespace kerrwave
