// Copyright (c) 2026 the kerrwave authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "kerrwave/fe_space.hpp"
#include "kerrwave/linalg.hpp"
#include "kerrwave/quadrature.hpp"

namespace kerrwave {

/// Diagonal of <u, v>_h under the space's nodal quadrature (coefficient 1).
/// Shared interface nodes of a continuous space accumulate both element
/// contributions.
inline std::vector<double> lumped_mass_weights(const FeSpace1D& space) {
  std::vector<double> diag(space.dof_count(), 0.0);
  const auto& rule = space.node_rule();
  const double jac = 0.5 * space.mesh().h;
  for (int e = 0; e < space.mesh().cells; ++e)
    for (int l = 0; l < space.local_dof_count(); ++l)
      diag[space.global_dof(e, l)] += jac * rule.weights[l];
  return diag;
}

/// Diagonal of <coeff u, v>_h for nodal coefficient values (one per dof).
inline std::vector<double> assemble_lumped_mass(const FeSpace1D& space,
                                                std::span<const double> nodal_coeff) {
  std::vector<double> diag = lumped_mass_weights(space);
  for (int i = 0; i < space.dof_count(); ++i) {
    if (!(nodal_coeff[i] > 0.0))
      throw SingularMassError("assemble_lumped_mass: nonpositive coefficient at node " +
                              std::to_string(i));
    diag[i] *= nodal_coeff[i];
  }
  return diag;
}

inline std::vector<double> assemble_lumped_mass(const FeSpace1D& space,
                                                const std::function<double(double)>& coeff) {
  std::vector<double> c(space.dof_count());
  for (int i = 0; i < space.dof_count(); ++i) c[i] = coeff(space.dof_position(i));
  return assemble_lumped_mass(space, c);
}

/// First-order FE operator on a uniform mesh. Every element carries the same
/// local matrix, so only one block is stored next to the dof maps.
class ElementOp {
public:
  ElementOp(std::shared_ptr<const FeSpace1D> trial, std::shared_ptr<const FeSpace1D> test,
            DenseMatrix local)
      : trial_(std::move(trial)), test_(std::move(test)), local_(std::move(local)) {}

  const FeSpace1D& trial() const { return *trial_; }
  const FeSpace1D& test() const { return *test_; }
  const DenseMatrix& local() const { return local_; }

  /// y = Op x (x indexed by trial dofs, y by test dofs).
  void apply(std::span<const double> x, std::span<double> y) const {
    std::fill(y.begin(), y.end(), 0.0);
    const int lt = test_->local_dof_count(), lj = trial_->local_dof_count();
    for (int e = 0; e < trial_->mesh().cells; ++e)
      for (int i = 0; i < lt; ++i) {
        double s = 0.0;
        for (int j = 0; j < lj; ++j) s += local_(i, j) * x[trial_->global_dof(e, j)];
        y[test_->global_dof(e, i)] += s;
      }
  }

  /// y = Op^T x (x indexed by test dofs, y by trial dofs).
  void apply_transpose(std::span<const double> x, std::span<double> y) const {
    std::fill(y.begin(), y.end(), 0.0);
    const int lt = test_->local_dof_count(), lj = trial_->local_dof_count();
    for (int e = 0; e < trial_->mesh().cells; ++e)
      for (int i = 0; i < lt; ++i) {
        const double xi = x[test_->global_dof(e, i)];
        if (xi == 0.0) continue;
        for (int j = 0; j < lj; ++j) y[trial_->global_dof(e, j)] += local_(i, j) * xi;
      }
  }

  DenseMatrix to_dense() const {
    DenseMatrix m(test_->dof_count(), trial_->dof_count());
    for (int e = 0; e < trial_->mesh().cells; ++e)
      for (int i = 0; i < test_->local_dof_count(); ++i)
        for (int j = 0; j < trial_->local_dof_count(); ++j)
          m(test_->global_dof(e, i), trial_->global_dof(e, j)) += local_(i, j);
    return m;
  }

private:
  std::shared_ptr<const FeSpace1D> trial_, test_;
  DenseMatrix local_;
};

/// G with G[i][j] = <d/dx phi_j, psi_i> under the given reference rule
/// (phi trial basis, psi test basis). Scale free in 1D: the element jacobian
/// cancels against the derivative map.
inline ElementOp assemble_deriv(std::shared_ptr<const FeSpace1D> trial,
                                std::shared_ptr<const FeSpace1D> test,
                                const QuadratureRule& quad) {
  if (!trial->same_mesh(*test))
    throw std::invalid_argument("assemble_deriv: trial and test spaces use different meshes");
  const int lt = test->local_dof_count(), lj = trial->local_dof_count();
  DenseMatrix local(lt, lj);
  std::vector<double> tv(lt), td(lj);
  for (int q = 0; q < quad.size(); ++q) {
    test->basis_values(quad.points[q], tv);
    trial->basis_derivs(quad.points[q], td);
    for (int i = 0; i < lt; ++i)
      for (int j = 0; j < lj; ++j) local(i, j) += quad.weights[q] * tv[i] * td[j];
  }
  return ElementOp(std::move(trial), std::move(test), std::move(local));
}

/// K with K[i][j] = <d/dx phi_j, d/dx phi_i>; carries a 2/h scale.
inline ElementOp assemble_stiffness(std::shared_ptr<const FeSpace1D> space,
                                    const QuadratureRule& quad) {
  const int nl = space->local_dof_count();
  DenseMatrix local(nl, nl);
  std::vector<double> d(nl);
  const double scale = 2.0 / space->mesh().h;
  for (int q = 0; q < quad.size(); ++q) {
    space->basis_derivs(quad.points[q], d);
    for (int i = 0; i < nl; ++i)
      for (int j = 0; j < nl; ++j) local(i, j) += scale * quad.weights[q] * d[i] * d[j];
  }
  return ElementOp(space, space, std::move(local));
}

/// Element mass matrix <psi_j, psi_i> under the given reference rule
/// (identical for every element of a uniform mesh). With p+1 Gauss-Lobatto
/// points this is exact for spaces of degree <= p - 1/2, i.e. the full mass
/// of the degree p-1 companion space.
inline DenseMatrix local_mass_matrix(const FeSpace1D& space, const QuadratureRule& quad) {
  const int nl = space.local_dof_count();
  DenseMatrix m(nl, nl);
  std::vector<double> v(nl);
  const double jac = 0.5 * space.mesh().h;
  for (int q = 0; q < quad.size(); ++q) {
    space.basis_values(quad.points[q], v);
    for (int i = 0; i < nl; ++i)
      for (int j = 0; j < nl; ++j) m(i, j) += jac * quad.weights[q] * v[i] * v[j];
  }
  return m;
}

/// Banded Gram operator Op^T blockdiag(minv_local) Op over the trial space,
/// for a discontinuous test space whose inverse mass is element local.
inline BandMatrix assemble_gram_block_banded(const ElementOp& op, const DenseMatrix& minv_local) {
  const FeSpace1D& trial = op.trial();
  const FeSpace1D& test = op.test();
  if (test.continuity() != Continuity::discontinuous)
    throw std::invalid_argument("assemble_gram_block_banded: test space must be discontinuous");
  const int lt = test.local_dof_count(), lj = trial.local_dof_count();
  // local block G^T Minv G, the same for every element
  DenseMatrix tmp(lt, lj), blk(lj, lj);
  for (int l = 0; l < lt; ++l)
    for (int a = 0; a < lj; ++a) {
      double s = 0.0;
      for (int m = 0; m < lt; ++m) s += minv_local(l, m) * op.local()(m, a);
      tmp(l, a) = s;
    }
  for (int a = 0; a < lj; ++a)
    for (int b = 0; b < lj; ++b) {
      double s = 0.0;
      for (int l = 0; l < lt; ++l) s += op.local()(l, a) * tmp(l, b);
      blk(a, b) = s;
    }
  BandMatrix band(trial.dof_count(), trial.degree());
  for (int e = 0; e < trial.mesh().cells; ++e)
    for (int a = 0; a < lj; ++a)
      for (int b = 0; b < lj; ++b)
        band.at(trial.global_dof(e, a), trial.global_dof(e, b)) += blk(a, b);
  return band;
}

/// Banded Gram operator Op^T diag(row_coeff) Op over the trial space; the
/// half-bandwidth is the trial degree. Requires a test space without
/// interelement coupling (discontinuous).
inline BandMatrix assemble_gram_banded(const ElementOp& op, std::span<const double> row_coeff) {
  const FeSpace1D& trial = op.trial();
  const FeSpace1D& test = op.test();
  if (test.continuity() != Continuity::discontinuous)
    throw std::invalid_argument("assemble_gram_banded: test space must be discontinuous");
  BandMatrix b(trial.dof_count(), trial.degree());
  const int lt = test.local_dof_count(), lj = trial.local_dof_count();
  for (int e = 0; e < trial.mesh().cells; ++e)
    for (int l = 0; l < lt; ++l) {
      const double c = row_coeff[test.global_dof(e, l)];
      for (int a = 0; a < lj; ++a) {
        const double ga = op.local()(l, a);
        if (ga == 0.0) continue;
        for (int bcol = 0; bcol < lj; ++bcol)
          b.at(trial.global_dof(e, a), trial.global_dof(e, bcol)) +=
              c * ga * op.local()(l, bcol);
      }
    }
  return b;
}

/// Banded copy of a square element operator (e.g. the stiffness).
inline BandMatrix to_banded(const ElementOp& op) {
  const FeSpace1D& s = op.trial();
  if (!s.compatible_with(op.test()))
    throw std::invalid_argument("to_banded: operator is not square over one space");
  BandMatrix b(s.dof_count(), s.degree());
  for (int e = 0; e < s.mesh().cells; ++e)
    for (int i = 0; i < s.local_dof_count(); ++i)
      for (int j = 0; j < s.local_dof_count(); ++j)
        b.at(s.global_dof(e, i), s.global_dof(e, j)) += op.local()(i, j);
  return b;
}

}  // namespace kerrwave
