// Copyright (c) 2026 the kerrwave authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include "kerrwave/assembly.hpp"
#include "kerrwave/diagnostics.hpp"
#include "kerrwave/errors.hpp"
#include "kerrwave/fe_space.hpp"
#include "kerrwave/linalg.hpp"
#include "kerrwave/material.hpp"
#include "kerrwave/time_basis.hpp"
#include "kerrwave/trajectory.hpp"
#include "kerrwave/solver_eh.hpp"

namespace kerrwave {

/// Discrete vector potential matching h(0). Only the gauge a(0) = 0 for
/// h(0) = 0 is supported; reconstructing a_0 from a general h(0) needs a
/// curl inverse and is out of scope.
inline DofVector init_a0(const DofVector& h0, std::shared_ptr<const FeSpace1D> W) {
  for (const double v : h0.values)
    if (v != 0.0)
      throw NotImplementedError("init_a0: only h(0) = 0 is supported (gauge a(0) = 0)");
  return DofVector(std::move(W));
}

/// Energy-conserving space-time scheme: e and a share one continuous space;
/// on each slab the trial polynomials have degree k+1 in time, are continuous
/// at the slab interface, and are tested against degree-k Legendre
/// polynomials. The fixed-point iteration freezes d'(e) at the previous
/// iterate; eliminating the a coefficients node by node leaves one banded
/// system for the e coefficients.
class EaSolver {
public:
  EaSolver(std::shared_ptr<const FeSpace1D> W, std::shared_ptr<const ConstitutiveLaw> law,
           int k, FixedPointSettings fp = {})
      : W_(std::move(W)),
        law_(std::move(law)),
        k_(k),
        fp_(fp),
        trial_basis_(lobatto_nodes01(k + 2)),
        tq_(gauss_legendre(2 * k + 4).on_unit_interval()) {
    if (W_->continuity() != Continuity::continuous)
      throw std::invalid_argument("EaSolver: needs the continuous space");
    if (k < 0) throw std::invalid_argument("EaSolver: k must be nonnegative");

    mw_ = lumped_mass_weights(*W_);
    stiff_ = std::make_unique<BandMatrix>(
        to_banded(assemble_stiffness(W_, gauss_lobatto(W_->degree() + 1))));

    const int kk = k_ + 1, nn = k_ + 2, nq = tq_.size();
    gv_ = DenseMatrix(nq, nn);
    gd_ = DenseMatrix(nq, nn);
    pv_ = DenseMatrix(nq, kk);
    std::vector<double> buf(nn);
    for (int q = 0; q < nq; ++q) {
      trial_basis_.values(tq_.points[q], buf);
      for (int m = 0; m < nn; ++m) gv_(q, m) = buf[m];
      trial_basis_.derivs(tq_.points[q], buf);
      for (int m = 0; m < nn; ++m) gd_(q, m) = buf[m];
      for (int r = 0; r < kk; ++r) pv_(q, r) = shifted_legendre(r, tq_.points[q]);
    }
    b0_ = DenseMatrix(kk, nn);
    for (int r = 0; r < kk; ++r)
      for (int m = 0; m < nn; ++m) {
        double s = 0.0;
        for (int q = 0; q < nq; ++q) s += tq_.weights[q] * gv_(q, m) * pv_(q, r);
        b0_(r, m) = s;
      }
  }

  const FeSpace1D& space() const { return *W_; }
  int k() const { return k_; }

  EaState initial_state(const DofVector& e0, const DofVector& a0) const {
    if (!e0.space->compatible_with(*W_) || !a0.space->compatible_with(*W_))
      throw std::invalid_argument("EaSolver: initial data in the wrong space");
    EaState s;
    s.e_end = e0.values;
    s.a_end = a0.values;
    s.energy = energy_ea(e0, a0, *law_);
    s.slab_index = 0;
    return s;
  }

  /// Advance one slab. Negative tau steps backwards (used for reversibility
  /// checks); run() itself accepts only tau > 0.
  EaState step(const EaState& prev, double tau) {
    if (tau == 0.0) throw std::invalid_argument("EaSolver::step: tau must be nonzero");
    const int kk = k_ + 1, nn = k_ + 2, nq = tq_.size();
    const int nw = W_->dof_count(), p = W_->degree();
    const double nu0 = law_->nu0();
    const int hbw = p * kk + k_;

    // Trial coefficients of e (nn per node); slot 0 is pinned to the
    // incoming end value by temporal continuity.
    std::vector<std::vector<double>> ebar(nn, prev.e_end);

    std::vector<double> ka(nw);
    stiff_->mult(prev.a_end, ka);

    BandMatrix mat(nw * kk, hbw);
    std::vector<double> x(static_cast<std::size_t>(nw) * kk);
    std::vector<double> cval(nq);
    // Per-node elimination data reused when reconstructing a.
    std::vector<double> cmap(static_cast<std::size_t>(nw) * kk * kk);
    std::vector<double> uvec(static_cast<std::size_t>(nw) * kk);
    std::vector<double> bcmap(static_cast<std::size_t>(nw) * kk * kk);
    std::vector<double> bu(static_cast<std::size_t>(nw) * kk);
    std::vector<double> kw(nw), wr(nw);

    DenseMatrix atil(kk, nn), btil(kk, nn), a1(kk, kk);
    std::vector<double> rhs_small(kk), col(kk);

    double change = 0.0;
    bool converged = false;
    for (int iter = 0; iter < fp_.max_iters; ++iter) {
      mat.set_zero();
      std::fill(x.begin(), x.end(), 0.0);

      for (int i = 0; i < nw; ++i) {
        for (int q = 0; q < nq; ++q) {
          double e = 0.0;
          for (int m = 0; m < nn; ++m) e += gv_(q, m) * ebar[m][i];
          cval[q] = law_->d_prime(e);
        }
        for (int r = 0; r < kk; ++r)
          for (int m = 0; m < nn; ++m) {
            double sa = 0.0, sb = 0.0;
            for (int q = 0; q < nq; ++q) {
              const double w = tq_.weights[q] * cval[q] * pv_(q, r);
              sa += w * gd_(q, m);
              sb += w * gv_(q, m);
            }
            atil(r, m) = sa;
            btil(r, m) = sb;
          }
        for (int r = 0; r < kk; ++r)
          for (int m = 0; m < kk; ++m) a1(r, m) = atil(r, m + 1);
        DenseLu lu(a1);

        // a-coefficients: A = u + C E with C = -tau A1^{-1} Btil1 and
        // u = A1^{-1} (-Atil0 a_prev - tau Btil0 e_prev), per node.
        double* C = &cmap[static_cast<std::size_t>(i) * kk * kk];
        for (int m = 0; m < kk; ++m) {
          for (int r = 0; r < kk; ++r) col[r] = btil(r, m + 1);
          lu.solve(col);
          for (int r = 0; r < kk; ++r) C[static_cast<std::size_t>(r) * kk + m] = -tau * col[r];
        }
        for (int r = 0; r < kk; ++r)
          rhs_small[r] = -atil(r, 0) * prev.a_end[i] - tau * btil(r, 0) * prev.e_end[i];
        lu.solve(rhs_small);
        for (int r = 0; r < kk; ++r) uvec[static_cast<std::size_t>(i) * kk + r] = rhs_small[r];

        // B0 (columns 1..k+1) applied to C and u.
        double* BC = &bcmap[static_cast<std::size_t>(i) * kk * kk];
        for (int r = 0; r < kk; ++r) {
          double s = 0.0;
          for (int m = 0; m < kk; ++m) {
            double t = 0.0;
            for (int l = 0; l < kk; ++l) t += b0_(r, l + 1) * C[static_cast<std::size_t>(l) * kk + m];
            BC[static_cast<std::size_t>(r) * kk + m] = t;
            s += b0_(r, m + 1) * uvec[static_cast<std::size_t>(i) * kk + m];
          }
          bu[static_cast<std::size_t>(i) * kk + r] = s;
        }

        for (int r = 0; r < kk; ++r) {
          for (int m = 0; m < kk; ++m)
            mat.at(i * kk + r, i * kk + m) += mw_[i] * atil(r, m + 1);
          x[static_cast<std::size_t>(i) * kk + r] =
              -mw_[i] * atil(r, 0) * prev.e_end[i] + tau * nu0 * b0_(r, 0) * ka[i];
        }
      }

      // Spatial coupling through the stiffness operator.
      for (int r = 0; r < kk; ++r) {
        for (int j = 0; j < nw; ++j) wr[j] = bu[static_cast<std::size_t>(j) * kk + r];
        stiff_->mult(wr, kw);
        for (int i = 0; i < nw; ++i) x[static_cast<std::size_t>(i) * kk + r] += tau * nu0 * kw[i];
      }
      for (int i = 0; i < nw; ++i) {
        const int j0 = std::max(0, i - p), j1 = std::min(nw - 1, i + p);
        for (int j = j0; j <= j1; ++j) {
          const double kij = stiff_->get(i, j);
          if (kij == 0.0) continue;
          const double* BC = &bcmap[static_cast<std::size_t>(j) * kk * kk];
          for (int r = 0; r < kk; ++r)
            for (int m = 0; m < kk; ++m)
              mat.at(i * kk + r, j * kk + m) -=
                  tau * nu0 * kij * BC[static_cast<std::size_t>(r) * kk + m];
        }
      }

      mat.factor();
      mat.solve(x);

      change = 0.0;
      for (int m = 1; m < nn; ++m)
        for (int i = 0; i < nw; ++i) {
          const double v = x[static_cast<std::size_t>(i) * kk + (m - 1)];
          change = std::max(change, std::abs(v - ebar[m][i]));
          ebar[m][i] = v;
        }
      if (change < fp_.tol) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw SolverDivergedError("EaSolver::step: fixed-point iteration did not converge",
                                change, fp_.max_iters);

    // Reconstruct the a coefficients node by node.
    std::vector<std::vector<double>> aco(nn, std::vector<double>(nw));
    aco[0] = prev.a_end;
    for (int i = 0; i < nw; ++i) {
      const double* C = &cmap[static_cast<std::size_t>(i) * kk * kk];
      for (int m = 0; m < kk; ++m) {
        double s = uvec[static_cast<std::size_t>(i) * kk + m];
        for (int l = 0; l < kk; ++l) s += C[static_cast<std::size_t>(m) * kk + l] * ebar[l + 1][i];
        aco[m + 1][i] = s;
      }
    }

    EaState next;
    next.slab_index = prev.slab_index + 1;
    next.e_end = ebar[nn - 1];
    next.a_end = aco[nn - 1];
    next.energy = energy_ea(DofVector(W_, next.e_end), DofVector(W_, next.a_end), *law_);
    next.e_slab.t_left = prev.slab_index * tau;
    next.e_slab.tau = tau;
    next.e_slab.nodes01 = trial_basis_.nodes();
    next.e_slab.coeffs = std::move(ebar);
    next.a_slab.t_left = next.e_slab.t_left;
    next.a_slab.tau = tau;
    next.a_slab.nodes01 = trial_basis_.nodes();
    next.a_slab.coeffs = std::move(aco);
    return next;
  }

  Trajectory run(const DofVector& e0, const DofVector& a0, double tau, int steps,
                 bool store_slabs = false) {
    if (steps < 0) throw std::invalid_argument("EaSolver::run: negative step count");
    if (steps > 0 && !(tau > 0.0))
      throw std::invalid_argument("EaSolver::run: tau must be positive");
    Trajectory traj;
    traj.scheme = SchemeKind::ea;
    traj.primary_space = W_;
    traj.aux_space = W_;
    traj.k = k_;
    traj.tau = tau;
    traj.store_slabs = store_slabs;
    EaState state = initial_state(e0, a0);
    traj.times.push_back(0.0);
    traj.primary.push_back(state.e_end);
    traj.aux.push_back(state.a_end);
    traj.energies.push_back(state.energy);
    for (int n = 1; n <= steps; ++n) {
      state = step(state, tau);
      traj.times.push_back(n * tau);
      traj.primary.push_back(state.e_end);
      traj.aux.push_back(state.a_end);
      traj.energies.push_back(state.energy);
      if (store_slabs) {
        traj.primary_slabs.push_back(state.e_slab);
        traj.aux_slabs.push_back(state.a_slab);
      }
    }
    return traj;
  }

  /// Magnetic field reconstruction h = nu0 da/dx, interpolated into the
  /// discontinuous companion space.
  DofVector reconstruct_h(const DofVector& a, std::shared_ptr<const FeSpace1D> Q) const {
    if (!a.space->compatible_with(*W_) || !Q->same_mesh(*W_) ||
        Q->continuity() != Continuity::discontinuous)
      throw std::invalid_argument("reconstruct_h: incompatible spaces");
    DofVector h(Q);
    const int nl = W_->local_dof_count();
    std::vector<double> dv(nl);
    const double scale = 2.0 / W_->mesh().h * law_->nu0();
    for (int e = 0; e < W_->mesh().cells; ++e)
      for (int l = 0; l < Q->local_dof_count(); ++l) {
        W_->basis_derivs(Q->ref_nodes()[l], dv);
        double da = 0.0;
        for (int m = 0; m < nl; ++m) da += dv[m] * a.values[W_->global_dof(e, m)];
        h.values[Q->global_dof(e, l)] = scale * da;
      }
    return h;
  }

private:
  std::shared_ptr<const FeSpace1D> W_;
  std::shared_ptr<const ConstitutiveLaw> law_;
  int k_;
  FixedPointSettings fp_;
  TimeBasis trial_basis_;
  QuadratureRule tq_;

  std::vector<double> mw_;
  std::unique_ptr<BandMatrix> stiff_;

  DenseMatrix gv_, gd_, pv_;  // trial values/derivatives and Legendre tests at quadrature
  DenseMatrix b0_;            // plain temporal coupling integrals
};

}  // namespace kerrwave
