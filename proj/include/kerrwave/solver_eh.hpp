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

namespace kerrwave {

struct FixedPointSettings {
  double tol = 1e-12;
  int max_iters = 200;
};

/// Dissipative space-time scheme: e in the continuous space of degree p,
/// h in the discontinuous space of degree p-1, both as polynomials of degree
/// k in time on each slab with upwind jump coupling between slabs. Each slab
/// is solved by a fixed-point iteration that freezes the incremental
/// permittivity at the previous iterate; the frozen problem reduces, after
/// eliminating h, to one banded system for the e coefficients.
class EhSolver {
public:
  EhSolver(std::shared_ptr<const FeSpace1D> W, std::shared_ptr<const FeSpace1D> Q,
           std::shared_ptr<const ConstitutiveLaw> law, int k, FixedPointSettings fp = {})
      : W_(std::move(W)),
        Q_(std::move(Q)),
        law_(std::move(law)),
        k_(k),
        fp_(fp),
        time_basis_(radau_right_nodes01(k + 1)),
        tq_(gauss_legendre(2 * k + 3).on_unit_interval()) {
    if (W_->continuity() != Continuity::continuous ||
        Q_->continuity() != Continuity::discontinuous || Q_->degree() != W_->degree() - 1 ||
        !W_->same_mesh(*Q_))
      throw std::invalid_argument("EhSolver: spaces must be (continuous p, discontinuous p-1) "
                                  "on one mesh");
    if (k < 0) throw std::invalid_argument("EhSolver: k must be nonnegative");

    // One Gauss-Lobatto rule with p+1 nodes realizes all spatial products:
    // it lumps the (field-dependent) e mass and integrates the h mass and
    // the first-derivative couplings exactly.
    mw_ = lumped_mass_weights(*W_);
    const QuadratureRule xq = gauss_lobatto(W_->degree() + 1);
    deriv_ = std::make_unique<ElementOp>(assemble_deriv(W_, Q_, xq));
    qmass_inv_ = DenseLu(local_mass_matrix(*Q_, xq)).inverse();
    kq_ = std::make_unique<BandMatrix>(assemble_gram_block_banded(*deriv_, qmass_inv_));

    // Temporal tables on [0,1]: values/derivatives of the Radau nodal basis
    // at the quadrature points, plus the left-endpoint trace.
    const int kk = k_ + 1, nq = tq_.size();
    lv_ = DenseMatrix(nq, kk);
    ld_ = DenseMatrix(nq, kk);
    std::vector<double> buf(kk);
    for (int q = 0; q < nq; ++q) {
      time_basis_.values(tq_.points[q], buf);
      for (int m = 0; m < kk; ++m) lv_(q, m) = buf[m];
      time_basis_.derivs(tq_.points[q], buf);
      for (int m = 0; m < kk; ++m) ld_(q, m) = buf[m];
    }
    lambda_.resize(kk);
    time_basis_.values(0.0, lambda_);

    DenseMatrix A(kk, kk), B(kk, kk), D(kk, kk);
    for (int r = 0; r < kk; ++r)
      for (int m = 0; m < kk; ++m) {
        double a = 0.0, b = 0.0;
        for (int q = 0; q < nq; ++q) {
          a += tq_.weights[q] * ld_(q, m) * lv_(q, r);
          b += tq_.weights[q] * lv_(q, m) * lv_(q, r);
        }
        A(r, m) = a;
        B(r, m) = b;
        D(r, m) = a + lambda_[r] * lambda_[m];
      }
    bmat_ = B;
    DenseLu dlu(D);
    pvec_ = dlu.solve_copy(lambda_);
    smat_ = DenseMatrix(kk, kk);
    std::vector<double> col(kk);
    for (int m = 0; m < kk; ++m) {
      for (int r = 0; r < kk; ++r) col[r] = B(r, m);
      dlu.solve(col);
      for (int r = 0; r < kk; ++r) smat_(r, m) = col[r];
    }
    bs_ = bmat_.matmul(smat_);
    bp_.assign(kk, 0.0);
    bmat_.mult(pvec_, bp_);
  }

  const FeSpace1D& space_e() const { return *W_; }
  const FeSpace1D& space_h() const { return *Q_; }
  int k() const { return k_; }

  EhState initial_state(const DofVector& e0, const DofVector& h0) const {
    if (!e0.space->compatible_with(*W_) || !h0.space->compatible_with(*Q_))
      throw std::invalid_argument("EhSolver: initial data in the wrong spaces");
    EhState s;
    s.e_end = e0.values;
    s.h_end = h0.values;
    s.energy = energy_eh(e0, h0, *law_);
    s.slab_index = 0;
    return s;
  }

  /// Advance one slab of length tau > 0.
  EhState step(const EhState& prev, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("EhSolver::step: tau must be positive");
    const int kk = k_ + 1, nq = tq_.size();
    const int nw = W_->dof_count(), nqd = Q_->dof_count();
    const double mu0 = law_->mu0();
    const int hbw = W_->degree() * kk + k_;

    // Previous-iterate e coefficients; initial guess is the constant
    // extension of the incoming end value.
    std::vector<std::vector<double>> ebar(kk, prev.e_end);

    std::vector<double> gth(nw);
    deriv_->apply_transpose(prev.h_end, gth);

    BandMatrix mat(nw * kk, hbw);
    std::vector<double> x(static_cast<std::size_t>(nw) * kk);
    std::vector<double> dval(nq), tblock(static_cast<std::size_t>(kk) * kk);

    double change = 0.0;
    bool converged = false;
    for (int iter = 0; iter < fp_.max_iters; ++iter) {
      mat.set_zero();
      std::fill(x.begin(), x.end(), 0.0);
      for (int i = 0; i < nw; ++i) {
        for (int q = 0; q < nq; ++q) {
          double e = 0.0;
          for (int m = 0; m < kk; ++m) e += lv_(q, m) * ebar[m][i];
          dval[q] = law_->d_prime(e);
        }
        double e0 = 0.0;
        for (int m = 0; m < kk; ++m) e0 += lambda_[m] * ebar[m][i];
        const double d0 = law_->d_prime(e0);

        for (int r = 0; r < kk; ++r)
          for (int m = 0; m < kk; ++m) {
            double t = d0 * lambda_[m] * lambda_[r];
            for (int q = 0; q < nq; ++q) t += tq_.weights[q] * dval[q] * ld_(q, m) * lv_(q, r);
            tblock[static_cast<std::size_t>(r) * kk + m] = t;
          }
        for (int r = 0; r < kk; ++r) {
          for (int m = 0; m < kk; ++m)
            mat.at(i * kk + r, i * kk + m) += mw_[i] * tblock[static_cast<std::size_t>(r) * kk + m];
          x[static_cast<std::size_t>(i) * kk + r] =
              mw_[i] * d0 * lambda_[r] * prev.e_end[i] + tau * bp_[r] * gth[i];
        }
      }
      // Spatial coupling through K_Q = G^T M_Q^{-1} G.
      const double w2 = tau * tau / mu0;
      const int p = W_->degree();
      for (int i = 0; i < nw; ++i) {
        const int j0 = std::max(0, i - p), j1 = std::min(nw - 1, i + p);
        for (int j = j0; j <= j1; ++j) {
          const double kij = kq_->get(i, j);
          if (kij == 0.0) continue;
          for (int r = 0; r < kk; ++r)
            for (int m = 0; m < kk; ++m)
              mat.at(i * kk + r, j * kk + m) += w2 * bs_(r, m) * kij;
        }
      }
      mat.factor();
      mat.solve(x);

      change = 0.0;
      for (int m = 0; m < kk; ++m)
        for (int i = 0; i < nw; ++i) {
          const double v = x[static_cast<std::size_t>(i) * kk + m];
          change = std::max(change, std::abs(v - ebar[m][i]));
          ebar[m][i] = v;
        }
      if (change < fp_.tol) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw SolverDivergedError("EhSolver::step: fixed-point iteration did not converge",
                                change, fp_.max_iters);

    // Recover the h coefficients from the eliminated equation; the exact
    // h mass inverts element by element.
    std::vector<std::vector<double>> ge(kk, std::vector<double>(nqd));
    for (int m = 0; m < kk; ++m) {
      deriv_->apply(ebar[m], ge[m]);
      const int lq = Q_->local_dof_count();
      std::vector<double> loc(lq);
      for (int e = 0; e < Q_->mesh().cells; ++e) {
        for (int l = 0; l < lq; ++l) {
          double s = 0.0;
          for (int o = 0; o < lq; ++o) s += qmass_inv_(l, o) * ge[m][Q_->global_dof(e, o)];
          loc[l] = s;
        }
        for (int l = 0; l < lq; ++l) ge[m][Q_->global_dof(e, l)] = loc[l];
      }
    }
    std::vector<std::vector<double>> hco(kk, std::vector<double>(nqd));
    for (int j = 0; j < nqd; ++j) {
      const double scale = tau / mu0;
      for (int m = 0; m < kk; ++m) {
        double s = pvec_[m] * prev.h_end[j];
        for (int r = 0; r < kk; ++r) s -= scale * smat_(m, r) * ge[r][j];
        hco[m][j] = s;
      }
    }

    EhState next;
    next.slab_index = prev.slab_index + 1;
    next.e_end = ebar[kk - 1];
    next.h_end = hco[kk - 1];
    next.energy = energy_eh(DofVector(W_, next.e_end), DofVector(Q_, next.h_end), *law_);
    next.e_slab.t_left = prev.slab_index * tau;
    next.e_slab.tau = tau;
    next.e_slab.nodes01 = time_basis_.nodes();
    next.e_slab.coeffs = std::move(ebar);
    next.h_slab.t_left = next.e_slab.t_left;
    next.h_slab.tau = tau;
    next.h_slab.nodes01 = time_basis_.nodes();
    next.h_slab.coeffs = std::move(hco);
    return next;
  }

  Trajectory run(const DofVector& e0, const DofVector& h0, double tau, int steps,
                 bool store_slabs = false) {
    if (steps < 0) throw std::invalid_argument("EhSolver::run: negative step count");
    Trajectory traj;
    traj.scheme = SchemeKind::eh;
    traj.primary_space = W_;
    traj.aux_space = Q_;
    traj.k = k_;
    traj.tau = tau;
    traj.store_slabs = store_slabs;
    EhState state = initial_state(e0, h0);
    traj.times.push_back(0.0);
    traj.primary.push_back(state.e_end);
    traj.aux.push_back(state.h_end);
    traj.energies.push_back(state.energy);
    for (int n = 1; n <= steps; ++n) {
      state = step(state, tau);
      traj.times.push_back(n * tau);
      traj.primary.push_back(state.e_end);
      traj.aux.push_back(state.h_end);
      traj.energies.push_back(state.energy);
      if (store_slabs) {
        traj.primary_slabs.push_back(state.e_slab);
        traj.aux_slabs.push_back(state.h_slab);
      }
    }
    return traj;
  }

private:
  std::shared_ptr<const FeSpace1D> W_, Q_;
  std::shared_ptr<const ConstitutiveLaw> law_;
  int k_;
  FixedPointSettings fp_;
  TimeBasis time_basis_;
  QuadratureRule tq_;

  std::vector<double> mw_;
  DenseMatrix qmass_inv_;
  std::unique_ptr<ElementOp> deriv_;
  std::unique_ptr<BandMatrix> kq_;

  DenseMatrix lv_, ld_;           // temporal basis tables at quadrature points
  std::vector<double> lambda_;    // basis trace at s = 0
  DenseMatrix bmat_, smat_, bs_;  // B, D^{-1}B, B D^{-1} B
  std::vector<double> pvec_, bp_;
};

}  // namespace kerrwave
