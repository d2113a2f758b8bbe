// Copyright (c) 2026 the kerrwave authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <memory>
#include <span>
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

/// Butcher tableau of a collocation method. The coefficients are built from
/// the abscissae via the collocation integrals, which reproduces the
/// published Radau IIA / Lobatto IIIA entries to machine precision.
struct ButcherTableau {
  DenseMatrix A;
  std::vector<double> b, c;
  int order = 0;

  int stages() const { return static_cast<int>(c.size()); }

  static ButcherTableau collocation(std::vector<double> abscissae, int order) {
    ButcherTableau t;
    t.c = std::move(abscissae);
    t.order = order;
    const int s = t.stages();
    TimeBasis basis(t.c);
    const QuadratureRule q = gauss_legendre(s + 2).on_unit_interval();
    t.A = DenseMatrix(s, s);
    t.b.assign(s, 0.0);
    std::vector<double> vals(s);
    for (int qi = 0; qi < q.size(); ++qi) {
      basis.values(q.points[qi], vals);
      for (int j = 0; j < s; ++j) t.b[j] += q.weights[qi] * vals[j];
    }
    for (int i = 0; i < s; ++i) {
      // integral over [0, c_i] by the mapped rule
      for (int qi = 0; qi < q.size(); ++qi) {
        basis.values(t.c[i] * q.points[qi], vals);
        for (int j = 0; j < s; ++j) t.A(i, j) += t.c[i] * q.weights[qi] * vals[j];
      }
    }
    return t;
  }

  static ButcherTableau radau_iia(int s) {
    if (s < 1) throw std::invalid_argument("radau_iia: need s >= 1 stages");
    return collocation(radau_right_nodes01(s), 2 * s - 1);
  }

  static ButcherTableau lobatto_iiia(int s) {
    if (s < 2) throw std::invalid_argument("lobatto_iiia: need s >= 2 stages");
    return collocation(lobatto_nodes01(s), 2 * s - 2);
  }
};

/// Right-hand side of a spatially discretized system.
class OdeSystem {
public:
  virtual ~OdeSystem() = default;
  virtual int dim() const = 0;
  virtual void rhs(std::span<const double> y, std::span<double> f) const = 0;
  virtual bool linear() const = 0;

  /// Dense operator of a linear system, columnwise from rhs applications.
  DenseMatrix dense_operator() const {
    if (!linear()) throw std::logic_error("dense_operator: system is nonlinear");
    const int n = dim();
    DenseMatrix L(n, n);
    std::vector<double> e(n, 0.0), f(n);
    for (int j = 0; j < n; ++j) {
      e[j] = 1.0;
      rhs(e, f);
      for (int i = 0; i < n; ++i) L(i, j) = f[i];
      e[j] = 0.0;
    }
    return L;
  }
};

/// Semi-discrete e-h system: state y = [e; h] with diagonal (possibly
/// field-dependent) masses and the mixed first-derivative coupling.
class EhSemiDiscrete : public OdeSystem {
public:
  EhSemiDiscrete(std::shared_ptr<const FeSpace1D> W, std::shared_ptr<const FeSpace1D> Q,
                 std::shared_ptr<const KerrMaterial> law)
      : W_(std::move(W)), Q_(std::move(Q)), law_(std::move(law)) {
    mw_ = lumped_mass_weights(*W_);
    const QuadratureRule xq = gauss_lobatto(W_->degree() + 1);
    deriv_ = std::make_unique<ElementOp>(assemble_deriv(W_, Q_, xq));
    qmass_inv_ = DenseLu(local_mass_matrix(*Q_, xq)).inverse();
    for (const double w : mw_)
      if (!(w > 0.0)) throw SingularMassError("EhSemiDiscrete: singular W mass");
  }

  int dim() const override { return W_->dof_count() + Q_->dof_count(); }
  bool linear() const override { return law_->linear(); }

  void rhs(std::span<const double> y, std::span<double> f) const override {
    const int nw = W_->dof_count(), nq = Q_->dof_count();
    std::vector<double> tmp(std::max(nw, nq));
    deriv_->apply_transpose(y.subspan(nw, nq), std::span<double>(tmp.data(), nw));
    for (int i = 0; i < nw; ++i) f[i] = tmp[i] / (mw_[i] * law_->d_prime(y[i]));
    deriv_->apply(y.subspan(0, nw), std::span<double>(tmp.data(), nq));
    const double inv_mu0 = 1.0 / law_->mu0();
    const int lq = Q_->local_dof_count();
    for (int e = 0; e < Q_->mesh().cells; ++e)
      for (int l = 0; l < lq; ++l) {
        double s = 0.0;
        for (int o = 0; o < lq; ++o) s += qmass_inv_(l, o) * tmp[Q_->global_dof(e, o)];
        f[nw + Q_->global_dof(e, l)] = -inv_mu0 * s;
      }
  }

  const FeSpace1D& space_e() const { return *W_; }
  const FeSpace1D& space_h() const { return *Q_; }
  const KerrMaterial& law() const { return *law_; }

private:
  std::shared_ptr<const FeSpace1D> W_, Q_;
  std::shared_ptr<const KerrMaterial> law_;
  std::vector<double> mw_, mq_;
  std::unique_ptr<ElementOp> deriv_;
};

/// Semi-discrete e-a system: state y = [e; a] in one continuous space.
class EaSemiDiscrete : public OdeSystem {
public:
  EaSemiDiscrete(std::shared_ptr<const FeSpace1D> W, std::shared_ptr<const KerrMaterial> law)
      : W_(std::move(W)), law_(std::move(law)) {
    mw_ = lumped_mass_weights(*W_);
    stiff_ = std::make_unique<BandMatrix>(
        to_banded(assemble_stiffness(W_, gauss_lobatto(W_->degree() + 1))));
  }

  int dim() const override { return 2 * W_->dof_count(); }
  bool linear() const override { return law_->linear(); }

  void rhs(std::span<const double> y, std::span<double> f) const override {
    const int nw = W_->dof_count();
    std::vector<double> ka(nw);
    stiff_->mult(y.subspan(nw, nw), ka);
    const double nu0 = law_->nu0();
    for (int i = 0; i < nw; ++i) {
      f[i] = nu0 * ka[i] / (mw_[i] * law_->d_prime(y[i]));
      f[nw + i] = -y[i];
    }
  }

private:
  std::shared_ptr<const FeSpace1D> W_;
  std::shared_ptr<const KerrMaterial> law_;
  std::vector<double> mw_;
  std::unique_ptr<BandMatrix> stiff_;
};

/// Implicit Runge-Kutta stepper, independent of the variational integrators.
/// Linear systems solve the coupled stage equations directly; nonlinear ones
/// iterate the stage fixed point.
class IrkIntegrator {
public:
  IrkIntegrator(ButcherTableau tableau, std::shared_ptr<const OdeSystem> system,
                double stage_tol = 1e-13, int max_stage_iters = 500)
      : tab_(std::move(tableau)), sys_(std::move(system)), tol_(stage_tol),
        max_iters_(max_stage_iters) {
    if (!(tol_ > 0.0)) throw std::invalid_argument("IrkIntegrator: tolerance must be positive");
  }

  const ButcherTableau& tableau() const { return tab_; }

  std::vector<double> step(std::span<const double> y, double tau) {
    const int s = tab_.stages(), n = sys_->dim();
    std::vector<double> stages(static_cast<std::size_t>(s) * n);
    if (sys_->linear()) {
      solve_stages_direct(y, tau, stages);
    } else {
      solve_stages_fixed_point(y, tau, stages);
    }
    std::vector<double> out(y.begin(), y.end());
    std::vector<double> f(n);
    for (int i = 0; i < s; ++i) {
      sys_->rhs(std::span<const double>(stages.data() + static_cast<std::size_t>(i) * n, n), f);
      for (int a = 0; a < n; ++a) out[a] += tau * tab_.b[i] * f[a];
    }
    return out;
  }

private:
  void solve_stages_direct(std::span<const double> y, double tau, std::vector<double>& z) {
    const int s = tab_.stages(), n = sys_->dim();
    if (!lin_op_) lin_op_ = std::make_unique<DenseMatrix>(sys_->dense_operator());
    if (!stage_lu_ || cached_tau_ != tau) {
      DenseMatrix M(s * n, s * n);
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
          const double aij = tab_.A(i, j);
          for (int a = 0; a < n; ++a) {
            if (aij != 0.0)
              for (int b = 0; b < n; ++b) M(i * n + a, j * n + b) = -tau * aij * (*lin_op_)(a, b);
            if (i == j) M(i * n + a, i * n + a) += 1.0;
          }
        }
      stage_lu_ = std::make_unique<DenseLu>(std::move(M));
      cached_tau_ = tau;
    }
    for (int i = 0; i < s; ++i)
      std::copy(y.begin(), y.end(), z.begin() + static_cast<std::size_t>(i) * n);
    stage_lu_->solve(std::span<double>(z));
  }

  void solve_stages_fixed_point(std::span<const double> y, double tau, std::vector<double>& z) {
    const int s = tab_.stages(), n = sys_->dim();
    for (int i = 0; i < s; ++i)
      std::copy(y.begin(), y.end(), z.begin() + static_cast<std::size_t>(i) * n);
    std::vector<double> f(static_cast<std::size_t>(s) * n), znew(z.size());
    double change = 0.0;
    for (int iter = 0; iter < max_iters_; ++iter) {
      for (int j = 0; j < s; ++j)
        sys_->rhs(std::span<const double>(z.data() + static_cast<std::size_t>(j) * n, n),
                  std::span<double>(f.data() + static_cast<std::size_t>(j) * n, n));
      change = 0.0;
      for (int i = 0; i < s; ++i)
        for (int a = 0; a < n; ++a) {
          double v = y[a];
          for (int j = 0; j < s; ++j) v += tau * tab_.A(i, j) * f[static_cast<std::size_t>(j) * n + a];
          const std::size_t idx = static_cast<std::size_t>(i) * n + a;
          change = std::max(change, std::abs(v - z[idx]));
          znew[idx] = v;
        }
      z.swap(znew);
      if (change < tol_) return;
    }
    throw SolverDivergedError("IrkIntegrator: stage iteration did not converge", change,
                              max_iters_);
  }

  ButcherTableau tab_;
  std::shared_ptr<const OdeSystem> sys_;
  double tol_;
  int max_iters_;
  std::unique_ptr<DenseMatrix> lin_op_;
  std::unique_ptr<DenseLu> stage_lu_;
  double cached_tau_ = 0.0;
};

/// High-accuracy reference trajectory on the e-h semi-discrete system,
/// used as a brute-force oracle for small instances.
inline Trajectory run_reference_eh(std::shared_ptr<const FeSpace1D> W,
                                   std::shared_ptr<const FeSpace1D> Q,
                                   std::shared_ptr<const KerrMaterial> law,
                                   const DofVector& e0, const DofVector& h0, double tau,
                                   int steps, const ButcherTableau& tableau) {
  auto sys = std::make_shared<EhSemiDiscrete>(W, Q, law);
  IrkIntegrator irk(tableau, sys);
  const int nw = W->dof_count(), nq = Q->dof_count();
  Trajectory traj;
  traj.scheme = SchemeKind::oracle;
  traj.primary_space = W;
  traj.aux_space = Q;
  traj.tau = tau;
  std::vector<double> y(nw + nq);
  std::copy(e0.values.begin(), e0.values.end(), y.begin());
  std::copy(h0.values.begin(), h0.values.end(), y.begin() + nw);
  auto record = [&](int n) {
    traj.times.push_back(n * tau);
    traj.primary.emplace_back(y.begin(), y.begin() + nw);
    traj.aux.emplace_back(y.begin() + nw, y.end());
    traj.energies.push_back(energy_eh(DofVector(W, traj.primary.back()),
                                      DofVector(Q, traj.aux.back()), *law));
  };
  record(0);
  for (int n = 1; n <= steps; ++n) {
    y = irk.step(y, tau);
    record(n);
  }
  return traj;
}

inline Trajectory reference_solution(std::shared_ptr<const FeSpace1D> W,
                                     std::shared_ptr<const FeSpace1D> Q,
                                     std::shared_ptr<const KerrMaterial> law,
                                     const DofVector& e0, const DofVector& h0, double tau_ref,
                                     int steps) {
  return run_reference_eh(W, Q, law, e0, h0, tau_ref, steps, ButcherTableau::radau_iia(3));
}

}  // namespace kerrwave
