// Copyright (c) 2026 the kerrwave authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "kerrwave/assembly.hpp"
#include "kerrwave/fe_space.hpp"
#include "kerrwave/material.hpp"
#include "kerrwave/parallel.hpp"
#include "kerrwave/trajectory.hpp"

namespace kerrwave {

/// Discrete energy of the e-h pair under the scheme's own products: w_E
/// summed at the nodal (lumped) points of e's space, w_M integrated with the
/// same p+1-point Gauss-Lobatto rule per element, which is exact for the
/// degree p-1 magnetic field. The discrete balance laws hold for exactly
/// this functional.
inline double energy_eh(const DofVector& e, const DofVector& h, const ConstitutiveLaw& law) {
  if (e.space->continuity() != Continuity::continuous ||
      h.space->continuity() != Continuity::discontinuous ||
      h.space->degree() != e.space->degree() - 1 || !e.space->same_mesh(*h.space))
    throw std::invalid_argument("energy_eh: expected e in the continuous and h in the "
                                "degree p-1 discontinuous space on one mesh");
  const std::vector<double> we = lumped_mass_weights(*e.space);
  double total = 0.0;
  for (int i = 0; i < e.size(); ++i) total += we[i] * law.w_E(e.values[i]);
  const FeSpace1D& Q = *h.space;
  const QuadratureRule rule = gauss_lobatto(e.space->degree() + 1);
  const int lq = Q.local_dof_count();
  const double jac = 0.5 * Q.mesh().h;
  std::vector<double> bv(lq);
  for (int el = 0; el < Q.mesh().cells; ++el)
    for (int q = 0; q < rule.size(); ++q) {
      Q.basis_values(rule.points[q], bv);
      double hv = 0.0;
      for (int l = 0; l < lq; ++l) hv += bv[l] * h.values[Q.global_dof(el, l)];
      total += jac * rule.weights[q] * law.w_M(hv);
    }
  return total;
}

/// Discrete energy of the e-a pair: w_E as above plus (nu0/2)(da/dx)^2 under
/// the Gauss-Lobatto rule of the shared space.
inline double energy_ea(const DofVector& e, const DofVector& a, const ConstitutiveLaw& law) {
  if (!e.space->compatible_with(*a.space) || e.space->continuity() != Continuity::continuous)
    throw std::invalid_argument("energy_ea: e and a must share one continuous space");
  const FeSpace1D& V = *e.space;
  const std::vector<double> we = lumped_mass_weights(V);
  double total = 0.0;
  for (int i = 0; i < e.size(); ++i) total += we[i] * law.w_E(e.values[i]);
  const QuadratureRule& rule = V.node_rule();
  const int nl = V.local_dof_count();
  const double jac = 0.5 * V.mesh().h;
  const double dscale = 2.0 / V.mesh().h;
  std::vector<double> dv(nl);
  const double half_nu0 = 0.5 * law.nu0();
  for (int el = 0; el < V.mesh().cells; ++el)
    for (int q = 0; q < rule.size(); ++q) {
      V.basis_derivs(rule.points[q], dv);
      double da = 0.0;
      for (int l = 0; l < nl; ++l) da += dv[l] * a.values[V.global_dof(el, l)];
      da *= dscale;
      total += jac * rule.weights[q] * half_nu0 * da * da;
    }
  return total;
}

/// L2 norm of a dof vector under Gauss-Legendre quadrature on its own mesh,
/// exact for the squared polynomial (degree >= 2p+2 by construction).
inline double l2_norm_quadrature(const DofVector& u) {
  const FeSpace1D& V = *u.space;
  const QuadratureRule rule = gauss_legendre(V.degree() + 2);
  const int nl = V.local_dof_count();
  const double jac = 0.5 * V.mesh().h;
  std::vector<double> bv(nl);
  double total = 0.0;
  for (int el = 0; el < V.mesh().cells; ++el)
    for (int q = 0; q < rule.size(); ++q) {
      V.basis_values(rule.points[q], bv);
      double v = 0.0;
      for (int l = 0; l < nl; ++l) v += bv[l] * u.values[V.global_dof(el, l)];
      total += jac * rule.weights[q] * v * v;
    }
  return std::sqrt(total);
}

/// Self-convergence error: max over the coarse time points of the fine-grid
/// L2 norm of (coarse solution prolonged) - (fine solution at the same time).
inline double self_convergence_error(const Trajectory& coarse, const Trajectory& fine) {
  if (!fine.primary_space || !coarse.primary_space)
    throw std::invalid_argument("self_convergence_error: missing spaces");
  const FeSpace1D& cs = *coarse.primary_space;
  const FeSpace1D& fs = *fine.primary_space;
  if (fs.mesh().cells != 2 * cs.mesh().cells || fs.degree() != cs.degree() ||
      fs.continuity() != cs.continuity())
    throw std::invalid_argument("self_convergence_error: fine run must use the bisected mesh");
  if (fine.steps() != 2 * coarse.steps())
    throw std::invalid_argument("self_convergence_error: fine run must use half the time step");
  double err = 0.0;
  for (int n = 0; n < static_cast<int>(coarse.times.size()); ++n) {
    DofVector diff = prolong(DofVector(coarse.primary_space, coarse.primary[n]),
                             fine.primary_space);
    const std::vector<double>& fv = fine.primary[2 * n];
    for (int i = 0; i < diff.size(); ++i) diff.values[i] -= fv[i];
    err = std::max(err, l2_norm_quadrature(diff));
  }
  return err;
}

enum class EnergyKind { dissipative, conservative };

struct EnergyReport {
  EnergyKind kind = EnergyKind::conservative;
  std::vector<double> times;
  std::vector<double> values;
  double max_drift = 0.0;  // max relative deviation from the initial value
  bool monotone = true;    // non-increasing within the slack
  double slack = 0.0;      // absolute slack used for the monotonicity flag
};

/// Energy audit over the slab endpoints of a trajectory. For dissipative
/// runs the monotonicity flag allows `monotone_slack_rel * E(0)` per step.
inline EnergyReport energy_audit(const Trajectory& traj, EnergyKind kind,
                                 double monotone_slack_rel = 1e-9) {
  EnergyReport rep;
  rep.kind = kind;
  rep.times = traj.times;
  rep.values = traj.energies;
  const double e0 = traj.energies.empty() ? 0.0 : traj.energies.front();
  rep.slack = monotone_slack_rel * std::abs(e0);
  const double denom = std::abs(e0) > 0.0 ? std::abs(e0) : 1.0;
  for (std::size_t n = 1; n < traj.energies.size(); ++n) {
    rep.max_drift = std::max(rep.max_drift, std::abs(traj.energies[n] - e0) / denom);
    if (traj.energies[n] > traj.energies[n - 1] + rep.slack) rep.monotone = false;
  }
  return rep;
}

struct ConvergenceRow {
  double param = 0.0;  // h or tau
  double err = 0.0;
  double eoc = 0.0;
  bool has_eoc = false;
};

struct ConvergenceTable {
  std::string varied;  // "h" or "tau"
  std::vector<ConvergenceRow> rows;
  std::map<std::string, std::string> fixed;  // held-constant parameters, for the metadata sidecar

  /// Recompute the eoc column from the err column (uniform halving).
  void recompute_eoc() {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      rows[i].has_eoc = i > 0;
      rows[i].eoc = i > 0 ? std::log2(rows[i - 1].err / rows[i].err) : 0.0;
    }
  }
};

/// One rung of a refinement ladder.
struct Resolution {
  int cells = 0;
  double tau = 0.0;
  int steps = 0;
};

/// Runs a ladder of uniform halvings. Each rung's error compares the run at
/// (cells, tau) against the companion at (2 cells, tau/2); consecutive rungs
/// share runs. Rungs execute concurrently up to `workers`.
inline ConvergenceTable eoc_study(const std::vector<Resolution>& rungs, bool varied_is_h,
                                  const std::function<Trajectory(const Resolution&)>& run,
                                  int workers = 1) {
  if (rungs.size() < 1) throw std::invalid_argument("eoc_study: need at least one rung");
  // Unique resolutions: every rung plus the finest rung's companion.
  std::vector<Resolution> res;
  for (const auto& r : rungs) res.push_back(r);
  for (const auto& r : rungs) {
    const Resolution companion{2 * r.cells, 0.5 * r.tau, 2 * r.steps};
    const bool known = std::any_of(res.begin(), res.end(), [&](const Resolution& q) {
      return q.cells == companion.cells && q.steps == companion.steps;
    });
    if (!known) res.push_back(companion);
  }
  std::vector<Trajectory> trajs(res.size());
  std::vector<std::function<void()>> tasks;
  for (std::size_t i = 0; i < res.size(); ++i)
    tasks.push_back([&, i] {
      try {
        trajs[i] = run(res[i]);
      } catch (const std::exception& ex) {
        throw std::runtime_error("ladder rung (cells=" + std::to_string(res[i].cells) +
                                 ", steps=" + std::to_string(res[i].steps) + ") failed: " + ex.what());
      }
    });
  run_tasks(workers, tasks);

  auto find = [&](int cells, int steps) -> const Trajectory& {
    for (std::size_t i = 0; i < res.size(); ++i)
      if (res[i].cells == cells && res[i].steps == steps) return trajs[i];
    throw std::logic_error("eoc_study: missing companion run");
  };

  ConvergenceTable table;
  table.varied = varied_is_h ? "h" : "tau";
  for (const auto& r : rungs) {
    ConvergenceRow row;
    row.param = varied_is_h ? 1.0 / r.cells : r.tau;
    row.err = self_convergence_error(find(r.cells, r.steps), find(2 * r.cells, 2 * r.steps));
    table.rows.push_back(row);
  }
  table.recompute_eoc();
  return table;
}

}  // namespace kerrwave
