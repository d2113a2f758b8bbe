// Copyright (c) 2026 the kerrwave authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <memory>

#include <gtest/gtest.h>

#include "kerrwave/oracle_rk.hpp"
#include "kerrwave/solver_eh.hpp"

namespace kw = kerrwave;

namespace {

struct EhSetup {
  std::shared_ptr<const kw::FeSpace1D> W, Q;
  std::shared_ptr<kw::KerrMaterial> law;
};

EhSetup make_setup(int cells, int p, double chi3) {
  EhSetup s;
  const auto mesh = kw::Mesh1D::uniform(cells);
  s.W = kw::FeSpace1D::make_continuous(mesh, p);
  s.Q = kw::FeSpace1D::make_discontinuous(mesh, p - 1);
  s.law = std::make_shared<kw::KerrMaterial>(1.0, 1.0, 1.0, chi3);
  return s;
}

kw::DofVector gaussian(const std::shared_ptr<const kw::FeSpace1D>& V) {
  return kw::interpolate(V, [](double x) { return std::exp(-100.0 * x * x); });
}

}  // namespace

TEST(EhSolver, ZeroDataYieldsZeroSlab) {
  const auto s = make_setup(4, 2, 0.1);
  kw::EhSolver solver(s.W, s.Q, s.law, 1);
  const auto traj = solver.run(kw::DofVector(s.W), kw::DofVector(s.Q), 0.1, 3);
  for (const auto& e : traj.primary) EXPECT_EQ(kw::max_abs(e), 0.0);
  for (const auto& h : traj.aux) EXPECT_EQ(kw::max_abs(h), 0.0);
  for (const double en : traj.energies) EXPECT_EQ(en, 0.0);
}

TEST(EhSolver, ConstantFieldIsFixedPoint) {
  const auto s = make_setup(5, 3, 0.1);
  kw::EhSolver solver(s.W, s.Q, s.law, 2);
  kw::DofVector e0(s.W), h0(s.Q);
  std::fill(e0.values.begin(), e0.values.end(), 0.7);
  const auto state = solver.initial_state(e0, h0);
  const auto next = solver.step(state, 0.05);
  for (const double v : next.e_end) EXPECT_NEAR(v, 0.7, 1e-13);
  EXPECT_LT(kw::max_abs(next.h_end), 1e-13);
}

TEST(EhSolver, LinearK0IsImplicitEuler) {
  const auto s = make_setup(8, 2, 0.0);
  const double tau = 0.01;
  kw::EhSolver solver(s.W, s.Q, s.law, 0);
  const kw::DofVector e0 = gaussian(s.W);
  const kw::DofVector h0(s.Q);
  const auto next = solver.step(solver.initial_state(e0, h0), tau);

  // Independent route: dense solve of (I - tau L) y+ = y on the identical
  // semi-discrete system.
  kw::EhSemiDiscrete sys(s.W, s.Q, s.law);
  const kw::DenseMatrix L = sys.dense_operator();
  const int n = sys.dim();
  kw::DenseMatrix M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = (i == j ? 1.0 : 0.0) - tau * L(i, j);
  std::vector<double> y(n, 0.0);
  std::copy(e0.values.begin(), e0.values.end(), y.begin());
  kw::DenseLu lu(M);
  lu.solve(y);

  const int nw = s.W->dof_count();
  for (int i = 0; i < nw; ++i) EXPECT_NEAR(next.e_end[i], y[i], 1e-11);
  for (int j = 0; j < s.Q->dof_count(); ++j) EXPECT_NEAR(next.h_end[j], y[nw + j], 1e-11);
}

TEST(EhSolver, LinearCaseMatchesRadauIiaOverManySteps) {
  const auto s = make_setup(16, 2, 0.0);
  const double T = 0.1;
  const int steps = 16;
  const double tau = T / steps;
  const kw::DofVector e0 = gaussian(s.W);
  const kw::DofVector h0(s.Q);
  for (int k = 0; k <= 2; ++k) {
    kw::EhSolver solver(s.W, s.Q, s.law, k, {1e-13, 400});
    const auto traj = solver.run(e0, h0, tau, steps);
    const auto oracle = kw::run_reference_eh(s.W, s.Q, s.law, e0, h0, tau, steps,
                                             kw::ButcherTableau::radau_iia(k + 1));
    EXPECT_LT(kw::max_abs_diff(traj.primary.back(), oracle.primary.back()), 1e-10) << "k=" << k;
    EXPECT_LT(kw::max_abs_diff(traj.aux.back(), oracle.aux.back()), 1e-10) << "k=" << k;
  }
}

TEST(EhSolver, NonlinearStepDissipatesEnergy) {
  const auto s = make_setup(50, 2, 0.1);
  kw::EhSolver solver(s.W, s.Q, s.law, 1, {1e-13, 400});
  auto state = solver.initial_state(gaussian(s.W), kw::DofVector(s.Q));
  const double budget = 1e-10 * state.energy;
  for (int n = 0; n < 10; ++n) {
    const auto next = solver.step(state, 1.0 / 100.0);
    EXPECT_LE(next.energy, state.energy + budget) << "step " << n;
    state = next;
  }
}

TEST(EhSolver, EnergyDecaysMonotonicallyOnNonlinearRun) {
  const auto s = make_setup(40, 3, 0.1);
  for (int k = 0; k <= 2; ++k) {
    kw::EhSolver solver(s.W, s.Q, s.law, k, {1e-13, 400});
    const auto traj = solver.run(gaussian(s.W), kw::DofVector(s.Q), 1.0 / 100.0, 20);
    const auto report = kw::energy_audit(traj, kw::EnergyKind::dissipative);
    EXPECT_TRUE(report.monotone) << "k=" << k;
    // k = 0 is strongly dissipative; the energy must visibly decrease.
    if (k == 0) EXPECT_LT(traj.energies.back(), 0.99 * traj.energies.front());
  }
}

TEST(EhSolver, PulseTranslatesInLinearMedium) {
  // d'Alembert oracle: with h(0) = 0 the pulse splits into two half-amplitude
  // movers; the boundary condition h = 0 reflects e evenly at x = 0.
  const auto s = make_setup(100, 3, 0.0);
  kw::EhSolver solver(s.W, s.Q, s.law, 2, {1e-12, 200});
  const double T = 0.25;
  const auto traj = solver.run(gaussian(s.W), kw::DofVector(s.Q), 1.0 / 400.0, 100);
  const auto exact = kw::interpolate(s.W, [T](double x) {
    return 0.5 * (std::exp(-100.0 * (x - T) * (x - T)) + std::exp(-100.0 * (x + T) * (x + T)));
  });
  kw::DofVector diff(s.W, traj.primary.back());
  for (int i = 0; i < diff.size(); ++i) diff.values[i] -= exact.values[i];
  EXPECT_LT(kw::l2_norm_quadrature(diff), 1e-3);
}

TEST(EhSolver, SlabEndEvaluationMatchesEndVector) {
  const auto s = make_setup(6, 2, 0.1);
  kw::EhSolver solver(s.W, s.Q, s.law, 2);
  auto state = solver.initial_state(gaussian(s.W), kw::DofVector(s.Q));
  state = solver.step(state, 0.02);
  const auto at_end = state.e_slab.eval01(1.0);
  EXPECT_LT(kw::max_abs_diff(at_end, state.e_end), 1e-14);
}

TEST(EhSolver, DeterministicRerun) {
  const auto s = make_setup(20, 2, 0.1);
  kw::EhSolver a(s.W, s.Q, s.law, 1), b(s.W, s.Q, s.law, 1);
  const auto ta = a.run(gaussian(s.W), kw::DofVector(s.Q), 0.01, 10);
  const auto tb = b.run(gaussian(s.W), kw::DofVector(s.Q), 0.01, 10);
  for (int n = 0; n <= 10; ++n) {
    EXPECT_EQ(ta.primary[n], tb.primary[n]);
    EXPECT_EQ(ta.aux[n], tb.aux[n]);
    EXPECT_EQ(ta.energies[n], tb.energies[n]);
  }
}

TEST(EhSolver, ReportsDivergenceWhenIterationBudgetExhausted) {
  const auto s = make_setup(10, 1, 0.1);
  kw::EhSolver solver(s.W, s.Q, s.law, 1, {1e-15, 1});
  auto state = solver.initial_state(gaussian(s.W), kw::DofVector(s.Q));
  try {
    solver.step(state, 0.01);
    FAIL() << "expected SolverDivergedError";
  } catch (const kw::SolverDivergedError& ex) {
    EXPECT_GT(ex.last_residual(), 0.0);
    EXPECT_EQ(ex.iterations(), 1);
  }
}

TEST(EhSolver, RejectsBadArguments) {
  const auto s = make_setup(4, 2, 0.1);
  kw::EhSolver solver(s.W, s.Q, s.law, 1);
  const auto state = solver.initial_state(kw::DofVector(s.W), kw::DofVector(s.Q));
  EXPECT_THROW(solver.step(state, 0.0), std::invalid_argument);
  EXPECT_THROW(solver.step(state, -0.1), std::invalid_argument);
  const auto wrong = kw::FeSpace1D::make_continuous(kw::Mesh1D::uniform(4), 3);
  EXPECT_THROW(kw::EhSolver(wrong, s.Q, s.law, 1), std::invalid_argument);
}
