// Copyright (c) 2026 the kerrwave authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <memory>

#include <gtest/gtest.h>

#include "kerrwave/oracle_rk.hpp"

namespace kw = kerrwave;

namespace {

// Scalar test equation y' = lambda y.
class ScalarLinear : public kw::OdeSystem {
public:
  explicit ScalarLinear(double lambda) : lambda_(lambda) {}
  int dim() const override { return 1; }
  bool linear() const override { return true; }
  void rhs(std::span<const double> y, std::span<double> f) const override {
    f[0] = lambda_ * y[0];
  }

private:
  double lambda_;
};

// Scalar cubic decay y' = -y^3, forcing the fixed-point stage path.
class ScalarCubic : public kw::OdeSystem {
public:
  int dim() const override { return 1; }
  bool linear() const override { return false; }
  void rhs(std::span<const double> y, std::span<double> f) const override {
    f[0] = -y[0] * y[0] * y[0];
  }
};

// Cyclic Jacobi eigensolver for small symmetric matrices; test-only oracle.
void jacobi_eigs(kw::DenseMatrix a, std::vector<double>& eigenvalues, kw::DenseMatrix& vectors) {
  const int n = a.rows();
  vectors = kw::DenseMatrix(n, n);
  for (int i = 0; i < n; ++i) vectors(i, i) = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = 0.5 * (a(q, q) - a(p, p)) / a(p, q);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int i = 0; i < n; ++i) {
          const double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (int i = 0; i < n; ++i) {
          const double api = a(p, i), aqi = a(q, i);
          a(p, i) = c * api - s * aqi;
          a(q, i) = s * api + c * aqi;
          const double vip = vectors(i, p), viq = vectors(i, q);
          vectors(i, p) = c * vip - s * viq;
          vectors(i, q) = s * vip + c * viq;
        }
      }
  }
  eigenvalues.resize(n);
  for (int i = 0; i < n; ++i) eigenvalues[i] = a(i, i);
}

}  // namespace

TEST(ButcherTableau, RadauIiaMatchesPublishedCoefficients) {
  const auto s1 = kw::ButcherTableau::radau_iia(1);
  EXPECT_NEAR(s1.A(0, 0), 1.0, 5e-15);
  EXPECT_NEAR(s1.b[0], 1.0, 5e-15);
  EXPECT_NEAR(s1.c[0], 1.0, 5e-15);

  const auto s2 = kw::ButcherTableau::radau_iia(2);
  EXPECT_NEAR(s2.c[0], 1.0 / 3.0, 5e-15);
  EXPECT_NEAR(s2.A(0, 0), 5.0 / 12.0, 5e-15);
  EXPECT_NEAR(s2.A(0, 1), -1.0 / 12.0, 5e-15);
  EXPECT_NEAR(s2.A(1, 0), 3.0 / 4.0, 5e-15);
  EXPECT_NEAR(s2.A(1, 1), 1.0 / 4.0, 5e-15);
  EXPECT_NEAR(s2.b[0], 3.0 / 4.0, 5e-15);
  EXPECT_NEAR(s2.b[1], 1.0 / 4.0, 5e-15);

  const auto s3 = kw::ButcherTableau::radau_iia(3);
  const double r6 = std::sqrt(6.0);
  EXPECT_NEAR(s3.c[0], (4.0 - r6) / 10.0, 5e-15);
  EXPECT_NEAR(s3.c[1], (4.0 + r6) / 10.0, 5e-15);
  EXPECT_NEAR(s3.A(0, 0), (88.0 - 7.0 * r6) / 360.0, 5e-15);
  EXPECT_NEAR(s3.A(0, 1), (296.0 - 169.0 * r6) / 1800.0, 5e-15);
  EXPECT_NEAR(s3.A(0, 2), (-2.0 + 3.0 * r6) / 225.0, 5e-15);
  EXPECT_NEAR(s3.A(1, 0), (296.0 + 169.0 * r6) / 1800.0, 5e-15);
  EXPECT_NEAR(s3.A(1, 1), (88.0 + 7.0 * r6) / 360.0, 5e-15);
  EXPECT_NEAR(s3.A(1, 2), (-2.0 - 3.0 * r6) / 225.0, 5e-15);
  EXPECT_NEAR(s3.b[0], (16.0 - r6) / 36.0, 5e-15);
  EXPECT_NEAR(s3.b[1], (16.0 + r6) / 36.0, 5e-15);
  EXPECT_NEAR(s3.b[2], 1.0 / 9.0, 5e-15);
}

TEST(ButcherTableau, LobattoIiiaMatchesPublishedCoefficients) {
  const auto s2 = kw::ButcherTableau::lobatto_iiia(2);
  EXPECT_NEAR(s2.A(0, 0), 0.0, 5e-15);
  EXPECT_NEAR(s2.A(1, 0), 0.5, 5e-15);
  EXPECT_NEAR(s2.A(1, 1), 0.5, 5e-15);

  const auto s3 = kw::ButcherTableau::lobatto_iiia(3);
  EXPECT_NEAR(s3.A(1, 0), 5.0 / 24.0, 5e-15);
  EXPECT_NEAR(s3.A(1, 1), 1.0 / 3.0, 5e-15);
  EXPECT_NEAR(s3.A(1, 2), -1.0 / 24.0, 5e-15);
  EXPECT_NEAR(s3.A(2, 0), 1.0 / 6.0, 5e-15);
  EXPECT_NEAR(s3.A(2, 1), 2.0 / 3.0, 5e-15);
  EXPECT_NEAR(s3.A(2, 2), 1.0 / 6.0, 5e-15);
  EXPECT_NEAR(s3.b[1], 2.0 / 3.0, 5e-15);
}

TEST(ButcherTableau, OrderAndCollocationConditions) {
  auto check = [](const kw::ButcherTableau& t) {
    const int s = t.stages();
    // quadrature conditions B(order)
    for (int q = 1; q <= t.order; ++q) {
      double sum = 0.0;
      for (int i = 0; i < s; ++i) sum += t.b[i] * std::pow(t.c[i], q - 1);
      EXPECT_NEAR(sum, 1.0 / q, 1e-12) << "B(" << q << ")";
    }
    // collocation conditions C(s) and row sums
    for (int i = 0; i < s; ++i) {
      double row = 0.0;
      for (int j = 0; j < s; ++j) row += t.A(i, j);
      EXPECT_NEAR(row, t.c[i], 1e-13);
      for (int q = 1; q <= s; ++q) {
        double sum = 0.0;
        for (int j = 0; j < s; ++j) sum += t.A(i, j) * std::pow(t.c[j], q - 1);
        EXPECT_NEAR(sum, std::pow(t.c[i], q) / q, 1e-12) << "C, stage " << i << " q " << q;
      }
    }
  };
  for (int s = 1; s <= 3; ++s) check(kw::ButcherTableau::radau_iia(s));
  for (int s = 2; s <= 3; ++s) check(kw::ButcherTableau::lobatto_iiia(s));
}

TEST(IrkStep, ImplicitEulerClosedForm) {
  auto sys = std::make_shared<ScalarLinear>(-1.0);
  kw::IrkIntegrator irk(kw::ButcherTableau::radau_iia(1), sys);
  const auto y = irk.step(std::vector<double>{1.0}, 0.1);
  EXPECT_NEAR(y[0], 1.0 / 1.1, 1e-14);
}

TEST(IrkStep, TrapezoidClosedForm) {
  const double lambda = -0.8, tau = 0.25;
  auto sys = std::make_shared<ScalarLinear>(lambda);
  kw::IrkIntegrator irk(kw::ButcherTableau::lobatto_iiia(2), sys);
  const auto y = irk.step(std::vector<double>{2.0}, tau);
  EXPECT_NEAR(y[0], 2.0 * (1.0 + 0.5 * tau * lambda) / (1.0 - 0.5 * tau * lambda), 1e-14);
}

TEST(IrkStep, RadauTwoStageStabilityFunction) {
  const double z = -0.37;
  auto sys = std::make_shared<ScalarLinear>(z);
  kw::IrkIntegrator irk(kw::ButcherTableau::radau_iia(2), sys);
  const auto y = irk.step(std::vector<double>{1.0}, 1.0);
  const double expected = (1.0 + z / 3.0) / (1.0 - 2.0 * z / 3.0 + z * z / 6.0);
  EXPECT_NEAR(y[0], expected, 1e-14);
}

TEST(IrkStep, FixedPointStagesOnCubicDecay) {
  auto sys = std::make_shared<ScalarCubic>();
  kw::IrkIntegrator irk(kw::ButcherTableau::radau_iia(3), sys);
  std::vector<double> y{1.0};
  const double tau = 0.01;
  for (int n = 0; n < 100; ++n) y = irk.step(y, tau);
  EXPECT_NEAR(y[0], 1.0 / std::sqrt(1.0 + 2.0), 1e-10);
}

TEST(SemiDiscrete, ZeroStateGivesZeroDerivative) {
  const auto mesh = kw::Mesh1D::uniform(4);
  const auto W = kw::FeSpace1D::make_continuous(mesh, 2);
  const auto Q = kw::FeSpace1D::make_discontinuous(mesh, 1);
  const auto law = std::make_shared<kw::KerrMaterial>(1.0, 1.0, 1.0, 0.1);
  kw::EhSemiDiscrete sys(W, Q, law);
  std::vector<double> y(sys.dim(), 0.0), f(sys.dim(), 1.0);
  sys.rhs(y, f);
  EXPECT_LT(kw::max_abs(f), 1e-15);
}

TEST(SemiDiscrete, DenseOperatorMatchesRhs) {
  const auto mesh = kw::Mesh1D::uniform(3);
  const auto W = kw::FeSpace1D::make_continuous(mesh, 2);
  const auto Q = kw::FeSpace1D::make_discontinuous(mesh, 1);
  const auto law = std::make_shared<kw::KerrMaterial>(1.0, 1.0, 1.0, 0.0);
  kw::EhSemiDiscrete sys(W, Q, law);
  const kw::DenseMatrix L = sys.dense_operator();
  // the linear-medium rhs is the fixed operator; apply both twice
  std::vector<double> e(sys.dim(), 0.0), f1(sys.dim()), f2(sys.dim()), m1(sys.dim()), m2(sys.dim());
  e[2] = 1.0;
  sys.rhs(e, f1);
  sys.rhs(f1, f2);
  L.mult(e, m1);
  L.mult(m1, m2);
  EXPECT_LT(kw::max_abs_diff(f2, m2), 1e-13);
}

TEST(SemiDiscrete, NonlinearRhsReducesToLinearAtZeroAmplitude) {
  const auto mesh = kw::Mesh1D::uniform(4);
  const auto W = kw::FeSpace1D::make_continuous(mesh, 1);
  const auto Q = kw::FeSpace1D::make_discontinuous(mesh, 0);
  const auto kerr = std::make_shared<kw::KerrMaterial>(1.0, 1.0, 1.0, 0.1);
  const auto lin = std::make_shared<kw::KerrMaterial>(1.0, 1.0, 1.0, 0.0);
  kw::EhSemiDiscrete nl_sys(W, Q, kerr), lin_sys(W, Q, lin);
  // d'(0) does not see chi3, so the two rhs agree on pure-h states
  std::vector<double> y(nl_sys.dim(), 0.0), f1(nl_sys.dim()), f2(nl_sys.dim());
  for (int j = 0; j < Q->dof_count(); ++j) y[W->dof_count() + j] = 0.3 * (j + 1);
  nl_sys.rhs(y, f1);
  lin_sys.rhs(y, f2);
  EXPECT_LT(kw::max_abs_diff(f1, f2), 1e-15);
}

TEST(ReferenceSolution, MatchesStandingWaveEigenOracle) {
  const auto mesh = kw::Mesh1D::uniform(4);
  const auto W = kw::FeSpace1D::make_continuous(mesh, 1);
  const auto Q = kw::FeSpace1D::make_discontinuous(mesh, 0);
  const auto law = std::make_shared<kw::KerrMaterial>(1.0, 1.0, 1.0, 0.0);  // linear

  // Symmetrized system: u = sqrt(mw) e, v = sqrt(mu0 mq) h gives
  // u' = Ghat^T v, v' = -Ghat u, hence u'' = -(Ghat^T Ghat) u.
  const auto mw = kw::lumped_mass_weights(*W);
  const auto mq = kw::lumped_mass_weights(*Q);
  const auto G = kw::assemble_deriv(W, Q, kw::gauss_lobatto(2));
  const kw::DenseMatrix gd = G.to_dense();
  const int nw = W->dof_count(), nq = Q->dof_count();
  kw::DenseMatrix ghat(nq, nw);
  for (int j = 0; j < nq; ++j)
    for (int i = 0; i < nw; ++i) ghat(j, i) = gd(j, i) / std::sqrt(mq[j] * mw[i]);
  kw::DenseMatrix ata(nw, nw);
  for (int i = 0; i < nw; ++i)
    for (int j = 0; j < nw; ++j) {
      double s = 0.0;
      for (int l = 0; l < nq; ++l) s += ghat(l, i) * ghat(l, j);
      ata(i, j) = s;
    }
  std::vector<double> eigenvalues;
  kw::DenseMatrix vectors;
  jacobi_eigs(ata, eigenvalues, vectors);
  int mode = 0;
  for (int i = 1; i < nw; ++i)
    if (eigenvalues[i] > eigenvalues[mode]) mode = i;
  const double lambda = eigenvalues[mode];
  ASSERT_GT(lambda, 1e-8);

  kw::DofVector e0(W), h0(Q);
  for (int i = 0; i < nw; ++i) e0.values[i] = vectors(i, mode) / std::sqrt(mw[i]);

  const double T = 0.5;
  const kw::Trajectory traj = kw::reference_solution(W, Q, law, e0, h0, T / 512, 512);

  const double omega = std::sqrt(lambda);
  for (int i = 0; i < nw; ++i)
    EXPECT_NEAR(traj.primary.back()[i], std::cos(omega * T) * e0.values[i], 1e-8);
  for (int j = 0; j < nq; ++j) {
    double gw = 0.0;
    for (int i = 0; i < nw; ++i) gw += ghat(j, i) * vectors(i, mode);
    const double expected = -std::sin(omega * T) / omega * gw / std::sqrt(law->mu0() * mq[j]);
    EXPECT_NEAR(traj.aux.back()[j], expected, 1e-8);
  }
}

TEST(ReferenceSolution, RichardsonSelfConsistency) {
  const auto mesh = kw::Mesh1D::uniform(6);
  const auto W = kw::FeSpace1D::make_continuous(mesh, 1);
  const auto Q = kw::FeSpace1D::make_discontinuous(mesh, 0);
  const auto law = std::make_shared<kw::KerrMaterial>(1.0, 1.0, 1.0, 0.1);
  const kw::DofVector e0 = kw::interpolate(W, [](double x) { return std::exp(-100.0 * x * x); });
  const kw::DofVector h0(Q);
  const double T = 0.02;
  const auto coarse = kw::reference_solution(W, Q, law, e0, h0, T / 16, 16);
  const auto fine = kw::reference_solution(W, Q, law, e0, h0, T / 32, 32);
  EXPECT_LT(kw::max_abs_diff(coarse.primary.back(), fine.primary.back()), 1e-10);
}

TEST(ReferenceSolution, ZeroDataStaysZero) {
  const auto mesh = kw::Mesh1D::uniform(4);
  const auto W = kw::FeSpace1D::make_continuous(mesh, 2);
  const auto Q = kw::FeSpace1D::make_discontinuous(mesh, 1);
  const auto law = std::make_shared<kw::KerrMaterial>(1.0, 1.0, 1.0, 0.1);
  const auto traj = kw::reference_solution(W, Q, law, kw::DofVector(W), kw::DofVector(Q), 0.01, 5);
  for (const auto& e : traj.primary) EXPECT_LT(kw::max_abs(e), 1e-300);
  for (const double en : traj.energies) EXPECT_EQ(en, 0.0);
}
