// Copyright (c) 2026 the kerrwave authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <stdexcept>

namespace kerrwave {

/// Instantaneous constitutive model of the medium. Implementations must keep
/// w_E'(e) = d'(e) e and w_M'(h) = mu0 h; the conservation structure of the
/// discrete schemes rests on these identities.
class ConstitutiveLaw {
public:
  virtual ~ConstitutiveLaw() = default;

  /// Electric flux d(e).
  virtual double d_of_e(double e) const = 0;
  /// Incremental permittivity d'(e); must stay strictly positive.
  virtual double d_prime(double e) const = 0;
  /// Electric energy density w_E(e).
  virtual double w_E(double e) const = 0;
  /// Magnetic energy density w_M(h).
  virtual double w_M(double h) const = 0;

  virtual double mu0() const = 0;
  virtual double nu0() const = 0;
};

/// Kerr medium: d(e) = eps0 (chi1 + chi3 e^2) e, b(h) = mu0 h.
class KerrMaterial final : public ConstitutiveLaw {
public:
  KerrMaterial(double eps0, double mu0, double chi1, double chi3)
      : eps0_(eps0), mu0_(mu0), chi1_(chi1), chi3_(chi3), nu0_(1.0 / mu0) {
    if (!(eps0 > 0.0)) throw std::invalid_argument("KerrMaterial: eps0 must be positive");
    if (!(mu0 > 0.0)) throw std::invalid_argument("KerrMaterial: mu0 must be positive");
    if (!(chi1 > 0.0)) throw std::invalid_argument("KerrMaterial: chi1 must be positive");
    if (chi3 < 0.0) throw std::invalid_argument("KerrMaterial: chi3 must be nonnegative");
  }

  double d_of_e(double e) const override { return eps0_ * (chi1_ + chi3_ * e * e) * e; }
  double d_prime(double e) const override { return eps0_ * (chi1_ + 3.0 * chi3_ * e * e); }
  double w_E(double e) const override {
    const double e2 = e * e;
    return 0.5 * eps0_ * (chi1_ * e2 + 1.5 * chi3_ * e2 * e2);
  }
  double w_M(double h) const override { return 0.5 * mu0_ * h * h; }

  double eps0() const { return eps0_; }
  double mu0() const override { return mu0_; }
  double chi1() const { return chi1_; }
  double chi3() const { return chi3_; }
  double nu0() const override { return nu0_; }

  bool linear() const { return chi3_ == 0.0; }

private:
  double eps0_, mu0_, chi1_, chi3_, nu0_;
};

}  // namespace kerrwave
