// Copyright (c) 2026 the kerrwave authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <vector>

#include "kerrwave/fe_space.hpp"
#include "kerrwave/time_basis.hpp"

namespace kerrwave {

enum class SchemeKind { eh, ea, oracle };

/// A field's time polynomial on one slab: coefficient vectors of spatial dofs
/// on a temporal nodal basis over [t_left, t_left + tau].
struct SlabPoly {
  double t_left = 0.0;
  double tau = 0.0;
  std::vector<double> nodes01;              // temporal nodes on [0,1]
  std::vector<std::vector<double>> coeffs;  // one spatial dof vector per node

  /// Evaluate at local time s in [0,1].
  std::vector<double> eval01(double s) const {
    TimeBasis basis(nodes01);
    std::vector<double> v(basis.size());
    basis.values(s, v);
    std::vector<double> out(coeffs.front().size(), 0.0);
    for (int m = 0; m < basis.size(); ++m)
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += v[m] * coeffs[m][i];
    return out;
  }
};

struct EhState {
  std::vector<double> e_end, h_end;
  double energy = 0.0;
  int slab_index = 0;
  SlabPoly e_slab, h_slab;
};

struct EaState {
  std::vector<double> e_end, a_end;
  double energy = 0.0;
  int slab_index = 0;
  SlabPoly e_slab, a_slab;
};

/// End-of-slab history of a run: nodal values at every t^n plus the discrete
/// energy samples; slab coefficient history is kept on request.
struct Trajectory {
  SchemeKind scheme = SchemeKind::eh;
  std::shared_ptr<const FeSpace1D> primary_space;  // e
  std::shared_ptr<const FeSpace1D> aux_space;      // h (eh/oracle) or a (ea)
  int k = 0;
  double tau = 0.0;

  std::vector<double> times;
  std::vector<std::vector<double>> primary;
  std::vector<std::vector<double>> aux;
  std::vector<double> energies;

  bool store_slabs = false;
  std::vector<SlabPoly> primary_slabs;
  std::vector<SlabPoly> aux_slabs;

  int steps() const { return static_cast<int>(times.size()) - 1; }
  double final_time() const { return times.back(); }
};

}  // namespace kerrwave
