// Copyright (c) 2026 the kerrwave authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "kerrwave/config.hpp"
#include "kerrwave/diagnostics.hpp"
#include "kerrwave/oracle_rk.hpp"
#include "kerrwave/solver_ea.hpp"
#include "kerrwave/solver_eh.hpp"

namespace kerrwave {

inline std::function<double(double)> initial_profile(const std::string& name) {
  if (name == "gaussian") return [](double x) { return std::exp(-100.0 * x * x); };
  if (name == "zero") return [](double) { return 0.0; };
  throw std::invalid_argument("unknown initial profile: " + name);
}

/// Run one trajectory of the configured scheme at an explicit resolution.
inline Trajectory run_trajectory(const RunConfig& cfg, const Resolution& res) {
  const Mesh1D mesh = Mesh1D::uniform(res.cells);
  const auto W = FeSpace1D::make_continuous(mesh, cfg.p);
  const auto law = std::make_shared<KerrMaterial>(cfg.eps0, cfg.mu0, cfg.chi1, cfg.chi3);
  const DofVector e0 = interpolate(W, initial_profile(cfg.initial));
  const FixedPointSettings fp{cfg.fp_tol, cfg.fp_max_iters};
  switch (cfg.scheme) {
    case SchemeKind::eh: {
      const auto Q = FeSpace1D::make_discontinuous(mesh, cfg.p - 1);
      EhSolver solver(W, Q, law, cfg.k, fp);
      return solver.run(e0, DofVector(Q), res.tau, res.steps);
    }
    case SchemeKind::ea: {
      EaSolver solver(W, law, cfg.k, fp);
      return solver.run(e0, init_a0(DofVector(W), W), res.tau, res.steps);
    }
    case SchemeKind::oracle: {
      const auto Q = FeSpace1D::make_discontinuous(mesh, cfg.p - 1);
      return run_reference_eh(W, Q, law, e0, DofVector(Q), res.tau, res.steps,
                              ButcherTableau::radau_iia(3));
    }
  }
  throw std::logic_error("run_trajectory: unknown scheme");
}

// ---------------------------------------------------------------------------
// CSV artifacts. Comma separator, '.' decimal point, 17 significant digits.
// ---------------------------------------------------------------------------

inline void write_snapshots_csv(const std::filesystem::path& path, const Trajectory& traj,
                                const std::vector<double>& snapshot_times) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  std::vector<int> idx;
  for (const double t : snapshot_times) {
    const int n = traj.tau > 0.0 ? static_cast<int>(std::llround(t / traj.tau)) : 0;
    if (n < 0 || n >= static_cast<int>(traj.times.size()))
      throw std::invalid_argument("snapshot time outside the computed range");
    idx.push_back(n);
  }
  out << "x";
  for (const double t : snapshot_times) out << ",solT" << fmt_g(t);
  out << "\n";
  const FeSpace1D& V = *traj.primary_space;
  for (int i = 0; i < V.dof_count(); ++i) {
    out << fmt_g17(V.dof_position(i));
    for (const int n : idx) out << "," << fmt_g17(traj.primary[n][i]);
    out << "\n";
  }
}

inline void write_energy_csv(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "t,energy,drift\n";
  const double e0 = traj.energies.empty() ? 0.0 : traj.energies.front();
  const double denom = std::abs(e0) > 0.0 ? std::abs(e0) : 1.0;
  for (std::size_t n = 0; n < traj.times.size(); ++n)
    out << fmt_g17(traj.times[n]) << "," << fmt_g17(traj.energies[n]) << ","
        << fmt_g17((traj.energies[n] - e0) / denom) << "\n";
}

inline void write_convergence_csv(const std::filesystem::path& path, const ConvergenceTable& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << table.varied << ",err,eoc\n";
  for (const auto& row : table.rows) {
    out << fmt_g17(row.param) << "," << fmt_g17(row.err) << ",";
    if (row.has_eoc) out << fmt_g17(row.eoc);
    out << "\n";
  }
}

inline void write_metadata(const std::filesystem::path& path, const RunConfig& cfg,
                           const std::map<std::string, std::string>& extra = {}) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << cfg.serialize();
  if (!extra.empty()) {
    out << "\n# resolved ladder parameters\n";
    for (const auto& [key, value] : extra) out << "# " << key << " = " << value << "\n";
  }
}

inline void write_run_artifacts(const std::filesystem::path& dir, const RunConfig& cfg,
                                const Trajectory& traj) {
  std::filesystem::create_directories(dir);
  write_snapshots_csv(dir / "snapshots.csv", traj, cfg.snapshot_times);
  write_energy_csv(dir / "energy.csv", traj);
  write_metadata(dir / "metadata.cfg", cfg);
}

// ---------------------------------------------------------------------------
// Experiment dispatch
// ---------------------------------------------------------------------------

/// Resolution of the configured single run.
inline Resolution single_resolution(const RunConfig& cfg) {
  return Resolution{cfg.cells, cfg.tau, cfg.steps};
}

/// Rungs of a spatial ladder: h halvings with tau = h/4 and temporal order
/// k = 2, so the spatial error dominates.
inline std::vector<Resolution> spatial_ladder(const RunConfig& cfg) {
  std::vector<Resolution> rungs;
  for (int r = 0; r < cfg.ladder_rungs; ++r) {
    Resolution res;
    res.cells = cfg.cells << r;
    res.tau = 1.0 / (4.0 * res.cells);
    const double n = cfg.T / res.tau;
    res.steps = static_cast<int>(std::llround(n));
    if (std::abs(n - res.steps) > 1e-9)
      throw std::invalid_argument("ladder-h: T is not a multiple of h/4 at cells=" +
                                  std::to_string(res.cells));
    rungs.push_back(res);
  }
  return rungs;
}

/// Rungs of a temporal ladder: tau halvings from the configured tau at the
/// fixed spatial resolution p = 3, h = 1/200.
inline std::vector<Resolution> temporal_ladder(const RunConfig& cfg) {
  if (!(cfg.tau > 0.0)) throw std::invalid_argument("ladder-tau: set run.tau");
  std::vector<Resolution> rungs;
  for (int r = 0; r < cfg.ladder_rungs; ++r) {
    Resolution res;
    res.cells = 200;
    res.tau = cfg.tau / (1 << r);
    const double n = cfg.T / res.tau;
    res.steps = static_cast<int>(std::llround(n));
    if (std::abs(n - res.steps) > 1e-9)
      throw std::invalid_argument("ladder-tau: T is not a multiple of tau/" +
                                  std::to_string(1 << r));
    rungs.push_back(res);
  }
  return rungs;
}

/// Effective per-rung config of a ladder mode (the held-fixed discretization
/// parameters are pinned here and recorded in the metadata).
inline RunConfig ladder_rung_config(const RunConfig& cfg) {
  RunConfig rung = cfg;
  if (cfg.mode == RunMode::ladder_h) {
    rung.k = 2;
  } else if (cfg.mode == RunMode::ladder_tau) {
    rung.p = 3;
    rung.cells = 200;
  }
  return rung;
}

/// Run the configured experiment and write all artifacts below cfg.out_dir.
inline ConvergenceTable run_ladder(const RunConfig& cfg) {
  const RunConfig rcfg = ladder_rung_config(cfg);
  const std::vector<Resolution> rungs =
      cfg.mode == RunMode::ladder_h ? spatial_ladder(rcfg) : temporal_ladder(rcfg);
  const std::filesystem::path base(cfg.out_dir);
  std::filesystem::create_directories(base);
  auto runner = [&](const Resolution& res) {
    Trajectory traj = run_trajectory(rcfg, res);
    RunConfig meta = rcfg;
    meta.mode = RunMode::single;
    meta.cells = res.cells;
    meta.tau = res.tau;
    meta.steps = res.steps;
    std::ostringstream name;
    name << "rung_M" << res.cells << "_N" << res.steps;
    const std::filesystem::path dir = base / name.str();
    std::filesystem::create_directories(dir);
    write_energy_csv(dir / "energy.csv", traj);
    write_metadata(dir / "metadata.cfg", meta);
    return traj;
  };
  ConvergenceTable table = eoc_study(rungs, cfg.mode == RunMode::ladder_h, runner,
                                     cfg.resolved_workers());
  table.fixed["scheme"] = to_string(cfg.scheme);
  table.fixed["p"] = std::to_string(rcfg.p);
  table.fixed["k"] = std::to_string(rcfg.k);
  table.fixed["T"] = fmt_g17(cfg.T);
  table.fixed["chi3"] = fmt_g17(cfg.chi3);
  if (cfg.mode == RunMode::ladder_h) {
    table.fixed["tau"] = "h/4";
  } else {
    table.fixed["h"] = "1/200";
  }
  write_convergence_csv(base / "convergence.csv", table);
  write_metadata(base / "metadata.cfg", cfg, table.fixed);
  return table;
}

inline int run_experiment(const RunConfig& cfg) {
  if (cfg.mode == RunMode::single) {
    const Trajectory traj = run_trajectory(cfg, single_resolution(cfg));
    write_run_artifacts(cfg.out_dir, cfg, traj);
  } else {
    run_ladder(cfg);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Snapshot comparison
// ---------------------------------------------------------------------------

struct SnapshotData {
  std::vector<double> times;
  std::vector<double> x;
  std::vector<std::vector<double>> columns;  // one per time
};

inline SnapshotData read_snapshots_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path.string());
  SnapshotData data;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty snapshot file " + path.string());
  std::istringstream header(line);
  std::string cell;
  bool first = true;
  while (std::getline(header, cell, ',')) {
    if (first) {
      if (cell != "x") throw std::invalid_argument("snapshot header must start with x");
      first = false;
      continue;
    }
    if (cell.rfind("solT", 0) != 0)
      throw std::invalid_argument("unexpected snapshot column '" + cell + "'");
    data.times.push_back(std::stod(cell.substr(4)));
  }
  data.columns.resize(data.times.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::size_t col = 0;
    while (std::getline(row, cell, ',')) {
      const double v = std::stod(cell);
      if (col == 0) data.x.push_back(v);
      else data.columns[col - 1].push_back(v);
      ++col;
    }
    if (col != data.times.size() + 1)
      throw std::invalid_argument("ragged snapshot row in " + path.string());
  }
  return data;
}

struct CompareRow {
  double time = 0.0;
  double l2_diff = 0.0;
  double centroid_a = 0.0;
  double centroid_b = 0.0;
  double lag = 0.0;  // centroid_a - centroid_b
};

struct CompareReport {
  std::vector<CompareRow> rows;
};

namespace detail {

/// Trapezoidal integral of f(x) on the sample grid.
inline double trapz(const std::vector<double>& x, const std::function<double(std::size_t)>& f) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    s += 0.5 * (x[i + 1] - x[i]) * (f(i) + f(i + 1));
  return s;
}

}  // namespace detail

/// Per-snapshot L2 difference and energy-centroid lag between two runs that
/// share the x sampling and snapshot times.
inline CompareReport compare_runs(const std::filesystem::path& dir_a,
                                  const std::filesystem::path& dir_b) {
  const SnapshotData a = read_snapshots_csv(dir_a / "snapshots.csv");
  const SnapshotData b = read_snapshots_csv(dir_b / "snapshots.csv");
  if (a.times.size() != b.times.size() || a.x.size() != b.x.size())
    throw std::invalid_argument("compare: runs have different sampling");
  for (std::size_t i = 0; i < a.times.size(); ++i)
    if (std::abs(a.times[i] - b.times[i]) > 1e-12)
      throw std::invalid_argument("compare: snapshot times differ");
  for (std::size_t i = 0; i < a.x.size(); ++i)
    if (std::abs(a.x[i] - b.x[i]) > 1e-14)
      throw std::invalid_argument("compare: x sampling differs");

  CompareReport rep;
  for (std::size_t t = 0; t < a.times.size(); ++t) {
    const auto& ua = a.columns[t];
    const auto& ub = b.columns[t];
    CompareRow row;
    row.time = a.times[t];
    row.l2_diff = std::sqrt(detail::trapz(a.x, [&](std::size_t i) {
      const double d = ua[i] - ub[i];
      return d * d;
    }));
    const double ma = detail::trapz(a.x, [&](std::size_t i) { return ua[i] * ua[i]; });
    const double mb = detail::trapz(a.x, [&](std::size_t i) { return ub[i] * ub[i]; });
    row.centroid_a = ma > 0.0
        ? detail::trapz(a.x, [&](std::size_t i) { return a.x[i] * ua[i] * ua[i]; }) / ma
        : 0.0;
    row.centroid_b = mb > 0.0
        ? detail::trapz(a.x, [&](std::size_t i) { return a.x[i] * ub[i] * ub[i]; }) / mb
        : 0.0;
    row.lag = row.centroid_a - row.centroid_b;
    rep.rows.push_back(row);
  }
  return rep;
}

inline void write_compare_csv(std::ostream& out, const CompareReport& rep) {
  out << "t,l2_diff,centroid_a,centroid_b,lag\n";
  for (const auto& r : rep.rows)
    out << fmt_g17(r.time) << "," << fmt_g17(r.l2_diff) << "," << fmt_g17(r.centroid_a) << ","
        << fmt_g17(r.centroid_b) << "," << fmt_g17(r.lag) << "\n";
}

}  // namespace kerrwave
