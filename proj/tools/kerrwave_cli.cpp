// Copyright (c) 2026 the kerrwave authors
// SPDX-License-Identifier: Apache-2.0
//
// Experiment runner. `run` executes a config file (flags override file
// values), `compare` reports per-snapshot differences between two runs.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "kerrwave/kerrwave.hpp"

namespace kw = kerrwave;

int main(int argc, char** argv) {
  CLI::App app{"kerrwave: passivity-preserving space-time solvers for 1D Kerr media"};
  app.require_subcommand(1);

  std::string config_path, scheme, mode, out_dir;
  int p = 0, k = 0, cells = 0, workers = 0;
  double tau = 0.0, T = 0.0, chi3 = 0.0;

  CLI::App* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_path, "config file (key = value sections)")
      ->required()
      ->check(CLI::ExistingFile);
  CLI::Option* o_scheme =
      run->add_option("--scheme", scheme, "eh | ea | oracle")->check(CLI::IsMember({"eh", "ea", "oracle"}));
  CLI::Option* o_p = run->add_option("--p", p, "spatial polynomial degree");
  CLI::Option* o_k = run->add_option("--k", k, "temporal polynomial degree");
  CLI::Option* o_cells = run->add_option("--cells", cells, "mesh cell count");
  CLI::Option* o_tau = run->add_option("--tau", tau, "time step size");
  CLI::Option* o_T = run->add_option("--T", T, "final time");
  CLI::Option* o_chi3 = run->add_option("--chi3", chi3, "cubic susceptibility");
  CLI::Option* o_mode = run->add_option("--mode", mode, "single | ladder-h | ladder-tau")
                            ->check(CLI::IsMember({"single", "ladder-h", "ladder-tau"}));
  CLI::Option* o_out = run->add_option("--out", out_dir, "output directory");
  CLI::Option* o_workers = run->add_option("--workers", workers, "concurrent ladder rungs");

  std::string dir_a, dir_b, compare_out;
  CLI::App* cmp = app.add_subcommand("compare", "Compare snapshot files of two run directories");
  cmp->add_option("dirA", dir_a, "first run directory")->required();
  cmp->add_option("dirB", dir_b, "second run directory")->required();
  cmp->add_option("--out", compare_out, "also write the report CSV to this file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      kw::RunConfig cfg = kw::parse_config_file(config_path);
      if (o_scheme->count()) {
        cfg.scheme = scheme == "eh" ? kw::SchemeKind::eh
                     : scheme == "ea" ? kw::SchemeKind::ea
                                      : kw::SchemeKind::oracle;
      }
      if (o_mode->count()) {
        cfg.mode = mode == "single" ? kw::RunMode::single
                   : mode == "ladder-h" ? kw::RunMode::ladder_h
                                        : kw::RunMode::ladder_tau;
      }
      if (o_p->count()) cfg.p = p;
      if (o_k->count()) cfg.k = k;
      if (o_cells->count()) cfg.cells = cells;
      if (o_tau->count()) {
        cfg.tau = tau;
        cfg.steps = 0;
      }
      if (o_T->count()) {
        cfg.T = T;
        if (!o_tau->count()) cfg.steps = 0;
      }
      if (o_chi3->count()) cfg.chi3 = chi3;
      if (o_out->count()) cfg.out_dir = out_dir;
      if (o_workers->count()) cfg.workers = workers;
      cfg.validate();
      const int rc = kw::run_experiment(cfg);
      std::cout << "wrote artifacts to " << cfg.out_dir << "\n";
      return rc;
    }
    const kw::CompareReport rep = kw::compare_runs(dir_a, dir_b);
    kw::write_compare_csv(std::cout, rep);
    if (!compare_out.empty()) {
      std::ofstream out(compare_out);
      if (!out) throw std::runtime_error("cannot write " + compare_out);
      kw::write_compare_csv(out, rep);
    }
    return 0;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
}
