// Copyright (c) 2026 the vpfft authors
// SPDX-License-Identifier: Apache-2.0
//
// Benchmark driver: strain-controlled load programs over a phase grid, run
// records per time step, and the classical-vs-improved initial-guess
// comparison with iteration and wall-time reductions.
#ifndef VPFFT_DRIVER_HPP
#define VPFFT_DRIVER_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "spectral.hpp"

namespace vpfft {

//! Proportional macroscopic strain path E(t) = direction * rate * t, applied
//! in n_steps equal increments up to the equivalent strain eps_final. The
//! direction is normalized to unit equivalent strain, so rate and eps_final
//! are von Mises equivalent quantities.
struct LoadProgram {
  SymTensor2 direction = default_direction();
  double eps_final = 0.05;  //!< final equivalent strain
  double rate = 0.01;       //!< equivalent strain rate per second
  int n_steps = 100;

  //! sqrt(3)/2 * (ex ex - ey ey): in-plane pure shear at unit equivalent
  //! strain, the default load of the benchmark problem.
  static SymTensor2 default_direction();

  double dt() const { return eps_final / rate / n_steps; }
  //! Normalized to unit equivalent strain. Throws ConfigError if the
  //! direction has no deviatoric content.
  SymTensor2 unit_direction() const;
  //! Macroscopic strain at the end of step k (1-based; k = 0 is the origin).
  SymTensor2 target(int k) const;
  //! Throws ConfigError on a non-positive rate, final strain, or step count,
  //! a purely volumetric direction, or out-of-plane direction components.
  void validate() const;
};

//! The three hardening regimes of the two-phase benchmark material set.
enum class Preset { hardening, perfect, softening };

//! Phase 0 = ferrite, phase 1 = martensite, with the benchmark parameters
//! (E = 206.824 GPa, nu = 0.3, gamma0_dot = 1e-3/s, m = 0.05, sigma0 =
//! 425/1180 MPa) and the preset's hardening moduli (+-940/+-1740 MPa or 0).
PhaseCatalog preset_catalog(Preset preset);

//! eps_final 0.05 (0.01 for softening), rate 0.01/s, 100 steps.
LoadProgram preset_load(Preset preset);

Preset parse_preset(const std::string& name);
std::string preset_name(Preset preset);

struct RunConfig {
  SolverConfig solver;
  LoadProgram load;
  int repetitions = 1;  //!< identical reruns; wall times are averaged

  void validate() const;
};

//! Per-increment outcome of a run.
struct StepRecord {
  int step = 0;          //!< 1-based increment index
  double time_s = 0.0;
  double eps_appl = 0.0; //!< applied equivalent strain at the end of the step
  IGMode ig_mode = IGMode::classical;
  int nr_iters = 0;      //!< Newton corrections after iteration 0
  int cg_iters = 0;      //!< all CG iterations of the increment
  double res_i0 = 0.0;   //!< residual after the initial guess
  double res_final = 0.0;
  double wall_ms = 0.0;  //!< averaged over repetitions
};

struct RunReport {
  std::vector<StepRecord> records;
  bool complete = false;
  std::string error;             //!< failure message when incomplete
  IGMode ig_mode = IGMode::classical;
  long total_nr = 0;
  long total_cg = 0;
  double total_wall_ms = 0.0;    //!< averaged over repetitions
  SymTensor2 mean_stress;        //!< macroscopic stress after the last step
  std::vector<SymTensor2> final_stress;  //!< per-pixel stress after the last step
};

//! Drives the load program over the grid. Solver failures (divergence,
//! depleted flow stress, rate overflow) terminate the run and leave a partial
//! report with complete = false and the error message; they are not rethrown.
//! Configuration errors do throw.
RunReport run(const PhaseGrid& grid, const PhaseCatalog& catalog,
              const RunConfig& config);

//! The two runs of the benchmark: identical in everything but the initial
//! guess, plus the reductions the improved guess achieves.
struct CompareReport {
  RunReport classical;
  RunReport improved;
  double iteration_reduction = 0.0;  //!< 1 - improved/classical Newton totals
  double time_reduction = 0.0;       //!< 1 - improved/classical wall totals
  double cg_reduction = 0.0;         //!< 1 - improved/classical CG totals
  double max_stress_diff = 0.0;      //!< sup-norm over pixels, Pa
  bool complete = false;             //!< both runs finished
};

//! Runs the program twice (classical, then improved initial guess) on fresh
//! fields and reports the reductions; config.solver.ig_mode is ignored.
CompareReport compare(const PhaseGrid& grid, const PhaseCatalog& catalog,
                      const RunConfig& config);

//! Step records as CSV with the header
//! step,time_s,eps_appl,ig_mode,nr_iters,cg_iters,res_i0,res_final,wall_ms
void write_step_csv(std::ostream& out, const std::vector<const RunReport*>& reports);

//! key=value lines summarizing one run.
void write_run_summary(std::ostream& out, const RunReport& report);

//! key=value lines with both runs' totals and the reductions.
void write_compare_summary(std::ostream& out, const CompareReport& report);

}  // namespace vpfft

#endif  // VPFFT_DRIVER_HPP
