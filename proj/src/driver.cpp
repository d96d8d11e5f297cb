// Copyright (c) 2026 the vpfft authors
// SPDX-License-Identifier: Apache-2.0
//
#include "driver.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace vpfft {

namespace {

std::string ig_name(IGMode mode) {
  return mode == IGMode::classical ? "classical" : "improved";
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

SymTensor2 LoadProgram::default_direction() {
  SymTensor2 d;
  d[kXX] = std::sqrt(3.0) / 2.0;
  d[kYY] = -std::sqrt(3.0) / 2.0;
  return d;
}

SymTensor2 LoadProgram::unit_direction() const {
  const double eq = equivalent_strain(direction);
  if (!(eq > 0.0))
    throw ConfigError(
        "load program: direction needs deviatoric content to define an "
        "equivalent strain path");
  return direction / eq;
}

SymTensor2 LoadProgram::target(int k) const {
  return unit_direction() * (rate * (k * dt()));
}

void LoadProgram::validate() const {
  if (!(eps_final > 0.0))
    throw ConfigError("load program: eps_final must be positive");
  if (!(rate > 0.0))
    throw ConfigError("load program: rate must be positive");
  if (n_steps < 1)
    throw ConfigError("load program: n_steps must be >= 1");
  const SymTensor2 d = unit_direction();  // throws on volumetric directions
  if (d[kYZ] != 0.0 || d[kXZ] != 0.0)
    throw ConfigError(
        "load program: out-of-plane shear components are not representable "
        "under plane-strain kinematics");
  if (d[kZZ] != 0.0)
    throw ConfigError(
        "load program: a zz strain component is not representable under "
        "plane-strain kinematics");
}

PhaseCatalog preset_catalog(Preset preset) {
  double h_f = 0.0, h_m = 0.0;
  switch (preset) {
    case Preset::hardening:
      h_f = 940.0e6;
      h_m = 1740.0e6;
      break;
    case Preset::perfect:
      break;
    case Preset::softening:
      h_f = -940.0e6;
      h_m = -1740.0e6;
      break;
  }
  PhaseCatalog cat;
  cat.add(0, MaterialParams::make(206.824e9, 0.3, 1.0e-3, 0.05, 425.0e6, h_f),
          "ferrite");
  cat.add(1, MaterialParams::make(206.824e9, 0.3, 1.0e-3, 0.05, 1180.0e6, h_m),
          "martensite");
  return cat;
}

LoadProgram preset_load(Preset preset) {
  LoadProgram load;
  load.eps_final = preset == Preset::softening ? 0.01 : 0.05;
  load.rate = 0.01;
  load.n_steps = 100;
  return load;
}

Preset parse_preset(const std::string& name) {
  if (name == "hardening") return Preset::hardening;
  if (name == "perfect") return Preset::perfect;
  if (name == "softening") return Preset::softening;
  throw ConfigError("unknown preset '" + name +
                    "' (expected hardening, perfect, or softening)");
}

std::string preset_name(Preset preset) {
  switch (preset) {
    case Preset::hardening: return "hardening";
    case Preset::perfect: return "perfect";
    case Preset::softening: return "softening";
  }
  throw ConfigError("invalid preset value");
}

void RunConfig::validate() const {
  solver.validate();
  load.validate();
  if (repetitions < 1)
    throw ConfigError("run config: repetitions must be >= 1");
}

RunReport run(const PhaseGrid& grid, const PhaseCatalog& catalog,
              const RunConfig& config) {
  config.validate();
  RunReport report;
  report.ig_mode = config.solver.ig_mode;
  const double dt = config.load.dt();

  for (int rep = 0; rep < config.repetitions; ++rep) {
    SpectralSolver solver(grid, catalog);
    const bool first = rep == 0;
    for (int k = 1; k <= config.load.n_steps; ++k) {
      IterationLog log;
      try {
        log = solver.newton_increment(config.load.target(k), dt, config.solver);
      } catch (const SolverError& e) {
        // Repetitions replay an identical trajectory, so a failure can only
        // first occur on rep 0; keep the partial records and stop.
        report.complete = false;
        report.error = e.what();
        report.mean_stress = solver.mean_stress();
        report.final_stress = solver.stress();
        return report;
      }
      if (first) {
        StepRecord rec;
        rec.step = k;
        rec.time_s = k * dt;
        rec.eps_appl = config.load.rate * rec.time_s;
        rec.ig_mode = config.solver.ig_mode;
        rec.nr_iters = log.newton_iterations();
        rec.cg_iters = log.total_cg();
        rec.res_i0 = log.residual_i0();
        rec.res_final = log.residual_final();
        rec.wall_ms = log.wall_ms;
        report.records.push_back(rec);
        report.total_nr += rec.nr_iters;
        report.total_cg += rec.cg_iters;
      } else {
        report.records[static_cast<std::size_t>(k) - 1].wall_ms += log.wall_ms;
      }
    }
    if (rep == config.repetitions - 1) {
      report.mean_stress = solver.mean_stress();
      report.final_stress = solver.stress();
    }
  }
  const double inv_rep = 1.0 / config.repetitions;
  for (StepRecord& rec : report.records) {
    rec.wall_ms *= inv_rep;
    report.total_wall_ms += rec.wall_ms;
  }
  report.complete = true;
  return report;
}

CompareReport compare(const PhaseGrid& grid, const PhaseCatalog& catalog,
                      const RunConfig& config) {
  CompareReport cmp;
  RunConfig cfg = config;
  cfg.solver.ig_mode = IGMode::classical;
  cmp.classical = run(grid, catalog, cfg);
  cfg.solver.ig_mode = IGMode::improved;
  cmp.improved = run(grid, catalog, cfg);
  cmp.complete = cmp.classical.complete && cmp.improved.complete;
  if (cmp.complete) {
    if (cmp.classical.total_nr > 0)
      cmp.iteration_reduction =
          1.0 - static_cast<double>(cmp.improved.total_nr) /
                    static_cast<double>(cmp.classical.total_nr);
    if (cmp.classical.total_cg > 0)
      cmp.cg_reduction = 1.0 - static_cast<double>(cmp.improved.total_cg) /
                                   static_cast<double>(cmp.classical.total_cg);
    if (cmp.classical.total_wall_ms > 0.0)
      cmp.time_reduction =
          1.0 - cmp.improved.total_wall_ms / cmp.classical.total_wall_ms;
    for (std::size_t i = 0; i < cmp.classical.final_stress.size(); ++i)
      cmp.max_stress_diff = std::max(
          cmp.max_stress_diff,
          (cmp.classical.final_stress[i] - cmp.improved.final_stress[i]).norm());
  }
  return cmp;
}

void write_step_csv(std::ostream& out,
                    const std::vector<const RunReport*>& reports) {
  out << "step,time_s,eps_appl,ig_mode,nr_iters,cg_iters,res_i0,res_final,"
         "wall_ms\n";
  for (const RunReport* report : reports) {
    if (report == nullptr) throw ConfigError("step csv: null report");
    for (const StepRecord& r : report->records) {
      out << r.step << ',' << num(r.time_s) << ',' << num(r.eps_appl) << ','
          << ig_name(r.ig_mode) << ',' << r.nr_iters << ',' << r.cg_iters
          << ',' << num(r.res_i0) << ',' << num(r.res_final) << ','
          << num(r.wall_ms) << '\n';
    }
  }
}

void write_run_summary(std::ostream& out, const RunReport& report) {
  out << "ig_mode=" << ig_name(report.ig_mode) << '\n';
  out << "complete=" << (report.complete ? 1 : 0) << '\n';
  if (!report.error.empty()) out << "error=" << report.error << '\n';
  out << "steps_run=" << report.records.size() << '\n';
  out << "nr_total=" << report.total_nr << '\n';
  out << "cg_total=" << report.total_cg << '\n';
  out << "wall_ms_total=" << num(report.total_wall_ms) << '\n';
  out << "mean_stress_eq=" << num(equivalent_stress(report.mean_stress))
      << '\n';
  out << "mean_stress_xx=" << num(report.mean_stress[kXX]) << '\n';
  out << "mean_stress_yy=" << num(report.mean_stress[kYY]) << '\n';
}

void write_compare_summary(std::ostream& out, const CompareReport& report) {
  out << "complete=" << (report.complete ? 1 : 0) << '\n';
  out << "classical_nr_total=" << report.classical.total_nr << '\n';
  out << "improved_nr_total=" << report.improved.total_nr << '\n';
  out << "classical_cg_total=" << report.classical.total_cg << '\n';
  out << "improved_cg_total=" << report.improved.total_cg << '\n';
  out << "classical_wall_ms=" << num(report.classical.total_wall_ms) << '\n';
  out << "improved_wall_ms=" << num(report.improved.total_wall_ms) << '\n';
  out << "iteration_reduction=" << num(report.iteration_reduction) << '\n';
  out << "cg_reduction=" << num(report.cg_reduction) << '\n';
  out << "time_reduction=" << num(report.time_reduction) << '\n';
  out << "max_stress_diff=" << num(report.max_stress_diff) << '\n';
  if (!report.classical.error.empty())
    out << "classical_error=" << report.classical.error << '\n';
  if (!report.improved.error.empty())
    out << "improved_error=" << report.improved.error << '\n';
}

}  // namespace vpfft
