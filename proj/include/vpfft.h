/* Copyright (c) 2026 the vpfft authors */
/* SPDX-License-Identifier: Apache-2.0 */
/*
 * Public C API of the vpfft solver library.
 *
 * The library solves small-strain visco-plastic equilibrium on periodic
 * two-phase pixel microstructures with an FFT-based Galerkin scheme, and
 * benchmarks the classical against the improved Newton initial guess.
 *
 * Every fallible function returns a status code; on failure a thread-local
 * message is available from vpfft_last_error(). Objects are opaque handles
 * created and destroyed by the matching *_free function. Handles are not
 * thread-safe; distinct handles may be used from distinct threads.
 */
#ifndef VPFFT_H
#define VPFFT_H

#ifdef __cplusplus
extern "C" {
#endif

/* --- status codes ------------------------------------------------------- */

#define VPFFT_OK 0          /* success */
#define VPFFT_ERROR 1       /* unexpected internal failure */
#define VPFFT_ERR_CONFIG 2  /* invalid argument, flag, key, or value */
#define VPFFT_ERR_SOLVER 3  /* numerical failure (divergence, breakdown) */
#define VPFFT_ERR_IO 4      /* file-system or format failure */

/* Library version as "major.minor.patch". */
const char* vpfft_version(void);

/* Message of the most recent failure in the calling thread; empty string
 * after a successful call. Never NULL. The pointer stays valid until the
 * next vpfft call from the same thread. */
const char* vpfft_last_error(void);

/* --- microstructures ------------------------------------------------------ */

/* A periodic nx x ny pixel grid of integer phase ids. */
typedef struct vpfft_grid vpfft_grid;

/* Loads a grid from a file. format is "ascii-grid" (first line "nx ny",
 * then ny rows of nx phase ids) or "pgm" (P2/P5, 8-bit; values >= 128 map
 * to phase 1, the rest to phase 0). On success *out owns the grid. */
int vpfft_grid_load(const char* path, const char* format, vpfft_grid** out);

/* Synthesizes a two-phase microstructure: a centered inclusion of phase 1
 * with the given volume fraction in a phase-0 matrix. shape is "disc" or
 * "square". */
int vpfft_grid_synth(int nx, int ny, double volume_fraction, const char* shape,
                     vpfft_grid** out);

/* Writes the grid in the ascii-grid format. */
int vpfft_grid_save(const vpfft_grid* grid, const char* path);

/* Grid extents; 0 for a NULL grid. */
int vpfft_grid_nx(const vpfft_grid* grid);
int vpfft_grid_ny(const vpfft_grid* grid);

/* Exact pixel fraction of the phase id; 0.0 for a NULL grid. */
double vpfft_grid_phase_fraction(const vpfft_grid* grid, int phase);

void vpfft_grid_free(vpfft_grid* grid);

/* --- run configuration ---------------------------------------------------- */

/* Flat key=value store mirroring the CLI flags. Recognized keys:
 *
 *   micro       path of the microstructure file (used by the CLI)
 *   format      "ascii-grid" | "pgm"            (used by the CLI)
 *   out         output directory                (used by the CLI)
 *   preset      "hardening" | "perfect" | "softening"   (default hardening)
 *   scheme      "be" | "trapz"                          (default be)
 *   theta       trapezoidal parameter in [0, 1]         (default 1)
 *   ig          "classical" | "improved"                (default classical)
 *   steps       number of load increments               (default per preset)
 *   eps-final   final equivalent strain                 (default per preset)
 *   rate        equivalent strain rate per second       (default per preset)
 *   newton-tol  relative Newton residual tolerance      (default 1e-8)
 *   newton-max  Newton iteration cap per increment      (default 25)
 *   cg-tol      relative CG residual tolerance          (default 1e-10)
 *   cg-max      CG iteration cap (0 = 10 nx ny)         (default 0)
 *   normalizer  residual normalization stress in Pa     (default 1.18e9)
 *   reps        timing repetitions per run              (default 1)
 *
 * Keys outside this list are rejected with VPFFT_ERR_CONFIG. Values are
 * validated when a run is started. */
typedef struct vpfft_config vpfft_config;

/* Never fails; returns NULL only on allocation failure. */
vpfft_config* vpfft_config_new(void);

/* Merges a config file into cfg: one "key = value" per line, '#' starts a
 * comment, blank lines are ignored. Later assignments win. */
int vpfft_config_load(vpfft_config* cfg, const char* path);

/* Sets one key. Setting an already-set key overwrites it. */
int vpfft_config_set(vpfft_config* cfg, const char* key, const char* value);

/* Returns the stored value, or NULL when the key is unset or unknown. The
 * pointer stays valid until the next modification of cfg. */
const char* vpfft_config_get(const vpfft_config* cfg, const char* key);

void vpfft_config_free(vpfft_config* cfg);

/* --- runs ----------------------------------------------------------------- */

/* Reports are produced by the run functions below and consumed by the
 * vpfft_report_* accessors. A report is one of: a single solver run, a
 * classical-vs-improved comparison, or a verification-suite run. */
typedef struct vpfft_report vpfft_report;

/* Runs the load program of cfg on the grid (cfg NULL = all defaults).
 * On VPFFT_ERR_SOLVER a partial report is still returned (its per-step
 * records end at the failed increment) so progress can be inspected. */
int vpfft_run_solve(const vpfft_grid* grid, const vpfft_config* cfg,
                    vpfft_report** out);

/* Runs the identical program twice, with the classical and the improved
 * Newton initial guess, and reports both plus the reduction metrics. The
 * "ig" key of cfg is ignored. Partial reports as for vpfft_run_solve. */
int vpfft_run_compare(const vpfft_grid* grid, const vpfft_config* cfg,
                      vpfft_report** out);

/* Runs the constitutive verification suite (finite-difference tangent
 * probes, steady-state plateaus, scheme-degeneration and identity checks).
 * Returns VPFFT_OK when the suite executed, even if checks failed; use
 * vpfft_report_ok to test the outcome. */
int vpfft_run_verify(vpfft_report** out);

/* --- reports --------------------------------------------------------------- */

/* 1 when the report describes a fully successful outcome (run complete,
 * both comparison runs complete, or all checks passed); otherwise 0. */
int vpfft_report_ok(const vpfft_report* report);

/* Writes the per-step CSV (header "step,time_s,eps_appl,ig_mode,nr_iters,
 * cg_iters,res_i0,res_final,wall_ms"; comparison reports contain the rows
 * of both modes) or, for a verification report, the per-check CSV (header
 * "check,observed,bound,pass,detail"). */
int vpfft_report_write_csv(const vpfft_report* report, const char* path);

/* Writes the key=value summary for the report kind (totals, reduction
 * percentages, failure message when incomplete). */
int vpfft_report_write_summary(const vpfft_report* report, const char* path);

/* Fetches one scalar statistic into *value. Names by report kind:
 *   solve   : complete, steps_run, nr_total, cg_total, wall_ms_total,
 *             mean_stress_eq
 *   compare : complete, iteration_reduction, time_reduction, cg_reduction,
 *             max_stress_diff, classical_nr_total, improved_nr_total,
 *             classical_wall_ms, improved_wall_ms
 *   verify  : complete, checks, failures
 * Unknown names yield VPFFT_ERR_CONFIG. */
int vpfft_report_stat(const vpfft_report* report, const char* name,
                      double* value);

void vpfft_report_free(vpfft_report* report);

#ifdef __cplusplus
}
#endif

#endif /* VPFFT_H */
