// Copyright (c) 2026 the vpfft authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Talks to the solver library exclusively through
// the public C API, like any other embedder would.
#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>

#include <CLI11.hpp>
#include <vpfft.h>

namespace {

namespace fs = std::filesystem;

struct ConfigGuard {
  vpfft_config* c = vpfft_config_new();
  ~ConfigGuard() { vpfft_config_free(c); }
};

struct GridGuard {
  vpfft_grid* g = nullptr;
  ~GridGuard() { vpfft_grid_free(g); }
};

struct ReportGuard {
  vpfft_report* r = nullptr;
  ~ReportGuard() { vpfft_report_free(r); }
};

int report_failure(int status) {
  std::cerr << "error: " << vpfft_last_error() << '\n';
  return status;
}

//! One string per flag; empty = not given. Values are passed to the library
//! verbatim, so parsing and validation live in one place (the C API).
struct RunFlags {
  std::string config_file, micro, format, preset, scheme, theta, ig, steps,
      eps_final, rate, out, newton_tol, newton_max, cg_tol, cg_max, normalizer,
      reps;
};

void add_run_flags(CLI::App* cmd, RunFlags& f, bool with_ig) {
  cmd->add_option("--config", f.config_file,
                  "key = value file mirroring these flags; flags override it");
  cmd->add_option("--micro", f.micro, "microstructure file");
  cmd->add_option("--format", f.format,
                  "microstructure format: ascii-grid | pgm (default ascii-grid)");
  cmd->add_option("--preset", f.preset,
                  "material/load preset: hardening | perfect | softening");
  cmd->add_option("--scheme", f.scheme, "time integration: be | trapz");
  cmd->add_option("--theta", f.theta, "trapezoidal parameter in [0, 1]");
  if (with_ig)
    cmd->add_option("--ig", f.ig, "Newton initial guess: classical | improved");
  cmd->add_option("--steps", f.steps, "number of load increments");
  cmd->add_option("--eps-final", f.eps_final, "final equivalent strain");
  cmd->add_option("--rate", f.rate, "equivalent strain rate [1/s]");
  cmd->add_option("--out", f.out,
                  "output directory for steps.csv and summary.txt");
  cmd->add_option("--newton-tol", f.newton_tol, "Newton residual tolerance");
  cmd->add_option("--newton-max", f.newton_max, "Newton iteration cap");
  cmd->add_option("--cg-tol", f.cg_tol, "CG residual tolerance");
  cmd->add_option("--cg-max", f.cg_max, "CG iteration cap (0 = 10 nx ny)");
  cmd->add_option("--normalizer", f.normalizer,
                  "residual normalization stress [Pa]");
  cmd->add_option("--reps", f.reps, "timing repetitions per run");
}

//! Config file first, then every flag that was given on the command line.
int apply_flags(vpfft_config* cfg, const RunFlags& f) {
  if (!f.config_file.empty()) {
    if (const int s = vpfft_config_load(cfg, f.config_file.c_str())) return s;
  }
  const std::pair<const char*, const std::string*> kv[] = {
      {"micro", &f.micro},           {"format", &f.format},
      {"preset", &f.preset},         {"scheme", &f.scheme},
      {"theta", &f.theta},           {"ig", &f.ig},
      {"steps", &f.steps},           {"eps-final", &f.eps_final},
      {"rate", &f.rate},             {"out", &f.out},
      {"newton-tol", &f.newton_tol}, {"newton-max", &f.newton_max},
      {"cg-tol", &f.cg_tol},         {"cg-max", &f.cg_max},
      {"normalizer", &f.normalizer}, {"reps", &f.reps}};
  for (const auto& [key, value] : kv)
    if (!value->empty()) {
      if (const int s = vpfft_config_set(cfg, key, value->c_str())) return s;
    }
  return VPFFT_OK;
}

//! Writes csv_name + summary.txt into out_dir when given, and always echoes
//! the summary to stdout.
int emit_report(const vpfft_report* report, const std::string& out_dir,
                const std::string& csv_name) {
  fs::path summary_path;
  bool temporary = false;
  if (!out_dir.empty()) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
      std::cerr << "error: cannot create '" << out_dir
                << "': " << ec.message() << '\n';
      return VPFFT_ERR_IO;
    }
    const fs::path csv_path = fs::path(out_dir) / csv_name;
    if (const int s = vpfft_report_write_csv(report, csv_path.string().c_str()))
      return report_failure(s);
    summary_path = fs::path(out_dir) / "summary.txt";
  } else {
    summary_path = fs::temp_directory_path() /
                   ("vpfft_summary_" + std::to_string(::getpid()) + ".txt");
    temporary = true;
  }
  const int s = vpfft_report_write_summary(report, summary_path.string().c_str());
  if (s != VPFFT_OK) return report_failure(s);
  std::ifstream in(summary_path);
  std::cout << in.rdbuf();
  if (temporary) {
    std::error_code ec;
    fs::remove(summary_path, ec);
  }
  return VPFFT_OK;
}

int cmd_run(const RunFlags& flags, bool is_compare) {
  ConfigGuard cfg;
  if (cfg.c == nullptr) {
    std::cerr << "error: out of memory\n";
    return VPFFT_ERROR;
  }
  if (const int s = apply_flags(cfg.c, flags)) return report_failure(s);

  const char* micro = vpfft_config_get(cfg.c, "micro");
  if (micro == nullptr) {
    std::cerr << "error: no microstructure given "
                 "(--micro FILE or micro = FILE in the config file)\n";
    return VPFFT_ERR_CONFIG;
  }
  const char* fmt = vpfft_config_get(cfg.c, "format");
  GridGuard grid;
  if (const int s =
          vpfft_grid_load(micro, fmt != nullptr ? fmt : "ascii-grid", &grid.g))
    return report_failure(s);

  ReportGuard report;
  const int status = is_compare
                         ? vpfft_run_compare(grid.g, cfg.c, &report.r)
                         : vpfft_run_solve(grid.g, cfg.c, &report.r);
  const std::string run_error =
      status != VPFFT_OK ? vpfft_last_error() : std::string();
  if (report.r == nullptr) {
    std::cerr << "error: " << run_error << '\n';
    return status;
  }
  // A partial report (solver failure mid-run) is still written out.
  const char* out = vpfft_config_get(cfg.c, "out");
  if (const int s = emit_report(report.r, out != nullptr ? out : "", "steps.csv"))
    return s;
  if (status != VPFFT_OK) {
    std::cerr << "error: " << run_error << '\n';
    return status;
  }
  return 0;
}

int cmd_synth(int nx, int ny, double vf, const std::string& shape,
              const std::string& out_file) {
  GridGuard grid;
  if (const int s = vpfft_grid_synth(nx, ny, vf, shape.c_str(), &grid.g))
    return report_failure(s);
  if (const int s = vpfft_grid_save(grid.g, out_file.c_str()))
    return report_failure(s);
  std::cout << "wrote " << out_file << " (" << nx << "x" << ny
            << ", phase-1 fraction " << vpfft_grid_phase_fraction(grid.g, 1)
            << ")\n";
  return 0;
}

int cmd_verify(const std::string& out_dir) {
  ReportGuard report;
  if (const int s = vpfft_run_verify(&report.r)) return report_failure(s);
  if (const int s = emit_report(report.r, out_dir, "checks.csv")) return s;
  if (vpfft_report_ok(report.r) != 1) {
    std::cerr << "error: verification checks failed\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "FFT-based visco-plastic micromechanics solver and initial-guess "
      "benchmark"};
  app.set_version_flag("--version", std::string(vpfft_version()));
  app.require_subcommand(1);

  RunFlags solve_flags;
  CLI::App* solve = app.add_subcommand(
      "solve", "run one load program on a microstructure");
  add_run_flags(solve, solve_flags, /*with_ig=*/true);

  RunFlags compare_flags;
  CLI::App* compare = app.add_subcommand(
      "compare",
      "run the identical program with the classical and the improved Newton "
      "initial guess and report the iteration/time reductions");
  add_run_flags(compare, compare_flags, /*with_ig=*/false);

  int nx = 0, ny = 0;
  double vf = 0.0;
  std::string shape = "disc";
  std::string synth_out;
  CLI::App* synth = app.add_subcommand(
      "synth", "write a synthetic two-phase microstructure (ascii-grid)");
  synth->add_option("--nx", nx, "grid width in pixels")->required();
  synth->add_option("--ny", ny, "grid height in pixels")->required();
  synth->add_option("--vf", vf, "phase-1 volume fraction")->required();
  synth->add_option("--shape", shape, "inclusion shape: disc | square");
  synth->add_option("--out", synth_out, "output file")->required();

  std::string verify_out;
  CLI::App* verify = app.add_subcommand(
      "verify",
      "run the constitutive verification suite (exit 1 if any check fails)");
  verify->add_option("--out", verify_out,
                     "output directory for checks.csv and summary.txt");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : VPFFT_ERR_CONFIG;
  }

  if (solve->parsed()) return cmd_run(solve_flags, /*is_compare=*/false);
  if (compare->parsed()) return cmd_run(compare_flags, /*is_compare=*/true);
  if (synth->parsed()) return cmd_synth(nx, ny, vf, shape, synth_out);
  if (verify->parsed()) return cmd_verify(verify_out);
  return VPFFT_ERR_CONFIG;
}
