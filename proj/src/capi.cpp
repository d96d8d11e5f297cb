// Copyright (c) 2026 the vpfft authors
// SPDX-License-Identifier: Apache-2.0
//
// C API: a thin translation layer between the opaque handles of vpfft.h and
// the C++ core. All exceptions are caught at this boundary and mapped onto
// status codes plus a thread-local message.
#include "vpfft.h"

#include <cstddef>
#include <exception>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "driver.hpp"
#include "microstructure.hpp"
#include "verify.hpp"
#include "vpfft_errors.hpp"

struct vpfft_grid {
  vpfft::PhaseGrid grid;
};

struct vpfft_config {
  std::map<std::string, std::string> values;
};

struct vpfft_report {
  enum class Kind { solve, compare, verify } kind = Kind::solve;
  vpfft::RunReport run;
  vpfft::CompareReport cmp;
  std::vector<vpfft::CheckResult> checks;
};

namespace {

thread_local std::string t_last_error;

int fail(int code, const std::string& msg) {
  t_last_error = msg;
  return code;
}

int map_kind(vpfft::ErrorKind kind) {
  switch (kind) {
    case vpfft::ErrorKind::config: return VPFFT_ERR_CONFIG;
    case vpfft::ErrorKind::solver: return VPFFT_ERR_SOLVER;
    case vpfft::ErrorKind::io: return VPFFT_ERR_IO;
  }
  return VPFFT_ERROR;
}

//! Runs f inside the exception barrier; clears the thread message on success.
template <typename F>
int guarded(F&& f) {
  try {
    f();
    t_last_error.clear();
    return VPFFT_OK;
  } catch (const vpfft::Error& e) {
    return fail(map_kind(e.kind()), e.what());
  } catch (const std::exception& e) {
    return fail(VPFFT_ERROR, e.what());
  } catch (...) {
    return fail(VPFFT_ERROR, "unknown failure");
  }
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "micro",      "format",     "out",    "preset", "scheme", "theta",
      "ig",         "steps",      "eps-final", "rate", "newton-tol",
      "newton-max", "cg-tol",     "cg-max", "normalizer", "reps"};
  return keys;
}

std::string trim(const std::string& s) {
  const std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

const std::string* lookup(const vpfft_config* cfg, const std::string& key) {
  if (cfg == nullptr) return nullptr;
  const auto it = cfg->values.find(key);
  return it == cfg->values.end() ? nullptr : &it->second;
}

double to_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size())
    throw vpfft::ConfigError("config key '" + key + "': not a number: '" +
                             value + "'");
  return v;
}

int to_int(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size())
    throw vpfft::ConfigError("config key '" + key + "': not an integer: '" +
                             value + "'");
  return v;
}

vpfft::GridFormat parse_format(const std::string& name) {
  if (name == "ascii-grid") return vpfft::GridFormat::ascii_grid;
  if (name == "pgm") return vpfft::GridFormat::pgm;
  throw vpfft::ConfigError("unknown grid format '" + name +
                           "' (expected ascii-grid or pgm)");
}

//! Resolves the preset, then applies every override present in cfg.
std::pair<vpfft::RunConfig, vpfft::PhaseCatalog> build_run_config(
    const vpfft_config* cfg) {
  const std::string* v = lookup(cfg, "preset");
  const vpfft::Preset preset =
      vpfft::parse_preset(v != nullptr ? *v : "hardening");

  vpfft::RunConfig rc;
  rc.load = vpfft::preset_load(preset);
  if ((v = lookup(cfg, "steps")) != nullptr)
    rc.load.n_steps = to_int("steps", *v);
  if ((v = lookup(cfg, "eps-final")) != nullptr)
    rc.load.eps_final = to_double("eps-final", *v);
  if ((v = lookup(cfg, "rate")) != nullptr) rc.load.rate = to_double("rate", *v);

  if ((v = lookup(cfg, "scheme")) != nullptr) {
    if (*v == "be")
      rc.solver.scheme = vpfft::Scheme::backward_euler;
    else if (*v == "trapz")
      rc.solver.scheme = vpfft::Scheme::trapezoidal;
    else
      throw vpfft::ConfigError("config key 'scheme': unknown scheme '" + *v +
                               "' (expected be or trapz)");
  }
  if ((v = lookup(cfg, "theta")) != nullptr)
    rc.solver.theta = to_double("theta", *v);
  if ((v = lookup(cfg, "ig")) != nullptr) {
    if (*v == "classical")
      rc.solver.ig_mode = vpfft::IGMode::classical;
    else if (*v == "improved")
      rc.solver.ig_mode = vpfft::IGMode::improved;
    else
      throw vpfft::ConfigError("config key 'ig': unknown mode '" + *v +
                               "' (expected classical or improved)");
  }
  if ((v = lookup(cfg, "newton-tol")) != nullptr)
    rc.solver.newton_tol = to_double("newton-tol", *v);
  if ((v = lookup(cfg, "newton-max")) != nullptr)
    rc.solver.newton_max = to_int("newton-max", *v);
  if ((v = lookup(cfg, "cg-tol")) != nullptr)
    rc.solver.cg_tol = to_double("cg-tol", *v);
  if ((v = lookup(cfg, "cg-max")) != nullptr)
    rc.solver.cg_max = to_int("cg-max", *v);
  if ((v = lookup(cfg, "normalizer")) != nullptr)
    rc.solver.normalizer = to_double("normalizer", *v);
  if ((v = lookup(cfg, "reps")) != nullptr)
    rc.repetitions = to_int("reps", *v);

  return {rc, vpfft::preset_catalog(preset)};
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw vpfft::IoError("cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw vpfft::IoError("failed writing '" + path + "'");
}

void write_verify_summary(std::ostream& out,
                          const std::vector<vpfft::CheckResult>& checks) {
  int failures = 0;
  for (const vpfft::CheckResult& c : checks)
    if (!c.pass) ++failures;
  out << "complete=" << (failures == 0 ? 1 : 0) << '\n';
  out << "checks=" << checks.size() << '\n';
  out << "failures=" << failures << '\n';
  for (const vpfft::CheckResult& c : checks)
    out << "check." << c.name << '=' << (c.pass ? "pass" : "fail") << '\n';
}

int stat_lookup(const vpfft_report* report, const std::string& name,
                double* value) {
  const vpfft::RunReport& run = report->run;
  const vpfft::CompareReport& cmp = report->cmp;
  switch (report->kind) {
    case vpfft_report::Kind::solve:
      if (name == "complete") { *value = run.complete ? 1.0 : 0.0; return VPFFT_OK; }
      if (name == "steps_run") { *value = double(run.records.size()); return VPFFT_OK; }
      if (name == "nr_total") { *value = double(run.total_nr); return VPFFT_OK; }
      if (name == "cg_total") { *value = double(run.total_cg); return VPFFT_OK; }
      if (name == "wall_ms_total") { *value = run.total_wall_ms; return VPFFT_OK; }
      if (name == "mean_stress_eq") {
        *value = vpfft::equivalent_stress(run.mean_stress);
        return VPFFT_OK;
      }
      break;
    case vpfft_report::Kind::compare:
      if (name == "complete") { *value = cmp.complete ? 1.0 : 0.0; return VPFFT_OK; }
      if (name == "iteration_reduction") { *value = cmp.iteration_reduction; return VPFFT_OK; }
      if (name == "time_reduction") { *value = cmp.time_reduction; return VPFFT_OK; }
      if (name == "cg_reduction") { *value = cmp.cg_reduction; return VPFFT_OK; }
      if (name == "max_stress_diff") { *value = cmp.max_stress_diff; return VPFFT_OK; }
      if (name == "classical_nr_total") { *value = double(cmp.classical.total_nr); return VPFFT_OK; }
      if (name == "improved_nr_total") { *value = double(cmp.improved.total_nr); return VPFFT_OK; }
      if (name == "classical_wall_ms") { *value = cmp.classical.total_wall_ms; return VPFFT_OK; }
      if (name == "improved_wall_ms") { *value = cmp.improved.total_wall_ms; return VPFFT_OK; }
      break;
    case vpfft_report::Kind::verify: {
      int failures = 0;
      for (const vpfft::CheckResult& c : report->checks)
        if (!c.pass) ++failures;
      if (name == "complete") { *value = failures == 0 ? 1.0 : 0.0; return VPFFT_OK; }
      if (name == "checks") { *value = double(report->checks.size()); return VPFFT_OK; }
      if (name == "failures") { *value = double(failures); return VPFFT_OK; }
      break;
    }
  }
  return fail(VPFFT_ERR_CONFIG,
              "unknown report stat '" + name + "' for this report kind");
}

}  // namespace

extern "C" {

const char* vpfft_version(void) { return "1.0.0"; }

const char* vpfft_last_error(void) { return t_last_error.c_str(); }

int vpfft_grid_load(const char* path, const char* format, vpfft_grid** out) {
  if (out == nullptr) return fail(VPFFT_ERR_CONFIG, "grid load: out is NULL");
  *out = nullptr;
  if (path == nullptr) return fail(VPFFT_ERR_CONFIG, "grid load: path is NULL");
  if (format == nullptr)
    return fail(VPFFT_ERR_CONFIG, "grid load: format is NULL");
  return guarded([&] {
    auto g = new vpfft_grid{vpfft::load_grid_file(path, parse_format(format))};
    *out = g;
  });
}

int vpfft_grid_synth(int nx, int ny, double volume_fraction, const char* shape,
                     vpfft_grid** out) {
  if (out == nullptr) return fail(VPFFT_ERR_CONFIG, "grid synth: out is NULL");
  *out = nullptr;
  if (shape == nullptr)
    return fail(VPFFT_ERR_CONFIG, "grid synth: shape is NULL");
  return guarded([&] {
    const std::string s = shape;
    vpfft::InclusionShape sh;
    if (s == "disc")
      sh = vpfft::InclusionShape::disc;
    else if (s == "square")
      sh = vpfft::InclusionShape::square;
    else
      throw vpfft::ConfigError("unknown inclusion shape '" + s +
                               "' (expected disc or square)");
    *out = new vpfft_grid{vpfft::synth_inclusion(nx, ny, volume_fraction, sh)};
  });
}

int vpfft_grid_save(const vpfft_grid* grid, const char* path) {
  if (grid == nullptr) return fail(VPFFT_ERR_CONFIG, "grid save: grid is NULL");
  if (path == nullptr) return fail(VPFFT_ERR_CONFIG, "grid save: path is NULL");
  return guarded([&] { vpfft::save_grid_file(grid->grid, path); });
}

int vpfft_grid_nx(const vpfft_grid* grid) {
  return grid == nullptr ? 0 : grid->grid.nx;
}

int vpfft_grid_ny(const vpfft_grid* grid) {
  return grid == nullptr ? 0 : grid->grid.ny;
}

double vpfft_grid_phase_fraction(const vpfft_grid* grid, int phase) {
  if (grid == nullptr) return 0.0;
  return grid->grid.phase_fraction(phase);
}

void vpfft_grid_free(vpfft_grid* grid) { delete grid; }

vpfft_config* vpfft_config_new(void) {
  try {
    return new vpfft_config;
  } catch (...) {
    return nullptr;
  }
}

int vpfft_config_load(vpfft_config* cfg, const char* path) {
  if (cfg == nullptr) return fail(VPFFT_ERR_CONFIG, "config load: cfg is NULL");
  if (path == nullptr)
    return fail(VPFFT_ERR_CONFIG, "config load: path is NULL");
  return guarded([&] {
    std::ifstream in(path);
    if (!in) throw vpfft::IoError(std::string("cannot open '") + path + "'");
    std::map<std::string, std::string> merged = cfg->values;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const std::size_t hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const std::string text = trim(line);
      if (text.empty()) continue;
      const std::size_t eq = text.find('=');
      if (eq == std::string::npos)
        throw vpfft::ConfigError(std::string(path) + ":" +
                                 std::to_string(line_no) +
                                 ": expected 'key = value', got '" + text + "'");
      const std::string key = trim(text.substr(0, eq));
      const std::string value = trim(text.substr(eq + 1));
      if (known_keys().count(key) == 0)
        throw vpfft::ConfigError(std::string(path) + ":" +
                                 std::to_string(line_no) +
                                 ": unknown config key '" + key + "'");
      if (value.empty())
        throw vpfft::ConfigError(std::string(path) + ":" +
                                 std::to_string(line_no) +
                                 ": empty value for key '" + key + "'");
      merged[key] = value;
    }
    cfg->values.swap(merged);  // all-or-nothing merge
  });
}

int vpfft_config_set(vpfft_config* cfg, const char* key, const char* value) {
  if (cfg == nullptr) return fail(VPFFT_ERR_CONFIG, "config set: cfg is NULL");
  if (key == nullptr) return fail(VPFFT_ERR_CONFIG, "config set: key is NULL");
  if (value == nullptr)
    return fail(VPFFT_ERR_CONFIG, "config set: value is NULL");
  return guarded([&] {
    const std::string k = trim(key);
    if (known_keys().count(k) == 0)
      throw vpfft::ConfigError("unknown config key '" + k + "'");
    const std::string v = trim(value);
    if (v.empty())
      throw vpfft::ConfigError("empty value for config key '" + k + "'");
    cfg->values[k] = v;
  });
}

const char* vpfft_config_get(const vpfft_config* cfg, const char* key) {
  if (cfg == nullptr || key == nullptr) return nullptr;
  const std::string* v = lookup(cfg, trim(key));
  return v == nullptr ? nullptr : v->c_str();
}

void vpfft_config_free(vpfft_config* cfg) { delete cfg; }

int vpfft_run_solve(const vpfft_grid* grid, const vpfft_config* cfg,
                    vpfft_report** out) {
  if (out == nullptr) return fail(VPFFT_ERR_CONFIG, "solve: out is NULL");
  *out = nullptr;
  if (grid == nullptr) return fail(VPFFT_ERR_CONFIG, "solve: grid is NULL");
  const int status = guarded([&] {
    auto [rc, catalog] = build_run_config(cfg);
    auto report = new vpfft_report;
    report->kind = vpfft_report::Kind::solve;
    try {
      report->run = vpfft::run(grid->grid, catalog, rc);
    } catch (...) {
      delete report;
      throw;
    }
    *out = report;
  });
  if (status != VPFFT_OK) return status;
  if (!(*out)->run.complete)
    return fail(VPFFT_ERR_SOLVER, (*out)->run.error);
  return VPFFT_OK;
}

int vpfft_run_compare(const vpfft_grid* grid, const vpfft_config* cfg,
                      vpfft_report** out) {
  if (out == nullptr) return fail(VPFFT_ERR_CONFIG, "compare: out is NULL");
  *out = nullptr;
  if (grid == nullptr) return fail(VPFFT_ERR_CONFIG, "compare: grid is NULL");
  const int status = guarded([&] {
    auto [rc, catalog] = build_run_config(cfg);
    auto report = new vpfft_report;
    report->kind = vpfft_report::Kind::compare;
    try {
      report->cmp = vpfft::compare(grid->grid, catalog, rc);
    } catch (...) {
      delete report;
      throw;
    }
    *out = report;
  });
  if (status != VPFFT_OK) return status;
  const vpfft::CompareReport& cmp = (*out)->cmp;
  if (!cmp.complete)
    return fail(VPFFT_ERR_SOLVER, !cmp.classical.error.empty()
                                      ? cmp.classical.error
                                      : cmp.improved.error);
  return VPFFT_OK;
}

int vpfft_run_verify(vpfft_report** out) {
  if (out == nullptr) return fail(VPFFT_ERR_CONFIG, "verify: out is NULL");
  *out = nullptr;
  return guarded([&] {
    auto report = new vpfft_report;
    report->kind = vpfft_report::Kind::verify;
    try {
      report->checks = vpfft::run_oracle_suite();
    } catch (...) {
      delete report;
      throw;
    }
    *out = report;
  });
}

int vpfft_report_ok(const vpfft_report* report) {
  if (report == nullptr) return 0;
  switch (report->kind) {
    case vpfft_report::Kind::solve:
      return report->run.complete ? 1 : 0;
    case vpfft_report::Kind::compare:
      return report->cmp.complete ? 1 : 0;
    case vpfft_report::Kind::verify:
      return vpfft::all_pass(report->checks) ? 1 : 0;
  }
  return 0;
}

int vpfft_report_write_csv(const vpfft_report* report, const char* path) {
  if (report == nullptr)
    return fail(VPFFT_ERR_CONFIG, "report csv: report is NULL");
  if (path == nullptr) return fail(VPFFT_ERR_CONFIG, "report csv: path is NULL");
  return guarded([&] {
    std::ostringstream text;
    switch (report->kind) {
      case vpfft_report::Kind::solve:
        vpfft::write_step_csv(text, {&report->run});
        break;
      case vpfft_report::Kind::compare:
        vpfft::write_step_csv(text,
                              {&report->cmp.classical, &report->cmp.improved});
        break;
      case vpfft_report::Kind::verify:
        vpfft::write_check_csv(report->checks, text);
        break;
    }
    write_text_file(path, text.str());
  });
}

int vpfft_report_write_summary(const vpfft_report* report, const char* path) {
  if (report == nullptr)
    return fail(VPFFT_ERR_CONFIG, "report summary: report is NULL");
  if (path == nullptr)
    return fail(VPFFT_ERR_CONFIG, "report summary: path is NULL");
  return guarded([&] {
    std::ostringstream text;
    switch (report->kind) {
      case vpfft_report::Kind::solve:
        vpfft::write_run_summary(text, report->run);
        break;
      case vpfft_report::Kind::compare:
        vpfft::write_compare_summary(text, report->cmp);
        break;
      case vpfft_report::Kind::verify:
        write_verify_summary(text, report->checks);
        break;
    }
    write_text_file(path, text.str());
  });
}

int vpfft_report_stat(const vpfft_report* report, const char* name,
                      double* value) {
  if (report == nullptr)
    return fail(VPFFT_ERR_CONFIG, "report stat: report is NULL");
  if (name == nullptr)
    return fail(VPFFT_ERR_CONFIG, "report stat: name is NULL");
  if (value == nullptr)
    return fail(VPFFT_ERR_CONFIG, "report stat: value is NULL");
  *value = 0.0;
  const int status = stat_lookup(report, name, value);
  if (status == VPFFT_OK) t_last_error.clear();
  return status;
}

void vpfft_report_free(vpfft_report* report) { delete report; }

}  // extern "C"
