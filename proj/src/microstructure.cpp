// Copyright (c) 2026 the vpfft authors
// SPDX-License-Identifier: Apache-2.0
//
#include "microstructure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "vpfft_errors.hpp"

namespace vpfft {

namespace {

void check_dims(int nx, int ny) {
  if (nx < 1 || ny < 1)
    throw IoError("grid header: dimensions must be at least 1x1, got " +
                  std::to_string(nx) + "x" + std::to_string(ny));
}

PhaseGrid load_ascii_grid(std::istream& in) {
  int nx = 0, ny = 0;
  if (!(in >> nx >> ny))
    throw IoError("ascii-grid: malformed header (expected \"nx ny\")");
  check_dims(nx, ny);

  PhaseGrid g;
  g.nx = nx;
  g.ny = ny;
  g.phases.resize(static_cast<std::size_t>(nx) * ny);
  for (std::size_t i = 0; i < g.phases.size(); ++i) {
    int v = -1;
    if (!(in >> v))
      throw IoError("ascii-grid: expected " + std::to_string(g.phases.size()) +
                    " phase values, stream ended after " + std::to_string(i));
    if (v < 0 || v > 255)
      throw IoError("ascii-grid: phase id " + std::to_string(v) +
                    " outside [0, 255]");
    g.phases[i] = static_cast<std::uint8_t>(v);
  }
  // Only whitespace may remain: anything else is a dimension mismatch.
  char c;
  if (in >> c)
    throw IoError("ascii-grid: trailing data after the declared nx*ny values");
  return g;
}

//! Next header token of a PGM stream, skipping whitespace and '#' comments.
std::string pgm_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

int pgm_int(std::istream& in, const char* what) {
  const std::string tok = pgm_token(in);
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size() || v < 0) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw IoError(std::string("pgm: malformed header (bad ") + what + " \"" +
                  tok + "\")");
  }
}

PhaseGrid load_pgm(std::istream& in) {
  const std::string magic = pgm_token(in);
  if (magic != "P2" && magic != "P5")
    throw IoError("pgm: malformed header (magic \"" + magic +
                  "\", need P2 or P5)");
  const int nx = pgm_int(in, "width");
  const int ny = pgm_int(in, "height");
  check_dims(nx, ny);
  const int maxval = pgm_int(in, "maxval");
  if (maxval < 1 || maxval > 255)
    throw IoError("pgm: unsupported maxval " + std::to_string(maxval) +
                  " (need 1..255, single-byte samples)");

  PhaseGrid g;
  g.nx = nx;
  g.ny = ny;
  g.phases.resize(static_cast<std::size_t>(nx) * ny);

  if (magic == "P2") {
    for (std::size_t i = 0; i < g.phases.size(); ++i) {
      int v = -1;
      if (!(in >> v))
        throw IoError("pgm: expected " + std::to_string(g.phases.size()) +
                      " samples, stream ended after " + std::to_string(i));
      if (v < 0 || v > maxval)
        throw IoError("pgm: sample " + std::to_string(v) +
                      " outside [0, maxval]");
      g.phases[i] = v >= 128 ? 1 : 0;
    }
  } else {
    // The single whitespace byte separating header and raster was already
    // consumed as the maxval token's delimiter; the raster starts here.
    std::vector<char> raw(g.phases.size());
    in.read(raw.data(), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size()))
      throw IoError("pgm: raster truncated (" + std::to_string(in.gcount()) +
                    " of " + std::to_string(raw.size()) + " bytes)");
    for (std::size_t i = 0; i < raw.size(); ++i)
      g.phases[i] = static_cast<unsigned char>(raw[i]) >= 128 ? 1 : 0;
  }
  return g;
}

}  // namespace

double PhaseGrid::phase_fraction(int phase) const {
  const auto count = std::count(phases.begin(), phases.end(),
                                static_cast<std::uint8_t>(phase));
  return static_cast<double>(count) / (static_cast<double>(nx) * ny);
}

PhaseGrid load_grid(std::istream& in, GridFormat format) {
  return format == GridFormat::ascii_grid ? load_ascii_grid(in) : load_pgm(in);
}

PhaseGrid load_grid_file(const std::string& path, GridFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open microstructure file: " + path);
  return load_grid(in, format);
}

void save_grid(const PhaseGrid& grid, std::ostream& out) {
  out << grid.nx << ' ' << grid.ny << '\n';
  for (int y = 0; y < grid.ny; ++y) {
    for (int x = 0; x < grid.nx; ++x) {
      if (x) out << ' ';
      out << grid.at(x, y);
    }
    out << '\n';
  }
}

void save_grid_file(const PhaseGrid& grid, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + path);
  save_grid(grid, out);
  out.flush();
  if (!out) throw IoError("failed writing microstructure file: " + path);
}

PhaseGrid synth_inclusion(int nx, int ny, double volume_fraction,
                          InclusionShape shape) {
  if (nx < 1 || ny < 1)
    throw ConfigError("synth_inclusion: dimensions must be at least 1x1");
  if (!(volume_fraction >= 0.0 && volume_fraction <= 1.0))
    throw ConfigError("synth_inclusion: volume fraction must lie in [0, 1]");

  PhaseGrid g;
  g.nx = nx;
  g.ny = ny;
  g.phases.assign(static_cast<std::size_t>(nx) * ny, 0);

  const auto target = static_cast<std::size_t>(
      std::lround(volume_fraction * static_cast<double>(nx) * ny));
  if (target == 0) return g;

  const double cx = 0.5 * (nx - 1);
  const double cy = 0.5 * (ny - 1);
  struct Entry {
    double metric;
    int y, x;
  };
  std::vector<Entry> order;
  order.reserve(g.phases.size());
  for (int y = 0; y < ny; ++y)
    for (int x = 0; x < nx; ++x) {
      const double dx = x - cx;
      const double dy = y - cy;
      const double metric = shape == InclusionShape::disc
                                ? dx * dx + dy * dy
                                : std::max(std::abs(dx), std::abs(dy));
      order.push_back({metric, y, x});
    }
  std::sort(order.begin(), order.end(), [](const Entry& a, const Entry& b) {
    if (a.metric != b.metric) return a.metric < b.metric;
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
  });
  for (std::size_t i = 0; i < target; ++i)
    g.phases[static_cast<std::size_t>(order[i].y) * nx + order[i].x] = 1;
  return g;
}

PhaseGrid crop_grid(const PhaseGrid& grid, int x0, int y0, int w, int h) {
  if (w < 1 || h < 1 || x0 < 0 || y0 < 0 || x0 + w > grid.nx ||
      y0 + h > grid.ny)
    throw ConfigError("crop_grid: window [" + std::to_string(x0) + "," +
                      std::to_string(y0) + "]+" + std::to_string(w) + "x" +
                      std::to_string(h) + " outside " +
                      std::to_string(grid.nx) + "x" + std::to_string(grid.ny));
  PhaseGrid out;
  out.nx = w;
  out.ny = h;
  out.phases.resize(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      out.phases[static_cast<std::size_t>(y) * w + x] =
          static_cast<std::uint8_t>(grid.at(x0 + x, y0 + y));
  return out;
}

void PhaseCatalog::add(int id, const MaterialParams& params,
                       std::string label) {
  entries_[id] = PhaseInfo{params, std::move(label)};
}

const MaterialParams& PhaseCatalog::params(int id) const {
  const auto it = entries_.find(id);
  if (it == entries_.end())
    throw ConfigError("phase catalog has no entry for id " +
                      std::to_string(id));
  return it->second.params;
}

const std::string& PhaseCatalog::label(int id) const {
  const auto it = entries_.find(id);
  if (it == entries_.end())
    throw ConfigError("phase catalog has no entry for id " +
                      std::to_string(id));
  return it->second.label;
}

void validate_catalog(const PhaseGrid& grid, const PhaseCatalog& catalog) {
  for (std::size_t i = 0; i < grid.phases.size(); ++i)
    if (!catalog.has(grid.phases[i]))
      throw ConfigError(
          "microstructure uses phase id " + std::to_string(grid.phases[i]) +
          " which has no catalog entry (pixel " + std::to_string(i) + ")");
}

}  // namespace vpfft
