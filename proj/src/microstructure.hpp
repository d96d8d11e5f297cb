// Copyright (c) 2026 the vpfft authors
// SPDX-License-Identifier: Apache-2.0
//
// Pixel microstructures: binary phase grids loaded from ascii-grid or PGM
// images, synthetic inclusions for desk-scale runs, and the catalog mapping
// phase ids to material parameters.
#ifndef VPFFT_MICROSTRUCTURE_HPP
#define VPFFT_MICROSTRUCTURE_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "material.hpp"

namespace vpfft {

//! Periodic pixel grid of phase ids, row-major with y as the slow index and
//! the origin at the top-left (image convention).
struct PhaseGrid {
  int nx = 0;
  int ny = 0;
  std::vector<std::uint8_t> phases;

  std::size_t size() const { return phases.size(); }
  int at(int x, int y) const {
    return phases[static_cast<std::size_t>(y) * nx + x];
  }
  //! Exact count(phase) / (nx * ny).
  double phase_fraction(int phase) const;
};

enum class GridFormat { ascii_grid, pgm };
enum class InclusionShape { disc, square };

//! Reads a grid in the declared format.
//!
//! ascii-grid: first line "nx ny", then ny lines of nx integers in [0, 255].
//! pgm: P2 (ascii) or P5 (binary, 8-bit) with '#' comments in the header;
//! pixel values >= 128 map to phase 1 (bright = inclusion), the rest to 0.
//! Throws IoError on malformed headers, dimension mismatches, or out-of-range
//! values.
PhaseGrid load_grid(std::istream& in, GridFormat format);
PhaseGrid load_grid_file(const std::string& path, GridFormat format);

//! Writes the ascii-grid form; load_grid(save_grid(g)) == g.
void save_grid(const PhaseGrid& grid, std::ostream& out);
void save_grid_file(const PhaseGrid& grid, const std::string& path);

//! Centered inclusion of phase 1 in a phase-0 matrix whose pixel count is the
//! closest achievable to volume_fraction * nx * ny. Pixels enter the
//! inclusion sorted by distance from the grid center (Euclidean for disc,
//! Chebyshev for square) with a fixed tie order, so the result is
//! deterministic. Throws ConfigError for an empty grid or a fraction outside
//! [0, 1].
PhaseGrid synth_inclusion(int nx, int ny, double volume_fraction,
                          InclusionShape shape);

//! Rectangular crop [x0, x0+w) x [y0, y0+h); ConfigError when out of range.
PhaseGrid crop_grid(const PhaseGrid& grid, int x0, int y0, int w, int h);

//! Phase id -> material parameters and a human-readable label.
class PhaseCatalog {
 public:
  void add(int id, const MaterialParams& params, std::string label);
  bool has(int id) const { return entries_.count(id) != 0; }
  std::size_t size() const { return entries_.size(); }
  //! ConfigError for an id without an entry.
  const MaterialParams& params(int id) const;
  const std::string& label(int id) const;

 private:
  struct PhaseInfo {
    MaterialParams params;
    std::string label;
  };
  std::map<int, PhaseInfo> entries_;
};

//! Checks that every id appearing in the grid has a catalog entry; throws
//! ConfigError naming the first unknown id otherwise.
void validate_catalog(const PhaseGrid& grid, const PhaseCatalog& catalog);

}  // namespace vpfft

#endif  // VPFFT_MICROSTRUCTURE_HPP
