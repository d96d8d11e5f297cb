// Copyright (c) 2026 the vpfft authors
// SPDX-License-Identifier: Apache-2.0
//
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "microstructure.hpp"
#include "vpfft_errors.hpp"

using namespace vpfft;

namespace {

PhaseGrid from_ascii(const std::string& text) {
  std::istringstream in(text);
  return load_grid(in, GridFormat::ascii_grid);
}

PhaseGrid from_pgm(const std::string& bytes) {
  std::istringstream in(bytes);
  return load_grid(in, GridFormat::pgm);
}

}  // namespace

TEST_CASE("ascii-grid loading") {
  SUBCASE("1x1 single pixel") {
    const PhaseGrid g = from_ascii("1 1\n0\n");
    CHECK(g.nx == 1);
    CHECK(g.ny == 1);
    CHECK(g.at(0, 0) == 0);
  }

  SUBCASE("2x2 checkerboard") {
    const PhaseGrid g = from_ascii("2 2\n0 1\n1 0\n");
    CHECK(g.at(0, 0) == 0);
    CHECK(g.at(1, 0) == 1);
    CHECK(g.at(0, 1) == 1);
    CHECK(g.at(1, 1) == 0);
    CHECK(g.phase_fraction(1) == 0.5);
  }

  SUBCASE("row-major with y as the slow index") {
    const PhaseGrid g = from_ascii("3 2\n1 2 3\n4 5 6\n");
    CHECK(g.at(0, 0) == 1);
    CHECK(g.at(2, 0) == 3);
    CHECK(g.at(0, 1) == 4);
    CHECK(g.at(2, 1) == 6);
  }

  SUBCASE("malformed input throws") {
    CHECK_THROWS_AS(from_ascii(""), IoError);
    CHECK_THROWS_AS(from_ascii("x y\n"), IoError);
    CHECK_THROWS_AS(from_ascii("0 2\n"), IoError);
    CHECK_THROWS_AS(from_ascii("2 2\n0 1 1\n"), IoError);      // too few
    CHECK_THROWS_AS(from_ascii("2 2\n0 1 1 0 1\n"), IoError);  // too many
    CHECK_THROWS_AS(from_ascii("1 1\n-3\n"), IoError);
    CHECK_THROWS_AS(from_ascii("1 1\n300\n"), IoError);
  }
}

TEST_CASE("ascii-grid round trip") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> phase(0, 3);
  PhaseGrid g;
  g.nx = 7;
  g.ny = 5;
  g.phases.resize(35);
  for (auto& p : g.phases) p = static_cast<std::uint8_t>(phase(rng));

  std::ostringstream out;
  save_grid(g, out);
  const PhaseGrid back = from_ascii(out.str());
  CHECK(back.nx == g.nx);
  CHECK(back.ny == g.ny);
  CHECK(back.phases == g.phases);
}

TEST_CASE("pgm loading thresholds at 128") {
  SUBCASE("P2 ascii with comments") {
    const PhaseGrid g = from_pgm(
        "P2\n# a comment\n4 1\n# another\n255\n0 127 128 255\n");
    CHECK(g.nx == 4);
    CHECK(g.ny == 1);
    CHECK(g.at(0, 0) == 0);
    CHECK(g.at(1, 0) == 0);
    CHECK(g.at(2, 0) == 1);
    CHECK(g.at(3, 0) == 1);
  }

  SUBCASE("P5 binary") {
    std::string bytes = "P5 4 2 255\n";
    const unsigned char raw[8] = {0, 127, 128, 255, 200, 12, 129, 7};
    bytes.append(reinterpret_cast<const char*>(raw), 8);
    const PhaseGrid g = from_pgm(bytes);
    CHECK(g.nx == 4);
    CHECK(g.ny == 2);
    const int expect[8] = {0, 0, 1, 1, 1, 0, 1, 0};
    for (int i = 0; i < 8; ++i) CHECK(g.phases[i] == expect[i]);
  }

  SUBCASE("malformed pgm throws") {
    CHECK_THROWS_AS(from_pgm("P3\n1 1\n255\n0\n"), IoError);     // wrong magic
    CHECK_THROWS_AS(from_pgm("P5 2 2 65535\n"), IoError);        // 16-bit
    CHECK_THROWS_AS(from_pgm("P5 4 2 255\nab"), IoError);        // truncated
    CHECK_THROWS_AS(from_pgm("P2 2 1 255\n7\n"), IoError);       // too few
    CHECK_THROWS_AS(from_pgm("P2 2 1 100\n7 101\n"), IoError);   // > maxval
  }
}

TEST_CASE("synthetic inclusions") {
  SUBCASE("degenerate fractions") {
    const PhaseGrid none = synth_inclusion(8, 6, 0.0, InclusionShape::disc);
    CHECK(none.phase_fraction(0) == 1.0);
    const PhaseGrid full = synth_inclusion(8, 6, 1.0, InclusionShape::square);
    CHECK(full.phase_fraction(1) == 1.0);
  }

  SUBCASE("pixel count is the closest achievable") {
    const PhaseGrid g = synth_inclusion(31, 31, 0.17, InclusionShape::disc);
    const double f = g.phase_fraction(1);
    CHECK(std::abs(f - 0.17) <= 1.0 / 31.0);
    // the rounded target is exact: lround(0.17 * 961) = 163 pixels
    CHECK(f == 163.0 / 961.0);
    CHECK(g.at(15, 15) == 1);  // center belongs to the inclusion
    CHECK(g.at(0, 0) == 0);    // corners do not at this fraction
    CHECK(g.at(30, 30) == 0);
  }

  SUBCASE("squares come out as centered blocks") {
    // 9/25 of a 5x5 grid is exactly the centered 3x3 Chebyshev ball.
    const PhaseGrid g = synth_inclusion(5, 5, 9.0 / 25.0, InclusionShape::square);
    for (int y = 0; y < 5; ++y)
      for (int x = 0; x < 5; ++x) {
        const bool inside = x >= 1 && x <= 3 && y >= 1 && y <= 3;
        CHECK(g.at(x, y) == (inside ? 1 : 0));
      }
  }

  SUBCASE("deterministic") {
    const PhaseGrid a = synth_inclusion(31, 31, 0.17, InclusionShape::disc);
    const PhaseGrid b = synth_inclusion(31, 31, 0.17, InclusionShape::disc);
    CHECK(a.phases == b.phases);
  }

  SUBCASE("validation") {
    CHECK_THROWS_AS(synth_inclusion(0, 3, 0.1, InclusionShape::disc),
                    ConfigError);
    CHECK_THROWS_AS(synth_inclusion(3, 3, 1.5, InclusionShape::disc),
                    ConfigError);
    CHECK_THROWS_AS(synth_inclusion(3, 3, -0.1, InclusionShape::disc),
                    ConfigError);
  }
}

TEST_CASE("crops") {
  const PhaseGrid g = from_ascii("4 3\n0 1 2 3\n4 5 6 7\n8 9 10 11\n");
  const PhaseGrid c = crop_grid(g, 1, 1, 2, 2);
  CHECK(c.nx == 2);
  CHECK(c.ny == 2);
  CHECK(c.at(0, 0) == 5);
  CHECK(c.at(1, 0) == 6);
  CHECK(c.at(0, 1) == 9);
  CHECK(c.at(1, 1) == 10);
  CHECK_THROWS_AS(crop_grid(g, 3, 0, 2, 2), ConfigError);
  CHECK_THROWS_AS(crop_grid(g, 0, 0, 5, 1), ConfigError);
  CHECK_THROWS_AS(crop_grid(g, -1, 0, 2, 2), ConfigError);
}

TEST_CASE("phase catalog") {
  PhaseCatalog cat;
  cat.add(0, MaterialParams::make(206.824e9, 0.3, 1e-3, 0.05, 425.0e6, 940.0e6),
          "ferrite");
  cat.add(1,
          MaterialParams::make(206.824e9, 0.3, 1e-3, 0.05, 1180.0e6, 1740.0e6),
          "martensite");
  CHECK(cat.size() == 2);
  CHECK(cat.has(1));
  CHECK(!cat.has(2));
  CHECK(cat.label(0) == "ferrite");
  CHECK(cat.params(1).sigma0 == 1180.0e6);
  CHECK_THROWS_AS(cat.params(7), ConfigError);

  const PhaseGrid ok = from_ascii("2 1\n0 1\n");
  CHECK_NOTHROW(validate_catalog(ok, cat));
  const PhaseGrid bad = from_ascii("2 1\n0 2\n");
  CHECK_THROWS_AS(validate_catalog(bad, cat), ConfigError);
}
