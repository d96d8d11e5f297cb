// Copyright (c) 2026 the vpfft authors
// SPDX-License-Identifier: Apache-2.0
//
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "verify.hpp"
#include "vpfft_errors.hpp"

using namespace vpfft;

namespace {

MaterialParams ferrite(double h = 940.0e6) {
  return MaterialParams::make(206.824e9, 0.3, 1.0e-3, 0.05, 425.0e6, h);
}

// Local central-difference tangent, written independently of the library's
// fd_tangent_check so the two can be compared on identical probes.
double local_fd_error(const MaterialParams& p, const PointState& st,
                      const SymTensor2& eps, double dt) {
  const UpdateResult r0 = be_return_map(p, st, eps, dt);
  const SymTensor4 C = be_tangent(p, make_tangent_ref(st, r0, 1.0), dt);
  const double step = 1.0e-7;
  Mat6 C_fd;
  for (int j = 0; j < 6; ++j) {
    SymTensor2 ep = eps, em = eps;
    ep[j] += step;
    em[j] -= step;
    C_fd.col(j) = (be_return_map(p, st, ep, dt).sigma.mandel() -
                   be_return_map(p, st, em, dt).sigma.mandel()) /
                  (2.0 * step);
  }
  return (C_fd - C.mandel()).cwiseAbs().maxCoeff() / C.mandel().norm();
}

}  // namespace

TEST_CASE("point driver validates its configuration") {
  const MaterialParams p = ferrite();
  const SymTensor2 dev_dir = SymTensor2::diagonal(1.0, -0.5, -0.5);
  CHECK_THROWS_AS(PointDriver(p, StandardTensors::I(), 1e-3, 1.0, 10),
                  ConfigError);  // purely volumetric path has no eq. strain
  CHECK_THROWS_AS(PointDriver(p, dev_dir, -1e-3, 1.0, 10), ConfigError);
  CHECK_THROWS_AS(PointDriver(p, dev_dir, 1e-3, 0.0, 10), ConfigError);
  CHECK_THROWS_AS(PointDriver(p, dev_dir, 1e-3, 1.0, 0), ConfigError);
  CHECK_THROWS_AS(
      PointDriver(p, dev_dir, 1e-3, 1.0, 10, Scheme::trapezoidal, 1.5),
      ConfigError);
}

TEST_CASE("point driver normalizes the direction to the prescribed rate") {
  const MaterialParams p = ferrite();

  // Deep in the elastic range sigma_eq == 3 G eps_eq, independent of the
  // direction normalization or any volumetric admixture.
  const double rate = 1.0e-5;  // peak ratio ~ 0.17 of yield: elastic
  PointDriver plain(p, SymTensor2::diagonal(4.0, -2.0, -2.0), rate, 30.0, 12);
  PointDriver mixed(p,
                    SymTensor2::diagonal(4.0, -2.0, -2.0) +
                        StandardTensors::I() * 1.7,
                    rate, 30.0, 12);
  const auto ra = plain.run();
  const auto rb = mixed.run();
  REQUIRE(ra.size() == 12);
  for (std::size_t k = 0; k < ra.size(); ++k) {
    CHECK(ra[k].eps_eq == doctest::Approx(rate * ra[k].time_s).epsilon(1e-14));
    CHECK(ra[k].sigma_eq ==
          doctest::Approx(3.0 * p.G * ra[k].eps_eq).epsilon(1e-9));
    CHECK(rb[k].sigma_eq == doctest::Approx(ra[k].sigma_eq).epsilon(1e-12));
  }
}

TEST_CASE("admissible-state sampler honors its documented ranges") {
  std::mt19937 rng(7);
  const MaterialParams p = ferrite();
  for (int i = 0; i < 200; ++i) {
    const StateSample s = random_admissible_state(rng, p, false);
    CHECK(s.state.gamma >= 0.0);
    CHECK(s.state.gamma <= 0.1);
    CHECK(s.state.N.contract(s.state.N) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(s.state.gamma_dot >= 0.0);
    CHECK(s.dt * p.gamma0_dot >= 1.0e-6 * (1.0 - 1e-12));
    CHECK(s.dt * p.gamma0_dot <= 1.0e-3 * (1.0 + 1e-12));
    const TrialState tr = trial_state(p, s.state, s.eps);
    const double ratio = tr.sigma_eq / yield_stress(p, s.state.gamma);
    CHECK(ratio >= 0.2 * (1.0 - 1e-9));
    CHECK(ratio <= 1.5 * (1.0 + 1e-9));
  }
}

TEST_CASE("fd_tangent_check agrees with an independent implementation") {
  std::mt19937 rng(21);
  const MaterialParams p = ferrite();
  for (int i = 0; i < 10; ++i) {
    const StateSample s = random_admissible_state(rng, p, false);
    const double lib =
        fd_tangent_check(p, s.state, s.eps, s.dt, Scheme::backward_euler, 1.0);
    const double local = local_fd_error(p, s.state, s.eps, s.dt);
    CHECK(lib == doctest::Approx(local).epsilon(1e-9));
  }
}

TEST_CASE("fd_tangent_check bounds") {
  std::mt19937 rng(22);

  SUBCASE("elastic probe reproduces the elastic tangent") {
    const MaterialParams p = ferrite();
    const SymTensor2 eps =
        random_flow_direction(rng) * (0.2 * p.sigma0 / (3.0 * p.G));
    CHECK(fd_tangent_check(p, PointState{}, eps, 0.05,
                           Scheme::backward_euler, 1.0) <= 1.0e-9);
  }

  SUBCASE("random plastic states, backward Euler") {
    const MaterialParams cases[] = {ferrite(), ferrite(0.0), ferrite(-940.0e6)};
    double worst = 0.0;
    for (int i = 0; i < 40; ++i) {
      const MaterialParams& p = cases[i % 3];
      const StateSample s = random_admissible_state(rng, p, false);
      worst = std::max(worst, fd_tangent_check(p, s.state, s.eps, s.dt,
                                               Scheme::backward_euler, 1.0));
    }
    CHECK(worst <= 1.0e-5);
  }

  SUBCASE("random plastic states, trapezoidal theta = 0.5") {
    const MaterialParams p = ferrite();
    double worst = 0.0;
    for (int i = 0; i < 40; ++i) {
      const StateSample s = random_admissible_state(rng, p, true);
      worst = std::max(worst, fd_tangent_check(p, s.state, s.eps, s.dt,
                                               Scheme::trapezoidal, 0.5));
    }
    CHECK(worst <= 1.0e-5);
  }
}

TEST_CASE("steady-state plateaus match the analytic inversion") {
  // Frozen closed forms: 10^m for the three rate sensitivities.
  const double plateau_005 = 1.1220184543019633;
  const double plateau_010 = 1.2589254117941673;
  const double plateau_030 = 1.9952623149688795;

  const auto perfect = [](double m) {
    return MaterialParams::make(206.824e9, 0.3, 1.0e-3, m, 425.0e6, 0.0);
  };

  const PlateauPair a = steady_state_check(perfect(0.05), 10.0);
  CHECK(a.analytic == doctest::Approx(plateau_005).epsilon(1e-12));
  CHECK(a.simulated == doctest::Approx(plateau_005).epsilon(5e-3));

  const PlateauPair b = steady_state_check(perfect(0.1), 10.0);
  CHECK(b.analytic == doctest::Approx(plateau_010).epsilon(1e-12));
  CHECK(b.simulated == doctest::Approx(plateau_010).epsilon(5e-3));

  const PlateauPair c = steady_state_check(perfect(0.3), 10.0);
  CHECK(c.analytic == doctest::Approx(plateau_030).epsilon(1e-12));
  CHECK(c.simulated == doctest::Approx(plateau_030).epsilon(5e-3));

  SUBCASE("rate ratio 1 pins the plateau at sigma_s for any m") {
    const PlateauPair u = steady_state_check(perfect(0.05), 1.0);
    CHECK(std::abs(u.simulated - 1.0) <= 1.0e-6);
    const PlateauPair v = steady_state_check(perfect(0.3), 1.0);
    CHECK(std::abs(v.simulated - 1.0) <= 1.0e-6);
  }

  SUBCASE("the steady state does not depend on the integration scheme") {
    const PlateauPair tz =
        steady_state_check(perfect(0.05), 10.0, Scheme::trapezoidal, 0.5);
    CHECK(tz.simulated == doctest::Approx(plateau_005).epsilon(5e-3));
  }

  SUBCASE("hardening material is rejected") {
    CHECK_THROWS_AS(steady_state_check(ferrite(), 10.0), ConfigError);
  }
}

TEST_CASE("theta degeneration and scalar identity stay within bounds") {
  CHECK(theta_degeneration_check(ferrite(), 33, 50) <= 1.0e-9);
  CHECK(theta_degeneration_check(ferrite(-940.0e6), 34, 50) <= 1.0e-9);
  CHECK(tangent_identity_check(ferrite(), 35, 200) <= 1.0e-12);
}

TEST_CASE("hardening slope sits at the analytic h/(1 + h/3G)") {
  // deviation from h is h/3G/(1 + h/3G) ~ 0.4%: well inside the 5% bound,
  // and the measured value must sit near that analytic deviation.
  const double dev = hardening_slope_check(ferrite());
  CHECK(dev <= 0.01);
  CHECK(dev >= 1.0e-4);
  CHECK_THROWS_AS(hardening_slope_check(ferrite(0.0)), ConfigError);
}

TEST_CASE("oracle suite passes and serializes") {
  const std::vector<CheckResult> results = run_oracle_suite();
  REQUIRE(!results.empty());
  CHECK(all_pass(results));
  for (const CheckResult& r : results) {
    CHECK(r.bound > 0.0);
    CHECK(r.pass == (r.observed <= r.bound));
  }

  std::ostringstream os;
  write_check_csv(results, os);
  std::istringstream is(os.str());
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "check,observed,bound,pass,detail");
  std::size_t rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == results.size());
}
