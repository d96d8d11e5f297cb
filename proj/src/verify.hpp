// Copyright (c) 2026 the vpfft authors
// SPDX-License-Identifier: Apache-2.0
//
// Self-contained oracles for the constitutive layer: a strain-driven single
// material point, finite-difference tangent probes, analytic steady-state
// plateau checks, and the theta = 1 degeneration comparison. The CLI exposes
// the whole collection as the `verify` subcommand.
#ifndef VPFFT_VERIFY_HPP
#define VPFFT_VERIFY_HPP

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "material.hpp"

namespace vpfft {

//! Outcome of one oracle: a worst-case observation against its bound.
struct CheckResult {
  std::string name;
  double observed = 0.0;  //!< measured quantity (max error, deviation, ...)
  double bound = 0.0;     //!< pass iff observed <= bound
  bool pass = false;
  std::string detail;     //!< parameters and counts behind the number
};

//! One committed step of a PointDriver run.
struct PointRecord {
  double time_s = 0.0;      //!< time at the end of the step
  double eps_eq = 0.0;      //!< applied equivalent strain
  double sigma_eq = 0.0;    //!< equivalent stress
  double sigma_s = 0.0;     //!< flow stress
  double gamma = 0.0;       //!< accumulated slip
  double gamma_dot = 0.0;   //!< slip rate
  int iterations = 0;       //!< local Newton iterations of the update
};

//! Strain-driven single material point: the total strain follows a fixed
//! direction at a prescribed equivalent-strain rate, and the state is
//! committed after every step. The direction is normalized on construction so
//! that the equivalent strain grows exactly at `eq_rate`.
class PointDriver {
 public:
  //! Throws ConfigError when the direction has no deviatoric content or the
  //! discretization is degenerate (steps < 1, rate/duration not positive).
  PointDriver(const MaterialParams& p, const SymTensor2& direction,
              double eq_rate, double duration, int steps,
              Scheme scheme = Scheme::backward_euler, double theta = 1.0);

  //! Runs the full path from the current state; one record per step.
  std::vector<PointRecord> run();

  const PointState& state() const { return state_; }

 private:
  MaterialParams p_;
  SymTensor2 dir_;  //!< normalized: equivalent_strain(dir_) == 1
  double rate_;
  double duration_;
  int steps_;
  Scheme scheme_;
  double theta_;
  PointState state_;
};

// --- random admissible states -------------------------------------------------

//! A reference state with a strain probe and step size, as drawn by
//! random_admissible_state.
struct StateSample {
  PointState state;
  SymTensor2 eps;
  double dt;
};

//! Uniformly random deviatoric direction scaled to norm sqrt(3/2), the norm
//! of a von Mises flow direction.
SymTensor2 random_flow_direction(std::mt19937& rng);

//! Draws a converged-looking reference state plus a strain probe spanning the
//! elastic through plastic regimes: trial overstress ratio in [0.2, 1.5],
//! gamma in [0, 0.1], dt * gamma0_dot in [1e-6, 1e-3].
//!
//! With `coherent`, the stored flow direction correlates with the probe
//! direction and the inherited flow dt * gamma_dot is capped well below the
//! stress the probe can relax, the way consecutive states along an actual
//! loading trajectory behave. The theta-averaged flow rule is only guaranteed
//! a root on such states; incoherent draws may legitimately make a theta < 1
//! update throw.
StateSample random_admissible_state(std::mt19937& rng, const MaterialParams& p,
                                    bool coherent);

// --- oracles -------------------------------------------------------------------

//! Central finite differences of the stress update over the 6 strain
//! components (step 1e-7 on the normalized strain) against the analytic
//! consistent tangent; returns max over components of
//! |C_fd - C| / ||C||. Propagates return-map failures.
double fd_tangent_check(const MaterialParams& p, const PointState& state,
                        const SymTensor2& eps, double dt, Scheme scheme,
                        double theta);

//! Simulated vs analytic steady-state plateau.
struct PlateauPair {
  double simulated;  //!< sig_eq / sig_s at the end of the drive
  double analytic;   //!< rate_ratio^m
};

//! Drives a perfectly plastic point (h must be 0, else ConfigError) at an
//! equivalent strain rate of rate_ratio * gamma0_dot until the plastic rate
//! matches the applied rate within 1e-6 relative (SolverError when the drive
//! never gets there), and returns the simulated plateau sig_eq / sig_s next
//! to the analytic value rate_ratio^m.
PlateauPair steady_state_check(const MaterialParams& p, double rate_ratio,
                               Scheme scheme = Scheme::backward_euler,
                               double theta = 1.0);

//! Max relative deviation between trapezoidal(theta = 1) and backward-Euler
//! outputs (stress, new state, tangent) over `n_states` random admissible
//! states drawn from `seed`.
double theta_degeneration_check(const MaterialParams& p, std::uint32_t seed,
                                int n_states);

//! Max relative residual of the scalar identity
//!   G beta / alpha == kappa (2G - 3G beta)
//! over `n_states` random reference scalars drawn from `seed`. Both sides are
//! evaluated in extended precision from the double-precision scalars (the
//! naive right-hand side cancels catastrophically for stiff states).
double tangent_identity_check(const MaterialParams& p, std::uint32_t seed,
                              int n_states);

//! Relative deviation |secant / h - 1| of the plastic secant slope of a
//! hardening single-point curve, measured between equivalent strains 0.02 and
//! 0.04 at an applied rate equal to gamma0_dot (where the viscous factor is
//! exactly 1 and the analytic slope is h / (1 + h / 3G), within 5% of h for
//! the dual-phase parameter ranges).
double hardening_slope_check(const MaterialParams& p);

// --- suite ----------------------------------------------------------------------

//! Runs every oracle with fixed seeds and the dual-phase parameter sets;
//! returns one result per check.
std::vector<CheckResult> run_oracle_suite();

bool all_pass(const std::vector<CheckResult>& results);

//! CSV with header "check,observed,bound,pass,detail".
void write_check_csv(const std::vector<CheckResult>& results, std::ostream& os);

}  // namespace vpfft

#endif  // VPFFT_VERIFY_HPP
