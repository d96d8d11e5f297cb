// Copyright (c) 2026 the vpfft authors
// SPDX-License-Identifier: Apache-2.0
//
#ifndef VPFFT_MATERIAL_HPP
#define VPFFT_MATERIAL_HPP

#include <string>

#include "tensor.hpp"

namespace vpfft {

// Small-strain isotropic visco-plasticity with a Norton (power-law) overstress
// rate gdot = gamma0_dot * (sig_eq / sig_s)^(1/m) flowing along the von Mises
// direction N = 3/2 * dev(sigma) / sig_eq, and linear hardening of the flow
// stress sig_s = sigma0 + h * gamma.  Time integration is either backward
// Euler (radial return, scalar solve) or the generalized trapezoidal family
// parameterized by theta in [0, 1].

struct MaterialParams {
  double E;           //!< Young's modulus
  double nu;          //!< Poisson ratio
  double K;           //!< bulk modulus (derived)
  double G;           //!< shear modulus (derived)
  double gamma0_dot;  //!< reference slip rate
  double m;           //!< rate sensitivity exponent (0 < m <= 1)
  double sigma0;      //!< initial flow stress
  double h;           //!< linear hardening modulus (any sign)
  double rate_cap;    //!< cap on (sig_eq/sig_s)^(1/m), in multiples of gamma0_dot

  //! Validates and derives K, G. Throws ConfigError on invalid input.
  static MaterialParams make(double E, double nu, double gamma0_dot, double m,
                             double sigma0, double h, double rate_cap = 1.0e30);
};

//! Converged per-point state at time t, plus the cached flow quantities the
//! improved initial guess and the reference-state tangent need.
struct PointState {
  SymTensor2 eps_p;              //!< plastic strain (deviatoric)
  double gamma = 0.0;            //!< accumulated slip
  double gamma_dot = 0.0;        //!< slip rate at the converged state
  SymTensor2 N;                  //!< flow direction at the converged state
  double kappa = 1.0;            //!< rate-correction factor at the converged state
  double delta_gamma_prev = 0.0; //!< slip increment of the step that produced this state
};

struct TrialState {
  SymTensor2 sigma;    //!< elastic predictor stress
  double sigma_eq;     //!< its equivalent stress
  SymTensor2 N;        //!< trial flow direction (zero when sigma_eq == 0)
};

//! Outcome of one constitutive update over [t, t+dt].
struct UpdateResult {
  SymTensor2 sigma;        //!< stress at t+dt
  PointState state;        //!< candidate converged state at t+dt
  double delta_gamma;      //!< slip increment
  double sigma_eq;         //!< equivalent stress at t+dt
  double sigma_eq_trial;   //!< trial equivalent stress
  double sigma_s;          //!< flow stress at t+dt
  int iterations;          //!< local Newton iterations spent
};

//! Everything the consistent-tangent formulas need about a reference solution.
struct TangentRef {
  double sigma_eq;
  double sigma_eq_trial;
  double sigma_s;
  double delta_gamma;
  SymTensor2 N;        //!< flow direction at the reference solution
  SymTensor2 N_theta;  //!< theta-weighted direction of the step that produced it
};

// --- elasticity ------------------------------------------------------------

//! Isotropic stiffness C_e = K II + 2G Id.
SymTensor4 elastic_tangent(const MaterialParams& p);

//! sigma = C_e : eps_e, evaluated directly (no 6x6 product).
SymTensor2 hooke(const MaterialParams& p, const SymTensor2& eps_e);

// --- scalar laws -----------------------------------------------------------

//! Flow stress sigma0 + h*gamma. Throws NonPositiveYieldError when <= 0.
double yield_stress(const MaterialParams& p, double gamma);

//! Norton rate gamma0_dot * (sig_eq/sig_s)^(1/m).
//! Throws RateOverflowError when the power factor exceeds p.rate_cap and
//! NonPositiveYieldError when sig_s <= 0.
double norton_rate(const MaterialParams& p, double sig_eq, double sig_s);

//! alpha = gamma0_dot * G * dt / (m * sig_s) * (sig_eq/sig_s)^(1/m - 1);
//! the dimensionless linearization weight of the rate law.
double alpha_scalar(const MaterialParams& p, double sig_eq, double sig_s, double dt);

//! kappa = 1 / (1 + chi * theta * alpha) with chi = sig_eq * h / (sig_s * G).
double kappa_scalar(const MaterialParams& p, double sig_eq, double sig_s,
                    double dt, double theta);

// --- constitutive updates ---------------------------------------------------

TrialState trial_state(const MaterialParams& p, const PointState& state_t,
                       const SymTensor2& eps_total);

//! Backward-Euler radial return (theta = 1). Scalar safeguarded Newton on the
//! slip increment; tolerance |r| <= 1e-12 * max(dgam, dt*gamma0_dot), at most
//! 50 iterations (NoConvergenceError beyond that).
UpdateResult be_return_map(const MaterialParams& p, const PointState& state_t,
                           const SymTensor2& eps_total, double dt);

//! Generalized trapezoidal update, theta in [0, 1]. theta = 0 is the explicit
//! update (no iterations); theta > 0 solves the coupled 7-unknown system in
//! (eps_e, dgam) by a damped Newton with the exact Jacobian. theta = 1
//! reproduces the backward-Euler solution (through its own path, which the
//! degeneration checks rely on).
UpdateResult trapz_return_map(const MaterialParams& p, const PointState& state_t,
                              const SymTensor2& eps_total, double dt, double theta);

// --- consistent tangents ----------------------------------------------------

//! Reference bundle at the solution of an update that started from state_t.
TangentRef make_tangent_ref(const PointState& state_t, const UpdateResult& r,
                            double theta);

//! Algorithmically consistent tangent of the backward-Euler update:
//!   C = C_e - 2G beta N(x)N - dgam 4G^2 / sig_eq_trial * (3/2 Id - N(x)N)
//! with beta = 2 alpha / (1 + 3 alpha + chi alpha).
SymTensor4 be_tangent(const MaterialParams& p, const TangentRef& ref, double dt);

//! Consistent tangent of the generalized trapezoidal update:
//!   C = C_e - 2G theta beta (P~^-1 : N_theta)(x)N
//!       - dgam 4G^2 theta / sig_eq * P~^-1 : (3/2 Id - N(x)N)
//! where P~ = (1 + 3G theta dgam / sig_eq) Id - (2G theta dgam / sig_eq) N(x)N
//! completed with II/3 on the volumetric axis so it is invertible (the raw
//! operator is rank-deficient there; the completion does not change the
//! tangent because P~^-1 only ever acts on deviatoric operands), and
//! beta = 2 alpha / (1 + 2 alpha theta (N_theta : N) + chi theta alpha).
//! Non-symmetric in general for theta < 1 when N_theta is not parallel to N.
SymTensor4 trapz_tangent(const MaterialParams& p, const TangentRef& ref,
                         double dt, double theta);

//! The initial-guess correction dt * gamma_dot^t * kappa^t * N^t that turns
//! the classical elastic predictor into the improved one (it estimates the
//! plastic strain the increment will accumulate, so the iteration-0 linear
//! solve works on the elastic part of the load increment only).
SymTensor2 improved_guess_correction(const PointState& state_t, double dt);

// --- scheme dispatch ----------------------------------------------------------

//! Time integration scheme of the constitutive update.
enum class Scheme { backward_euler, trapezoidal };

//! Runs the update of the selected scheme (theta is ignored for backward
//! Euler).
UpdateResult update_point(const MaterialParams& p, const PointState& state_t,
                          const SymTensor2& eps_total, double dt,
                          Scheme scheme, double theta);

//! Consistent tangent of the selected scheme at a reference solution.
SymTensor4 point_tangent(const MaterialParams& p, const TangentRef& ref,
                         double dt, Scheme scheme, double theta);

}  // namespace vpfft

#endif  // VPFFT_MATERIAL_HPP
