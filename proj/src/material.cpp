// Copyright (c) 2026 the vpfft authors
// SPDX-License-Identifier: Apache-2.0
//
#include "material.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace vpfft {

namespace {

constexpr double kScalarTol = 1.0e-12;
constexpr int kScalarMaxIter = 50;

//! Flow stress without the positivity throw; callers inspect the sign.
inline double yield_stress_raw(const MaterialParams& p, double gamma) {
  return p.sigma0 + p.h * gamma;
}

//! Norton rate with no cap/throw; may return +inf on extreme overstress.
//! Used inside residual evaluations where the safeguards of the enclosing
//! Newton loop absorb non-finite values.
inline double norton_rate_raw(const MaterialParams& p, double sig_eq, double sig_s) {
  if (sig_eq <= 0.0) return 0.0;
  return p.gamma0_dot * std::pow(sig_eq / sig_s, 1.0 / p.m);
}

}  // namespace

MaterialParams MaterialParams::make(double E, double nu, double gamma0_dot,
                                    double m, double sigma0, double h,
                                    double rate_cap) {
  std::ostringstream bad;
  if (!(E > 0.0)) bad << "E must be positive (got " << E << "); ";
  if (!(nu > -1.0 && nu < 0.5)) bad << "nu must lie in (-1, 0.5) (got " << nu << "); ";
  if (!(gamma0_dot > 0.0)) bad << "gamma0_dot must be positive (got " << gamma0_dot << "); ";
  if (!(m > 0.0 && m <= 1.0)) bad << "m must lie in (0, 1] (got " << m << "); ";
  if (!(sigma0 > 0.0)) bad << "sigma0 must be positive (got " << sigma0 << "); ";
  if (!std::isfinite(h)) bad << "h must be finite; ";
  if (!(rate_cap > 1.0)) bad << "rate_cap must exceed 1 (got " << rate_cap << "); ";
  const std::string msg = bad.str();
  if (!msg.empty()) throw ConfigError("MaterialParams: " + msg);

  MaterialParams p;
  p.E = E;
  p.nu = nu;
  p.K = E / (3.0 * (1.0 - 2.0 * nu));
  p.G = E / (2.0 * (1.0 + nu));
  p.gamma0_dot = gamma0_dot;
  p.m = m;
  p.sigma0 = sigma0;
  p.h = h;
  p.rate_cap = rate_cap;
  return p;
}

SymTensor4 elastic_tangent(const MaterialParams& p) {
  return StandardTensors::II() * p.K + StandardTensors::Id() * (2.0 * p.G);
}

SymTensor2 hooke(const MaterialParams& p, const SymTensor2& eps_e) {
  SymTensor2 s = deviator(eps_e) * (2.0 * p.G);
  const double pr = p.K * eps_e.trace();
  s[kXX] += pr;
  s[kYY] += pr;
  s[kZZ] += pr;
  return s;
}

double yield_stress(const MaterialParams& p, double gamma) {
  const double s = yield_stress_raw(p, gamma);
  if (!(s > 0.0)) {
    std::ostringstream msg;
    msg << "flow stress depleted: sigma_s = " << s << " at gamma = " << gamma;
    throw NonPositiveYieldError(msg.str());
  }
  return s;
}

double norton_rate(const MaterialParams& p, double sig_eq, double sig_s) {
  if (!(sig_s > 0.0)) {
    std::ostringstream msg;
    msg << "norton_rate: non-positive flow stress " << sig_s;
    throw NonPositiveYieldError(msg.str());
  }
  if (sig_eq <= 0.0) return 0.0;
  const double log_factor = std::log(sig_eq / sig_s) / p.m;
  if (log_factor > std::log(p.rate_cap)) {
    std::ostringstream msg;
    msg << "norton_rate: power factor exp(" << log_factor << ") exceeds cap "
        << p.rate_cap << " (sig_eq = " << sig_eq << ", sig_s = " << sig_s << ")";
    throw RateOverflowError(msg.str());
  }
  return p.gamma0_dot * std::exp(log_factor);
}

double alpha_scalar(const MaterialParams& p, double sig_eq, double sig_s, double dt) {
  if (sig_eq <= 0.0) return 0.0;
  return p.gamma0_dot * p.G * dt / (p.m * sig_s) *
         std::pow(sig_eq / sig_s, 1.0 / p.m - 1.0);
}

double kappa_scalar(const MaterialParams& p, double sig_eq, double sig_s,
                    double dt, double theta) {
  const double alpha = alpha_scalar(p, sig_eq, sig_s, dt);
  const double chi = sig_eq * p.h / (sig_s * p.G);
  return 1.0 / (1.0 + chi * theta * alpha);
}

TrialState trial_state(const MaterialParams& p, const PointState& state_t,
                       const SymTensor2& eps_total) {
  TrialState tr;
  tr.sigma = hooke(p, eps_total - state_t.eps_p);
  tr.sigma_eq = equivalent_stress(tr.sigma);
  if (tr.sigma_eq > 0.0)
    tr.N = deviator(tr.sigma) * (1.5 / tr.sigma_eq);
  return tr;
}

SymTensor2 improved_guess_correction(const PointState& state_t, double dt) {
  return state_t.N * (dt * state_t.gamma_dot * state_t.kappa);
}

// ---------------------------------------------------------------------------
// Backward Euler: scalar safeguarded Newton on dgam in
//   r(dgam) = dgam - dt * gamma0_dot * ((sig_tr - 3G dgam) / sig_s(gam_t + dgam))^(1/m)
// The root is bracketed: r(0) <= 0 and r -> +inf before the relaxed stress or
// the flow stress can reach zero; Newton steps that leave the bracket (or hit
// a non-finite residual from extreme overstress) fall back to bisection.
// ---------------------------------------------------------------------------

UpdateResult be_return_map(const MaterialParams& p, const PointState& state_t,
                           const SymTensor2& eps_total, double dt) {
  if (!(dt > 0.0)) throw ConfigError("be_return_map: dt must be positive");

  const TrialState tr = trial_state(p, state_t, eps_total);
  UpdateResult res;
  res.sigma_eq_trial = tr.sigma_eq;
  res.iterations = 0;

  if (tr.sigma_eq <= 0.0) {
    res.sigma = tr.sigma;
    res.delta_gamma = 0.0;
    res.sigma_eq = 0.0;
    res.sigma_s = yield_stress(p, state_t.gamma);
    res.state = state_t;
    res.state.gamma_dot = 0.0;
    res.state.N = SymTensor2::zero();
    res.state.kappa = 1.0;
    res.state.delta_gamma_prev = 0.0;
    return res;
  }

  const double G = p.G;
  const double sig_s0 = yield_stress(p, state_t.gamma);
  const double rate_scale = dt * p.gamma0_dot;

  // Bracket [lo, hi]: r(lo) <= 0; hi stops just short of full stress
  // relaxation and (for softening) of flow-stress depletion.
  double lo = 0.0;
  double hi = tr.sigma_eq / (3.0 * G) * (1.0 - 1.0e-12);
  if (p.h < 0.0) {
    const double dgam_deplete = (-p.sigma0 / p.h - state_t.gamma) * (1.0 - 1.0e-12);
    hi = std::min(hi, dgam_deplete);
  }
  if (!(hi > 0.0))
    throw NonPositiveYieldError("be_return_map: no admissible slip increment "
                                "(flow stress depleted by softening)");

  const auto residual = [&](double x, double& r, double& dr) {
    const double sig_s = yield_stress_raw(p, state_t.gamma + x);
    const double sig_eq = tr.sigma_eq - 3.0 * G * x;
    const double u = sig_eq / sig_s;
    const double pw = std::pow(u, 1.0 / p.m);
    r = x - rate_scale * pw;
    dr = 1.0 + rate_scale * (1.0 / p.m) * (pw / u) *
                   (3.0 * G * sig_s + sig_eq * p.h) / (sig_s * sig_s);
  };

  double r_hi, dr_hi;
  residual(hi, r_hi, dr_hi);
  if (!(r_hi >= 0.0))
    throw NonPositiveYieldError("be_return_map: flow stress depletes before the "
                                "rate equation balances (material failure)");

  // Start from a physics-informed guess: elastic-dominated fixed point below
  // the flow stress, rate-independent estimate above it.
  double x;
  if (tr.sigma_eq <= sig_s0) {
    x = rate_scale * std::pow(tr.sigma_eq / sig_s0, 1.0 / p.m);
  } else {
    x = (tr.sigma_eq - sig_s0) / std::max(3.0 * G + p.h, 3.0 * G * 1.0e-3);
  }
  x = std::clamp(x, 0.0, hi);

  double dgam = x;
  bool converged = false;
  for (int it = 0; it < kScalarMaxIter; ++it) {
    double r, dr;
    residual(x, r, dr);
    res.iterations = it + 1;
    if (std::isfinite(r) && std::abs(r) <= kScalarTol * std::max(x, rate_scale)) {
      dgam = x;
      converged = true;
      break;
    }
    if (std::isfinite(r)) {
      if (r > 0.0) hi = x; else lo = x;
    } else {
      lo = x;  // overflowed rate: the root lies at larger dgam
    }
    double x_next = std::numeric_limits<double>::quiet_NaN();
    if (std::isfinite(r) && std::isfinite(dr) && dr > 0.0) x_next = x - r / dr;
    if (!(x_next > lo && x_next < hi)) x_next = 0.5 * (lo + hi);
    x = x_next;
  }
  if (!converged)
    throw NoConvergenceError("be_return_map: scalar Newton exhausted its "
                             "iteration budget");

  res.delta_gamma = dgam;
  res.sigma = tr.sigma - tr.N * (2.0 * G * dgam);
  res.sigma_eq = tr.sigma_eq - 3.0 * G * dgam;
  res.state.eps_p = state_t.eps_p + tr.N * dgam;
  res.state.gamma = state_t.gamma + dgam;
  res.sigma_s = yield_stress(p, res.state.gamma);
  res.state.gamma_dot = dgam / dt;
  res.state.N = tr.N;
  res.state.kappa = kappa_scalar(p, res.sigma_eq, res.sigma_s, dt, 1.0);
  res.state.delta_gamma_prev = dgam;
  return res;
}

// ---------------------------------------------------------------------------
// Generalized trapezoidal update. The implicit branch solves
//   R_eps  = eps_e - eps_e_trial + dgam * N_theta(eps_e)        (6 equations)
//   R_gam  = dgam - dt ((1-theta) gdot_t + theta gdot(eps_e, dgam))
// with the exact 7x7 Jacobian and step halving whenever a step produces a
// non-finite residual or a depleted flow stress.
// ---------------------------------------------------------------------------

namespace {

struct TrapzResiduals {
  Eigen::Matrix<double, 7, 1> R;
  SymTensor2 sigma;
  double sig_eq = 0.0;
  double sig_s = 0.0;
  SymTensor2 N;        // direction at the current iterate
  SymTensor2 N_theta;
  bool valid = false;  // false when the flow stress depleted or R is non-finite
};

TrapzResiduals trapz_residuals(const MaterialParams& p, const PointState& state_t,
                               const Vec6& eps_e_tr, const Vec6& eps_e,
                               double dgam, double dt, double theta) {
  TrapzResiduals out;
  const double gamma = state_t.gamma + dgam;
  out.sig_s = yield_stress_raw(p, gamma);
  if (!(out.sig_s > 0.0)) return out;

  const SymTensor2 eps_e_t{eps_e};
  out.sigma = hooke(p, eps_e_t);
  out.sig_eq = equivalent_stress(out.sigma);
  if (out.sig_eq > 0.0) out.N = deviator(out.sigma) * (1.5 / out.sig_eq);
  out.N_theta = state_t.N * (1.0 - theta) + out.N * theta;

  const double gdot = norton_rate_raw(p, out.sig_eq, out.sig_s);
  out.R.head<6>() = eps_e - eps_e_tr + dgam * out.N_theta.mandel();
  out.R[6] = dgam - dt * ((1.0 - theta) * state_t.gamma_dot + theta * gdot);
  out.valid = out.R.allFinite();
  return out;
}

}  // namespace

UpdateResult trapz_return_map(const MaterialParams& p, const PointState& state_t,
                              const SymTensor2& eps_total, double dt, double theta) {
  if (!(dt > 0.0)) throw ConfigError("trapz_return_map: dt must be positive");
  if (!(theta >= 0.0 && theta <= 1.0))
    throw ConfigError("trapz_return_map: theta must lie in [0, 1]");

  UpdateResult res;

  if (theta == 0.0) {
    // Explicit update: the whole increment flows at the old rate and
    // direction; the new rate is only evaluated (and capped) for the record.
    const double dgam = dt * state_t.gamma_dot;
    res.state.eps_p = state_t.eps_p + state_t.N * dgam;
    res.state.gamma = state_t.gamma + dgam;
    res.sigma = hooke(p, eps_total - res.state.eps_p);
    res.sigma_eq = equivalent_stress(res.sigma);
    res.sigma_eq_trial = equivalent_stress(hooke(p, eps_total - state_t.eps_p));
    res.sigma_s = yield_stress(p, res.state.gamma);
    res.delta_gamma = dgam;
    res.iterations = 0;
    res.state.gamma_dot = norton_rate(p, res.sigma_eq, res.sigma_s);
    res.state.N = res.sigma_eq > 0.0 ? deviator(res.sigma) * (1.5 / res.sigma_eq)
                                     : SymTensor2::zero();
    res.state.kappa = 1.0;
    res.state.delta_gamma_prev = dgam;
    return res;
  }

  const SymTensor2 eps_e_trial = eps_total - state_t.eps_p;
  const Vec6 eps_e_tr = eps_e_trial.mandel();
  const TrialState tr = trial_state(p, state_t, eps_total);
  res.sigma_eq_trial = tr.sigma_eq;

  // Fully elastic shortcut: nothing flows now and nothing flowed at t.
  if (tr.sigma_eq <= 0.0 && state_t.gamma_dot == 0.0) {
    res.sigma = tr.sigma;
    res.delta_gamma = 0.0;
    res.sigma_eq = 0.0;
    res.sigma_s = yield_stress(p, state_t.gamma);
    res.state = state_t;
    res.state.gamma_dot = 0.0;
    res.state.N = SymTensor2::zero();
    res.state.kappa = 1.0;
    res.state.delta_gamma_prev = 0.0;
    res.iterations = 0;
    return res;
  }

  // Initial guess: blend the explicit contribution with a backward-Euler
  // solve of the same increment (cheap, bracketed, and close to the
  // trapezoidal solution for the theta values used in practice).
  double dgam = dt * state_t.gamma_dot;
  {
    double dgam_be = dgam;
    try {
      dgam_be = be_return_map(p, state_t, eps_total, dt).delta_gamma;
    } catch (const SolverError&) {
      // keep the explicit estimate; the damped Newton below sorts it out
    }
    dgam = (1.0 - theta) * dt * state_t.gamma_dot + theta * dgam_be;
  }
  const SymTensor2 N_theta0 = state_t.N * (1.0 - theta) + tr.N * theta;
  Vec6 eps_e = eps_e_tr - dgam * N_theta0.mandel();

  TrapzResiduals cur = trapz_residuals(p, state_t, eps_e_tr, eps_e, dgam, dt, theta);
  if (!cur.valid) {  // damped start: retreat towards the trial point
    eps_e = eps_e_tr;
    dgam = 0.0;
    cur = trapz_residuals(p, state_t, eps_e_tr, eps_e, dgam, dt, theta);
    if (!cur.valid)
      throw NonPositiveYieldError("trapz_return_map: invalid state at the "
                                  "trial point");
  }

  const double eps_ref = std::max({eps_e_trial.norm(), SymTensor2{eps_e}.norm(), 1.0e-16});
  const double gam_scale = dt * p.gamma0_dot;
  // Fixed weights within one line search; a weight that moved with the
  // iterate would spoil the descent property of the Newton direction.
  const auto merit = [&](const TrapzResiduals& r, double gam_ref) {
    const double re = r.R.head<6>().norm() / eps_ref;
    const double rg = r.R[6] / gam_ref;
    return re * re + rg * rg;
  };
  bool converged = false;
  res.iterations = 0;

  constexpr int kTrapzMaxIter = 100;
  for (int it = 0; it < kTrapzMaxIter; ++it) {
    if (cur.R.head<6>().norm() <= kScalarTol * eps_ref &&
        std::abs(cur.R[6]) <= kScalarTol * std::max(dgam, gam_scale)) {
      converged = true;
      break;
    }
    res.iterations = it + 1;

    // Exact Jacobian of (R_eps, R_gam) w.r.t. (eps_e, dgam).
    Eigen::Matrix<double, 7, 7> J = Eigen::Matrix<double, 7, 7>::Identity();
    const double alpha = alpha_scalar(p, cur.sig_eq, cur.sig_s, dt);
    if (cur.sig_eq > 0.0) {
      const Mat6 NN = cur.N.mandel() * cur.N.mandel().transpose();
      J.topLeftCorner<6, 6>() +=
          (dgam * theta * 2.0 * p.G / cur.sig_eq) *
          (1.5 * StandardTensors::Id().mandel() - NN);
      J.bottomLeftCorner<1, 6>() = -2.0 * alpha * theta * cur.N.mandel().transpose();
    }
    J.topRightCorner<6, 1>() = cur.N_theta.mandel();
    J(6, 6) = 1.0 + theta * alpha * cur.sig_eq * p.h / (p.G * cur.sig_s);

    const Eigen::Matrix<double, 7, 1> step = J.partialPivLu().solve(cur.R);
    if (!step.allFinite())
      throw NoConvergenceError("trapz_return_map: singular local Jacobian");

    // Backtracking line search: the step must stay admissible (finite rate,
    // positive flow stress) and reduce the scaled residual merit.
    const double gam_ref = std::max(std::abs(dgam), gam_scale);
    const double merit0 = merit(cur, gam_ref);
    bool accepted = false;
    double scale = 1.0;
    for (int cut = 0; cut < 30; ++cut, scale *= 0.5) {
      const Vec6 eps_e_n = eps_e - scale * step.head<6>();
      const double dgam_n = dgam - scale * step[6];
      const TrapzResiduals nxt =
          trapz_residuals(p, state_t, eps_e_tr, eps_e_n, dgam_n, dt, theta);
      if (!nxt.valid) continue;
      if (merit(nxt, gam_ref) < merit0) {
        eps_e = eps_e_n;
        dgam = dgam_n;
        cur = nxt;
        accepted = true;
        break;
      }
    }
    if (!accepted)
      // Happens when the residual has no root: a strong load reversal against
      // the old flow direction can make the theta-averaged direction unable
      // to relax the stress, so the rate equation never balances.
      throw NoConvergenceError("trapz_return_map: line search stalled away "
                               "from the solution (the theta-averaged flow "
                               "direction cannot relax the overstress)");
  }
  if (!converged)
    throw NoConvergenceError("trapz_return_map: local Newton exhausted its "
                             "iteration budget");

  res.sigma = cur.sigma;
  res.sigma_eq = cur.sig_eq;
  res.sigma_s = cur.sig_s;  // positive: guaranteed by the residual validity
  res.delta_gamma = dgam;
  res.state.eps_p = eps_total - SymTensor2{eps_e};
  res.state.gamma = state_t.gamma + dgam;
  res.state.gamma_dot = norton_rate(p, cur.sig_eq, cur.sig_s);
  res.state.N = cur.N;
  res.state.kappa = kappa_scalar(p, cur.sig_eq, cur.sig_s, dt, theta);
  res.state.delta_gamma_prev = dgam;
  return res;
}

// ---------------------------------------------------------------------------
// Consistent tangents
// ---------------------------------------------------------------------------

TangentRef make_tangent_ref(const PointState& state_t, const UpdateResult& r,
                            double theta) {
  TangentRef ref;
  ref.sigma_eq = r.sigma_eq;
  ref.sigma_eq_trial = r.sigma_eq_trial;
  ref.sigma_s = r.sigma_s;
  ref.delta_gamma = r.delta_gamma;
  ref.N = r.state.N;
  ref.N_theta = state_t.N * (1.0 - theta) + r.state.N * theta;
  return ref;
}

SymTensor4 be_tangent(const MaterialParams& p, const TangentRef& ref, double dt) {
  const SymTensor4 C_e = elastic_tangent(p);
  if (ref.sigma_eq_trial <= 0.0) return C_e;

  const double alpha = alpha_scalar(p, ref.sigma_eq, ref.sigma_s, dt);
  const double chi = ref.sigma_eq * p.h / (ref.sigma_s * p.G);
  const double beta = 2.0 * alpha / (1.0 + 3.0 * alpha + chi * alpha);

  const SymTensor4 NN = dyad(ref.N, ref.N);
  SymTensor4 C = C_e - NN * (2.0 * p.G * beta);
  C -= (StandardTensors::Id() * 1.5 - NN) *
       (ref.delta_gamma * 4.0 * p.G * p.G / ref.sigma_eq_trial);
  return C;
}

SymTensor4 trapz_tangent(const MaterialParams& p, const TangentRef& ref,
                         double dt, double theta) {
  const SymTensor4 C_e = elastic_tangent(p);
  if (theta == 0.0 || ref.sigma_eq_trial <= 0.0 || ref.sigma_eq <= 0.0) return C_e;

  const double G = p.G;
  const double a = 3.0 * G * theta * ref.delta_gamma / ref.sigma_eq;
  const SymTensor4 NN = dyad(ref.N, ref.N);

  // Completed operator: P* acts only on the deviatoric subspace, so add the
  // volumetric unit II/3 before inverting (see header).
  const SymTensor4 P = StandardTensors::Id() * (1.0 + a) - NN * (2.0 / 3.0 * a) +
                       StandardTensors::II() * (1.0 / 3.0);
  const SymTensor4 P_inv = invert4(P);

  const double alpha = alpha_scalar(p, ref.sigma_eq, ref.sigma_s, dt);
  const double chi = ref.sigma_eq * p.h / (ref.sigma_s * G);
  const double beta = 2.0 * alpha /
      (1.0 + 2.0 * alpha * theta * ref.N_theta.contract(ref.N) + chi * theta * alpha);

  SymTensor4 C = C_e - dyad(P_inv * ref.N_theta, ref.N) * (2.0 * G * theta * beta);
  C -= (P_inv * (StandardTensors::Id() * 1.5 - NN)) *
       (ref.delta_gamma * 4.0 * G * G * theta / ref.sigma_eq);
  return C;
}

UpdateResult update_point(const MaterialParams& p, const PointState& state_t,
                          const SymTensor2& eps_total, double dt,
                          Scheme scheme, double theta) {
  if (scheme == Scheme::backward_euler)
    return be_return_map(p, state_t, eps_total, dt);
  return trapz_return_map(p, state_t, eps_total, dt, theta);
}

SymTensor4 point_tangent(const MaterialParams& p, const TangentRef& ref,
                         double dt, Scheme scheme, double theta) {
  if (scheme == Scheme::backward_euler) return be_tangent(p, ref, dt);
  return trapz_tangent(p, ref, dt, theta);
}

}  // namespace vpfft
