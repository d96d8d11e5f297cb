// Copyright (c) 2026 the vpfft authors
// SPDX-License-Identifier: Apache-2.0
//
#include "spectral.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <new>
#include <string>

namespace vpfft {

namespace {

//! Signed integer frequency of row/column index i on an n-point grid
//! (0, 1, ..., n/2, then negative; even-grid Nyquist at -n/2).
int signed_frequency(int i, int n) {
  return i <= (n - 1) / 2 ? i : i - n;
}

}  // namespace

ProjectionOperator::ProjectionOperator(int nx, int ny)
    : nx_(nx), ny_(ny), hx_(nx / 2 + 1) {
  if (nx < 1 || ny < 1)
    throw ConfigError("projection: grid must be at least 1x1, got " +
                      std::to_string(nx) + "x" + std::to_string(ny));
  const std::size_t npx = static_cast<std::size_t>(nx_) * ny_;
  const std::size_t nspec = static_cast<std::size_t>(hx_) * ny_;
  real_ = fftw_alloc_real(kInPlane * npx);
  spec_ = fftw_alloc_complex(kInPlane * nspec);
  if (real_ == nullptr || spec_ == nullptr) {
    fftw_free(real_);
    fftw_free(spec_);
    throw std::bad_alloc();
  }
  // Row-major with y slow, in-plane triples interleaved (stride 3).
  int dims[2] = {ny_, nx_};
  fwd_ = fftw_plan_many_dft_r2c(2, dims, kInPlane, real_, nullptr, kInPlane, 1,
                                spec_, nullptr, kInPlane, 1, FFTW_MEASURE);
  bwd_ = fftw_plan_many_dft_c2r(2, dims, kInPlane, spec_, nullptr, kInPlane, 1,
                                real_, nullptr, kInPlane, 1, FFTW_MEASURE);
  if (fwd_ == nullptr || bwd_ == nullptr) {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(real_);
    fftw_free(spec_);
    throw SolverError("projection: fftw plan creation failed for " +
                      std::to_string(nx_) + "x" + std::to_string(ny_));
  }

  // Per-frequency kernels: the orthogonal projector (in the Mandel metric)
  // onto span{ sym(e_x (x) n), sym(e_y (x) n) } with n the unit frequency
  // direction, built as B (B^T B)^-1 B^T from the basis matrix B. Packed as
  // the 6 upper-triangle entries (00, 01, 02, 11, 12, 22).
  proj_.assign(6 * nspec, 0.0);
  for (int r = 0; r < ny_; ++r) {
    const int ky_signed = signed_frequency(r, ny_);
    for (int c = 0; c < hx_; ++c) {
      const double kx = 2 * c == nx_ ? -c : c;  // even-grid Nyquist column
      // The half spectrum stores both conjugate partners of a mode along the
      // Nyquist column (rows r and ny - r); they must receive the same
      // kernel, so the y frequency sign is canonicalized there.
      const double ky = 2 * c == nx_ ? std::abs(ky_signed) : ky_signed;
      if (kx == 0.0 && ky == 0.0) continue;     // mean stays annihilated
      const double inv = 1.0 / std::sqrt(kx * kx + ky * ky);
      const double n0 = kx * inv;
      const double n1 = ky * inv;
      Eigen::Matrix<double, 3, 2> B;
      // Mandel triples of sym(e_x (x) n) and sym(e_y (x) n).
      B << n0, 0.0,
           0.0, n1,
           n1 / kSqrt2, n0 / kSqrt2;
      const Eigen::Matrix2d gram = B.transpose() * B;
      const Eigen::Matrix3d P = B * gram.inverse() * B.transpose();
      double* k = proj_.data() + 6 * (static_cast<std::size_t>(r) * hx_ + c);
      k[0] = P(0, 0);
      k[1] = 0.5 * (P(0, 1) + P(1, 0));
      k[2] = 0.5 * (P(0, 2) + P(2, 0));
      k[3] = P(1, 1);
      k[4] = 0.5 * (P(1, 2) + P(2, 1));
      k[5] = P(2, 2);
    }
  }
}

ProjectionOperator::~ProjectionOperator() {
  fftw_destroy_plan(fwd_);
  fftw_destroy_plan(bwd_);
  fftw_free(real_);
  fftw_free(spec_);
}

void ProjectionOperator::project(const double* in, double* out) {
  const std::size_t npx = static_cast<std::size_t>(nx_) * ny_;
  const std::size_t nspec = static_cast<std::size_t>(hx_) * ny_;
  std::memcpy(real_, in, sizeof(double) * kInPlane * npx);
  fftw_execute(fwd_);
  for (std::size_t f = 0; f < nspec; ++f) {
    const double* k = proj_.data() + 6 * f;
    fftw_complex* t = spec_ + kInPlane * f;
    for (int part = 0; part < 2; ++part) {  // real, then imaginary
      const double x0 = t[0][part];
      const double x1 = t[1][part];
      const double x2 = t[2][part];
      t[0][part] = k[0] * x0 + k[1] * x1 + k[2] * x2;
      t[1][part] = k[1] * x0 + k[3] * x1 + k[4] * x2;
      t[2][part] = k[2] * x0 + k[4] * x1 + k[5] * x2;
    }
  }
  fftw_execute(bwd_);
  const double scale = 1.0 / static_cast<double>(npx);
  for (std::size_t i = 0; i < kInPlane * npx; ++i) out[i] = real_[i] * scale;
}

double residual_norm(ProjectionOperator& projection,
                     const std::vector<SymTensor2>& stress,
                     double normalizer) {
  const std::size_t npx =
      static_cast<std::size_t>(projection.nx()) * projection.ny();
  if (stress.size() != npx)
    throw ConfigError("residual_norm: stress field has " +
                      std::to_string(stress.size()) + " pixels, grid has " +
                      std::to_string(npx));
  if (!(normalizer > 0.0))
    throw ConfigError("residual_norm: normalizer must be positive");
  std::vector<double> triples(kInPlane * npx);
  for (std::size_t i = 0; i < npx; ++i) {
    triples[3 * i + 0] = stress[i][kXX];
    triples[3 * i + 1] = stress[i][kYY];
    triples[3 * i + 2] = stress[i][kXY];
  }
  projection.project(triples.data(), triples.data());
  double ss = 0.0;
  for (const double v : triples) ss += v * v;
  return std::sqrt(ss) / (normalizer * std::sqrt(static_cast<double>(npx)));
}

void SolverConfig::validate() const {
  if (!(newton_tol > 0.0))
    throw ConfigError("solver config: newton_tol must be positive");
  if (newton_max < 0)
    throw ConfigError("solver config: newton_max must be >= 0");
  if (!(cg_tol > 0.0))
    throw ConfigError("solver config: cg_tol must be positive");
  if (cg_max < 0)
    throw ConfigError("solver config: cg_max must be >= 0 (0 = automatic)");
  if (!(theta >= 0.0 && theta <= 1.0))
    throw ConfigError("solver config: theta must lie in [0, 1]");
  if (!(normalizer > 0.0))
    throw ConfigError("solver config: normalizer must be positive");
}

SpectralSolver::SpectralSolver(const PhaseGrid& grid,
                               const PhaseCatalog& catalog)
    : nx_(grid.nx),
      ny_(grid.ny),
      npx_(static_cast<std::size_t>(grid.nx) * grid.ny),
      proj_(grid.nx, grid.ny) {
  validate_catalog(grid, catalog);
  int slot_of[256];
  for (int& s : slot_of) s = -1;
  slot_.resize(npx_);
  for (std::size_t i = 0; i < npx_; ++i) {
    const std::uint8_t id = grid.phases[i];
    if (slot_of[id] < 0) {
      slot_of[id] = static_cast<int>(mats_.size());
      mats_.push_back(catalog.params(id));
    }
    slot_[i] = static_cast<std::uint8_t>(slot_of[id]);
  }
  eps_.assign(npx_, SymTensor2::zero());
  sig_.assign(npx_, SymTensor2::zero());
  state_.assign(npx_, PointState{});
  pending_.assign(npx_, PointState{});
  // The converged tangent of the virgin state (no increment yet) is elastic.
  std::vector<SymTensor4> ce;
  ce.reserve(mats_.size());
  for (const MaterialParams& p : mats_) ce.push_back(elastic_tangent(p));
  tangent_.resize(npx_);
  for (std::size_t i = 0; i < npx_; ++i) tangent_[i] = ce[slot_[i]];
  const Eigen::Index n = static_cast<Eigen::Index>(kInPlane * npx_);
  work_b_.resize(n);
  work_x_.resize(n);
  work_r_.resize(n);
  work_p_.resize(n);
  work_ap_.resize(n);
  work_w_.resize(n);
}

SymTensor2 SpectralSolver::mean_strain() const {
  Vec6 acc = Vec6::Zero();
  for (const SymTensor2& e : eps_) acc += e.mandel();
  return SymTensor2(acc / static_cast<double>(npx_));
}

SymTensor2 SpectralSolver::mean_stress() const {
  Vec6 acc = Vec6::Zero();
  for (const SymTensor2& s : sig_) acc += s.mandel();
  return SymTensor2(acc / static_cast<double>(npx_));
}

void SpectralSolver::sweep(double dt, const SolverConfig& config) {
  const double theta_ref =
      config.scheme == Scheme::backward_euler ? 1.0 : config.theta;
  for (std::size_t i = 0; i < npx_; ++i) {
    const MaterialParams& p = mats_[slot_[i]];
    const auto where = [this, i]() {
      return "pixel (" + std::to_string(static_cast<int>(i) % nx_) + ", " +
             std::to_string(static_cast<int>(i) / nx_) + "): ";
    };
    try {
      const UpdateResult r =
          update_point(p, state_[i], eps_[i], dt, config.scheme, config.theta);
      sig_[i] = r.sigma;
      pending_[i] = r.state;
      tangent_[i] = point_tangent(p, make_tangent_ref(state_[i], r, theta_ref),
                                  dt, config.scheme, config.theta);
    } catch (const NonPositiveYieldError& e) {
      throw NonPositiveYieldError(where() + e.what());
    } catch (const RateOverflowError& e) {
      throw RateOverflowError(where() + e.what());
    } catch (const NoConvergenceError& e) {
      throw NoConvergenceError(where() + e.what());
    } catch (const SolverError& e) {
      throw SolverError(where() + e.what());
    }
  }
}

void SpectralSolver::apply_tangent_inplane(const Eigen::VectorXd& x,
                                           Eigen::VectorXd& out) {
  for (std::size_t i = 0; i < npx_; ++i) {
    const Mat6& c = tangent_[i].mandel();
    const double x0 = x[3 * i + 0];
    const double x1 = x[3 * i + 1];
    const double x2 = x[3 * i + 2];
    out[3 * i + 0] = c(kXX, kXX) * x0 + c(kXX, kYY) * x1 + c(kXX, kXY) * x2;
    out[3 * i + 1] = c(kYY, kXX) * x0 + c(kYY, kYY) * x1 + c(kYY, kXY) * x2;
    out[3 * i + 2] = c(kXY, kXX) * x0 + c(kXY, kYY) * x1 + c(kXY, kXY) * x2;
  }
}

int SpectralSolver::conjugate_gradient(const Eigen::VectorXd& b,
                                       Eigen::VectorXd& x,
                                       const SolverConfig& config) {
  const int cg_max = config.cg_max > 0 ? config.cg_max : 10 * nx_ * ny_;
  x.setZero(b.size());
  const double b_norm = b.norm();
  if (b_norm == 0.0) return 0;
  const double tol = config.cg_tol * b_norm;
  work_r_ = b;
  work_p_ = work_r_;
  double rs = work_r_.squaredNorm();
  // Best true-residual iterate seen at a refresh, for the floor guard below.
  double best_norm = b_norm;
  Eigen::VectorXd best_x = x;
  for (int it = 1; it <= cg_max; ++it) {
    apply_tangent_inplane(work_p_, work_ap_);
    proj_.project(work_ap_.data(), work_ap_.data());
    const double pap = work_p_.dot(work_ap_);
    if (pap <= 0.0) {
      // The operator is positive semi-definite on the compatible subspace,
      // so non-positive curvature has two causes: the recurrence ground down
      // to its floating-point floor on an already-converged solve (accept the
      // iterate), or the tangent field is genuinely indefinite (a breakdown,
      // which surfaces within a few iterations while the residual is still
      // of the order of the right-hand side).
      apply_tangent_inplane(x, work_ap_);
      proj_.project(work_ap_.data(), work_ap_.data());
      work_r_ = b - work_ap_;
      if (work_r_.norm() <= 1.0e-4 * b_norm) return it;
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.3e", pap);
      throw SolverError(
          "cg breakdown: linearized operator is not positive definite along "
          "the search direction (p.Ap = " +
          std::string(buf) + " at iteration " + std::to_string(it) + ")");
    }
    const double alpha = rs / pap;
    x += alpha * work_p_;
    if (it % 50 == 0) {
      // Refresh against accumulated recurrence drift with a true residual.
      apply_tangent_inplane(x, work_ap_);
      proj_.project(work_ap_.data(), work_ap_.data());
      work_r_ = b - work_ap_;
    } else {
      work_r_ -= alpha * work_ap_;
    }
    const double rs_new = work_r_.squaredNorm();
    if (std::sqrt(rs_new) <= tol) return it;
    work_p_ = work_r_ + (rs_new / rs) * work_p_;
    rs = rs_new;
  }
  char rel[32];
  std::snprintf(rel, sizeof rel, "%.3e", std::sqrt(rs) / b_norm);
  throw SolverError("cg stagnation: no convergence within " +
                    std::to_string(cg_max) + " iterations (residual " + rel +
                    " of the right-hand side)");
}

IterationLog SpectralSolver::newton_increment(const SymTensor2& E_new,
                                              double dt,
                                              const SolverConfig& config) {
  config.validate();
  if (!(dt > 0.0))
    throw ConfigError("newton_increment: dt must be positive, got " +
                      std::to_string(dt));
  const auto t0 = std::chrono::steady_clock::now();
  IterationLog log;
  const SymTensor2 dE = E_new - E_bar_;

  const auto log_residual = [this, &config, &log](int cg_iters) {
    for (std::size_t i = 0; i < npx_; ++i) {
      work_w_[3 * i + 0] = sig_[i][kXX];
      work_w_[3 * i + 1] = sig_[i][kYY];
      work_w_[3 * i + 2] = sig_[i][kXY];
    }
    proj_.project(work_w_.data(), work_w_.data());
    const double res = work_w_.norm() /
                       (config.normalizer * std::sqrt(static_cast<double>(npx_)));
    log.iters.push_back(NewtonIterRecord{res, cg_iters});
  };

  // Iteration 0: predict the strain fluctuation of the increment with the
  // converged tangents of time t. The improved mode removes the viscous flow
  // each pixel is already committed to from the driving strain, so the linear
  // prediction only has to carry the elastic part of the load.
  for (std::size_t i = 0; i < npx_; ++i) {
    SymTensor2 v = dE;
    if (config.ig_mode == IGMode::improved)
      v -= improved_guess_correction(state_[i], dt);
    const SymTensor2 w = tangent_[i] * v;
    work_b_[3 * i + 0] = -w[kXX];
    work_b_[3 * i + 1] = -w[kYY];
    work_b_[3 * i + 2] = -w[kXY];
  }
  proj_.project(work_b_.data(), work_b_.data());
  const int cg0 = conjugate_gradient(work_b_, work_x_, config);
  for (std::size_t i = 0; i < npx_; ++i) {
    eps_[i] += dE;
    eps_[i][kXX] += work_x_[3 * i + 0];
    eps_[i][kYY] += work_x_[3 * i + 1];
    eps_[i][kXY] += work_x_[3 * i + 2];
  }
  sweep(dt, config);
  log_residual(cg0);

  int corrections = 0;
  while (log.iters.back().residual > config.newton_tol) {
    if (corrections >= config.newton_max)
      throw NoConvergenceError(
          "newton-divergence: residual " +
          std::to_string(log.iters.back().residual) + " > " +
          std::to_string(config.newton_tol) + " after " +
          std::to_string(corrections) + " correction iterations");
    for (std::size_t i = 0; i < npx_; ++i) {
      work_b_[3 * i + 0] = -sig_[i][kXX];
      work_b_[3 * i + 1] = -sig_[i][kYY];
      work_b_[3 * i + 2] = -sig_[i][kXY];
    }
    proj_.project(work_b_.data(), work_b_.data());
    const int cg = conjugate_gradient(work_b_, work_x_, config);
    for (std::size_t i = 0; i < npx_; ++i) {
      eps_[i][kXX] += work_x_[3 * i + 0];
      eps_[i][kYY] += work_x_[3 * i + 1];
      eps_[i][kXY] += work_x_[3 * i + 2];
    }
    sweep(dt, config);
    log_residual(cg);
    ++corrections;
  }

  state_.swap(pending_);
  E_bar_ = E_new;
  log.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return log;
}

}  // namespace vpfft
