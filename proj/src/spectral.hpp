// Copyright (c) 2026 the vpfft authors
// SPDX-License-Identifier: Apache-2.0
//
// Galerkin FFT solver on a periodic pixel grid: a Fourier-space projection
// onto compatible (symmetrized-gradient) fields, a matrix-free conjugate
// gradient solve of the linearized equilibrium, and a Newton-Raphson loop
// over the strain field with a pluggable initial guess.
//
// Kinematics are plane strain: displacements are in-plane and x/y-periodic,
// so the total-strain components zz, yz, xz stay zero while sigma_zz is free.
// The linear algebra therefore runs on per-pixel in-plane Mandel triples
// (xx, yy, sqrt2*xy); the constitutive layer sees full 3-D tensors.
#ifndef VPFFT_SPECTRAL_HPP
#define VPFFT_SPECTRAL_HPP

#include <fftw3.h>

#include <vector>

#include "material.hpp"
#include "microstructure.hpp"
#include "tensor.hpp"

namespace vpfft {

//! Number of in-plane Mandel components carried per pixel.
inline constexpr int kInPlane = 3;

//! Per-frequency projection onto symmetrized dyads of the discrete
//! frequency, plus the FFTW plans and buffers for a fixed grid.
//!
//! Discrete frequencies follow the integer convention of the trigonometric
//! interpolation: k in {0, 1, ..., n/2, -(n/2 - 1), ..., -1} per dimension,
//! with the Nyquist column of even grids taken at -n/2 and projected like any
//! other nonzero frequency. The zero frequency maps to zero (the mean is
//! pinned by the load program). Instances hold scratch buffers, so a single
//! instance must not be used from several threads at once.
class ProjectionOperator {
 public:
  ProjectionOperator(int nx, int ny);
  ~ProjectionOperator();
  ProjectionOperator(const ProjectionOperator&) = delete;
  ProjectionOperator& operator=(const ProjectionOperator&) = delete;

  int nx() const { return nx_; }
  int ny() const { return ny_; }

  //! Projects a field of in-plane triples (AoS, length 3 * nx * ny, row-major
  //! with y slow). `in` and `out` may alias.
  void project(const double* in, double* out);

 private:
  int nx_;
  int ny_;
  int hx_;                   //!< nx / 2 + 1 columns of the half spectrum
  double* real_ = nullptr;   //!< 3 * nx * ny real scratch
  fftw_complex* spec_ = nullptr;  //!< 3 * hx * ny complex scratch
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
  std::vector<double> proj_;  //!< 6 packed entries of the symmetric 3x3 kernel
};

//! || G sigma ||_2 / (normalizer * sqrt(nx * ny)): the RMS equilibrium
//! residual of a stress field, normalized by a reference stress.
double residual_norm(ProjectionOperator& projection,
                     const std::vector<SymTensor2>& stress, double normalizer);

//! Which iteration-0 right-hand side drives a time increment.
enum class IGMode { classical, improved };

struct SolverConfig {
  double newton_tol = 1.0e-8;  //!< relative residual threshold
  int newton_max = 25;         //!< max correction solves per increment
  double cg_tol = 1.0e-10;     //!< relative CG tolerance
  int cg_max = 0;              //!< 0 -> 10 * nx * ny
  IGMode ig_mode = IGMode::classical;
  Scheme scheme = Scheme::backward_euler;
  double theta = 1.0;          //!< trapezoidal parameter
  double normalizer = 1.180e9; //!< residual normalizer (martensite sigma0)

  //! Throws ConfigError on non-positive tolerances/limits or theta outside
  //! [0, 1].
  void validate() const;
};

//! One Newton iterate: iteration 0 is the state right after the initial
//! guess (its residual is measured after return-mapping the guessed field,
//! before any correction solve).
struct NewtonIterRecord {
  double residual = 0.0;
  int cg_iters = 0;
};

struct IterationLog {
  std::vector<NewtonIterRecord> iters;  //!< index 0 = initial guess
  double wall_ms = 0.0;                 //!< Newton loop only, excludes IO

  int newton_iterations() const {
    return static_cast<int>(iters.size()) - 1;
  }
  int total_cg() const {
    int n = 0;
    for (const NewtonIterRecord& it : iters) n += it.cg_iters;
    return n;
  }
  double residual_i0() const { return iters.front().residual; }
  double residual_final() const { return iters.back().residual; }
};

//! Strain, stress, state, and tangent fields over a phase grid, advanced one
//! macroscopic strain increment at a time.
class SpectralSolver {
 public:
  //! Fields start from the virgin state: zero strain and stress, elastic
  //! tangents. Throws ConfigError when the grid references a phase id the
  //! catalog does not have.
  SpectralSolver(const PhaseGrid& grid, const PhaseCatalog& catalog);

  //! Advances the fields from the committed state at time t to the
  //! macroscopic strain E_new over one step of size dt.
  //!
  //! Iteration 0 solves the linearized system with the converged tangents
  //! from time t; its right-hand side is driven by DE = E_new - E_old in
  //! classical mode and by DE minus the per-pixel viscous prediction
  //! dt * gamma_dot^t * kappa^t * N^t in improved mode. Each following
  //! iteration assembles consistent tangents at the current iterate, solves
  //! the projected system by CG, updates the strain field, and return-maps
  //! every pixel. Converges when the normalized residual drops below
  //! newton_tol; throws NoConvergenceError past newton_max, SolverError on CG
  //! breakdown/stagnation, and propagates constitutive failures with the
  //! pixel coordinates attached. On success the new state is committed; on
  //! throw the fields are left mid-iteration and the run must be abandoned.
  IterationLog newton_increment(const SymTensor2& E_new, double dt,
                                const SolverConfig& config);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  const SymTensor2& macro_strain() const { return E_bar_; }
  const std::vector<SymTensor2>& strain() const { return eps_; }
  const std::vector<SymTensor2>& stress() const { return sig_; }
  const std::vector<PointState>& state() const { return state_; }
  SymTensor2 mean_strain() const;
  SymTensor2 mean_stress() const;
  ProjectionOperator& projection() { return proj_; }

 private:
  void sweep(double dt, const SolverConfig& config);
  int conjugate_gradient(const Eigen::VectorXd& b, Eigen::VectorXd& x,
                         const SolverConfig& config);
  void apply_tangent_inplane(const Eigen::VectorXd& x, Eigen::VectorXd& out);

  int nx_;
  int ny_;
  std::size_t npx_;
  std::vector<std::uint8_t> slot_;       //!< per-pixel material slot
  std::vector<MaterialParams> mats_;     //!< slot -> parameters
  std::vector<SymTensor2> eps_;
  std::vector<SymTensor2> sig_;
  std::vector<PointState> state_;        //!< committed at time t
  std::vector<PointState> pending_;      //!< candidate states of the last sweep
  std::vector<SymTensor4> tangent_;      //!< tangents of the last sweep
  SymTensor2 E_bar_;
  ProjectionOperator proj_;
  Eigen::VectorXd work_b_, work_x_, work_r_, work_p_, work_ap_, work_w_;
};

}  // namespace vpfft

#endif  // VPFFT_SPECTRAL_HPP
