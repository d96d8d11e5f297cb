// Copyright (c) 2026 the vpfft authors
// SPDX-License-Identifier: Apache-2.0
//
#ifndef VPFFT_TENSOR_HPP
#define VPFFT_TENSOR_HPP

#include <Eigen/Dense>

#include "vpfft_errors.hpp"

namespace vpfft {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat3 = Eigen::Matrix3d;

// Component order of the orthonormal (Mandel) 6-vector representation:
//   [ xx, yy, zz, sqrt(2)*yz, sqrt(2)*xz, sqrt(2)*xy ]
// The sqrt(2) weights make the double contraction of two symmetric tensors a
// plain dot product and fourth-order contraction a plain 6x6 matrix product,
// so no distinction between "stress-like" and "strain-like" columns is needed
// anywhere (unlike Voigt).
enum MandelIndex { kXX = 0, kYY = 1, kZZ = 2, kYZ = 3, kXZ = 4, kXY = 5 };

inline constexpr double kSqrt2 = 1.4142135623730951;

//! Symmetric second-order tensor stored as its Mandel 6-vector.
class SymTensor2 {
 public:
  SymTensor2() : m_(Vec6::Zero()) {}
  explicit SymTensor2(const Vec6& mandel) : m_(mandel) {}

  static SymTensor2 zero() { return SymTensor2(); }
  static SymTensor2 identity() {
    Vec6 v;
    v << 1.0, 1.0, 1.0, 0.0, 0.0, 0.0;
    return SymTensor2(v);
  }
  static SymTensor2 diagonal(double a, double b, double c) {
    Vec6 v;
    v << a, b, c, 0.0, 0.0, 0.0;
    return SymTensor2(v);
  }
  //! Build from a 3x3 matrix; the skew part (if any) is discarded.
  static SymTensor2 from_matrix(const Mat3& a);
  Mat3 to_matrix() const;

  const Vec6& mandel() const { return m_; }
  Vec6& mandel() { return m_; }
  double operator[](int i) const { return m_[i]; }
  double& operator[](int i) { return m_[i]; }

  double trace() const { return m_[kXX] + m_[kYY] + m_[kZZ]; }
  //! Double contraction a : b (plain dot product in Mandel components).
  double contract(const SymTensor2& o) const { return m_.dot(o.m_); }
  //! Frobenius norm sqrt(a : a).
  double norm() const { return m_.norm(); }

  SymTensor2& operator+=(const SymTensor2& o) { m_ += o.m_; return *this; }
  SymTensor2& operator-=(const SymTensor2& o) { m_ -= o.m_; return *this; }
  SymTensor2& operator*=(double s) { m_ *= s; return *this; }
  SymTensor2& operator/=(double s) { m_ /= s; return *this; }

  friend SymTensor2 operator+(SymTensor2 a, const SymTensor2& b) { return a += b; }
  friend SymTensor2 operator-(SymTensor2 a, const SymTensor2& b) { return a -= b; }
  friend SymTensor2 operator-(const SymTensor2& a) { return SymTensor2(-a.m_); }
  friend SymTensor2 operator*(SymTensor2 a, double s) { return a *= s; }
  friend SymTensor2 operator*(double s, SymTensor2 a) { return a *= s; }
  friend SymTensor2 operator/(SymTensor2 a, double s) { return a /= s; }

 private:
  Vec6 m_;
};

//! Fourth-order tensor with minor symmetries, stored as its 6x6 Mandel matrix.
class SymTensor4 {
 public:
  SymTensor4() : m_(Mat6::Zero()) {}
  explicit SymTensor4(const Mat6& mandel) : m_(mandel) {}

  static SymTensor4 zero() { return SymTensor4(); }

  const Mat6& mandel() const { return m_; }
  Mat6& mandel() { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }
  double& operator()(int i, int j) { return m_(i, j); }

  //! Double contraction C : a.
  SymTensor2 operator*(const SymTensor2& a) const { return SymTensor2(m_ * a.mandel()); }
  //! Composition (A : B), i.e. (A*B) : x == A : (B : x).
  SymTensor4 operator*(const SymTensor4& o) const { return SymTensor4(m_ * o.m_); }

  SymTensor4& operator+=(const SymTensor4& o) { m_ += o.m_; return *this; }
  SymTensor4& operator-=(const SymTensor4& o) { m_ -= o.m_; return *this; }
  SymTensor4& operator*=(double s) { m_ *= s; return *this; }

  friend SymTensor4 operator+(SymTensor4 a, const SymTensor4& b) { return a += b; }
  friend SymTensor4 operator-(SymTensor4 a, const SymTensor4& b) { return a -= b; }
  friend SymTensor4 operator*(SymTensor4 a, double s) { return a *= s; }
  friend SymTensor4 operator*(double s, SymTensor4 a) { return a *= s; }

 private:
  Mat6 m_;
};

//! Dyadic product a (x) b as a fourth-order operator: (a(x)b) : x = a (b : x).
inline SymTensor4 dyad(const SymTensor2& a, const SymTensor2& b) {
  return SymTensor4(a.mandel() * b.mandel().transpose());
}

//! The classical isotropic basis operators.
//
// Is = symmetric identity, II = I (x) I, Id = Is - II/3 (deviatoric
// projector, rank 5: it annihilates the volumetric axis).
struct StandardTensors {
  static const SymTensor2& I();
  static const SymTensor4& Is();
  static const SymTensor4& II();
  static const SymTensor4& Id();
};

//! Deviatoric part a - tr(a)/3 * I.
SymTensor2 deviator(const SymTensor2& a);

//! von Mises equivalent stress sqrt(3/2 * dev(s) : dev(s)).
double equivalent_stress(const SymTensor2& s);

//! Equivalent (von Mises conjugate) strain sqrt(2/3 * dev(e) : dev(e)).
double equivalent_strain(const SymTensor2& e);

//! Inverse of a fourth-order tensor on the full 6-dimensional Mandel space.
//
// Throws SingularTensorError when the estimated condition number exceeds
// cond_cap (callers that need the inverse of an operator that is only
// invertible on a subspace must complete it first, e.g. by adding II/3).
SymTensor4 invert4(const SymTensor4& a, double cond_cap = 1.0e12);

}  // namespace vpfft

#endif  // VPFFT_TENSOR_HPP
