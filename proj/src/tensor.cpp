// Copyright (c) 2026 the vpfft authors
// SPDX-License-Identifier: Apache-2.0
//
#include "tensor.hpp"

#include <cmath>
#include <sstream>

namespace vpfft {

SymTensor2 SymTensor2::from_matrix(const Mat3& a) {
  Vec6 v;
  v[kXX] = a(0, 0);
  v[kYY] = a(1, 1);
  v[kZZ] = a(2, 2);
  v[kYZ] = kSqrt2 * 0.5 * (a(1, 2) + a(2, 1));
  v[kXZ] = kSqrt2 * 0.5 * (a(0, 2) + a(2, 0));
  v[kXY] = kSqrt2 * 0.5 * (a(0, 1) + a(1, 0));
  return SymTensor2(v);
}

Mat3 SymTensor2::to_matrix() const {
  Mat3 a;
  const double yz = m_[kYZ] / kSqrt2;
  const double xz = m_[kXZ] / kSqrt2;
  const double xy = m_[kXY] / kSqrt2;
  a << m_[kXX], xy, xz,
       xy, m_[kYY], yz,
       xz, yz, m_[kZZ];
  return a;
}

const SymTensor2& StandardTensors::I() {
  static const SymTensor2 t = SymTensor2::identity();
  return t;
}

const SymTensor4& StandardTensors::Is() {
  static const SymTensor4 t{Mat6::Identity()};
  return t;
}

const SymTensor4& StandardTensors::II() {
  static const SymTensor4 t = dyad(I(), I());
  return t;
}

const SymTensor4& StandardTensors::Id() {
  static const SymTensor4 t = Is() - II() * (1.0 / 3.0);
  return t;
}

SymTensor2 deviator(const SymTensor2& a) {
  SymTensor2 d = a;
  const double p = a.trace() / 3.0;
  d[kXX] -= p;
  d[kYY] -= p;
  d[kZZ] -= p;
  return d;
}

double equivalent_stress(const SymTensor2& s) {
  return std::sqrt(1.5) * deviator(s).norm();
}

double equivalent_strain(const SymTensor2& e) {
  return std::sqrt(2.0 / 3.0) * deviator(e).norm();
}

SymTensor4 invert4(const SymTensor4& a, double cond_cap) {
  Eigen::PartialPivLU<Mat6> lu(a.mandel());
  const double rcond = lu.rcond();
  if (!(rcond > 1.0 / cond_cap)) {
    std::ostringstream msg;
    msg << "invert4: operator is numerically singular (reciprocal condition "
        << rcond << ", cap " << cond_cap << ")";
    throw SingularTensorError(msg.str());
  }
  return SymTensor4(lu.inverse());
}

}  // namespace vpfft
