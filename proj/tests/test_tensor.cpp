// Copyright (c) 2026 the vpfft authors
// SPDX-License-Identifier: Apache-2.0
//
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "tensor.hpp"

using namespace vpfft;

namespace {

// ---------------------------------------------------------------------------
// Reference implementations in plain 3x3 index arithmetic. These are the
// oracles the Mandel representation is checked against; they deliberately
// share no code with the library.
// ---------------------------------------------------------------------------

using A3 = std::array<std::array<double, 3>, 3>;

double trace3(const A3& a) { return a[0][0] + a[1][1] + a[2][2]; }

A3 dev3(const A3& a) {
  A3 d = a;
  const double p = trace3(a) / 3.0;
  for (int i = 0; i < 3; ++i) d[i][i] -= p;
  return d;
}

double ddot3(const A3& a, const A3& b) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += a[i][j] * b[i][j];
  return s;
}

double vonmises3(const A3& a) {
  const A3 d = dev3(a);
  return std::sqrt(1.5 * ddot3(d, d));
}

A3 to3(const SymTensor2& t) {
  const Mat3 m = t.to_matrix();
  A3 a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a[i][j] = m(i, j);
  return a;
}

SymTensor2 random_sym(std::mt19937& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) m(i, j) = m(j, i) = u(rng);
  return SymTensor2::from_matrix(m);
}

// Fourth-order reference: C[i][j][k][l] applied by explicit summation.
using C81 = std::array<std::array<std::array<std::array<double, 3>, 3>, 3>, 3>;

A3 apply81(const C81& c, const A3& x) {
  A3 y{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) s += c[i][j][k][l] * x[k][l];
      y[i][j] = s;
    }
  return y;
}

C81 deviatoric_projector81() {
  C81 c{};
  auto kron = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          c[i][j][k][l] = 0.5 * (kron(i, k) * kron(j, l) + kron(i, l) * kron(j, k)) -
                          kron(i, j) * kron(k, l) / 3.0;
  return c;
}

}  // namespace

TEST_CASE("mandel round trip is lossless") {
  std::mt19937 rng(42);
  for (int rep = 0; rep < 50; ++rep) {
    const SymTensor2 a = random_sym(rng, 3.0);
    const SymTensor2 b = SymTensor2::from_matrix(a.to_matrix());
    for (int i = 0; i < 6; ++i)
      CHECK(b[i] == doctest::Approx(a[i]).epsilon(1e-15));
    // matrix -> mandel -> matrix
    Mat3 m = a.to_matrix();
    Mat3 m2 = SymTensor2::from_matrix(m).to_matrix();
    CHECK((m2 - m).cwiseAbs().maxCoeff() <= 1e-15 * (1.0 + m.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("contraction equals 3x3 double contraction") {
  std::mt19937 rng(1234);
  for (int rep = 0; rep < 50; ++rep) {
    const SymTensor2 a = random_sym(rng);
    const SymTensor2 b = random_sym(rng);
    CHECK(a.contract(b) == doctest::Approx(ddot3(to3(a), to3(b))).epsilon(1e-13));
  }
  // and norms
  const SymTensor2 a = random_sym(rng);
  CHECK(a.norm() == doctest::Approx(std::sqrt(ddot3(to3(a), to3(a)))).epsilon(1e-13));
}

TEST_CASE("deviator matches 3x3 reference") {
  std::mt19937 rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    const SymTensor2 a = random_sym(rng, 2.0);
    const A3 d_ref = dev3(to3(a));
    const A3 d = to3(deviator(a));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(d[i][j] == doctest::Approx(d_ref[i][j]).epsilon(1e-13));
    CHECK(deviator(a).trace() == doctest::Approx(0.0).epsilon(1e-13));
  }

  SUBCASE("uniaxial closed form") {
    const double s = 1.7;
    const SymTensor2 d = deviator(SymTensor2::diagonal(s, 0.0, 0.0));
    CHECK(d[kXX] == doctest::Approx(2.0 * s / 3.0));
    CHECK(d[kYY] == doctest::Approx(-s / 3.0));
    CHECK(d[kZZ] == doctest::Approx(-s / 3.0));
    CHECK(d[kXY] == 0.0);
  }
}

TEST_CASE("equivalent stress and strain") {
  std::mt19937 rng(99);
  for (int rep = 0; rep < 50; ++rep) {
    const SymTensor2 a = random_sym(rng, 5.0);
    CHECK(equivalent_stress(a) == doctest::Approx(vonmises3(to3(a))).epsilon(1e-13));
    CHECK(equivalent_strain(a) ==
          doctest::Approx(2.0 / 3.0 * vonmises3(to3(a))).epsilon(1e-13));
  }

  SUBCASE("pure shear stress tau gives sqrt(3) tau") {
    const double tau = 0.35;
    Mat3 m = Mat3::Zero();
    m(0, 1) = m(1, 0) = tau;
    CHECK(equivalent_stress(SymTensor2::from_matrix(m)) ==
          doctest::Approx(std::sqrt(3.0) * tau).epsilon(1e-14));
  }

  SUBCASE("imposed biaxial direction has unit equivalent strain per unit amplitude") {
    // sqrt(3)/2 * (ex ex - ey ey), scaled by 0.05
    const double amp = 0.05;
    const double c = std::sqrt(3.0) / 2.0 * amp;
    const SymTensor2 e = SymTensor2::diagonal(c, -c, 0.0);
    CHECK(equivalent_strain(e) == doctest::Approx(amp).epsilon(1e-14));
  }

  SUBCASE("hydrostatic tensors have zero equivalent measure") {
    const SymTensor2 p = StandardTensors::I() * 4.2;
    CHECK(equivalent_stress(p) == doctest::Approx(0.0));
    CHECK(equivalent_strain(p) == doctest::Approx(0.0));
  }
}

TEST_CASE("standard fourth-order operators") {
  std::mt19937 rng(2024);
  const SymTensor2 a = random_sym(rng);

  SUBCASE("Is is the identity on symmetric tensors") {
    const SymTensor2 b = StandardTensors::Is() * a;
    CHECK((b.mandel() - a.mandel()).norm() == doctest::Approx(0.0));
  }

  SUBCASE("II scales with trace") {
    const SymTensor2 b = StandardTensors::II() * a;
    CHECK((b.mandel() - (StandardTensors::I() * a.trace()).mandel()).norm() ==
          doctest::Approx(0.0).epsilon(1e-13));
  }

  SUBCASE("Id reproduces the deviatoric projector, 3x3x3x3 reference") {
    const C81 id_ref = deviatoric_projector81();
    const A3 y_ref = apply81(id_ref, to3(a));
    const A3 y = to3(StandardTensors::Id() * a);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(y[i][j] == doctest::Approx(y_ref[i][j]).epsilon(1e-13));
  }

  SUBCASE("Id is idempotent and annihilates volumetric input") {
    const SymTensor4 id2 = StandardTensors::Id() * StandardTensors::Id();
    CHECK((id2.mandel() - StandardTensors::Id().mandel()).norm() ==
          doctest::Approx(0.0).epsilon(1e-14));
    const SymTensor2 z = StandardTensors::Id() * StandardTensors::I();
    CHECK(z.norm() == doctest::Approx(0.0));
  }

  SUBCASE("dyad contracts as a (b : x)") {
    const SymTensor2 b = random_sym(rng);
    const SymTensor2 x = random_sym(rng);
    const SymTensor2 y = dyad(a, b) * x;
    const SymTensor2 y_ref = a * b.contract(x);
    CHECK((y.mandel() - y_ref.mandel()).norm() < 1e-13);
  }
}

TEST_CASE("invert4") {
  SUBCASE("identity inverts to identity") {
    const SymTensor4 inv = invert4(StandardTensors::Is());
    CHECK((inv.mandel() - Mat6::Identity()).norm() == doctest::Approx(0.0).epsilon(1e-14));
  }

  SUBCASE("isotropic stiffness inverts to compliance") {
    const double K = 172.35e9, G = 79.547e9;
    const SymTensor4 C = StandardTensors::II() * K + StandardTensors::Id() * (2.0 * G);
    const SymTensor4 S = invert4(C);
    const SymTensor4 S_ref =
        StandardTensors::II() * (1.0 / (9.0 * K)) + StandardTensors::Id() * (1.0 / (2.0 * G));
    CHECK((S.mandel() - S_ref.mandel()).norm() <=
          1e-14 * S_ref.mandel().norm());
    // inverse composes to identity
    CHECK(((S * C).mandel() - Mat6::Identity()).norm() < 1e-12);
  }

  SUBCASE("involution on a random well-conditioned operator") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Mat6 m;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) m(i, j) = u(rng);
    m += 8.0 * Mat6::Identity();  // keep it comfortably invertible
    const SymTensor4 a{m};
    const SymTensor4 aii = invert4(invert4(a));
    CHECK((aii.mandel() - m).norm() <= 1e-12 * m.norm());
  }

  SUBCASE("singular operators throw") {
    CHECK_THROWS_AS(invert4(StandardTensors::II()), SingularTensorError);  // rank 1
    CHECK_THROWS_AS(invert4(StandardTensors::Id()), SingularTensorError);  // rank 5
    CHECK_THROWS_AS(invert4(SymTensor4::zero()), SingularTensorError);
    // completing the deviatoric projector with II/3 makes it invertible
    const SymTensor4 completed = StandardTensors::Id() + StandardTensors::II() * (1.0 / 3.0);
    CHECK_NOTHROW(invert4(completed));
  }
}
