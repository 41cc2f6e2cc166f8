#include <doctest.h>

#include <cmath>

#include "opfactor/operator_function.hpp"
#include "support.hpp"

using namespace opfactor;
using namespace testsupport;

TEST_CASE("pencil evaluation") {
  CMatrix a(2, 2);
  a << 3, 1, 0, 2;
  const OperatorFunction f = pencil(a);
  const CMatrix v = f(Complex(1, 0));
  CHECK(std::abs(v(0, 0) - 2.0) < 1e-15);
  CHECK(std::abs(v(1, 1) - 1.0) < 1e-15);
}

TEST_CASE("matrix polynomial uses the shifted variable") {
  // F(z) = I + (z - 2) diag(1, 0)
  CMatrix c0 = CMatrix::Identity(2, 2);
  CMatrix c1 = CMatrix::Zero(2, 2);
  c1(0, 0) = 1;
  const OperatorFunction f = matrix_polynomial({c0, c1}, Complex(2, 0));
  CHECK(std::abs(f(Complex(2, 0))(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(f(Complex(3, 0))(0, 0) - 2.0) < 1e-15);
}

TEST_CASE("polynomial roots via companion matrix") {
  // (z - 1)(z - 2) = 2 - 3z + z^2
  const std::vector<Complex> roots =
      polynomial_roots({Complex(2), Complex(-3), Complex(1)});
  REQUIRE(roots.size() == 2);
  const double r0 = std::min(std::abs(roots[0] - 1.0), std::abs(roots[0] - 2.0));
  const double r1 = std::min(std::abs(roots[1] - 1.0), std::abs(roots[1] - 2.0));
  CHECK(r0 < 1e-10);
  CHECK(r1 < 1e-10);
}

TEST_CASE("rational function declares its poles and rejects evaluation there") {
  // F(z) = I / z
  const OperatorFunction f =
      rational_function({CMatrix::Identity(2, 2)}, {Complex(0), Complex(1)});
  REQUIRE(f.declared_singularities.size() == 1);
  CHECK(std::abs(f.declared_singularities[0]) < 1e-10);
  CHECK_THROWS_AS(f(Complex(0, 0)), DomainError);
  CHECK(std::abs(f(Complex(2, 0))(0, 0) - 0.5) < 1e-12);
}

TEST_CASE("Laurent coefficients of an explicit principal part") {
  // F(z) = (diag(0,1) + z diag(1,0)) / z^2 = diag(1/z, 1/z^2) around 0.
  const OperatorFunction f = rational_function(
      {CMatrix((CMatrix(2, 2) << 0, 0, 0, 1).finished()),
       CMatrix((CMatrix(2, 2) << 1, 0, 0, 0).finished())},
      {Complex(0), Complex(0), Complex(1)});
  const CMatrix m_2 = laurent_coefficient(f, Complex(0, 0), -2, 0.5);
  const CMatrix m_1 = laurent_coefficient(f, Complex(0, 0), -1, 0.5);
  const CMatrix m_0 = laurent_coefficient(f, Complex(0, 0), 0, 0.5);
  CHECK(std::abs(m_2(1, 1) - 1.0) < 1e-10);
  CHECK(std::abs(m_2(0, 0)) < 1e-10);
  CHECK(std::abs(m_1(0, 0) - 1.0) < 1e-10);
  CHECK(m_0.norm() < 1e-10);

  CHECK(pole_order(f, Complex(0, 0)) == 2);
  const PrincipalPart pp = principal_part(f, Complex(0, 0));
  CHECK(pp.order() == 2);
  CHECK(pp.ranks[0] == 1);
  CHECK(pp.ranks[1] == 1);
}

TEST_CASE("pole_order is zero at an analytic point") {
  const OperatorFunction f = pencil(CMatrix::Identity(2, 2));
  CHECK(pole_order(f, Complex(5, 0)) == 0);
}

TEST_CASE("Laurent circle must exclude other singularities") {
  const OperatorFunction f = rational_function(
      {CMatrix::Identity(1, 1)}, {Complex(0), Complex(-1), Complex(1)});
  // Poles at 0 and 1; a radius-2 circle around 0 swallows the pole at 1.
  CHECK_THROWS_AS(laurent_coefficient(f, Complex(0, 0), -1, 2.0),
                  ContourError);
}

TEST_CASE("derivative by Cauchy integral matches closed forms") {
  // F(z) = diag(z^2, exp(z))
  OperatorFunction f;
  f.dim_out = 2;
  f.dim_in = 2;
  f.evaluate = [](Complex z) {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 0) = z * z;
    m(1, 1) = std::exp(z);
    return m;
  };
  const CMatrix d = derivative(f, Complex(1, 0), 0.5);
  CHECK(std::abs(d(0, 0) - 2.0) < 1e-10);
  CHECK(std::abs(d(1, 1) - std::exp(1.0)) < 1e-10);
}

TEST_CASE("default Laurent radius stays clear of neighbors") {
  const OperatorFunction f = rational_function(
      {CMatrix::Identity(1, 1)}, {Complex(0), Complex(-0.25), Complex(1)});
  // Poles at 0 and 0.25.
  const double r = default_laurent_radius(f, Complex(0, 0));
  CHECK(r == doctest::Approx(0.125));
}
