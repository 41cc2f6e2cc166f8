#include <doctest.h>

#include <cmath>

#include "opfactor/factorization.hpp"
#include "support.hpp"

using namespace opfactor;
using namespace testsupport;

namespace {

OperatorFunction diag_powers(std::vector<int> powers) {
  OperatorFunction f;
  const Eigen::Index n = static_cast<Eigen::Index>(powers.size());
  f.dim_out = n;
  f.dim_in = n;
  f.evaluate = [powers, n](Complex z) {
    CMatrix m = CMatrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      m(j, j) = std::pow(z, powers[static_cast<size_t>(j)]);
    }
    return m;
  };
  return f;
}

}  // namespace

TEST_CASE("single step on diag(z, 1)") {
  const StepResult sr = howland_step(diag_powers({1, 0}), Complex(0, 0));
  CHECK(sr.step.p == 1);
  // Q projects onto ran A(0) = span{e2}.
  CHECK(std::abs(sr.step.q_proj.matrix(1, 1) - 1.0) < 1e-10);
  CHECK(std::abs(sr.step.q_proj.matrix(0, 0)) < 1e-10);
  // A1(0) = Q A(0) - P A'(0) = diag(-1, 1), invertible.
  const CMatrix a1 = sr.next(Complex(0, 0));
  CHECK(std::abs(a1(0, 0) + 1.0) < 1e-8);
  CHECK(std::abs(a1(1, 1) - 1.0) < 1e-8);
}

TEST_CASE("step factor determinant is (z0 - z)^p") {
  const StepResult sr = howland_step(diag_powers({1, 1, 0}), Complex(0, 0));
  CHECK(sr.step.p == 2);
  for (const Complex z : {Complex(0.3, 0.1), Complex(-1, 0.5)}) {
    const Complex det = sr.step.factor(z, Complex(0, 0)).determinant();
    const Complex expected = std::pow(-z, 2);
    CHECK(std::abs(det - expected) < 1e-10);
  }
}

TEST_CASE("full factorization of diag(z^2, z)") {
  const OperatorFunction a = diag_powers({2, 1});
  const HowlandFactorization f = howland_factorize(a, Complex(0, 0));
  REQUIRE(f.order == 2);
  CHECK(f.steps[0].p == 2);
  CHECK(f.steps[1].p == 1);
  CHECK(nu(f) == 3);
  CHECK(f.regular_rcond > 0.1);
  for (const Complex z : {Complex(0.2, 0), Complex(-0.1, 0.3)}) {
    const CMatrix az = a(z);
    CHECK((reconstruct(f, z) - az).norm() < 1e-8 * (1.0 + az.norm()));
  }
}

TEST_CASE("invertible point raises NoZeroError") {
  CHECK_THROWS_AS(howland_factorize(diag_powers({1, 1}), Complex(2, 0)),
                  NoZeroError);
  CHECK_THROWS_AS(howland_step(diag_powers({1, 1}), Complex(2, 0)),
                  NoZeroError);
}

TEST_CASE("reversed factorization mirrors the p-sequence") {
  std::mt19937_64 rng = make_rng(31);
  const PowerFunction pf = random_power_function(5, rng);
  const HowlandFactorization fwd = howland_factorize(pf.a, pf.z0);
  const HowlandFactorization rev = reversed_factorize(pf.a, pf.z0);
  REQUIRE(fwd.steps.size() == rev.steps.size());
  for (size_t j = 0; j < fwd.steps.size(); ++j) {
    CHECK(fwd.steps[j].p == rev.steps[j].p);
  }
  CHECK(rev.reversed);
  // The first reversed projector spans ker A(z0).
  const SubspaceBasis kernel = kernel_basis(pf.a(pf.z0));
  const CMatrix pk = rev.steps.front().p_proj.matrix;
  CHECK((pk * kernel.vectors - kernel.vectors).norm() < 1e-8);
  for (const Complex z :
       {pf.z0 + Complex(0.2, 0), pf.z0 + Complex(-0.1, 0.15)}) {
    const CMatrix az = pf.a(z);
    CHECK((reconstruct(rev, z) - az).norm() < 1e-8 * (1.0 + az.norm()));
  }
}

TEST_CASE("p-sequence equals the conjugate partition of the powers") {
  std::mt19937_64 rng = make_rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    const PowerFunction pf = random_power_function(4 + trial, rng);
    const HowlandFactorization f = howland_factorize(pf.a, pf.z0);
    const std::vector<Eigen::Index> want = pf.p_sequence();
    REQUIRE(f.steps.size() == want.size());
    for (size_t j = 0; j < want.size(); ++j) {
      CHECK(f.steps[j].p == want[j]);
    }
    CHECK(nu(f) == pf.ma());
    CHECK(f.order == pf.pole_order());
  }
}

TEST_CASE("simple pole criterion distinguishes Jordan structure") {
  // Semisimple double eigenvalue: nu = mg = 2.
  CMatrix semi = CMatrix::Zero(2, 2);
  const SimplePoleReport s1 = is_simple_pole(pencil(semi), Complex(0, 0));
  CHECK(s1.simple);
  CHECK(s1.nu == 2);
  CHECK(s1.mg == 2);

  // One Jordan block: nu = 2, mg = 1.
  CMatrix jordan(2, 2);
  jordan << 0, 1, 0, 0;
  const SimplePoleReport s2 = is_simple_pole(pencil(jordan), Complex(0, 0));
  CHECK_FALSE(s2.simple);
  CHECK(s2.nu == 2);
  CHECK(s2.mg == 1);
}

TEST_CASE("factorization of a random Jordan pencil") {
  std::mt19937_64 rng = make_rng(4242);
  const JordanPencil jp = random_jordan_pencil(6, rng, true);
  const JordanEigenvalue& je = jp.structure.front();
  const HowlandFactorization f = howland_factorize(pencil(jp.a), je.value);
  CHECK(nu(f) == je.algebraic());
  CHECK(f.order == je.max_block());
  CHECK(f.steps.front().p == je.geometric());
}
