#include <doctest.h>

#include <cmath>

#include "opfactor/birman_schwinger.hpp"
#include "support.hpp"

using namespace opfactor;
using namespace testsupport;

namespace {

PerturbationProblem example_one() {
  CMatrix h0(2, 2), v(2, 2);
  h0 << 1, 1, 0, 1;
  v << 0, 0, -1, -2;
  return PerturbationProblem(h0, v, CMatrix::Identity(2, 2));
}

PerturbationProblem example_two() {
  CMatrix h0(2, 2), v(2, 2);
  h0 << 1, 1, 0, 1;
  v << 0, -1, 1, -1;
  return PerturbationProblem(h0, v, CMatrix::Identity(2, 2));
}

}  // namespace

TEST_CASE("derived operator and spectra of the first worked example") {
  const PerturbationProblem p = example_one();
  CMatrix h_want(2, 2);
  h_want << 1, 1, -1, -1;
  CHECK((p.h() - h_want).norm() < 1e-14);
  REQUIRE(p.spectrum_h0().size() == 1);
  CHECK(p.spectrum_h0()[0].multiplicity == 2);
  CHECK(std::abs(p.spectrum_h0()[0].value - 1.0) < 1e-8);
  REQUIRE(p.spectrum_h().size() == 1);
  CHECK(std::abs(p.spectrum_h()[0].value) < 1e-7);
}

TEST_CASE("K(0) matches the closed forms of both examples") {
  CMatrix k1_want(2, 2), k2_want(2, 2);
  k1_want << 0, 0, 1, 1;
  k2_want << 0, 1, -1, 2;
  CHECK((bs_operator(example_one())(Complex(0, 0)) - k1_want).norm() < 1e-12);
  CHECK((bs_operator(example_two())(Complex(0, 0)) - k2_want).norm() < 1e-12);
}

TEST_CASE("det(I - K(z)) closed forms") {
  // Example one: z^2 / (1-z)^2; example two: -z / (1-z).
  for (const Complex z : {Complex(0.3, 0.2), Complex(-0.5, 0.1)}) {
    const Complex d1 = id_minus_k(example_one())(z).determinant();
    const Complex want1 = z * z / ((1.0 - z) * (1.0 - z));
    CHECK(std::abs(d1 - want1) < 1e-12);
    const Complex d2 = id_minus_k(example_two())(z).determinant();
    const Complex want2 = -z / (1.0 - z);
    CHECK(std::abs(d2 - want2) < 1e-12);
  }
}

TEST_CASE("resolvent identity matches direct inversion") {
  std::mt19937_64 rng = make_rng(21);
  const PerturbationProblem p = random_perturbation(5, 3, rng);
  for (const Complex z : {Complex(4, 4), Complex(-3, 2.5)}) {
    const CMatrix direct = inverse(
        p.h() - z * CMatrix::Identity(p.dim_h(), p.dim_h()));
    CHECK((resolvent(p, z) - direct).norm() < 1e-9 * direct.norm());
    CHECK(symmetric_identity_check(p, z) < 1e-10);
  }
}

TEST_CASE("resolvent guards its domain") {
  const PerturbationProblem p = example_one();
  CHECK_THROWS_AS(resolvent(p, Complex(1, 0)), DomainError);
  // z = 0 is an eigenvalue of H: the detector fires.
  CHECK_THROWS_AS(resolvent(p, Complex(0, 0)), BirmanSchwingerSingularity);
}

TEST_CASE("geometric identity on both examples") {
  const BSVerdict v1 = check_geometric(example_one(), Complex(0, 0));
  CHECK(v1.ok);
  CHECK(*v1.mg_h == 1);
  CHECK(*v1.mg_k == 1);
  const BSVerdict v2 = check_geometric(example_two(), Complex(0, 0));
  CHECK(v2.ok);
  CHECK(*v2.mg_h == 1);
}

TEST_CASE("algebraic identity distinguishes the two examples") {
  const BSVerdict v1 = check_algebraic(example_one(), Complex(0, 0));
  CHECK(v1.ok);
  CHECK(*v1.ma_h == 2);
  CHECK(*v1.ma_bs == 2);
  CHECK(*v1.nu_bs == 2);
  const BSVerdict v2 = check_algebraic(example_two(), Complex(0, 0));
  CHECK(v2.ok);
  CHECK(*v2.ma_h == 1);
  CHECK(*v2.ma_bs == 1);
  CHECK(*v2.nu_bs == 1);
}

TEST_CASE("m_a(1; K(0)) differs between the examples") {
  CHECK(riesz_multiplicity(bs_operator(example_one())(Complex(0, 0)),
                           Complex(1, 0), 0.5) == 1);
  CHECK(riesz_multiplicity(bs_operator(example_two())(Complex(0, 0)),
                           Complex(1, 0), 0.5) == 2);
}

TEST_CASE("Weinstein-Aronszajn at the shared spectral point") {
  // Example one at z0 = 1: m_a(1;H) = 0, m_a(1;H0) = 2, index = -2.
  const BSVerdict w = weinstein_aronszajn(example_one(), Complex(1, 0));
  CHECK(w.ok);
  CHECK(*w.ma_h == 0);
  CHECK(*w.ma_h0 == 2);
  CHECK(*w.wa_index == -2);
  // Example two at z0 = 1: m_a(1;H) = 1, index = -1.
  const BSVerdict w2 = weinstein_aronszajn(example_two(), Complex(1, 0));
  CHECK(w2.ok);
  CHECK(*w2.ma_h == 1);
  CHECK(*w2.ma_h0 == 2);
  CHECK(*w2.wa_index == -1);
}

TEST_CASE("WA rejects points in neither spectrum") {
  CHECK_THROWS_AS(weinstein_aronszajn(example_one(), Complex(5, 5)),
                  InputError);
}

TEST_CASE("eigenvector transfer in both directions on example one") {
  const PerturbationProblem p = example_one();
  CVector f(2);
  f << 1, -1;  // H f = 0
  const CVector g =
      eigenvector_transfer_forward(p, Complex(0, 0), f, Complex(3, 1));
  // Fixed point of K(0).
  const CVector kg = bs_operator(p)(Complex(0, 0)) * g;
  CHECK((kg - g).norm() < 1e-10 * (1.0 + g.norm()));
  const CVector back = eigenvector_transfer_backward(p, Complex(0, 0), g);
  const double align = std::abs(f.dot(back)) / (f.norm() * back.norm());
  CHECK(align > 1.0 - 1e-10);
}

TEST_CASE("transfer rejects non-eigenvectors") {
  const PerturbationProblem p = example_one();
  CVector not_eigen(2);
  not_eigen << 1, 1;
  CHECK_THROWS_AS(eigenvector_transfer_forward(p, Complex(0, 0), not_eigen,
                                               Complex(3, 1)),
                  InputError);
  CVector not_fixed(2);
  not_fixed << 1, 0;
  CHECK_THROWS_AS(eigenvector_transfer_backward(p, Complex(0, 0), not_fixed),
                  InputError);
}

TEST_CASE("zero perturbation is trivially consistent") {
  std::mt19937_64 rng = make_rng(55);
  const CMatrix h0 = random_gaussian(4, 4, rng);
  const CMatrix zero = CMatrix::Zero(2, 4);
  const PerturbationProblem p(h0, zero, zero);
  CHECK((p.h() - h0).norm() == 0.0);
  CHECK((bs_operator(p)(Complex(10, 0))).norm() == 0.0);
}

TEST_CASE("shape mismatches are input errors") {
  CHECK_THROWS_AS(PerturbationProblem(CMatrix::Identity(3, 3),
                                      CMatrix::Zero(2, 4),
                                      CMatrix::Zero(2, 3)),
                  InputError);
  CHECK_THROWS_AS(PerturbationProblem(CMatrix::Identity(3, 2),
                                      CMatrix::Zero(2, 2),
                                      CMatrix::Zero(2, 2)),
                  InputError);
}
