// Microbenchmarks for the contour-integration and factorization hot paths.

#include <random>

#include <benchmark/benchmark.h>

#include "opfactor/contour.hpp"
#include "opfactor/factorization.hpp"
#include "opfactor/multiplicity.hpp"
#include "opfactor/operator_function.hpp"

namespace {

using namespace opfactor;

// Deterministic companion-style matrix with a double eigenvalue at 1 and
// the rest spread on a grid, sized by the benchmark argument.
CMatrix test_matrix(Eigen::Index n) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix s(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      s(i, j) = Complex(g(rng), g(rng));
    }
  }
  Eigen::HouseholderQR<CMatrix> qr(s);
  const CMatrix q = qr.householderQ();
  CMatrix jform = CMatrix::Zero(n, n);
  jform(0, 0) = 1.0;
  jform(1, 1) = 1.0;
  jform(0, 1) = 1.0;  // one Jordan block of size 2 at z = 1
  for (Eigen::Index k = 2; k < n; ++k) {
    jform(k, k) = Complex(-2.0 + static_cast<double>(k % 5),
                          static_cast<double>(k % 3) - 1.0);
  }
  return q * jform * q.adjoint();
}

void bm_integrate_circle(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const CMatrix a = test_matrix(n);
  const CMatrix id = CMatrix::Identity(n, n);
  auto integrand = [&](Complex zeta) -> CMatrix {
    return -inverse(a - zeta * id);
  };
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        integrate_circle(integrand, Circle{Complex(1.0, 0.0), 0.4}));
  }
}
BENCHMARK(bm_integrate_circle)->Arg(4)->Arg(8)->Arg(16);

void bm_riesz_projection(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const CMatrix a = test_matrix(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(riesz_projection(a, Complex(1.0, 0.0), 0.4));
  }
}
BENCHMARK(bm_riesz_projection)->Arg(4)->Arg(8)->Arg(16);

void bm_algebraic_multiplicity(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const OperatorFunction f = pencil(test_matrix(n));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        algebraic_multiplicity(f, Complex(1.0, 0.0), 0.4));
  }
}
BENCHMARK(bm_algebraic_multiplicity)->Arg(4)->Arg(8)->Arg(16);

void bm_howland_factorize(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const OperatorFunction f = pencil(test_matrix(n));
  for (auto _ : state) {
    benchmark::DoNotOptimize(howland_factorize(f, Complex(1.0, 0.0)));
  }
}
BENCHMARK(bm_howland_factorize)->Arg(4)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
