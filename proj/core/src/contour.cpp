#include "opfactor/contour.hpp"

#include <cmath>
#include <numbers>

namespace opfactor {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void check_config(const QuadratureConfig& quad) {
  if (quad.initial_nodes < 8 || !power_of_two(quad.initial_nodes)) {
    throw InputError("quadrature: initial_nodes must be a power of two >= 8");
  }
  if (quad.rel_tol <= 0.0) {
    throw InputError("quadrature: rel_tol must be positive");
  }
}

// Node sum for (1/2*pi*i) oint f dzeta = (r/N) sum_j f(c + r e^{i t_j})
// e^{i t_j}, over either all N nodes or only the odd-indexed half (the
// nodes a doubling adds), accumulated in fixed index order.
CMatrix node_sum(const std::function<CMatrix(Complex)>& f, const Circle& c,
                 int nodes, bool odd_only) {
  CMatrix acc;
  bool first = true;
  for (int j = odd_only ? 1 : 0; j < nodes; j += odd_only ? 2 : 1) {
    const double t = 2.0 * std::numbers::pi * j / nodes;
    const Complex w = std::polar(1.0, t);
    const CMatrix val = f(c.center + c.radius * w) * w;
    if (first) {
      acc = val;
      first = false;
    } else {
      acc += val;
    }
  }
  return acc;
}

}  // namespace

CMatrix integrate_circle(const std::function<CMatrix(Complex)>& f,
                         const Circle& c, const QuadratureConfig& quad) {
  check_config(quad);
  if (c.radius <= 0.0) {
    throw InputError("integrate_circle: radius must be positive");
  }
  int nodes = quad.initial_nodes;
  CMatrix sum = node_sum(f, c, nodes, /*odd_only=*/false);
  CMatrix prev = sum * (c.radius / nodes);
  for (int d = 0; d < quad.max_doublings; ++d) {
    nodes *= 2;
    // Even-indexed nodes of the doubled rule are exactly the previous
    // ones; only the new midpoints are evaluated.
    sum += node_sum(f, c, nodes, /*odd_only=*/true);
    CMatrix cur = sum * (c.radius / nodes);
    const double diff = (cur - prev).norm();
    if (diff <= quad.rel_tol * (1.0 + cur.norm())) {
      return cur;
    }
    prev = std::move(cur);
  }
  throw AccuracyError("integrate_circle: no convergence within max_doublings",
                      0.0);
}

Complex integrate_circle_scalar(const std::function<Complex(Complex)>& f,
                                const Circle& c,
                                const QuadratureConfig& quad) {
  auto wrapped = [&f](Complex z) {
    CMatrix m(1, 1);
    m(0, 0) = f(z);
    return m;
  };
  return integrate_circle(wrapped, c, quad)(0, 0);
}

Projector riesz_projection(const CMatrix& a, Complex z0, double eps,
                           const QuadratureConfig& quad) {
  require_finite(a);
  if (a.rows() != a.cols()) {
    throw InputError("riesz_projection: matrix must be square");
  }
  if (eps <= 0.0) {
    throw InputError("riesz_projection: radius must be positive");
  }
  Eigen::ComplexEigenSolver<CMatrix> es(a, /*computeEigenvectors=*/false);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    const double dist = std::abs(std::abs(es.eigenvalues()(i) - z0) - eps);
    if (dist < 1e-8) {
      throw SeparationError("riesz_projection: eigenvalue on or near contour");
    }
  }
  const Eigen::Index n = a.rows();
  auto resolvent = [&a, n](Complex zeta) {
    return solve(a - zeta * CMatrix::Identity(n, n),
                 CMatrix::Identity(n, n)).x;
  };
  Projector p;
  p.matrix = -integrate_circle(resolvent, Circle{z0, eps}, quad);
  p.orthogonal = false;

  const double idem = (p.matrix * p.matrix - p.matrix).norm();
  if (idem > 1e-8) {
    throw AccuracyError("riesz_projection: result not idempotent", idem);
  }
  const Complex tr = p.matrix.trace();
  const double res = std::abs(tr - std::round(tr.real()));
  if (res > 1e-6) {
    throw AccuracyError("riesz_projection: trace not near an integer", res);
  }
  return p;
}

Eigen::Index riesz_multiplicity(const CMatrix& a, Complex z0, double eps,
                                const QuadratureConfig& quad) {
  return riesz_projection(a, z0, eps, quad).rank();
}

}  // namespace opfactor
