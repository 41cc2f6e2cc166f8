#include "opfactor/operator_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace opfactor {

CMatrix OperatorFunction::operator()(Complex z) const {
  if (is_declared_singularity(z)) {
    throw DomainError("OperatorFunction: evaluation at declared singularity");
  }
  CMatrix m = evaluate(z);
  if (m.rows() != dim_out || m.cols() != dim_in) {
    throw InputError("OperatorFunction: evaluator returned wrong shape");
  }
  return m;
}

bool OperatorFunction::is_declared_singularity(Complex z, double tol) const {
  for (const Complex& s : declared_singularities) {
    if (std::abs(z - s) <= tol) {
      return true;
    }
  }
  return false;
}

double OperatorFunction::distance_to_singularities(Complex z) const {
  double d = std::numeric_limits<double>::infinity();
  for (const Complex& s : declared_singularities) {
    d = std::min(d, std::abs(z - s));
  }
  return d;
}

OperatorFunction pencil(const CMatrix& a) {
  require_finite(a);
  if (a.rows() != a.cols()) {
    throw InputError("pencil: matrix must be square");
  }
  OperatorFunction f;
  f.dim_out = a.rows();
  f.dim_in = a.cols();
  const Eigen::Index n = a.rows();
  f.evaluate = [a, n](Complex z) -> CMatrix {
    return a - z * CMatrix::Identity(n, n);
  };
  f.derivative_evaluate = [n](Complex) -> CMatrix {
    return -CMatrix::Identity(n, n);
  };
  f.domain_description = "entire";
  return f;
}

OperatorFunction matrix_polynomial(std::vector<CMatrix> coeffs,
                                   Complex center) {
  if (coeffs.empty()) {
    throw InputError("matrix_polynomial: no coefficients");
  }
  const Eigen::Index rows = coeffs.front().rows();
  const Eigen::Index cols = coeffs.front().cols();
  for (const CMatrix& c : coeffs) {
    require_finite(c, "coefficient");
    if (c.rows() != rows || c.cols() != cols) {
      throw InputError("matrix_polynomial: inconsistent coefficient shapes");
    }
  }
  OperatorFunction f;
  f.dim_out = rows;
  f.dim_in = cols;
  auto horner = [](const std::vector<CMatrix>& cs, Complex u) -> CMatrix {
    CMatrix acc = cs.back();
    for (auto it = cs.rbegin() + 1; it != cs.rend(); ++it) {
      acc = acc * u + *it;
    }
    return acc;
  };
  std::vector<CMatrix> dcoeffs;
  for (size_t k = 1; k < coeffs.size(); ++k) {
    dcoeffs.push_back(static_cast<double>(k) * coeffs[k]);
  }
  if (dcoeffs.empty()) {
    dcoeffs.push_back(CMatrix::Zero(rows, cols));
  }
  f.evaluate = [coeffs = std::move(coeffs), center, horner](Complex z) {
    return horner(coeffs, z - center);
  };
  f.derivative_evaluate = [dcoeffs = std::move(dcoeffs), center,
                           horner](Complex z) {
    return horner(dcoeffs, z - center);
  };
  f.domain_description = "entire";
  return f;
}

std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs) {
  std::vector<Complex> c = coeffs;
  while (!c.empty() && std::abs(c.back()) == 0.0) {
    c.pop_back();
  }
  if (c.size() < 2) {
    return {};
  }
  const Eigen::Index n = static_cast<Eigen::Index>(c.size()) - 1;
  CMatrix companion = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    companion(i + 1, i) = 1.0;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    companion(i, n - 1) = -c[static_cast<size_t>(i)] / c.back();
  }
  Eigen::ComplexEigenSolver<CMatrix> es(companion, false);
  std::vector<Complex> roots(es.eigenvalues().data(),
                             es.eigenvalues().data() + n);
  return roots;
}

OperatorFunction rational_function(std::vector<CMatrix> numerator,
                                   std::vector<Complex> denominator) {
  if (denominator.empty()) {
    throw InputError("rational_function: empty denominator");
  }
  OperatorFunction num = matrix_polynomial(std::move(numerator));
  OperatorFunction f;
  f.dim_out = num.dim_out;
  f.dim_in = num.dim_in;
  f.declared_singularities = polynomial_roots(denominator);
  auto scalar_horner = [](const std::vector<Complex>& cs, Complex z) {
    Complex acc = cs.back();
    for (auto it = cs.rbegin() + 1; it != cs.rend(); ++it) {
      acc = acc * z + *it;
    }
    return acc;
  };
  std::vector<Complex> dden;
  for (size_t k = 1; k < denominator.size(); ++k) {
    dden.push_back(static_cast<double>(k) * denominator[k]);
  }
  if (dden.empty()) {
    dden.push_back(Complex(0.0));
  }
  f.evaluate = [num, den = denominator, scalar_horner](Complex z) -> CMatrix {
    return num.evaluate(z) / scalar_horner(den, z);
  };
  // (N/d)' = N'/d - N d'/d^2.
  f.derivative_evaluate = [num = std::move(num), den = std::move(denominator),
                           dden = std::move(dden),
                           scalar_horner](Complex z) -> CMatrix {
    const Complex d = scalar_horner(den, z);
    return num.derivative_evaluate(z) / d -
           num.evaluate(z) * (scalar_horner(dden, z) / (d * d));
  };
  return f;
}

double default_laurent_radius(const OperatorFunction& f, Complex z0) {
  double d = std::numeric_limits<double>::infinity();
  for (const Complex& s : f.declared_singularities) {
    const double dist = std::abs(s - z0);
    if (dist > 1e-14) {
      d = std::min(d, dist);
    }
  }
  double eps = std::isfinite(d) ? 0.5 * d : 1.0;
  return std::clamp(eps, kMinContourRadius, 1.0);
}

namespace {

void check_punctured_disk(const OperatorFunction& f, Complex z0, double eps) {
  if (eps <= 0.0) {
    throw InputError("laurent: eps must be positive");
  }
  for (const Complex& s : f.declared_singularities) {
    const double dist = std::abs(s - z0);
    if (dist > 1e-14 && dist <= eps * (1.0 + 1e-9)) {
      throw ContourError("laurent: another declared singularity inside circle");
    }
  }
}

double contour_scale(const OperatorFunction& f, Complex z0, double eps) {
  double scale = 0.0;
  for (int j = 0; j < 16; ++j) {
    const double t = 2.0 * std::numbers::pi * j / 16;
    scale = std::max(scale, f(z0 + eps * std::polar(1.0, t)).norm());
  }
  return scale;
}

}  // namespace

CMatrix laurent_coefficient(const OperatorFunction& f, Complex z0, int k,
                            double eps, const QuadratureConfig& quad) {
  check_punctured_disk(f, z0, eps);
  auto integrand = [&f, z0, k](Complex zeta) -> CMatrix {
    return std::pow(zeta - z0, Complex(-k - 1)) * f(zeta);
  };
  return integrate_circle(integrand, Circle{z0, eps}, quad);
}

int pole_order(const OperatorFunction& f, Complex z0, int kmax_probe,
               double tol, double eps, const QuadratureConfig& quad) {
  if (kmax_probe <= 0) {
    kmax_probe = static_cast<int>(f.dim_out) * 4;
  }
  if (eps <= 0.0) {
    eps = default_laurent_radius(f, z0);
  }
  check_punctured_disk(f, z0, eps);
  if (tol <= 0.0) {
    tol = 1e-8 * contour_scale(f, z0, eps);
  }
  int order = 0;
  for (int k = 1; k <= kmax_probe; ++k) {
    const double norm = laurent_coefficient(f, z0, -k, eps, quad).norm();
    if (norm > tol) {
      order = k;
    }
  }
  if (order == kmax_probe && kmax_probe > 0) {
    // The deepest probed coefficient is still nonzero; the true order may
    // exceed the probe depth.
    throw OrderExceedsProbeError("pole_order: order reaches probe depth");
  }
  return order;
}

PrincipalPart principal_part(const OperatorFunction& f, Complex z0, double eps,
                             const QuadratureConfig& quad) {
  if (eps <= 0.0) {
    eps = default_laurent_radius(f, z0);
  }
  const int n0 = pole_order(f, z0, 0, 0.0, eps, quad);
  PrincipalPart pp;
  pp.center = z0;
  for (int k = 1; k <= n0; ++k) {
    CMatrix m = laurent_coefficient(f, z0, -k, eps, quad);
    pp.ranks.push_back(numerical_rank(m).rank);
    pp.coefficients.push_back(std::move(m));
  }
  return pp;
}

LaurentExpansion laurent_expansion(const OperatorFunction& f, Complex z0,
                                   int kmax, double eps,
                                   const QuadratureConfig& quad) {
  if (eps <= 0.0) {
    eps = default_laurent_radius(f, z0);
  }
  const int n0 = pole_order(f, z0, 0, 0.0, eps, quad);
  LaurentExpansion le;
  le.center = z0;
  le.min_order = -n0;
  le.radius = eps;
  for (int k = -n0; k <= kmax; ++k) {
    le.coefficients.push_back(laurent_coefficient(f, z0, k, eps, quad));
  }
  return le;
}

CMatrix derivative(const OperatorFunction& f, Complex z, double eps,
                   const QuadratureConfig& quad) {
  if (f.derivative_evaluate) {
    if (f.is_declared_singularity(z)) {
      throw DomainError("derivative: evaluation at declared singularity");
    }
    return f.derivative_evaluate(z);
  }
  if (eps <= 0.0) {
    eps = default_laurent_radius(f, z);
  }
  if (f.distance_to_singularities(z) <= eps * (1.0 + 1e-9)) {
    throw ContourError("derivative: declared singularity inside circle");
  }
  auto integrand = [&f, z](Complex zeta) -> CMatrix {
    const Complex d = zeta - z;
    return f(zeta) / (d * d);
  };
  return integrate_circle(integrand, Circle{z, eps}, quad);
}

}  // namespace opfactor
