#include "opfactor/multiplicity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace opfactor {

namespace {

MultiplicityReport round_trace(Complex point, Complex raw,
                               MultiplicityMethod method) {
  MultiplicityReport rep;
  rep.point = point;
  rep.raw_trace = raw;
  rep.method = method;
  const double nearest = std::round(raw.real());
  rep.residual = std::abs(raw - nearest);
  if (rep.residual > kIntegerResidualTol) {
    throw AccuracyError("multiplicity: trace not near an integer",
                        rep.residual);
  }
  rep.value = static_cast<Eigen::Index>(std::llround(nearest));
  return rep;
}

double derivative_radius(Complex zeta, double eps,
                         const std::vector<Complex>& singularities) {
  double r = eps;
  for (const Complex& s : singularities) {
    r = std::min(r, std::abs(zeta - s));
  }
  return 0.5 * std::min(r, 2.0);
}

// Inner quadrature for derivative-by-Cauchy at contour nodes.
QuadratureConfig inner_config(const QuadratureConfig& quad) {
  QuadratureConfig inner = quad;
  inner.initial_nodes = std::max(32, quad.initial_nodes / 2);
  return inner;
}

}  // namespace

MultiplicityReport scalar_multiplicity(
    const std::function<Complex(Complex)>& f, Complex z0, double eps,
    const QuadratureConfig& quad, const std::vector<Complex>& singularities) {
  if (eps <= 0.0) {
    throw InputError("scalar_multiplicity: eps must be positive");
  }
  const QuadratureConfig inner = inner_config(quad);
  auto integrand = [&](Complex zeta) -> Complex {
    const Complex fz = f(zeta);
    if (std::abs(fz) < 1e-300) {
      throw ContourError("scalar_multiplicity: f vanishes on the contour");
    }
    const double r = derivative_radius(zeta, eps, singularities);
    const Complex df = integrate_circle_scalar(
        [&f, zeta](Complex w) {
          const Complex d = w - zeta;
          return f(w) / (d * d);
        },
        Circle{zeta, r}, inner);
    return df / fz;
  };
  const Complex raw = integrate_circle_scalar(integrand, Circle{z0, eps}, quad);
  return round_trace(z0, raw, MultiplicityMethod::argument_principle);
}

namespace {

MultiplicityReport winding_trace(const OperatorFunction& a, Complex z0,
                                 double eps, const QuadratureConfig& quad,
                                 MultiplicityMethod method) {
  if (a.dim_out != a.dim_in) {
    throw InputError("multiplicity: function must be square-valued");
  }
  if (eps <= 0.0) {
    eps = default_laurent_radius(a, z0);
  }
  const Eigen::Index n = a.dim_out;
  const QuadratureConfig inner = inner_config(quad);
  // Both operator orderings are accumulated from the same node
  // evaluations by stacking them into one 2n x n integrand.
  auto integrand = [&](Complex zeta) -> CMatrix {
    const CMatrix az = a(zeta);
    CMatrix ainv;
    try {
      ainv = inverse(az);
    } catch (const SingularSystemError&) {
      throw ContourError("multiplicity: A singular on the contour");
    }
    const double r = derivative_radius(zeta, std::abs(zeta - z0),
                                       a.declared_singularities);
    const CMatrix aprime = derivative(a, zeta, r, inner);
    CMatrix stacked(2 * n, n);
    stacked.topRows(n) = aprime * ainv;
    stacked.bottomRows(n) = ainv * aprime;
    return stacked;
  };
  const CMatrix integral = integrate_circle(integrand, Circle{z0, eps}, quad);
  const Complex raw_left = integral.topRows(n).trace();
  const Complex raw_right = integral.bottomRows(n).trace();
  const double ordering_gap = std::abs(raw_left - raw_right);
  if (ordering_gap > 1e-8) {
    throw AccuracyError("multiplicity: integrand orderings disagree",
                        ordering_gap);
  }
  return round_trace(z0, raw_left, method);
}

}  // namespace

MultiplicityReport algebraic_multiplicity(const OperatorFunction& a,
                                          Complex z0, double eps,
                                          const QuadratureConfig& quad) {
  return winding_trace(a, z0, eps, quad,
                       MultiplicityMethod::argument_principle);
}

MultiplicityReport meromorphic_index(const OperatorFunction& m, Complex z0,
                                     double eps,
                                     const QuadratureConfig& quad) {
  return winding_trace(m, z0, eps, quad,
                       MultiplicityMethod::argument_principle);
}

MultiplicityReport determinant_zero_order(const OperatorFunction& a,
                                          Complex z0, double eps,
                                          const QuadratureConfig& quad) {
  if (a.dim_out != a.dim_in) {
    throw InputError("determinant_zero_order: function must be square-valued");
  }
  if (eps <= 0.0) {
    eps = default_laurent_radius(a, z0);
  }
  auto f = [&a](Complex z) -> Complex { return a(z).determinant(); };
  bool all_tiny = true;
  for (int j = 0; j < 16 && all_tiny; ++j) {
    const double t = 2.0 * std::numbers::pi * j / 16;
    all_tiny = std::abs(f(z0 + eps * std::polar(1.0, t))) < 1e-14;
  }
  if (all_tiny) {
    throw DegenerateError(
        "determinant_zero_order: determinant vanishes identically");
  }
  MultiplicityReport rep =
      scalar_multiplicity(f, z0, eps, quad, a.declared_singularities);
  rep.method = MultiplicityMethod::determinant_oracle;
  return rep;
}

MultiplicityReport algebraic_multiplicity_via_principal_part(
    const OperatorFunction& a, Complex z0, double eps,
    const QuadratureConfig& quad) {
  if (eps <= 0.0) {
    eps = default_laurent_radius(a, z0);
  }
  const QuadratureConfig inner = inner_config(quad);
  OperatorFunction g;
  g.dim_out = a.dim_out;
  g.dim_in = a.dim_in;
  g.declared_singularities = a.declared_singularities;
  g.declared_singularities.push_back(z0);
  g.evaluate = [a, z0, inner](Complex zeta) -> CMatrix {
    const double r =
        derivative_radius(zeta, std::abs(zeta - z0),
                          a.declared_singularities);
    return derivative(a, zeta, r, inner) * inverse(a(zeta));
  };
  // The contour integral of the principal part reduces to the residue
  // coefficient of A' A^{-1} at z0.
  const CMatrix residue = laurent_coefficient(g, z0, -1, eps, quad);
  return round_trace(z0, residue.trace(),
                     MultiplicityMethod::argument_principle);
}

}  // namespace opfactor
