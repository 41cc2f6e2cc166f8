#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "opfactor/contour.hpp"
#include "opfactor/linalg.hpp"

namespace opfactor {

/// A matrix-valued function of one complex variable with declared
/// singular set. The library never evaluates at a declared singularity;
/// callers get a DomainError instead.
struct OperatorFunction {
  Eigen::Index dim_out = 0;
  Eigen::Index dim_in = 0;
  std::function<CMatrix(Complex)> evaluate;
  /// Optional closed-form derivative; when absent, `derivative` falls
  /// back to a Cauchy integral.
  std::function<CMatrix(Complex)> derivative_evaluate;
  std::vector<Complex> declared_singularities;
  std::string domain_description;

  /// Evaluation guarded against declared singularities (exact match or
  /// within 1e-14 of one).
  CMatrix operator()(Complex z) const;

  bool is_declared_singularity(Complex z, double tol = 1e-14) const;

  /// Distance from z to the nearest declared singularity; infinity when
  /// the singular set is empty.
  double distance_to_singularities(Complex z) const;
};

/// A(z) = a - z I.
OperatorFunction pencil(const CMatrix& a);

/// Matrix polynomial sum_k coeffs[k] * (z - center)^k.
OperatorFunction matrix_polynomial(std::vector<CMatrix> coeffs,
                                   Complex center = 0.0);

/// N(z) / d(z) with N a matrix polynomial (coefficients of z^k) and d a
/// scalar polynomial; the roots of d are the declared singularities.
OperatorFunction rational_function(std::vector<CMatrix> numerator,
                                   std::vector<Complex> denominator);

/// Roots of sum_k coeffs[k] z^k via the companion matrix.
std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs);

struct LaurentExpansion {
  Complex center;
  int min_order = 0;  // -N0
  std::vector<CMatrix> coefficients;  // M_k for k = min_order ... max_order
  double radius = 0.0;

  const CMatrix& coefficient(int k) const {
    return coefficients.at(static_cast<size_t>(k - min_order));
  }
  int max_order() const {
    return min_order + static_cast<int>(coefficients.size()) - 1;
  }
};

struct PrincipalPart {
  Complex center;
  std::vector<CMatrix> coefficients;  // M_{-k}, k = 1 ... N0
  std::vector<Eigen::Index> ranks;

  int order() const { return static_cast<int>(coefficients.size()); }
};

/// Default Laurent radius around z0: half the distance to the nearest
/// other declared singularity, capped at 1.
double default_laurent_radius(const OperatorFunction& f, Complex z0);

/// Laurent coefficient M_k of F at z0 by Cauchy's formula,
/// (1/2*pi*i) oint (zeta - z0)^{-k-1} F(zeta) dzeta over C(z0; eps).
/// The punctured disk must contain no other declared singularity.
CMatrix laurent_coefficient(const OperatorFunction& f, Complex z0, int k,
                            double eps, const QuadratureConfig& quad = {});

/// Smallest N0 >= 0 such that all probed M_{-k}, k > N0, vanish below tol.
/// tol <= 0 selects the scale-aware default 1e-8 * max ||F|| on the contour.
/// kmax_probe <= 0 selects the default dim_out * 4.
int pole_order(const OperatorFunction& f, Complex z0, int kmax_probe = 0,
               double tol = 0.0, double eps = 0.0,
               const QuadratureConfig& quad = {});

/// All singular Laurent coefficients at z0 with their numerical ranks.
PrincipalPart principal_part(const OperatorFunction& f, Complex z0,
                             double eps = 0.0,
                             const QuadratureConfig& quad = {});

/// Laurent data for k = min_order ... kmax.
LaurentExpansion laurent_expansion(const OperatorFunction& f, Complex z0,
                                   int kmax, double eps = 0.0,
                                   const QuadratureConfig& quad = {});

/// F'(z) = (1/2*pi*i) oint F(zeta) (zeta - z)^{-2} dzeta; F must be
/// analytic on the closed disk D(z; eps). eps <= 0 selects half the
/// distance to the nearest declared singularity, capped at 1.
CMatrix derivative(const OperatorFunction& f, Complex z, double eps = 0.0,
                   const QuadratureConfig& quad = {});

}  // namespace opfactor
