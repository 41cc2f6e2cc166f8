#pragma once

#include <functional>
#include <vector>

#include "opfactor/operator_function.hpp"

namespace opfactor {

enum class MultiplicityMethod {
  argument_principle,
  riesz_trace,
  determinant_oracle,
};

/// Integer multiplicity with its pre-rounding trace. Accepted reports have
/// residual <= 1e-6; larger residuals throw instead of rounding.
struct MultiplicityReport {
  Complex point;
  Eigen::Index value = 0;
  Complex raw_trace;
  double residual = 0.0;
  MultiplicityMethod method = MultiplicityMethod::argument_principle;
};

/// Hard-coded integer acceptance threshold for rounded traces.
inline constexpr double kIntegerResidualTol = 1e-6;

/// Winding number m(z0; f) = (1/2*pi*i) oint f'/f over C(z0; eps):
/// +k for a zero of order k, -k for a pole of order k, 0 otherwise.
/// f' is computed by Cauchy's formula on a circle around each node whose
/// radius keeps clear of eps/2 and of the optional `singularities` list.
MultiplicityReport scalar_multiplicity(
    const std::function<Complex(Complex)>& f, Complex z0, double eps,
    const QuadratureConfig& quad = {},
    const std::vector<Complex>& singularities = {});

/// Algebraic multiplicity of the zero of A(.) at z0:
/// tr((1/2*pi*i) oint A'(zeta) A(zeta)^{-1} dzeta), with the transposed
/// ordering A^{-1} A' computed alongside and required to agree to 1e-8.
/// eps <= 0 selects half the distance to the nearest declared singularity.
MultiplicityReport algebraic_multiplicity(const OperatorFunction& a,
                                          Complex z0, double eps = 0.0,
                                          const QuadratureConfig& quad = {});

/// Index of a finitely meromorphic M(.) with respect to C(z0; eps); the
/// same winding-trace computation as algebraic_multiplicity but the
/// function may have a pole at z0, so the value may be negative.
MultiplicityReport meromorphic_index(const OperatorFunction& m, Complex z0,
                                     double eps = 0.0,
                                     const QuadratureConfig& quad = {});

/// Order of the zero of det A(z) at z0; the finite-dimensional determinant
/// oracle for algebraic_multiplicity. Throws DegenerateError when det A
/// vanishes identically on the probe circle.
MultiplicityReport determinant_zero_order(const OperatorFunction& a,
                                          Complex z0, double eps = 0.0,
                                          const QuadratureConfig& quad = {});

/// Cross-check path: integrates only the principal part of A' A^{-1} at
/// z0, i.e. the trace of its residue coefficient.
MultiplicityReport algebraic_multiplicity_via_principal_part(
    const OperatorFunction& a, Complex z0, double eps = 0.0,
    const QuadratureConfig& quad = {});

}  // namespace opfactor
