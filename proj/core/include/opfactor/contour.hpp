#pragma once

#include <functional>

#include "opfactor/linalg.hpp"

namespace opfactor {

struct Circle {
  Complex center;
  double radius = 0.0;
};

/// Node-doubling trapezoidal rule parameters. Equispaced trapezoid is
/// spectrally accurate for integrands analytic in an annulus around the
/// circle.
struct QuadratureConfig {
  int initial_nodes = 64;   // >= 8, power of two
  int max_doublings = 6;
  double rel_tol = 1e-10;
};

/// Smallest admissible contour radius when auto-selecting.
inline constexpr double kMinContourRadius = 1e-6;

/// (1/2*pi*i) times the counterclockwise integral of f over c. Nodes are
/// accumulated in fixed index order, so results are bit-deterministic.
/// Throws AccuracyError if successive doublings fail to agree within
/// rel_tol * (1 + ||estimate||).
CMatrix integrate_circle(const std::function<CMatrix(Complex)>& f,
                         const Circle& c,
                         const QuadratureConfig& quad = {});

/// Scalar convenience wrapper over integrate_circle.
Complex integrate_circle_scalar(const std::function<Complex(Complex)>& f,
                                const Circle& c,
                                const QuadratureConfig& quad = {});

/// Riesz projection of A for the eigenvalue cluster inside C(z0; eps):
/// P = (-1/2*pi*i) * contour integral of (A - zeta I)^{-1}.
/// Requires every eigenvalue of A to be at distance > 1e-8 from the circle;
/// the result is idempotent to 1e-8 and its trace rounds to an integer
/// within 1e-6 (the enclosed algebraic multiplicity), else an error is
/// thrown rather than rounding silently.
Projector riesz_projection(const CMatrix& a, Complex z0, double eps,
                           const QuadratureConfig& quad = {});

/// Trace of the Riesz projection, rounded; the enclosed algebraic
/// multiplicity of a.
Eigen::Index riesz_multiplicity(const CMatrix& a, Complex z0, double eps,
                                const QuadratureConfig& quad = {});

}  // namespace opfactor
