#pragma once

#include <vector>

#include "opfactor/operator_function.hpp"

namespace opfactor {

/// One peeled factor [Q - (z - z0) P] with p = dim ran(P).
struct HowlandStep {
  Projector p_proj;  // P_j, onto the complement of ran(A_j(z0)) (forward)
                     // or onto ker(A_j(z0)) (reversed)
  Projector q_proj;  // Q_j = I - P_j
  Eigen::Index p = 0;
  int order_index = 0;
  bool rank_warning = false;  // a singular value fell within 10x of the
                              // rank threshold

  /// Factor matrix Q - (z - z0) P.
  CMatrix factor(Complex z, Complex z0) const;
};

/// A(z) = [Q_1 - (z-z0)P_1] ... [Q_{n0} - (z-z0)P_{n0}] A_{n0}(z)
/// (forward), or with the step factors on the right of the regular part in
/// reverse order (reversed).
struct HowlandFactorization {
  Complex center;
  std::vector<HowlandStep> steps;
  OperatorFunction regular_part;  // A_{n0}, invertible at the center
  int order = 0;                  // n0 = number of steps
  bool reversed = false;
  double regular_rcond = 0.0;  // rcond of A_{n0}(z0)

  bool has_rank_warning() const;
};

struct StepResult {
  HowlandStep step;
  OperatorFunction next;  // A_{j+1}
};

/// Single factorization step at z0. Throws NoZeroError when A(z0) is
/// invertible at rtol. The returned function is analytic at z0; its value
/// there uses the closed form Q A(z0) - P A'(z0) with A' obtained by a
/// Cauchy integral, avoiding 0/0 cancellation.
StepResult howland_step(const OperatorFunction& a, Complex z0,
                        double rtol = kDefaultRankRtol,
                        const QuadratureConfig& quad = {});

/// Full factorization at a zero of finite type: iterates howland_step
/// until the regular part is invertible at z0. max_steps <= 0 selects
/// dim * 8. Throws NotFiniteTypeError if the iteration does not
/// terminate.
HowlandFactorization howland_factorize(const OperatorFunction& a, Complex z0,
                                       double rtol = kDefaultRankRtol,
                                       int max_steps = 0,
                                       const QuadratureConfig& quad = {});

/// Factorization with the step factors on the right, obtained from the
/// forward factorization of B(zeta) = A(conj zeta)^H by taking adjoints.
/// P_1 projects onto ker(A(z0)); the p-sequence equals the forward one.
HowlandFactorization reversed_factorize(const OperatorFunction& a, Complex z0,
                                        double rtol = kDefaultRankRtol,
                                        int max_steps = 0,
                                        const QuadratureConfig& quad = {});

/// nu(z0; A(.)) = sum of the projector ranks p_j.
Eigen::Index nu(const HowlandFactorization& f);

struct SimplePoleReport {
  bool simple = false;
  Eigen::Index nu = 0;
  Eigen::Index mg = 0;  // dim ker A(z0)
};

/// z0 is a simple pole of A(.)^{-1} iff nu = m_g(0; A(z0)).
SimplePoleReport is_simple_pole(const OperatorFunction& a, Complex z0,
                                double rtol = kDefaultRankRtol,
                                const QuadratureConfig& quad = {});

/// Evaluates the factored product at z; equals A(z) up to quadrature
/// accuracy in the regular part's stored value at the center.
CMatrix reconstruct(const HowlandFactorization& f, Complex z);

}  // namespace opfactor
