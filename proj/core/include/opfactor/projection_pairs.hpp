#pragma once

#include <functional>

#include "opfactor/multiplicity.hpp"
#include "opfactor/operator_function.hpp"

namespace opfactor {

/// Ordered pair (P, Q) of orthogonal projectors on C^dim. The
/// constructor checks idempotence and hermiticity to 1e-10.
class ProjectionPair {
 public:
  ProjectionPair(CMatrix p, CMatrix q);

  const CMatrix& p() const { return p_; }
  const CMatrix& q() const { return q_; }
  Eigen::Index dim() const { return p_.rows(); }

  ProjectionPair swapped() const { return ProjectionPair(q_, p_); }

 private:
  CMatrix p_, q_;
};

struct PairIndexReport {
  Eigen::Index m1 = 0;        // dim(ran P intersect ker Q)
  Eigen::Index m_minus1 = 0;  // dim(ker P intersect ran Q)
  Eigen::Index index = 0;     // m1 - m_minus1
};

/// Fredholm-pair index via principal angles between ran P and ker Q
/// (for m1) and ker P and ran Q (for m_minus1).
PairIndexReport pair_index(const ProjectionPair& pp,
                           double rtol = kDefaultRankRtol);

/// tr((P - Q)^{2n+1}); equal to the pair index for every n >= 0.
Complex trace_odd_power(const ProjectionPair& pp, int n);

/// D(z) = det((P - zI)(Q - zI)^{-1}); equals ((z-1)/z)^index away from
/// {0, 1}. Throws DomainError at z in {0, 1}.
Complex perturbation_determinant(const ProjectionPair& pp, Complex z);

/// Piecewise-constant spectral shift: value on (0, 1), zero elsewhere.
/// integral = value (unit-length support); nuclear_norm = sum of the
/// singular values of P - Q.
struct SpectralShift {
  Eigen::Index value = 0;
  double integral = 0.0;
  double trace_pq = 0.0;  // tr(P - Q), real for orthogonal projectors
  double nuclear_norm = 0.0;

  double operator()(double lambda) const {
    return (lambda > 0.0 && lambda < 1.0) ? static_cast<double>(value) : 0.0;
  }
};

/// Spectral shift function of the pair; checks that the integral of the
/// descriptor equals tr(P - Q) to 1e-8 and that the integral of its
/// absolute value is bounded by the nuclear norm of P - Q.
SpectralShift spectral_shift(const ProjectionPair& pp,
                             double rtol = kDefaultRankRtol);

/// tr(f(P) - f(Q)) via eigendecompositions of the Hermitian projectors;
/// checked against (f1 - f0) * index with f0 = f(0), f1 = f(1), throwing
/// AccuracyError on disagreement beyond 1e-8 relative. Throws InputError
/// when f is non-finite at a needed spectrum point.
Complex trace_f_difference(const ProjectionPair& pp,
                           const std::function<Complex(double)>& f,
                           Complex f0, Complex f1);

/// M(z) = I + (P - Q)(Q - zI)^{-1}, finitely meromorphic with declared
/// singularities {0, 1}.
OperatorFunction m_function(const ProjectionPair& pp);

/// Meromorphic index of M at z0: -index at 0, +index at 1, 0 elsewhere.
/// eps <= 0 selects a circle clear of {0, 1} minus z0.
Eigen::Index m_function_index(const ProjectionPair& pp, Complex z0,
                              double eps = 0.0,
                              const QuadratureConfig& quad = {});

}  // namespace opfactor
