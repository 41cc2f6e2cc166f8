#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "opfactor/errors.hpp"

namespace opfactor {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Default relative rank threshold: sigma > rtol * sigma_max.
inline constexpr double kDefaultRankRtol = 1e-10;

/// rcond at or below this is treated as singular.
inline constexpr double kSingularRcond = 1e-12;

/// Throws InputError if any entry is NaN or Inf.
void require_finite(const CMatrix& m, const char* what = "matrix");

/// Orthonormal column basis of a subspace of C^ambient_dim.
/// k = 0 (no columns) is a legal, empty basis.
struct SubspaceBasis {
  Eigen::Index ambient_dim = 0;
  CMatrix vectors;  // ambient_dim x k, orthonormal columns

  Eigen::Index dim() const { return vectors.cols(); }
};

/// Idempotent matrix; `orthogonal` additionally asserts hermiticity.
struct Projector {
  CMatrix matrix;
  bool orthogonal = false;

  Eigen::Index dim() const { return matrix.rows(); }
  /// dim ran = rounded trace for a projector.
  Eigen::Index rank() const;
};

struct RankResult {
  Eigen::Index rank = 0;
  std::vector<double> singular_values;
};

/// Numerical rank via SVD: #{sigma_k > rtol * max(sigma_max, scale)}.
/// Zero matrix has rank 0 regardless of rtol. The optional `scale` pins
/// the threshold to an external reference so a matrix that is tiny as a
/// whole (where the relative test is meaningless) can still be ranked.
RankResult numerical_rank(const CMatrix& m, double rtol = kDefaultRankRtol,
                          double scale = 0.0);

/// Orthonormal basis of the numerical column space.
SubspaceBasis range_basis(const CMatrix& m, double rtol = kDefaultRankRtol);

/// Orthonormal basis of the numerical kernel; dim = cols - rank.
SubspaceBasis kernel_basis(const CMatrix& m, double rtol = kDefaultRankRtol);

/// Orthogonal projector onto span(b): b.vectors * b.vectors^H.
Projector orth_projector(const SubspaceBasis& b);

struct SolveResult {
  CMatrix x;
  double rcond = 0.0;
};

/// Solves m x = b for square m. Throws SingularSystemError when
/// rcond <= 1e-12 (rcond = sigma_min / sigma_max).
SolveResult solve(const CMatrix& m, const CMatrix& b);

/// Inverse via solve against the identity.
CMatrix inverse(const CMatrix& m);

/// Dimension of span(b1) intersected with span(b2), counted by principal
/// angles: #{cos(theta) > 1 - rtol}.
Eigen::Index subspace_intersection_dim(const SubspaceBasis& b1,
                                       const SubspaceBasis& b2,
                                       double rtol = kDefaultRankRtol);

}  // namespace opfactor
