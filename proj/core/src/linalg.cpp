#include "opfactor/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace opfactor {

void require_finite(const CMatrix& m, const char* what) {
  if (!m.allFinite()) {
    throw InputError(std::string(what) + ": non-finite entries");
  }
}

Eigen::Index Projector::rank() const {
  const double tr = matrix.trace().real();
  return static_cast<Eigen::Index>(std::llround(tr));
}

namespace {

Eigen::JacobiSVD<CMatrix> make_svd(const CMatrix& m, unsigned options) {
  // JacobiSVD: deterministic for fixed input, exact enough at desk scale.
  return Eigen::JacobiSVD<CMatrix>(m, options);
}

Eigen::Index rank_from_svd(const Eigen::VectorXd& sigma, double rtol) {
  if (sigma.size() == 0 || sigma(0) == 0.0) {
    return 0;
  }
  const double thresh = rtol * sigma(0);
  Eigen::Index r = 0;
  while (r < sigma.size() && sigma(r) > thresh) {
    ++r;
  }
  return r;
}

}  // namespace

RankResult numerical_rank(const CMatrix& m, double rtol, double scale) {
  require_finite(m);
  if (rtol <= 0.0) {
    throw InputError("numerical_rank: rtol must be positive");
  }
  if (scale < 0.0 || !std::isfinite(scale)) {
    throw InputError("numerical_rank: scale must be finite and nonnegative");
  }
  RankResult out;
  if (m.rows() == 0 || m.cols() == 0) {
    return out;
  }
  auto svd = make_svd(m, 0);
  const Eigen::VectorXd sigma = svd.singularValues();
  if (sigma(0) == 0.0) {
    out.rank = 0;
  } else {
    const double thresh = rtol * std::max(sigma(0), scale);
    while (out.rank < sigma.size() && sigma(out.rank) > thresh) {
      ++out.rank;
    }
  }
  out.singular_values.assign(sigma.data(), sigma.data() + sigma.size());
  return out;
}

SubspaceBasis range_basis(const CMatrix& m, double rtol) {
  require_finite(m);
  if (rtol <= 0.0) {
    throw InputError("range_basis: rtol must be positive");
  }
  SubspaceBasis b;
  b.ambient_dim = m.rows();
  if (m.rows() == 0 || m.cols() == 0) {
    b.vectors = CMatrix::Zero(m.rows(), 0);
    return b;
  }
  auto svd = make_svd(m, Eigen::ComputeThinU);
  const Eigen::Index r = rank_from_svd(svd.singularValues(), rtol);
  b.vectors = svd.matrixU().leftCols(r);
  return b;
}

SubspaceBasis kernel_basis(const CMatrix& m, double rtol) {
  require_finite(m);
  if (rtol <= 0.0) {
    throw InputError("kernel_basis: rtol must be positive");
  }
  SubspaceBasis b;
  b.ambient_dim = m.cols();
  if (m.cols() == 0) {
    b.vectors = CMatrix::Zero(0, 0);
    return b;
  }
  if (m.rows() == 0) {
    b.vectors = CMatrix::Identity(m.cols(), m.cols());
    return b;
  }
  auto svd = make_svd(m, Eigen::ComputeFullV);
  const Eigen::Index r = rank_from_svd(svd.singularValues(), rtol);
  b.vectors = svd.matrixV().rightCols(m.cols() - r);
  return b;
}

Projector orth_projector(const SubspaceBasis& b) {
  require_finite(b.vectors, "basis");
  Projector p;
  p.matrix = b.vectors * b.vectors.adjoint();
  if (p.matrix.rows() == 0) {
    p.matrix = CMatrix::Zero(b.ambient_dim, b.ambient_dim);
  }
  p.orthogonal = true;
  return p;
}

SolveResult solve(const CMatrix& m, const CMatrix& b) {
  require_finite(m);
  require_finite(b, "rhs");
  if (m.rows() != m.cols()) {
    throw InputError("solve: matrix must be square");
  }
  if (m.rows() != b.rows()) {
    throw InputError("solve: dimension mismatch");
  }
  SolveResult out;
  if (m.rows() == 0) {
    out.x = CMatrix::Zero(0, b.cols());
    out.rcond = 1.0;
    return out;
  }
  auto svd = make_svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sigma = svd.singularValues();
  out.rcond = sigma(0) > 0.0 ? sigma(sigma.size() - 1) / sigma(0) : 0.0;
  if (out.rcond <= kSingularRcond) {
    throw SingularSystemError("solve: singular system", out.rcond);
  }
  out.x = svd.solve(b);
  return out;
}

CMatrix inverse(const CMatrix& m) {
  return solve(m, CMatrix::Identity(m.rows(), m.cols())).x;
}

Eigen::Index subspace_intersection_dim(const SubspaceBasis& b1,
                                       const SubspaceBasis& b2, double rtol) {
  if (b1.ambient_dim != b2.ambient_dim) {
    throw InputError("subspace_intersection_dim: ambient dimension mismatch");
  }
  if (b1.dim() == 0 || b2.dim() == 0) {
    return 0;
  }
  // Principal angles: cosines are the singular values of B1^H B2.
  const CMatrix overlap = b1.vectors.adjoint() * b2.vectors;
  auto svd = make_svd(overlap, 0);
  const Eigen::VectorXd cosines = svd.singularValues();
  Eigen::Index count = 0;
  for (Eigen::Index i = 0; i < cosines.size(); ++i) {
    if (cosines(i) > 1.0 - rtol) {
      ++count;
    }
  }
  return count;
}

}  // namespace opfactor
