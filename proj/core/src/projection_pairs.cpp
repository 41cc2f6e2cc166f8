#include "opfactor/projection_pairs.hpp"

#include <cmath>
#include <utility>

namespace opfactor {

namespace {

void check_orth_projector(const CMatrix& m, const char* name) {
  if (m.rows() != m.cols()) {
    throw InputError(std::string("ProjectionPair: ") + name +
                     " must be square");
  }
  require_finite(m, name);
  if ((m * m - m).norm() > 1e-10 * (1.0 + m.norm())) {
    throw InputError(std::string("ProjectionPair: ") + name +
                     " is not idempotent");
  }
  if ((m - m.adjoint()).norm() > 1e-10 * (1.0 + m.norm())) {
    throw InputError(std::string("ProjectionPair: ") + name +
                     " is not Hermitian");
  }
}

}  // namespace

ProjectionPair::ProjectionPair(CMatrix p, CMatrix q)
    : p_(std::move(p)), q_(std::move(q)) {
  check_orth_projector(p_, "P");
  check_orth_projector(q_, "Q");
  if (p_.rows() != q_.rows()) {
    throw InputError("ProjectionPair: P and Q act on different spaces");
  }
}

PairIndexReport pair_index(const ProjectionPair& pp, double rtol) {
  PairIndexReport rep;
  const SubspaceBasis ran_p = range_basis(pp.p(), rtol);
  const SubspaceBasis ker_p = kernel_basis(pp.p(), rtol);
  const SubspaceBasis ran_q = range_basis(pp.q(), rtol);
  const SubspaceBasis ker_q = kernel_basis(pp.q(), rtol);
  rep.m1 = subspace_intersection_dim(ran_p, ker_q, rtol);
  rep.m_minus1 = subspace_intersection_dim(ker_p, ran_q, rtol);
  rep.index = rep.m1 - rep.m_minus1;
  return rep;
}

Complex trace_odd_power(const ProjectionPair& pp, int n) {
  if (n < 0) {
    throw InputError("trace_odd_power: n must be nonnegative");
  }
  const CMatrix d = pp.p() - pp.q();
  CMatrix power = d;
  for (int j = 0; j < 2 * n; ++j) {
    power = power * d;
  }
  return power.trace();
}

Complex perturbation_determinant(const ProjectionPair& pp, Complex z) {
  if (std::abs(z) <= 1e-12 || std::abs(z - 1.0) <= 1e-12) {
    throw DomainError("perturbation_determinant: z must avoid {0, 1}");
  }
  const Eigen::Index n = pp.dim();
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix ratio = solve((pp.q() - z * id).transpose(),
                              (pp.p() - z * id).transpose())
                            .x.transpose();
  return ratio.determinant();
}

SpectralShift spectral_shift(const ProjectionPair& pp, double rtol) {
  SpectralShift xi;
  xi.value = pair_index(pp, rtol).index;
  xi.integral = static_cast<double>(xi.value);
  xi.trace_pq = (pp.p() - pp.q()).trace().real();
  Eigen::JacobiSVD<CMatrix> svd(pp.p() - pp.q());
  xi.nuclear_norm = svd.singularValues().sum();
  if (std::abs(xi.integral - xi.trace_pq) > 1e-8) {
    throw AccuracyError("spectral_shift: integral does not match tr(P - Q)",
                        std::abs(xi.integral - xi.trace_pq));
  }
  if (std::abs(xi.integral) > xi.nuclear_norm + 1e-8) {
    throw AccuracyError("spectral_shift: integral exceeds the nuclear norm "
                        "of P - Q");
  }
  return xi;
}

namespace {

// f applied to a Hermitian projector through its eigendecomposition.
CMatrix apply_scalar(const CMatrix& proj,
                     const std::function<Complex(double)>& f) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(proj);
  if (es.info() != Eigen::Success) {
    throw AccuracyError("trace_f_difference: eigendecomposition failed");
  }
  const Eigen::Index n = proj.rows();
  CVector fd(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex v = f(es.eigenvalues()(j));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw InputError("trace_f_difference: f is non-finite on the spectrum");
    }
    fd(j) = v;
  }
  return es.eigenvectors() * fd.asDiagonal() *
         es.eigenvectors().adjoint();
}

}  // namespace

Complex trace_f_difference(const ProjectionPair& pp,
                           const std::function<Complex(double)>& f,
                           Complex f0, Complex f1) {
  const Complex tr =
      (apply_scalar(pp.p(), f) - apply_scalar(pp.q(), f)).trace();
  const Complex expected =
      (f1 - f0) * static_cast<double>(pair_index(pp).index);
  if (std::abs(tr - expected) > 1e-8 * (1.0 + std::abs(expected))) {
    throw AccuracyError("trace_f_difference: trace does not match "
                        "(f(1) - f(0)) * index",
                        std::abs(tr - expected));
  }
  return tr;
}

OperatorFunction m_function(const ProjectionPair& pp) {
  OperatorFunction m;
  m.dim_out = pp.dim();
  m.dim_in = pp.dim();
  m.declared_singularities = {Complex(0.0, 0.0), Complex(1.0, 0.0)};
  m.domain_description = "C minus {0, 1}";
  const CMatrix p = pp.p();
  const CMatrix q = pp.q();
  const Eigen::Index n = pp.dim();
  m.evaluate = [p, q, n](Complex z) -> CMatrix {
    const CMatrix id = CMatrix::Identity(n, n);
    return id + (p - q) * inverse(q - z * id);
  };
  // M'(z) = (P - Q)(Q - zI)^{-2}.
  m.derivative_evaluate = [p, q, n](Complex z) -> CMatrix {
    const CMatrix inv = inverse(q - z * CMatrix::Identity(n, n));
    return (p - q) * inv * inv;
  };
  return m;
}

Eigen::Index m_function_index(const ProjectionPair& pp, Complex z0,
                              double eps, const QuadratureConfig& quad) {
  const OperatorFunction m = m_function(pp);
  if (eps <= 0.0) {
    eps = default_laurent_radius(m, z0);
  }
  return meromorphic_index(m, z0, eps, quad).value;
}

}  // namespace opfactor
