#include "opfactor/birman_schwinger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace opfactor {

std::vector<SpectralPoint> cluster_spectrum(const CVector& eigenvalues,
                                            double tol) {
  std::vector<Complex> sorted(eigenvalues.data(),
                              eigenvalues.data() + eigenvalues.size());
  std::sort(sorted.begin(), sorted.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) {
      return a.real() < b.real();
    }
    return a.imag() < b.imag();
  });
  std::vector<SpectralPoint> out;
  for (const Complex& ev : sorted) {
    // Compare against every representative, not just the previous entry:
    // after sorting by (real, imag), two copies of the same eigenvalue can
    // straddle an unrelated point with an equal real part. Representatives
    // keep the first value seen; the merge tolerance is far below any
    // separation the quadrature can resolve anyway.
    bool merged = false;
    for (SpectralPoint& s : out) {
      if (std::abs(ev - s.value) <= tol) {
        s.multiplicity += 1;
        merged = true;
        break;
      }
    }
    if (!merged) {
      out.push_back(SpectralPoint{ev, 1});
    }
  }
  return out;
}

namespace {

std::vector<SpectralPoint> matrix_spectrum(const CMatrix& m) {
  if (m.rows() == 0) {
    return {};
  }
  Eigen::ComplexEigenSolver<CMatrix> es(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    throw AccuracyError("eigenvalue computation did not converge");
  }
  return cluster_spectrum(es.eigenvalues());
}

std::vector<Complex> points_of(const std::vector<SpectralPoint>& spec) {
  std::vector<Complex> out;
  out.reserve(spec.size());
  for (const SpectralPoint& s : spec) {
    out.push_back(s.value);
  }
  return out;
}

}  // namespace

PerturbationProblem::PerturbationProblem(CMatrix h0, CMatrix v1, CMatrix v2)
    : h0_(std::move(h0)), v1_(std::move(v1)), v2_(std::move(v2)) {
  if (h0_.rows() != h0_.cols()) {
    throw InputError("PerturbationProblem: H0 must be square");
  }
  if (v1_.cols() != h0_.rows() || v2_.cols() != h0_.rows() ||
      v1_.rows() != v2_.rows()) {
    throw InputError(
        "PerturbationProblem: V1 and V2 must both map C^{n_H} to C^{n_K}");
  }
  require_finite(h0_, "H0");
  require_finite(v1_, "V1");
  require_finite(v2_, "V2");
  h_ = h0_ + v2_.adjoint() * v1_;
  spec_h0_ = matrix_spectrum(h0_);
  spec_h_ = matrix_spectrum(h_);
}

bool PerturbationProblem::symmetric_perturbation(double tol) const {
  const CMatrix v = v2_.adjoint() * v1_;
  return (v - v.adjoint()).norm() <= tol * (1.0 + v.norm());
}

double PerturbationProblem::distance_to_spectrum_h0(Complex z) const {
  double d = std::numeric_limits<double>::infinity();
  for (const SpectralPoint& s : spec_h0_) {
    d = std::min(d, std::abs(z - s.value));
  }
  return d;
}

double PerturbationProblem::contour_radius(Complex z0) const {
  double d = std::numeric_limits<double>::infinity();
  auto visit = [&](const std::vector<SpectralPoint>& spec) {
    for (const SpectralPoint& s : spec) {
      const double dist = std::abs(z0 - s.value);
      if (dist > 1e-8) {
        d = std::min(d, dist);
      }
    }
  };
  visit(spec_h0_);
  visit(spec_h_);
  if (!std::isfinite(d)) {
    d = 2.0;
  }
  return std::max(0.5 * d, kMinContourRadius);
}

OperatorFunction bs_operator(const PerturbationProblem& p) {
  OperatorFunction k;
  k.dim_out = p.dim_k();
  k.dim_in = p.dim_k();
  k.declared_singularities = points_of(p.spectrum_h0());
  k.domain_description = "resolvent set of H0";
  const CMatrix h0 = p.h0();
  const CMatrix v1 = p.v1();
  const CMatrix v2h = p.v2().adjoint();
  const Eigen::Index n = h0.rows();
  k.evaluate = [h0, v1, v2h, n](Complex z) -> CMatrix {
    const CMatrix shifted = h0 - z * CMatrix::Identity(n, n);
    return -v1 * solve(shifted, v2h).x;
  };
  // K'(z) = -V1 (H0 - z)^{-2} V2^H.
  k.derivative_evaluate = [h0, v1, v2h, n](Complex z) -> CMatrix {
    const CMatrix shifted = h0 - z * CMatrix::Identity(n, n);
    return -v1 * solve(shifted, solve(shifted, v2h).x).x;
  };
  return k;
}

OperatorFunction id_minus_k(const PerturbationProblem& p) {
  OperatorFunction k = bs_operator(p);
  OperatorFunction w = k;
  const Eigen::Index nk = p.dim_k();
  w.evaluate = [k, nk](Complex z) -> CMatrix {
    return CMatrix::Identity(nk, nk) - k.evaluate(z);
  };
  w.derivative_evaluate = [k](Complex z) -> CMatrix {
    return -k.derivative_evaluate(z);
  };
  return w;
}

namespace {

// I - K(z) with the resolvent-set guard applied; shared by the resolvent
// and the identity check.
CMatrix id_minus_k_at(const PerturbationProblem& p, Complex z) {
  if (p.distance_to_spectrum_h0(z) <= 1e-10) {
    throw DomainError("birman_schwinger: z lies in the spectrum of H0");
  }
  return id_minus_k(p)(z);
}

}  // namespace

CMatrix resolvent(const PerturbationProblem& p, Complex z) {
  const Eigen::Index n = p.dim_h();
  const CMatrix shifted = p.h0() - z * CMatrix::Identity(n, n);
  if (p.distance_to_spectrum_h0(z) <= 1e-10) {
    throw DomainError("resolvent: z lies in the spectrum of H0");
  }
  const CMatrix r0 = inverse(shifted);
  const CMatrix w = id_minus_k_at(p, z);
  CMatrix winv;
  try {
    winv = inverse(w);
  } catch (const SingularSystemError&) {
    throw BirmanSchwingerSingularity(
        "resolvent: I - K(z) singular, z is an eigenvalue of H", z);
  }
  return r0 - r0 * p.v2().adjoint() * winv * p.v1() * r0;
}

double symmetric_identity_check(const PerturbationProblem& p, Complex z) {
  const CMatrix r = resolvent(p, z);
  const CMatrix lhs = CMatrix::Identity(p.dim_k(), p.dim_k()) -
                      p.v1() * r * p.v2().adjoint();
  const CMatrix rhs = inverse(id_minus_k_at(p, z));
  return (lhs - rhs).norm() / (1.0 + rhs.norm());
}

CVector eigenvector_transfer_forward(const PerturbationProblem& p, Complex z0,
                                     const CVector& f, Complex z1) {
  if (f.size() != p.dim_h()) {
    throw InputError("eigenvector_transfer_forward: f has the wrong size");
  }
  const double fnorm = f.norm();
  const CVector resid = p.h() * f - z0 * f;
  if (fnorm == 0.0 || resid.norm() > 1e-8 * (1.0 + std::abs(z0)) * fnorm) {
    throw InputError(
        "eigenvector_transfer_forward: f is not an eigenvector of H at z0");
  }
  if (std::abs(z0 - z1) <= 1e-12) {
    throw InputError(
        "eigenvector_transfer_forward: auxiliary point z1 must differ "
        "from z0");
  }

  const Eigen::Index n = p.dim_h();
  const CMatrix shifted = p.h0() - z1 * CMatrix::Identity(n, n);
  const CVector r0f = solve(shifted, f).x;
  const CVector g_resolvent =
      solve(id_minus_k_at(p, z1), CMatrix(p.v1() * r0f)).x;
  const CVector g_direct = (p.v1() * f) / (z0 - z1);
  if ((g_resolvent - g_direct).norm() > 1e-8 * (1.0 + g_direct.norm())) {
    throw AccuracyError("eigenvector_transfer_forward: the two closed forms "
                        "for g disagree");
  }
  const CVector kg = bs_operator(p)(z0) * g_direct;
  if ((kg - g_direct).norm() > 1e-8 * (1.0 + g_direct.norm())) {
    throw AccuracyError(
        "eigenvector_transfer_forward: g is not a fixed point of K(z0)");
  }
  return g_direct;
}

CVector eigenvector_transfer_backward(const PerturbationProblem& p,
                                      Complex z0, const CVector& g) {
  if (g.size() != p.dim_k()) {
    throw InputError("eigenvector_transfer_backward: g has the wrong size");
  }
  const CVector kg = bs_operator(p)(z0) * g;
  if (g.norm() == 0.0 || (kg - g).norm() > 1e-8 * (1.0 + g.norm())) {
    throw InputError(
        "eigenvector_transfer_backward: g is not a fixed point of K(z0)");
  }
  const Eigen::Index n = p.dim_h();
  const CMatrix shifted = p.h0() - z0 * CMatrix::Identity(n, n);
  const CVector f = -solve(shifted, CMatrix(p.v2().adjoint() * g)).x;
  const CVector resid = p.h() * f - z0 * f;
  if (resid.norm() > 1e-8 * (1.0 + std::abs(z0)) * f.norm()) {
    throw AccuracyError(
        "eigenvector_transfer_backward: recovered f fails the eigenvalue "
        "equation");
  }
  return f;
}

BSVerdict check_geometric(const PerturbationProblem& p, Complex z0,
                          double rtol) {
  if (p.distance_to_spectrum_h0(z0) <= 1e-8) {
    throw DomainError(
        "check_geometric: z0 must lie in the resolvent set of H0");
  }
  BSVerdict v;
  v.z0 = z0;
  const Eigen::Index n = p.dim_h();
  const CMatrix hz = p.h() - z0 * CMatrix::Identity(n, n);
  // Thresholds are pinned to the natural operator scale so the rank test
  // stays meaningful even when the shifted matrix is tiny as a whole
  // (e.g. a 1x1 block where the relative test would always say rank 1).
  v.mg_h = n - numerical_rank(hz, rtol, p.h().norm() + std::abs(z0)).rank;

  const Eigen::Index nk = p.dim_k();
  const CMatrix kmat = bs_operator(p)(z0);
  const CMatrix kz = kmat - CMatrix::Identity(nk, nk);
  v.mg_k = nk - numerical_rank(kz, rtol, 1.0 + kmat.norm()).rank;
  v.ok = (*v.mg_h == *v.mg_k);
  return v;
}

BSVerdict check_algebraic(const PerturbationProblem& p, Complex z0,
                          const QuadratureConfig& quad) {
  if (p.distance_to_spectrum_h0(z0) <= 1e-8) {
    throw DomainError(
        "check_algebraic: z0 must lie in the resolvent set of H0");
  }
  BSVerdict v;
  v.z0 = z0;
  const double eps = p.contour_radius(z0);
  v.ma_h = riesz_multiplicity(p.h(), z0, eps, quad);

  const OperatorFunction w = id_minus_k(p);
  v.ma_bs = algebraic_multiplicity(w, z0, eps, quad).value;
  v.nu_bs = nu(howland_factorize(w, z0, kDefaultRankRtol, 0, quad));
  v.ok = (*v.ma_h == *v.ma_bs) && (*v.ma_bs == *v.nu_bs);
  return v;
}

BSVerdict weinstein_aronszajn(const PerturbationProblem& p, Complex z0,
                              const QuadratureConfig& quad) {
  const double d0 = p.distance_to_spectrum_h0(z0);
  double dh = std::numeric_limits<double>::infinity();
  for (const SpectralPoint& s : p.spectrum_h()) {
    dh = std::min(dh, std::abs(z0 - s.value));
  }
  if (d0 > 1e-8 && dh > 1e-8) {
    throw InputError(
        "weinstein_aronszajn: z0 lies in neither spectrum, both sides "
        "vanish trivially");
  }
  BSVerdict v;
  v.z0 = z0;
  const double eps = p.contour_radius(z0);
  v.ma_h = riesz_multiplicity(p.h(), z0, eps, quad);
  v.ma_h0 = riesz_multiplicity(p.h0(), z0, eps, quad);
  v.wa_index = meromorphic_index(id_minus_k(p), z0, eps, quad).value;
  v.ok = (*v.ma_h == *v.ma_h0 + *v.wa_index);
  return v;
}

}  // namespace opfactor
