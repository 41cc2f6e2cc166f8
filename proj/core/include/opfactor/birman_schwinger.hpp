#pragma once

#include <optional>
#include <vector>

#include "opfactor/factorization.hpp"
#include "opfactor/multiplicity.hpp"
#include "opfactor/operator_function.hpp"

namespace opfactor {

/// Eigenvalue cluster with summed algebraic multiplicity. Eigenvalues
/// within 1e-8 of each other are merged into one spectral point.
struct SpectralPoint {
  Complex value;
  Eigen::Index multiplicity = 0;
};

std::vector<SpectralPoint> cluster_spectrum(const CVector& eigenvalues,
                                            double tol = 1e-8);

/// Factored perturbation (H0, V1, V2) on C^{n_H} with auxiliary space
/// C^{n_K}; H = H0 + V2^H V1.
class PerturbationProblem {
 public:
  PerturbationProblem(CMatrix h0, CMatrix v1, CMatrix v2);

  const CMatrix& h0() const { return h0_; }
  const CMatrix& v1() const { return v1_; }
  const CMatrix& v2() const { return v2_; }
  const CMatrix& h() const { return h_; }
  Eigen::Index dim_h() const { return h0_.rows(); }
  Eigen::Index dim_k() const { return v1_.rows(); }

  const std::vector<SpectralPoint>& spectrum_h0() const { return spec_h0_; }
  const std::vector<SpectralPoint>& spectrum_h() const { return spec_h_; }

  /// True when (V1 f, V2 g) = (V2 f, V1 g) for all f, g, i.e. V2^H V1 is
  /// Hermitian; reported as metadata, never enforced.
  bool symmetric_perturbation(double tol = 1e-12) const;

  double distance_to_spectrum_h0(Complex z) const;

  /// Half the distance from z0 to the rest of sigma(H0) union sigma(H),
  /// floored at 1e-6.
  double contour_radius(Complex z0) const;

 private:
  CMatrix h0_, v1_, v2_, h_;
  std::vector<SpectralPoint> spec_h0_, spec_h_;
};

/// Per-point verdict; only the fields of the identity that was checked
/// are populated.
struct BSVerdict {
  Complex z0;
  std::optional<Eigen::Index> mg_h, mg_k;
  std::optional<Eigen::Index> ma_h, ma_bs, nu_bs;
  std::optional<Eigen::Index> ma_h0, wa_index;
  bool ok = false;
};

/// The Birman-Schwinger operator K(z) = -V1 (H0 - z)^{-1} V2^H as an
/// OperatorFunction with sigma(H0) declared singular.
OperatorFunction bs_operator(const PerturbationProblem& p);

/// I - K(.), the function whose zeros of finite type sit at the discrete
/// eigenvalues of H in rho(H0).
OperatorFunction id_minus_k(const PerturbationProblem& p);

/// R(z) = R0(z) - R0(z) V2^H [I - K(z)]^{-1} V1 R0(z). Throws DomainError
/// for z in sigma(H0) and BirmanSchwingerSingularity when I - K(z) is
/// singular (i.e. z is an eigenvalue of H).
CMatrix resolvent(const PerturbationProblem& p, Complex z);

/// Relative residual of I - V1 R(z) V2^H = [I - K(z)]^{-1}.
double symmetric_identity_check(const PerturbationProblem& p, Complex z);

/// Maps an eigenvector f of H at z0 in rho(H0) to a fixed point g of
/// K(z0); the closed forms g = [I-K(z1)]^{-1} V1 R0(z1) f and
/// g = (z0 - z1)^{-1} V1 f are both evaluated and must agree to 1e-8.
CVector eigenvector_transfer_forward(const PerturbationProblem& p, Complex z0,
                                     const CVector& f, Complex z1);

/// Maps a fixed point g of K(z0) back to an eigenvector
/// f = -(H0 - z0)^{-1} V2^H g of H.
CVector eigenvector_transfer_backward(const PerturbationProblem& p,
                                      Complex z0, const CVector& g);

/// m_g(z0; H) = m_g(1; K(z0)), for z0 in rho(H0).
BSVerdict check_geometric(const PerturbationProblem& p, Complex z0,
                          double rtol = kDefaultRankRtol);

/// m_a(z0; H) = m_a(z0; I - K(.)) = nu(z0; I - K(.)), for isolated
/// z0 in rho(H0) cap sigma(H).
BSVerdict check_algebraic(const PerturbationProblem& p, Complex z0,
                          const QuadratureConfig& quad = {});

/// Weinstein-Aronszajn: m_a(z0; H) = m_a(z0; H0) + ind_{C(z0;eps)}(I-K(.))
/// for z0 in sigma(H0) (shared or not with sigma(H)).
BSVerdict weinstein_aronszajn(const PerturbationProblem& p, Complex z0,
                              const QuadratureConfig& quad = {});

}  // namespace opfactor
