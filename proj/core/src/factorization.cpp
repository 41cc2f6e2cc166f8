#include "opfactor/factorization.hpp"

#include <cmath>
#include <numeric>

namespace opfactor {

CMatrix HowlandStep::factor(Complex z, Complex z0) const {
  return q_proj.matrix - (z - z0) * p_proj.matrix;
}

bool HowlandFactorization::has_rank_warning() const {
  for (const HowlandStep& s : steps) {
    if (s.rank_warning) {
      return true;
    }
  }
  return false;
}

namespace {

bool rank_decision_ambiguous(const std::vector<double>& sigma, double rtol) {
  if (sigma.empty() || sigma.front() == 0.0) {
    return false;
  }
  const double thresh = rtol * sigma.front();
  for (double s : sigma) {
    if (s > thresh / 10.0 && s < thresh * 10.0) {
      return true;
    }
  }
  return false;
}

OperatorFunction adjoint_flip(const OperatorFunction& a) {
  OperatorFunction b;
  b.dim_out = a.dim_in;
  b.dim_in = a.dim_out;
  for (const Complex& s : a.declared_singularities) {
    b.declared_singularities.push_back(std::conj(s));
  }
  b.evaluate = [a](Complex zeta) -> CMatrix {
    return a(std::conj(zeta)).adjoint();
  };
  if (a.derivative_evaluate) {
    b.derivative_evaluate = [a](Complex zeta) -> CMatrix {
      return a.derivative_evaluate(std::conj(zeta)).adjoint();
    };
  }
  return b;
}

}  // namespace

StepResult howland_step(const OperatorFunction& a, Complex z0, double rtol,
                        const QuadratureConfig& quad) {
  if (a.dim_out != a.dim_in) {
    throw InputError("howland_step: function must be square-valued");
  }
  const Eigen::Index n = a.dim_out;
  const CMatrix a0 = a(z0);
  const RankResult rr = numerical_rank(a0, rtol);
  if (rr.rank == n) {
    throw NoZeroError("howland_step: A(z0) is invertible, nothing to peel");
  }

  StepResult out;
  out.step.q_proj = orth_projector(range_basis(a0, rtol));
  out.step.p_proj.matrix =
      CMatrix::Identity(n, n) - out.step.q_proj.matrix;
  out.step.p_proj.orthogonal = true;
  out.step.p = n - rr.rank;
  out.step.rank_warning = rank_decision_ambiguous(rr.singular_values, rtol);

  const CMatrix q = out.step.q_proj.matrix;
  const CMatrix p = out.step.p_proj.matrix;
  const CMatrix a1_at_z0 = q * a0 - p * derivative(a, z0, 0.0, quad);

  OperatorFunction a1;
  a1.dim_out = n;
  a1.dim_in = n;
  a1.declared_singularities = a.declared_singularities;
  a1.evaluate = [a, z0, p, q, a0, a1_at_z0](Complex z) -> CMatrix {
    if (std::abs(z - z0) <= 1e-14) {
      return a1_at_z0;
    }
    const CMatrix az = a(z);
    return q * az - (p * (az - a0)) / (z - z0);
  };
  out.next = std::move(a1);
  return out;
}

HowlandFactorization howland_factorize(const OperatorFunction& a, Complex z0,
                                       double rtol, int max_steps,
                                       const QuadratureConfig& quad) {
  if (a.dim_out != a.dim_in) {
    throw InputError("howland_factorize: function must be square-valued");
  }
  if (max_steps <= 0) {
    max_steps = static_cast<int>(a.dim_out) * 8;
  }
  HowlandFactorization f;
  f.center = z0;
  f.reversed = false;

  OperatorFunction current = a;
  for (int j = 1;; ++j) {
    const RankResult rr = numerical_rank(current(z0), rtol);
    if (rr.rank == current.dim_out) {
      f.regular_rcond = rr.singular_values.empty()
                            ? 1.0
                            : rr.singular_values.back() /
                                  rr.singular_values.front();
      break;
    }
    if (j > max_steps) {
      throw NotFiniteTypeError(
          "howland_factorize: max_steps exceeded; z0 not a zero of finite "
          "type at this tolerance");
    }
    StepResult sr = howland_step(current, z0, rtol, quad);
    sr.step.order_index = j;
    if (!f.steps.empty() && sr.step.p > f.steps.back().p) {
      throw AccuracyError(
          "howland_factorize: projector ranks not nonincreasing");
    }
    f.steps.push_back(std::move(sr.step));
    current = std::move(sr.next);
  }
  if (f.steps.empty()) {
    throw NoZeroError("howland_factorize: A(z0) is invertible");
  }
  f.order = static_cast<int>(f.steps.size());
  f.regular_part = std::move(current);
  return f;
}

HowlandFactorization reversed_factorize(const OperatorFunction& a, Complex z0,
                                        double rtol, int max_steps,
                                        const QuadratureConfig& quad) {
  const OperatorFunction b = adjoint_flip(a);
  HowlandFactorization fb =
      howland_factorize(b, std::conj(z0), rtol, max_steps, quad);

  HowlandFactorization f;
  f.center = z0;
  f.reversed = true;
  f.order = fb.order;
  f.regular_rcond = fb.regular_rcond;
  for (HowlandStep& s : fb.steps) {
    HowlandStep t;
    // Orthogonal projectors are Hermitian, so taking adjoints of the
    // left-sided factors leaves them unchanged.
    t.p_proj = std::move(s.p_proj);
    t.q_proj = std::move(s.q_proj);
    t.p = s.p;
    t.order_index = s.order_index;
    t.rank_warning = s.rank_warning;
    f.steps.push_back(std::move(t));
  }
  f.regular_part = adjoint_flip(fb.regular_part);
  return f;
}

Eigen::Index nu(const HowlandFactorization& f) {
  Eigen::Index total = 0;
  for (const HowlandStep& s : f.steps) {
    total += s.p;
  }
  return total;
}

SimplePoleReport is_simple_pole(const OperatorFunction& a, Complex z0,
                                double rtol, const QuadratureConfig& quad) {
  SimplePoleReport rep;
  const HowlandFactorization f = howland_factorize(a, z0, rtol, 0, quad);
  rep.nu = nu(f);
  rep.mg = a.dim_in - numerical_rank(a(z0), rtol).rank;
  rep.simple = (rep.nu == rep.mg);
  return rep;
}

CMatrix reconstruct(const HowlandFactorization& f, Complex z) {
  CMatrix m = f.regular_part(z);
  if (f.reversed) {
    // regular * F_{n0} * ... * F_1
    for (auto it = f.steps.rbegin(); it != f.steps.rend(); ++it) {
      m = m * it->factor(z, f.center);
    }
  } else {
    // F_1 * ... * F_{n0} * regular
    for (auto it = f.steps.rbegin(); it != f.steps.rend(); ++it) {
      m = it->factor(z, f.center) * m;
    }
  }
  return m;
}

}  // namespace opfactor
