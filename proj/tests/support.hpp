#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "opfactor/birman_schwinger.hpp"
#include "opfactor/operator_function.hpp"
#include "opfactor/projection_pairs.hpp"

namespace testsupport {

using opfactor::CMatrix;
using opfactor::Complex;
using opfactor::CVector;

inline std::mt19937_64 make_rng(std::uint64_t seed) {
  return std::mt19937_64(seed);
}

inline CMatrix random_gaussian(Eigen::Index rows, Eigen::Index cols,
                               std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = Complex(g(rng), g(rng));
    }
  }
  return m;
}

/// Haar-ish random unitary: QR of a Gaussian matrix with the phases of
/// the R diagonal folded into Q so the distribution is well defined.
inline CMatrix random_unitary(Eigen::Index n, std::mt19937_64& rng) {
  const CMatrix g = random_gaussian(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    q.col(j) *= (d == Complex(0.0)) ? Complex(1.0) : d / std::abs(d);
  }
  return q;
}

/// Eigenvalue grid with unit separation; candidates are reshuffled per
/// call so distinct draws are distinct grid points.
inline std::vector<Complex> grid_eigenvalues(int count, std::mt19937_64& rng) {
  std::vector<Complex> candidates;
  for (int re = -2; re <= 2; ++re) {
    for (int im = -2; im <= 2; ++im) {
      candidates.emplace_back(re, im);
    }
  }
  std::shuffle(candidates.begin(), candidates.end(), rng);
  candidates.resize(static_cast<size_t>(count));
  return candidates;
}

struct JordanEigenvalue {
  Complex value;
  std::vector<int> blocks;  // Jordan block sizes, largest first

  int algebraic() const {
    int total = 0;
    for (int b : blocks) {
      total += b;
    }
    return total;
  }
  int geometric() const { return static_cast<int>(blocks.size()); }
  int max_block() const { return blocks.empty() ? 0 : blocks.front(); }
};

/// Pencil A - zI with A = S J S^H, S unitary, J a Jordan form with
/// grid-separated eigenvalues. Ground truth multiplicities are exact.
struct JordanPencil {
  CMatrix a;
  std::vector<JordanEigenvalue> structure;
};

inline JordanPencil random_jordan_pencil(Eigen::Index dim,
                                         std::mt19937_64& rng,
                                         bool allow_defective) {
  std::uniform_int_distribution<int> coin(0, 1);
  JordanPencil out;
  int remaining = static_cast<int>(dim);
  std::vector<Complex> values =
      grid_eigenvalues(static_cast<int>(dim), rng);
  size_t next_value = 0;
  CMatrix j = CMatrix::Zero(dim, dim);
  int offset = 0;
  while (remaining > 0) {
    const Complex lambda = values[next_value++];
    std::uniform_int_distribution<int> pick(1, remaining);
    int budget = pick(rng);
    // A single semisimple eigenvalue filling the whole space would make
    // A - z0 I the zero matrix up to rounding, where a relative rank
    // threshold is meaningless; always keep at least one other eigenvalue.
    if (out.structure.empty() && budget == static_cast<int>(dim) && dim > 1) {
      budget = static_cast<int>(dim) - 1;
    }
    JordanEigenvalue je;
    je.value = lambda;
    while (budget > 0) {
      int block = 1;
      if (allow_defective && budget > 1 && coin(rng)) {
        std::uniform_int_distribution<int> bs(2, budget);
        block = bs(rng);
      }
      je.blocks.push_back(block);
      for (int k = 0; k < block; ++k) {
        j(offset + k, offset + k) = lambda;
        if (k + 1 < block) {
          j(offset + k, offset + k + 1) = 1.0;
        }
      }
      offset += block;
      budget -= block;
      remaining -= block;
    }
    std::sort(je.blocks.rbegin(), je.blocks.rend());
    out.structure.push_back(je);
  }
  const CMatrix s = random_unitary(dim, rng);
  out.a = s * j * s.adjoint();
  return out;
}

/// A(z) = U diag((z - z0)^{n_j}) W with U, W independent unitaries. The
/// n_j are the partial multiplicities at z0; the Howland p-sequence is
/// the conjugate partition p_k = #{j : n_j >= k}.
struct PowerFunction {
  opfactor::OperatorFunction a;
  Complex z0;
  std::vector<int> powers;  // nonincreasing

  Eigen::Index ma() const {
    Eigen::Index total = 0;
    for (int n : powers) {
      total += n;
    }
    return total;
  }
  int pole_order() const { return powers.empty() ? 0 : powers.front(); }
  std::vector<Eigen::Index> p_sequence() const {
    std::vector<Eigen::Index> ps;
    for (int k = 1; k <= pole_order(); ++k) {
      Eigen::Index count = 0;
      for (int n : powers) {
        count += (n >= k) ? 1 : 0;
      }
      ps.push_back(count);
    }
    return ps;
  }
};

inline PowerFunction random_power_function(Eigen::Index dim,
                                           std::mt19937_64& rng) {
  PowerFunction out;
  const std::vector<Complex> pts = grid_eigenvalues(1, rng);
  out.z0 = pts[0];
  std::uniform_int_distribution<int> power(0, 3);
  bool has_positive = false;
  for (Eigen::Index j = 0; j < dim; ++j) {
    const int n = power(rng);
    has_positive = has_positive || n > 0;
    out.powers.push_back(n);
  }
  if (!has_positive) {
    out.powers.back() = 1;
  }
  std::sort(out.powers.rbegin(), out.powers.rend());

  const CMatrix u = random_unitary(dim, rng);
  const CMatrix w = random_unitary(dim, rng);
  const Complex z0 = out.z0;
  const std::vector<int> powers = out.powers;
  out.a.dim_out = dim;
  out.a.dim_in = dim;
  out.a.evaluate = [u, w, z0, powers, dim](Complex z) -> CMatrix {
    CVector d(dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      d(j) = std::pow(z - z0, powers[static_cast<size_t>(j)]);
    }
    return u * d.asDiagonal() * w;
  };
  out.a.derivative_evaluate = [u, w, z0, powers, dim](Complex z) -> CMatrix {
    CVector d(dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      const int n = powers[static_cast<size_t>(j)];
      d(j) = (n == 0)
                 ? Complex(0.0)
                 : static_cast<double>(n) * std::pow(z - z0, n - 1);
    }
    return u * d.asDiagonal() * w;
  };
  return out;
}

/// Random factored perturbation with normal H0 (grid spectrum) and small
/// Gaussian factors, so sigma(H) stays well separated generically.
inline opfactor::PerturbationProblem random_perturbation(
    Eigen::Index dim_h, Eigen::Index dim_k, std::mt19937_64& rng,
    double strength = 0.4) {
  const std::vector<Complex> ev =
      grid_eigenvalues(static_cast<int>(dim_h), rng);
  CVector d(dim_h);
  for (Eigen::Index j = 0; j < dim_h; ++j) {
    d(j) = ev[static_cast<size_t>(j)];
  }
  const CMatrix u = random_unitary(dim_h, rng);
  const CMatrix h0 = u * d.asDiagonal() * u.adjoint();
  const CMatrix v1 = strength * random_gaussian(dim_k, dim_h, rng);
  const CMatrix v2 = strength * random_gaussian(dim_k, dim_h, rng);
  return opfactor::PerturbationProblem(h0, v1, v2);
}

/// Perturbation sharing the eigenvalue z0 between H0 and H: H0 has z0
/// with multiplicity m0, and V only touches the coordinates past the
/// first `keep` ones, so z0 survives in sigma(H) with multiplicity at
/// least keep. Everything is conjugated by a random unitary.
struct OverlapProblem {
  opfactor::PerturbationProblem problem;
  Complex z0;
  int m0 = 0;    // m_a(z0; H0)
  int keep = 0;  // lower bound on m_a(z0; H)
};

inline OverlapProblem random_overlap_problem(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> m0_pick(2, 3);
  std::uniform_int_distribution<int> rest_pick(1, 3);
  const int m0 = m0_pick(rng);
  std::uniform_int_distribution<int> keep_pick(1, m0);
  const int keep = keep_pick(rng);
  const int rest = rest_pick(rng);
  const int n = m0 + rest;
  const int nk = n - keep;

  const std::vector<Complex> ev = grid_eigenvalues(rest + 1, rng);
  const Complex z0 = ev[0];
  CVector d(n);
  for (int j = 0; j < m0; ++j) {
    d(j) = z0;
  }
  for (int j = 0; j < rest; ++j) {
    d(m0 + j) = ev[static_cast<size_t>(j + 1)];
  }

  CMatrix v1 = CMatrix::Zero(nk, n);
  v1.rightCols(nk) = 0.3 * random_gaussian(nk, nk, rng);
  CMatrix v2 = CMatrix::Zero(nk, n);
  v2.rightCols(nk) = CMatrix::Identity(nk, nk);

  const CMatrix u = random_unitary(n, rng);
  const CMatrix h0 = u * CMatrix(d.asDiagonal()) * u.adjoint();
  OverlapProblem out{
      opfactor::PerturbationProblem(h0, v1 * u.adjoint(), v2 * u.adjoint()),
      z0, m0, keep};
  return out;
}

/// Pair of random-range orthogonal projectors with generic relative
/// position; the pair index is rank(P) - rank(Q).
struct RandomPair {
  opfactor::ProjectionPair pair;
  Eigen::Index rank_p = 0;
  Eigen::Index rank_q = 0;

  Eigen::Index index() const { return rank_p - rank_q; }
};

inline RandomPair random_projection_pair(Eigen::Index dim,
                                         std::mt19937_64& rng) {
  std::uniform_int_distribution<int> rank(0, static_cast<int>(dim));
  const Eigen::Index p_rank = rank(rng);
  const Eigen::Index q_rank = rank(rng);
  auto projector = [&](Eigen::Index r) -> CMatrix {
    const CMatrix u = random_unitary(dim, rng);
    CVector d = CVector::Zero(dim);
    d.head(r).setOnes();
    return u * d.asDiagonal() * u.adjoint();
  };
  return RandomPair{
      opfactor::ProjectionPair(projector(p_rank), projector(q_rank)),
      p_rank, q_rank};
}

}  // namespace testsupport
