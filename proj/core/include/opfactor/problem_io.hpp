#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opfactor/birman_schwinger.hpp"
#include "opfactor/operator_function.hpp"
#include "opfactor/projection_pairs.hpp"

namespace opfactor {

enum class ProblemKind {
  operator_function,
  perturbation,
  projection_pair,
};

/// Per-file tolerance overrides; absent fields keep library defaults.
struct Tolerances {
  double rank_rtol = kDefaultRankRtol;
  QuadratureConfig quad;
};

/// Parsed problem file. Raw payload matrices are kept so the file can be
/// re-serialized canonically; the domain objects are built on demand.
struct ProblemFile {
  ProblemKind kind = ProblemKind::operator_function;
  Tolerances tolerances;

  // operator_function payload
  std::string builder;               // "pencil", "rational", "birman_schwinger"
  std::vector<CMatrix> matrices;     // pencil: {A}; rational: numerator
                                     // coefficients; birman_schwinger:
                                     // {H0, V1, V2}
  std::vector<Complex> denominator;  // rational only

  OperatorFunction make_operator_function() const;
  PerturbationProblem make_perturbation() const;
  ProjectionPair make_projection_pair() const;
};

/// Parses JSON text. Unknown fields, shape mismatches, and malformed
/// complex entries all throw InputError with the offending path in the
/// message. Complex numbers are [re, im] arrays.
ProblemFile parse_problem(const std::string& text);

/// Reads and parses a file; throws InputError if unreadable.
ProblemFile load_problem(const std::string& path);

/// Canonical JSON serialization; parse(serialize(p)) reproduces p.
std::string serialize_problem(const ProblemFile& p, int indent = 2);

}  // namespace opfactor
