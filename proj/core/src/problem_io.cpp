#include "opfactor/problem_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace opfactor {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw InputError("problem file: " + path + ": " + what);
}

void reject_unknown(const json& obj, const std::string& path,
                    const std::set<std::string>& allowed) {
  for (const auto& item : obj.items()) {
    if (allowed.find(item.key()) == allowed.end()) {
      fail(path, "unknown field '" + item.key() + "'");
    }
  }
}

Complex parse_complex(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number()) {
    fail(path, "expected a complex number as a [re, im] array");
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

CMatrix parse_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) {
    fail(path, "expected a nonempty array of rows");
  }
  const size_t rows = j.size();
  size_t cols = 0;
  CMatrix m;
  for (size_t i = 0; i < rows; ++i) {
    const json& row = j[i];
    if (!row.is_array() || row.empty()) {
      fail(path, "row " + std::to_string(i) + " is not a nonempty array");
    }
    if (i == 0) {
      cols = row.size();
      m.resize(static_cast<Eigen::Index>(rows),
               static_cast<Eigen::Index>(cols));
    } else if (row.size() != cols) {
      fail(path, "row " + std::to_string(i) + " has inconsistent length");
    }
    for (size_t k = 0; k < cols; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          parse_complex(row[k], path + "[" + std::to_string(i) + "][" +
                                    std::to_string(k) + "]");
    }
  }
  require_finite(m, path.c_str());
  return m;
}

std::vector<Complex> parse_complex_list(const json& j,
                                        const std::string& path) {
  if (!j.is_array() || j.empty()) {
    fail(path, "expected a nonempty array of [re, im] pairs");
  }
  std::vector<Complex> out;
  for (size_t i = 0; i < j.size(); ++i) {
    out.push_back(parse_complex(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Tolerances parse_tolerances(const json& j) {
  Tolerances t;
  reject_unknown(j, "tolerances",
                 {"rank_rtol", "quad_rel_tol", "initial_nodes",
                  "max_doublings"});
  if (j.contains("rank_rtol")) {
    t.rank_rtol = j.at("rank_rtol").get<double>();
    if (!(t.rank_rtol > 0.0 && t.rank_rtol < 1.0)) {
      fail("tolerances.rank_rtol", "must lie in (0, 1)");
    }
  }
  if (j.contains("quad_rel_tol")) {
    t.quad.rel_tol = j.at("quad_rel_tol").get<double>();
    if (!(t.quad.rel_tol > 0.0)) {
      fail("tolerances.quad_rel_tol", "must be positive");
    }
  }
  if (j.contains("initial_nodes")) {
    t.quad.initial_nodes = j.at("initial_nodes").get<int>();
    if (t.quad.initial_nodes < 8) {
      fail("tolerances.initial_nodes", "must be at least 8");
    }
  }
  if (j.contains("max_doublings")) {
    t.quad.max_doublings = j.at("max_doublings").get<int>();
    if (t.quad.max_doublings < 0) {
      fail("tolerances.max_doublings", "must be nonnegative");
    }
  }
  return t;
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      row.push_back(complex_to_json(m(i, k)));
    }
    rows.push_back(row);
  }
  return rows;
}

void require_square(const CMatrix& m, const std::string& path) {
  if (m.rows() != m.cols()) {
    fail(path, "matrix must be square");
  }
}

}  // namespace

OperatorFunction ProblemFile::make_operator_function() const {
  if (kind != ProblemKind::operator_function) {
    throw InputError("problem file: not an operator_function problem");
  }
  if (builder == "pencil") {
    return pencil(matrices.at(0));
  }
  if (builder == "rational") {
    return rational_function(matrices, denominator);
  }
  // "birman_schwinger": the function I - K(.) of the perturbation triple.
  PerturbationProblem p(matrices.at(0), matrices.at(1), matrices.at(2));
  return id_minus_k(p);
}

PerturbationProblem ProblemFile::make_perturbation() const {
  if (kind != ProblemKind::perturbation) {
    throw InputError("problem file: not a perturbation problem");
  }
  return PerturbationProblem(matrices.at(0), matrices.at(1), matrices.at(2));
}

ProjectionPair ProblemFile::make_projection_pair() const {
  if (kind != ProblemKind::projection_pair) {
    throw InputError("problem file: not a projection_pair problem");
  }
  return ProjectionPair(matrices.at(0), matrices.at(1));
}

ProblemFile parse_problem(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("problem file: JSON parse error: ") +
                     e.what());
  }
  if (!root.is_object()) {
    fail("$", "top level must be an object");
  }

  ProblemFile p;
  if (!root.contains("kind") || !root.at("kind").is_string()) {
    fail("kind", "missing or not a string");
  }
  const std::string kind = root.at("kind").get<std::string>();

  if (root.contains("tolerances")) {
    p.tolerances = parse_tolerances(root.at("tolerances"));
  }

  if (kind == "operator_function") {
    p.kind = ProblemKind::operator_function;
    reject_unknown(root, "$", {"kind", "tolerances", "builder", "matrix",
                               "numerator", "denominator", "h0", "v1", "v2"});
    if (!root.contains("builder") || !root.at("builder").is_string()) {
      fail("builder", "missing or not a string");
    }
    p.builder = root.at("builder").get<std::string>();
    if (p.builder == "pencil") {
      reject_unknown(root, "$", {"kind", "tolerances", "builder", "matrix"});
      if (!root.contains("matrix")) {
        fail("matrix", "required for the pencil builder");
      }
      p.matrices.push_back(parse_matrix(root.at("matrix"), "matrix"));
      require_square(p.matrices[0], "matrix");
    } else if (p.builder == "rational") {
      reject_unknown(root, "$",
                     {"kind", "tolerances", "builder", "numerator",
                      "denominator"});
      if (!root.contains("numerator") || !root.at("numerator").is_array() ||
          root.at("numerator").empty()) {
        fail("numerator", "required nonempty array of coefficient matrices");
      }
      const json& num = root.at("numerator");
      for (size_t i = 0; i < num.size(); ++i) {
        p.matrices.push_back(
            parse_matrix(num[i], "numerator[" + std::to_string(i) + "]"));
        require_square(p.matrices.back(), "numerator");
        if (p.matrices.back().rows() != p.matrices.front().rows()) {
          fail("numerator", "coefficient matrices have mixed sizes");
        }
      }
      if (!root.contains("denominator")) {
        fail("denominator", "required for the rational builder");
      }
      p.denominator =
          parse_complex_list(root.at("denominator"), "denominator");
    } else if (p.builder == "birman_schwinger") {
      reject_unknown(root, "$",
                     {"kind", "tolerances", "builder", "h0", "v1", "v2"});
      for (const char* key : {"h0", "v1", "v2"}) {
        if (!root.contains(key)) {
          fail(key, "required for the birman_schwinger builder");
        }
        p.matrices.push_back(parse_matrix(root.at(key), key));
      }
      require_square(p.matrices[0], "h0");
    } else {
      fail("builder", "unknown builder '" + p.builder + "'");
    }
  } else if (kind == "perturbation") {
    p.kind = ProblemKind::perturbation;
    reject_unknown(root, "$", {"kind", "tolerances", "h0", "v1", "v2"});
    for (const char* key : {"h0", "v1", "v2"}) {
      if (!root.contains(key)) {
        fail(key, "required for a perturbation problem");
      }
      p.matrices.push_back(parse_matrix(root.at(key), key));
    }
    require_square(p.matrices[0], "h0");
  } else if (kind == "projection_pair") {
    p.kind = ProblemKind::projection_pair;
    reject_unknown(root, "$", {"kind", "tolerances", "p", "q"});
    for (const char* key : {"p", "q"}) {
      if (!root.contains(key)) {
        fail(key, "required for a projection_pair problem");
      }
      p.matrices.push_back(parse_matrix(root.at(key), key));
      require_square(p.matrices.back(), key);
    }
  } else {
    fail("kind", "unknown kind '" + kind + "'");
  }
  return p;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("problem file: cannot read '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

std::string serialize_problem(const ProblemFile& p, int indent) {
  json root;
  switch (p.kind) {
    case ProblemKind::operator_function:
      root["kind"] = "operator_function";
      root["builder"] = p.builder;
      if (p.builder == "pencil") {
        root["matrix"] = matrix_to_json(p.matrices.at(0));
      } else if (p.builder == "rational") {
        json num = json::array();
        for (const CMatrix& m : p.matrices) {
          num.push_back(matrix_to_json(m));
        }
        root["numerator"] = num;
        json den = json::array();
        for (Complex c : p.denominator) {
          den.push_back(complex_to_json(c));
        }
        root["denominator"] = den;
      } else {
        root["h0"] = matrix_to_json(p.matrices.at(0));
        root["v1"] = matrix_to_json(p.matrices.at(1));
        root["v2"] = matrix_to_json(p.matrices.at(2));
      }
      break;
    case ProblemKind::perturbation:
      root["kind"] = "perturbation";
      root["h0"] = matrix_to_json(p.matrices.at(0));
      root["v1"] = matrix_to_json(p.matrices.at(1));
      root["v2"] = matrix_to_json(p.matrices.at(2));
      break;
    case ProblemKind::projection_pair:
      root["kind"] = "projection_pair";
      root["p"] = matrix_to_json(p.matrices.at(0));
      root["q"] = matrix_to_json(p.matrices.at(1));
      break;
  }
  root["tolerances"] = {
      {"rank_rtol", p.tolerances.rank_rtol},
      {"quad_rel_tol", p.tolerances.quad.rel_tol},
      {"initial_nodes", p.tolerances.quad.initial_nodes},
      {"max_doublings", p.tolerances.quad.max_doublings},
  };
  return root.dump(indent);
}

}  // namespace opfactor
