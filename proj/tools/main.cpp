#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "opfactor/birman_schwinger.hpp"
#include "opfactor/factorization.hpp"
#include "opfactor/multiplicity.hpp"
#include "opfactor/problem_io.hpp"
#include "opfactor/projection_pairs.hpp"

namespace {

using json = nlohmann::json;
using namespace opfactor;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string file;
  Complex z0;
  bool has_z0 = false;
  double eps = 0.0;
  double rtol = kDefaultRankRtol;
  std::uint64_t seed = 12345;
  bool json_output = false;
  bool timings = false;
};

std::string fmt_complex(Complex z) {
  std::ostringstream os;
  os << z.real();
  if (z.imag() != 0.0) {
    os << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  }
  return os.str();
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

const char* method_name(MultiplicityMethod m) {
  switch (m) {
    case MultiplicityMethod::argument_principle:
      return "argument_principle";
    case MultiplicityMethod::riesz_trace:
      return "riesz_trace";
    case MultiplicityMethod::determinant_oracle:
      return "determinant_oracle";
  }
  return "unknown";
}

json mult_json(const MultiplicityReport& r) {
  return json{{"point", complex_json(r.point)},
              {"value", r.value},
              {"raw_trace", complex_json(r.raw_trace)},
              {"residual", r.residual},
              {"method", method_name(r.method)}};
}

json tolerances_json(const Tolerances& t) {
  return json{{"rank_rtol", t.rank_rtol},
              {"quad_rel_tol", t.quad.rel_tol},
              {"initial_nodes", t.quad.initial_nodes},
              {"max_doublings", t.quad.max_doublings}};
}

void print_header(const Options& opt, const Tolerances& t) {
  std::cout << "opfactor report\n"
            << "  tolerances: rank_rtol=" << t.rank_rtol
            << " quad_rel_tol=" << t.quad.rel_tol
            << " initial_nodes=" << t.quad.initial_nodes
            << " max_doublings=" << t.quad.max_doublings
            << " rtol=" << opt.rtol << "\n";
}

void emit(const Options& opt, const json& report) {
  if (opt.json_output) {
    std::cout << report.dump(2) << "\n";
  }
}

double reconstruction_residual(const OperatorFunction& a,
                               const HowlandFactorization& f, double eps) {
  double worst = 0.0;
  for (int j = 0; j < 8; ++j) {
    const double t = 2.0 * std::numbers::pi * j / 8;
    const Complex z = f.center + eps * std::polar(1.0, t);
    const CMatrix az = a(z);
    const double resid =
        (reconstruct(f, z) - az).norm() / (1.0 + az.norm());
    worst = std::max(worst, resid);
  }
  return worst;
}

json factorization_json(const OperatorFunction& a,
                        const HowlandFactorization& f) {
  std::vector<Eigen::Index> ps;
  for (const HowlandStep& s : f.steps) {
    ps.push_back(s.p);
  }
  const double eps = 0.5 * default_laurent_radius(a, f.center);
  return json{{"direction", f.reversed ? "reversed" : "forward"},
              {"p_sequence", ps},
              {"nu", nu(f)},
              {"order", f.order},
              {"regular_rcond", f.regular_rcond},
              {"rank_warning", f.has_rank_warning()},
              {"reconstruction_residual",
               reconstruction_residual(a, f, eps)}};
}

int cmd_factorize(const Options& opt) {
  if (!opt.has_z0) {
    throw InputError("factorize: --z0 is required");
  }
  const ProblemFile pf = load_problem(opt.file);
  const OperatorFunction a = pf.make_operator_function();
  const QuadratureConfig quad = pf.tolerances.quad;

  const HowlandFactorization fwd =
      howland_factorize(a, opt.z0, opt.rtol, 0, quad);
  const HowlandFactorization rev =
      reversed_factorize(a, opt.z0, opt.rtol, 0, quad);
  const SimplePoleReport sp = is_simple_pole(a, opt.z0, opt.rtol, quad);

  json report;
  report["command"] = "factorize";
  report["z0"] = complex_json(opt.z0);
  report["tolerances"] = tolerances_json(pf.tolerances);
  report["forward"] = factorization_json(a, fwd);
  report["reversed"] = factorization_json(a, rev);
  report["simple_pole"] =
      json{{"simple", sp.simple}, {"nu", sp.nu}, {"mg", sp.mg}};

  if (!opt.json_output) {
    print_header(opt, pf.tolerances);
    for (const char* key : {"forward", "reversed"}) {
      const json& f = report[key];
      std::cout << "  " << key << ": p-sequence=[";
      for (size_t i = 0; i < f["p_sequence"].size(); ++i) {
        std::cout << (i ? ", " : "") << f["p_sequence"][i].get<long>();
      }
      std::cout << "] nu=" << f["nu"].get<long>()
                << " order=" << f["order"].get<long>()
                << " reconstruction_residual="
                << f["reconstruction_residual"].get<double>() << "\n";
    }
    std::cout << "  simple pole: " << (sp.simple ? "yes" : "no")
              << " (nu=" << sp.nu << ", mg=" << sp.mg << ")\n";
  }
  emit(opt, report);
  return kExitOk;
}

int cmd_multiplicity(const Options& opt) {
  if (!opt.has_z0) {
    throw InputError("multiplicity: --z0 is required");
  }
  const ProblemFile pf = load_problem(opt.file);
  const OperatorFunction a = pf.kind == ProblemKind::perturbation
                                 ? id_minus_k(pf.make_perturbation())
                                 : pf.make_operator_function();
  const QuadratureConfig quad = pf.tolerances.quad;

  const MultiplicityReport ma =
      algebraic_multiplicity(a, opt.z0, opt.eps, quad);
  const MultiplicityReport det =
      determinant_zero_order(a, opt.z0, opt.eps, quad);
  const MultiplicityReport pp =
      algebraic_multiplicity_via_principal_part(a, opt.z0, opt.eps, quad);
  Eigen::Index nu_value = 0;
  if (numerical_rank(a(opt.z0), opt.rtol).rank < a.dim_out) {
    nu_value = nu(howland_factorize(a, opt.z0, opt.rtol, 0, quad));
  }

  json report;
  report["command"] = "multiplicity";
  report["z0"] = complex_json(opt.z0);
  report["tolerances"] = tolerances_json(pf.tolerances);
  report["argument_principle"] = mult_json(ma);
  report["determinant_oracle"] = mult_json(det);
  report["principal_part"] = mult_json(pp);
  report["nu"] = nu_value;
  const bool agree = (ma.value == det.value) && (det.value == pp.value) &&
                     (ma.value == nu_value);
  report["agree"] = agree;

  if (!opt.json_output) {
    print_header(opt, pf.tolerances);
    std::cout << "  z0 = " << fmt_complex(opt.z0) << "\n"
              << "  argument principle: " << ma.value
              << " (residual " << ma.residual << ")\n"
              << "  determinant order:  " << det.value
              << " (residual " << det.residual << ")\n"
              << "  principal part:     " << pp.value
              << " (residual " << pp.residual << ")\n"
              << "  factorization nu:   " << nu_value << "\n"
              << "  agreement: " << (agree ? "ok" : "MISMATCH") << "\n";
  }
  emit(opt, report);
  return agree ? kExitOk : kExitNumerical;
}

json verdict_json(const BSVerdict& v) {
  json j{{"z0", complex_json(v.z0)}, {"ok", v.ok}};
  auto put = [&j](const char* key,
                  const std::optional<Eigen::Index>& value) {
    if (value) {
      j[key] = *value;
    }
  };
  put("mg_h", v.mg_h);
  put("mg_k", v.mg_k);
  put("ma_h", v.ma_h);
  put("ma_bs", v.ma_bs);
  put("nu_bs", v.nu_bs);
  put("ma_h0", v.ma_h0);
  put("wa_index", v.wa_index);
  return j;
}

int cmd_verify_bs(const Options& opt) {
  const ProblemFile pf = load_problem(opt.file);
  const PerturbationProblem p = pf.make_perturbation();
  const QuadratureConfig quad = pf.tolerances.quad;

  json report;
  report["command"] = "verify-bs";
  report["tolerances"] = tolerances_json(pf.tolerances);
  report["symmetric_perturbation"] = p.symmetric_perturbation();
  json points = json::array();
  bool all_ok = true;

  // Points of sigma(H0) union sigma(H), deduplicated by clustering.
  std::vector<Complex> zs;
  for (const SpectralPoint& s : p.spectrum_h0()) {
    zs.push_back(s.value);
  }
  for (const SpectralPoint& s : p.spectrum_h()) {
    zs.push_back(s.value);
  }
  CVector all(static_cast<Eigen::Index>(zs.size()));
  for (size_t i = 0; i < zs.size(); ++i) {
    all(static_cast<Eigen::Index>(i)) = zs[i];
  }

  if (!opt.json_output) {
    print_header(opt, pf.tolerances);
  }
  for (const SpectralPoint& s : cluster_spectrum(all)) {
    const Complex z0 = s.value;
    json entry;
    entry["z0"] = complex_json(z0);
    if (p.distance_to_spectrum_h0(z0) > 1e-8) {
      const BSVerdict g = check_geometric(p, z0, opt.rtol);
      const BSVerdict a = check_algebraic(p, z0, quad);
      entry["geometric"] = verdict_json(g);
      entry["algebraic"] = verdict_json(a);
      all_ok = all_ok && g.ok && a.ok;
      if (!opt.json_output) {
        std::cout << "  z0=" << fmt_complex(z0) << " [rho(H0)]"
                  << " mg_h=" << *g.mg_h << " mg_k=" << *g.mg_k
                  << " ma_h=" << *a.ma_h << " ma_bs=" << *a.ma_bs
                  << " nu=" << *a.nu_bs << " "
                  << (g.ok && a.ok ? "ok" : "FAIL") << "\n";
      }
    } else {
      const BSVerdict w = weinstein_aronszajn(p, z0, quad);
      entry["weinstein_aronszajn"] = verdict_json(w);
      all_ok = all_ok && w.ok;
      if (!opt.json_output) {
        std::cout << "  z0=" << fmt_complex(z0) << " [sigma(H0)]"
                  << " ma_h=" << *w.ma_h << " ma_h0=" << *w.ma_h0
                  << " index=" << *w.wa_index << " "
                  << (w.ok ? "ok" : "FAIL") << "\n";
      }
    }
    points.push_back(entry);
  }
  report["points"] = points;
  report["all_ok"] = all_ok;
  if (!opt.json_output) {
    std::cout << "  verdict: " << (all_ok ? "all ok" : "FAILURES") << "\n";
  }
  emit(opt, report);
  return all_ok ? kExitOk : kExitNumerical;
}

int cmd_projections(const Options& opt) {
  const ProblemFile pf = load_problem(opt.file);
  const ProjectionPair pair = pf.make_projection_pair();
  const QuadratureConfig quad = pf.tolerances.quad;

  const PairIndexReport idx = pair_index(pair, opt.rtol);
  json report;
  report["command"] = "projections";
  report["tolerances"] = tolerances_json(pf.tolerances);
  report["index"] =
      json{{"m1", idx.m1}, {"m_minus1", idx.m_minus1}, {"index", idx.index}};
  bool all_ok = true;

  json traces = json::array();
  for (int n = 0; n <= 3; ++n) {
    const Complex t = trace_odd_power(pair, n);
    const double gap = std::abs(t - static_cast<double>(idx.index));
    traces.push_back(json{{"n", n}, {"trace", complex_json(t)}});
    all_ok = all_ok && gap <= 1e-8;
  }
  report["odd_power_traces"] = traces;

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(-2.0, 2.0);
  double det_worst = 0.0;
  for (int j = 0; j < 16; ++j) {
    Complex z;
    do {
      z = Complex(unit(rng), unit(rng));
    } while (std::abs(z) < 0.1 || std::abs(z - 1.0) < 0.1);
    const Complex d = perturbation_determinant(pair, z);
    const Complex closed =
        std::pow((z - 1.0) / z, static_cast<double>(idx.index));
    det_worst =
        std::max(det_worst, std::abs(d - closed) / (1.0 + std::abs(closed)));
  }
  report["determinant_residual"] = det_worst;
  all_ok = all_ok && det_worst <= 1e-8;

  const SpectralShift xi = spectral_shift(pair, opt.rtol);
  report["spectral_shift"] = json{{"value", xi.value},
                                  {"integral", xi.integral},
                                  {"trace_pq", xi.trace_pq},
                                  {"nuclear_norm", xi.nuclear_norm}};

  const Eigen::Index at0 = m_function_index(pair, 0.0, opt.eps, quad);
  const Eigen::Index at_half = m_function_index(pair, 0.5, 0.25, quad);
  const Eigen::Index at1 = m_function_index(pair, 1.0, opt.eps, quad);
  report["m_function_index"] =
      json{{"at_0", at0}, {"at_half", at_half}, {"at_1", at1}};
  all_ok = all_ok && at0 == -idx.index && at_half == 0 && at1 == idx.index;

  report["all_ok"] = all_ok;
  if (!opt.json_output) {
    print_header(opt, pf.tolerances);
    std::cout << "  index: m1=" << idx.m1 << " m_minus1=" << idx.m_minus1
              << " ind=" << idx.index << "\n"
              << "  determinant closed-form residual: " << det_worst << "\n"
              << "  spectral shift: value=" << xi.value
              << " tr(P-Q)=" << xi.trace_pq << "\n"
              << "  M-function index at {0, 1/2, 1}: " << at0 << ", "
              << at_half << ", " << at1 << "\n"
              << "  verdict: " << (all_ok ? "all ok" : "FAILURES") << "\n";
  }
  emit(opt, report);
  return all_ok ? kExitOk : kExitNumerical;
}

struct PaperExample {
  const char* name;
  CMatrix h0, v1, v2;
};

int cmd_paper_examples(const Options& opt) {
  CMatrix h0(2, 2);
  h0 << 1, 1, 0, 1;
  CMatrix id = CMatrix::Identity(2, 2);
  CMatrix v_i(2, 2);
  v_i << 0, 0, -1, -2;
  CMatrix v_ii(2, 2);
  v_ii << 0, -1, 1, -1;

  struct Expected {
    Eigen::Index ma_h, nu, mg_h, mg_k, ma_k;
    Complex z0;
  };
  const std::vector<std::pair<PaperExample, Expected>> cases = {
      {{"example-i", h0, v_i, id}, {2, 2, 1, 1, 1, Complex(0, 0)}},
      {{"example-ii", h0, v_ii, id}, {1, 1, 1, 1, 2, Complex(0, 0)}},
  };

  json report;
  report["command"] = "paper-examples";
  json entries = json::array();
  bool all_ok = true;

  for (const auto& [ex, want] : cases) {
    const PerturbationProblem p(ex.h0, ex.v1, ex.v2);
    const Complex z0 = want.z0;

    const BSVerdict g = check_geometric(p, z0);
    const BSVerdict a = check_algebraic(p, z0);
    const CMatrix k0 = bs_operator(p)(z0);
    const Eigen::Index ma_k = riesz_multiplicity(k0, 1.0, 0.5);

    const bool ok = (*a.ma_h == want.ma_h) && (*a.nu_bs == want.nu) &&
                    (*a.ma_bs == want.ma_h) && (*g.mg_h == want.mg_h) &&
                    (*g.mg_k == want.mg_k) && (ma_k == want.ma_k);
    all_ok = all_ok && ok;

    entries.push_back(json{{"name", ex.name},
                           {"z0", complex_json(z0)},
                           {"ma_h", *a.ma_h},
                           {"nu", *a.nu_bs},
                           {"mg_h", *g.mg_h},
                           {"mg_k", *g.mg_k},
                           {"ma_k_at_1", ma_k},
                           {"ok", ok}});
    if (!opt.json_output) {
      std::cout << ex.name << " at z0=" << fmt_complex(z0) << ":\n"
                << "  m_a(z0; H) = " << *a.ma_h << "  nu = " << *a.nu_bs
                << "\n"
                << "  m_g(z0; H) = " << *g.mg_h
                << "  m_g(1; K(z0)) = " << *g.mg_k
                << "  m_a(1; K(z0)) = " << ma_k << "\n"
                << "  " << (ok ? "ok" : "MISMATCH") << "\n";
    }
  }
  report["examples"] = entries;
  report["all_ok"] = all_ok;
  if (!opt.json_output) {
    std::cout << "verdict: " << (all_ok ? "all ok" : "FAILURES") << "\n";
  }
  emit(opt, report);
  return all_ok ? kExitOk : kExitNumerical;
}

void error_record(const char* type, const std::exception& e) {
  std::cerr << json{{"error", {{"type", type}, {"what", e.what()}}}}.dump()
            << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral analysis of matrix-valued analytic functions"};
  app.require_subcommand(1);

  Options opt;
  std::string z0_text;

  auto add_common = [&](CLI::App* sub, bool needs_file) {
    sub->add_option("--z0", z0_text, "Expansion point as RE,IM or RE");
    sub->add_option("--eps", opt.eps, "Contour radius (0 = auto)");
    sub->add_option("--rtol", opt.rtol, "Relative rank threshold");
    sub->add_option("--seed", opt.seed, "Seed for randomized checks");
    sub->add_flag("--json", opt.json_output, "Structured JSON output");
    sub->add_flag("--timings", opt.timings, "Include wall-clock timings");
    if (needs_file) {
      sub->add_option("file", opt.file, "Problem file")->required();
    }
  };

  CLI::App* factorize = app.add_subcommand("factorize", "Howland factorization");
  CLI::App* multiplicity =
      app.add_subcommand("multiplicity", "Multiplicity cross-checks");
  CLI::App* verify_bs =
      app.add_subcommand("verify-bs", "Birman-Schwinger identity suite");
  CLI::App* projections =
      app.add_subcommand("projections", "Projection-pair identity suite");
  CLI::App* paper_examples =
      app.add_subcommand("paper-examples", "Built-in worked examples");
  add_common(factorize, true);
  add_common(multiplicity, true);
  add_common(verify_bs, true);
  add_common(projections, true);
  add_common(paper_examples, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  const auto started = std::chrono::steady_clock::now();
  int code = kExitOk;
  try {
    if (!z0_text.empty()) {
      double re = 0.0, im = 0.0;
      char comma = 0;
      std::istringstream is(z0_text);
      is >> re;
      if (is.fail()) {
        throw InputError("--z0: expected RE,IM or RE");
      }
      if (is >> comma) {
        if (comma != ',' || !(is >> im)) {
          throw InputError("--z0: expected RE,IM or RE");
        }
      }
      opt.z0 = Complex(re, im);
      opt.has_z0 = true;
    }

    if (factorize->parsed()) {
      code = cmd_factorize(opt);
    } else if (multiplicity->parsed()) {
      code = cmd_multiplicity(opt);
    } else if (verify_bs->parsed()) {
      code = cmd_verify_bs(opt);
    } else if (projections->parsed()) {
      code = cmd_projections(opt);
    } else if (paper_examples->parsed()) {
      code = cmd_paper_examples(opt);
    }
  } catch (const InputError& e) {
    error_record("input", e);
    return kExitInput;
  } catch (const DomainError& e) {
    error_record("input", e);
    return kExitInput;
  } catch (const Error& e) {
    error_record("numerical", e);
    return kExitNumerical;
  } catch (const std::exception& e) {
    error_record("numerical", e);
    return kExitNumerical;
  }

  if (opt.timings) {
    const auto elapsed = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - started)
                             .count();
    std::cout << "elapsed_seconds: " << elapsed << "\n";
  }
  return code;
}
