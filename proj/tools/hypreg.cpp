// hypreg: batch driver for the curve, cycle, regulator, extension and modular checks.
//
// Exit codes: 0 all checks passed, 1 a check failed, 2 usage or config error,
// 3 numerical failure, 4 structural error.

#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "checks.hpp"

using namespace hypreg;
using namespace hypreg::checks;
using nlohmann::ordered_json;

namespace {

enum Exit { Ok = 0, CheckFailed = 1, Usage = 2, Numerical = 3, Structural = 4 };

struct Global {
  double tol_path = 1e-12;
  double tol_surface = 1e-8;
  std::string format = "human";
  std::uint64_t seed = 20240601;
};

// Curve and point selection shared by the curve-level subcommands.
struct Selection {
  std::string curve_path;
  std::string Q, R, P;
};

struct Instance {
  std::unique_ptr<HyperellipticModel> model;
  int q = 0, r = 1;
  cplx xP{0.5, 0.5};
  int sheet = 1;
};

Rat parse_rat_flag(const std::string &s, const std::string &flag) {
  try {
    return parse_rational(s);
  } catch (const PreconditionError &e) {
    throw ConfigError(flag + ": " + e.what());
  }
}

int branch_at(const HyperellipticModel &m, const Rat &x, const std::string &what) {
  int k = m.branch_index(cplx(to_double(x), 0));
  if (k < 0) throw ConfigError(what + " = " + rat_str(x) + " is not a finite Weierstrass point of the curve");
  return k;
}

// Reads the curve spec (or the default model) and resolves Q, R, P. Everything that can
// be rejected as bad input is rejected here, before any computation.
Instance resolve(const Selection &sel, const HyperellipticModel &fallback) {
  Instance in;
  CurveSpec spec;
  bool have_spec = !sel.curve_path.empty();
  if (have_spec) spec = read_curve_spec(sel.curve_path);
  try {
    in.model = std::make_unique<HyperellipticModel>(have_spec ? HyperellipticModel(spec.h) : fallback);
  } catch (const Error &e) {
    throw ConfigError(std::string("curve spec: ") + e.what());
  }
  const auto &m = *in.model;
  std::optional<Rat> Q = spec.Q, R = spec.R;
  if (!sel.Q.empty()) Q = parse_rat_flag(sel.Q, "--Q");
  if (!sel.R.empty()) R = parse_rat_flag(sel.R, "--R");
  if (Q) in.q = branch_at(m, *Q, "Q");
  else if (!m.branch_points()[0].exact) throw ConfigError("the first branch point is irrational: choose Q");
  if (R) in.r = branch_at(m, *R, "R");
  else if (m.branch_points().size() < 2 || !m.branch_points()[1].exact) throw ConfigError("choose R");
  if (in.q == in.r) throw ConfigError("Q and R must be distinct Weierstrass points");
  if (spec.P_re) in.xP = cplx(to_double(*spec.P_re), to_double(*spec.P_im)), in.sheet = spec.P_sheet;
  if (!sel.P.empty()) {
    // re,im[,sheet]
    std::vector<std::string> parts;
    std::string cur;
    for (char c : sel.P + ",") {
      if (c == ',') parts.push_back(cur), cur.clear();
      else cur += c;
    }
    if (parts.size() < 2 || parts.size() > 3) throw ConfigError("--P expects re,im or re,im,sheet");
    in.xP = cplx(to_double(parse_rat_flag(parts[0], "--P")), to_double(parse_rat_flag(parts[1], "--P")));
    if (parts.size() == 3) {
      if (parts[2] != "1" && parts[2] != "-1" && parts[2] != "+1") throw ConfigError("--P: sheet must be 1 or -1");
      in.sheet = parts[2] == "-1" ? -1 : 1;
    }
  }
  if (m.branch_index(in.xP, 1e-6) >= 0) throw ConfigError("P must not be a Weierstrass point");
  return in;
}

void add_check(Report &rep, const CheckResult &c) {
  std::string key = "criterion " + std::to_string(c.criterion);
  rep.set(key, std::string(c.pass ? "pass" : "FAIL") + ": " + c.name + ": " + c.measured + " (" + c.threshold + ")");
  rep.tables.push_back(c.detail);
}

ordered_json complex_json(cplx z) { return fmt_complex(z); }

// ---------------------------------------------------------------------------

int curve_report(const Global &g, const Selection &sel, Report &rep) {
  Instance in = resolve(sel, standard_model());
  const auto &m = *in.model;
  CheckOptions o{g.tol_path, g.tol_surface, g.seed};
  rep.set("h", m.h().str());
  rep.set("genus", m.genus());
  rep.set("points at infinity", m.infinity() == InfinityType::Branch ? 1 : 2);
  Table bp{"branch points", {"index", "x", "exact"}, {}};
  for (std::size_t k = 0; k < m.branch_points().size(); ++k) {
    auto &b = m.branch_points()[k];
    bp.add({static_cast<int>(k), fmt_complex(b.x), b.exact ? rat_str(*b.exact) : std::string("-")});
  }
  rep.tables.push_back(bp);
  PathQuadOptions po;
  po.tol = g.tol_path;
  auto sb = homology_symplectic(m);
  auto pd = period_matrix(m, sb, po);
  Table tau{"period matrix tau", {"row", "col", "value"}, {}};
  for (int i = 0; i < pd.g; ++i)
    for (int j = 0; j < pd.g; ++j) tau.add({i, j, fmt_complex(pd.tau(i, j))});
  rep.tables.push_back(tau);
  Table loops{"symplectic basis (rows in terms of branch-pair loops)", {"cycle", "coefficients"}, {}};
  for (int i = 0; i < 2 * sb.g; ++i) {
    std::string row;
    for (int k = 0; k < 2 * sb.g; ++k) row += (k ? " " : "") + std::to_string(sb.change[i][k]);
    loops.add({(i < sb.g ? "a" : "b") + std::to_string(i % sb.g + 1), row});
  }
  rep.tables.push_back(loops);
  auto c = check_curve_analytics(m, o);
  add_check(rep, c);
  return c.pass ? Ok : CheckFailed;
}

int cycle_check(const Global &, const Selection &sel, Report &rep) {
  Instance in = resolve(sel, standard_model());
  const auto &m = *in.model;
  auto Q = CurvePoint::weierstrass_point(m, in.q), R = CurvePoint::weierstrass_point(m, in.r);
  auto P = CurvePoint::finite(m, in.xP, in.sheet);
  auto z = build_Z_QR(m, Q, R, P);
  auto cc = cocycle_check(z.cycle);
  rep.set("Q", Q.str());
  rep.set("R", R.str());
  rep.set("P", P.str());
  rep.set("N", z.N);
  rep.set("|f(P) - 1|", z.normalization_error);
  rep.set("cocycle", cc.valid ? "valid" : "invalid");
  rep.set("sum of component divisors", surface_divisor_str(cc.witness));
  Table comps{"components of Z_QR", {"component", "divisor of function"}, {}};
  for (auto &c : z.cycle.components) comps.add({c.label, c.divisor.str()});
  rep.tables.push_back(comps);
  // Weil reciprocity for f and x - c with c rational and away from the branch points
  FactoredFunction g{1.0, {{Rat(-1, 2), 1}}, 0};
  Table tame{"tame symbols {f, x + 1/2}", {"point", "value"}, {}};
  cplx prod = 1;
  for (auto &[k, v] : tame_symbol_map(&m, z.f, g)) {
    tame.add({k, complex_json(v)});
    prod *= v;
  }
  rep.tables.push_back(tame);
  double weil = std::abs(prod - 1.0);
  rep.set("|prod of tame symbols - 1|", weil);
  bool ok = cc.valid && z.normalization_error <= 1e-12 && weil <= 1e-9;
  rep.set("verdict", ok ? "pass" : "FAIL");
  return ok ? Ok : CheckFailed;
}

struct RegulatorFlags {
  std::string check = "all";
};

int regulator_cmd(const Global &g, const Selection &sel, const RegulatorFlags &rf, Report &rep) {
  Instance in = resolve(sel, standard_model());
  const auto &m = *in.model;
  RegulatorOptions ro;
  ro.tol_path = g.tol_path;
  ro.tol_surface = g.tol_surface;
  RegulatorSetup s = make_setup(m, in.q, in.r, in.xP, in.sheet, ro);
  rep.set("f", fmt_complex(s.f.c) + " (x - " + fmt_complex(s.f.a, 6) + ")/(x - " + fmt_complex(s.f.b, 6) + ")");
  rep.set("N", s.N);
  rep.set("gamma components", static_cast<int>(s.gamma.components.size()));
  rep.set("tol_path", g.tol_path);
  rep.set("tol_surface", g.tol_surface);
  bool ok = true;
  auto want = [&](const char *k) { return rf.check == "all" || rf.check == k; };
  if (want("disc")) {
    auto c = check_disc_lemma(s);
    ok = ok && c.pass;
    add_check(rep, c);
  }
  if (want("main")) {
    auto c = check_main_theorem(s);
    ok = ok && c.pass;
    add_check(rep, c);
  }
  if (want("colombo")) {
    auto c = check_colombo(s);
    ok = ok && c.pass;
    add_check(rep, c);
  }
  if (want("decomposable")) {
    auto c = check_decomposable(s);
    ok = ok && c.pass;
    add_check(rep, c);
  }
  return ok ? Ok : CheckFailed;
}

struct IdentityFlags {
  int instances = 100;
};

int verify_identities(const Global &g, const Selection &sel, const IdentityFlags &f, Report &rep) {
  CheckOptions o{g.tol_path, g.tol_surface, g.seed, f.instances};
  std::vector<std::pair<std::string, HyperellipticModel>> models;
  if (sel.curve_path.empty()) {
    models.emplace_back("y^2 = x^3 - x", genus_one_model());
    models.emplace_back("y^2 = x(x-1)(x-2)(x-3)(x-4)", standard_model());
  } else {
    Instance in = resolve(sel, standard_model());
    models.emplace_back(in.model->h().str(), *in.model);
  }
  std::vector<NamedModel> named;
  for (auto &[name, m] : models) named.push_back({name, &m});
  auto c1 = check_basic_properties(named, o);
  add_check(rep, c1);
  bool ok = c1.pass;
  auto c4 = check_carlson(o);
  ok = ok && c4.pass;
  add_check(rep, c4);
  return ok ? Ok : CheckFailed;
}

struct ExtFlags {
  int diagrams = 250;
};

int ext_demo(const Global &g, const ExtFlags &f, Report &rep) {
  CheckOptions o;
  o.seed = g.seed;
  auto c = check_rabi(o, f.diagrams, std::min(500, 2 * f.diagrams));
  add_check(rep, c);
  // one worked diagram with a nonzero middle row
  extalg::gen::Rng rng(g.seed);
  auto d = extalg::gen::random_rabi(rng, Ring::Integers, 64, 4);
  for (int k = 0; k < 100 && (d.E1.mid.describe() == "0" || d.E2.mid.describe() == "0"); ++k)
    d = extalg::gen::random_rabi(rng, Ring::Integers, 64, 4);
  auto gb = extalg::generalized_baer_difference(d);
  Table t{"first random diagram over Z", {"object", "module"}, {}};
  t.add({"E1 middle", d.E1.mid.describe()});
  t.add({"E2 middle", d.E2.mid.describe()});
  t.add({"BB1 middle", gb.BB1.mid.describe()});
  t.add({"inner middle", gb.inner.mid.describe()});
  t.add({"F middle", gb.F.mid.describe()});
  rep.tables.push_back(t);
  return c.pass ? Ok : CheckFailed;
}

struct ModularFlags {
  int n = 0;
  int max_n = 210;
  int order = 100;
};

int modular_decomp(const Global &, const ModularFlags &f, Report &rep) {
  if (f.n != 0) {
    if (f.n < 1) throw ConfigError("N must be positive");
    if (!is_squarefree(f.n)) throw ConfigError("N = " + std::to_string(f.n) + " is not squarefree");
    CuspDivisor D = div_delta_N(f.n);
    rep.set("N", f.n);
    rep.set("div(Delta_N)", D.str());
    rep.set("degree", D.degree().str());
    Table t{"Lambda decomposition", {"p0", "kappa", "d", "Lambda_d", "verified"}, {}};
    bool ok = true;
    for (int p : prime_factors(f.n)) {
      auto L = lambda_decomposition(f.n, p);
      ok = ok && L.verified;
      for (auto &term : L.terms) t.add({p, L.kappa.str(), term.d, term.lambda.str(), L.verified});
    }
    rep.tables.push_back(t);
    Table e{"E_N q-expansion", {"n", "coefficient"}, {}};
    QSeries E = eisenstein_EN(f.n, 12);
    for (int k = 0; k < 12; ++k) e.add({k, rat_str(E[k])});
    rep.tables.push_back(e);
    bool same = eisenstein_EN(f.n, f.order) == eisenstein_EN_from_E2(f.n, f.order);
    rep.set("E_N routes agree to O(q^" + std::to_string(f.order) + ")", same);
    ok = ok && same;
    return ok ? Ok : CheckFailed;
  }
  auto c = check_modular(f.max_n, f.order);
  add_check(rep, c);
  return c.pass ? Ok : CheckFailed;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"hypreg: regulators of higher Chow cycles on hyperelliptic curves"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  Selection sel;
  app.add_option("--tol-path", g.tol_path, "absolute tolerance per path segment")->capture_default_str();
  app.add_option("--tol-surface", g.tol_surface, "absolute tolerance per surface integral")->capture_default_str();
  app.add_option("--format", g.format, "human, csv or json")->capture_default_str();
  app.add_option("--seed", g.seed, "seed for the randomized checks")->capture_default_str();

  auto curve_opts = [&](CLI::App *sc) {
    sc->add_option("--curve", sel.curve_path, "JSON curve spec");
    sc->add_option("--Q", sel.Q, "x-coordinate of Q (a rational Weierstrass point)");
    sc->add_option("--R", sel.R, "x-coordinate of R");
    sc->add_option("--P", sel.P, "base point as re,im[,sheet]");
  };
  auto *cr = app.add_subcommand("curve-report", "branch points, periods, Abel-Jacobi and torsion checks");
  curve_opts(cr);
  auto *cc = app.add_subcommand("cycle-check", "the cycle Z_QR: components, cocycle condition, tame symbols");
  curve_opts(cc);
  RegulatorFlags rf;
  auto *rg = app.add_subcommand("regulator", "disc lemma, regulator vs extension pairing, Colombo identity, decomposable cycles");
  curve_opts(rg);
  rg->add_option("--check", rf.check, "all, disc, main, colombo or decomposable")
      ->check(CLI::IsMember({"all", "disc", "main", "colombo", "decomposable"}))
      ->capture_default_str();
  IdentityFlags idf;
  auto *vi = app.add_subcommand("verify-identities", "iterated-integral identities and Carlson representatives on random data");
  curve_opts(vi);
  vi->add_option("--instances", idf.instances, "random instances per clause")->check(CLI::PositiveNumber)->capture_default_str();
  ModularFlags mf;
  auto *md = app.add_subcommand("modular-decomp", "divisor of Delta_N, Lambda decomposition, E_N");
  md->add_option("N", mf.n, "a single squarefree level");
  md->add_option("--max-n", mf.max_n, "largest level in the sweep")->check(CLI::Range(2, 2000))->capture_default_str();
  md->add_option("--order", mf.order, "q-expansion order")->check(CLI::Range(1, 2000))->capture_default_str();
  ExtFlags ef;
  auto *ed = app.add_subcommand("ext-demo", "generalized Baer difference on random diagrams");
  ed->add_option("--diagrams", ef.diagrams, "diagrams per ring")->check(CLI::PositiveNumber)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return Usage;
  }

  try {
    Format fmt = parse_format(g.format);
    if (!(g.tol_path > 0) || !(g.tol_surface > 0)) throw ConfigError("tolerances must be positive");
    Report rep;
    int code = Ok;
    if (*cr) rep.command = "curve-report", code = curve_report(g, sel, rep);
    else if (*cc) rep.command = "cycle-check", code = cycle_check(g, sel, rep);
    else if (*rg) rep.command = "regulator", code = regulator_cmd(g, sel, rf, rep);
    else if (*vi) rep.command = "verify-identities", code = verify_identities(g, sel, idf, rep);
    else if (*md) rep.command = "modular-decomp", code = modular_decomp(g, mf, rep);
    else if (*ed) rep.command = "ext-demo", code = ext_demo(g, ef, rep);
    std::cout << render(rep, fmt);
    return code;
  } catch (const ConfigError &e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return Usage;
  } catch (const PreconditionError &e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return Usage;
  } catch (const NumericalError &e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return Numerical;
  } catch (const StructuralError &e) {
    std::cerr << "structural error: " << e.what() << "\n";
    return Structural;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return Structural;
  }
}
