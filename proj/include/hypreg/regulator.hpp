#pragma once

// Both sides of the regulator identity for Z_QR on a hyperelliptic curve: surface
// integrals over C - gamma, gamma iterated integrals, loops based at P and the
// Carlson-side pairing.

#include <Eigen/Dense>
#include <cstdio>
#include <optional>
#include <string>

#include "curve.hpp"
#include "cycles.hpp"
#include "paths.hpp"
#include "quadrature.hpp"

namespace hypreg {

struct RegulatorOptions {
  double tol_path = 1e-12;
  double tol_surface = 1e-9; // absolute, on each surface integral
  long max_cells = 3000000;
};

// ---------------------------------------------------------------------------
// surface integrals in the chart w = f(x), w = rho e^{i theta}, rho = u/(1-u),
// u = S(v) with the quintic smoothstep S flattening the log singularities at both ends

inline double smoothstep(double v) { return v * v * v * (10 - 15 * v + 6 * v * v); }
inline double smoothstep_derivative(double v) { return 30 * v * v * (1 - v) * (1 - v); }
inline double smoothstep_inverse(double u) {
  double lo = 0, hi = 1;
  for (int k = 0; k < 100; ++k) {
    double mid = 0.5 * (lo + hi);
    (smoothstep(mid) < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct SurfaceChart {
  const HyperellipticModel *m = nullptr;
  Mobius f;
  double theta0 = 0; // theta runs over (theta0, theta0 + 2 pi); the cut is gamma
  std::vector<double> ugrid, tgrid;

  cplx h_at(cplx w, cplx x) const {
    // product form with x - a, x - b from w directly
    cplx v = m->leading();
    for (auto &e : m->branch_points()) {
      cplx d;
      if (std::abs(e.x - f.a) < 1e-12)
        d = w * (f.b - f.a) / (w - f.c);
      else if (std::abs(e.x - f.b) < 1e-12)
        d = f.c * (f.b - f.a) / (w - f.c);
      else
        d = x - e.x;
      v *= d;
    }
    return v;
  }
};

inline SurfaceChart make_chart(const HyperellipticModel &m, const Mobius &f, double theta0 = 0) {
  SurfaceChart ch;
  ch.m = &m;
  ch.f = f;
  ch.theta0 = theta0;
  std::vector<cplx> sing = {f.c}; // image of x = infinity
  for (auto &e : m.branch_points())
    if (std::abs(e.x - f.a) > 1e-12 && std::abs(e.x - f.b) > 1e-12) sing.push_back(f(e.x));
  std::vector<double> us = {0, 1}, ts = {theta0, theta0 + 2 * pi};
  for (cplx w : sing) {
    us.push_back(smoothstep_inverse(std::abs(w) / (1 + std::abs(w))));
    double t = std::arg(w);
    while (t <= theta0) t += 2 * pi;
    while (t >= theta0 + 2 * pi) t -= 2 * pi;
    ts.push_back(t);
  }
  auto refine = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }), v.end());
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      out.push_back(v[i]);
      out.push_back(0.5 * (v[i] + v[i + 1]));
    }
    out.push_back(v.back());
    return out;
  };
  ch.ugrid = refine(us);
  ch.tgrid = refine(ts);
  return ch;
}

enum class Weight { One, Log, LogAbs };

// int_C weight * phi ^ psi over both sheets, cut along gamma.
inline quad::Result surface_integral(const SurfaceChart &ch, const DifferentialForm &phi, const DifferentialForm &psi,
                                     Weight weight, const RegulatorOptions &opt = {}) {
  const int g = phi.genus();
  std::vector<cplx> C(g * g);
  bool any = false;
  for (int k = 0; k < g; ++k)
    for (int m = 0; m < g; ++m) {
      C[k * g + m] = phi.a[k] * psi.b[m] - psi.a[k] * phi.b[m];
      any = any || C[k * g + m] != 0.0;
    }
  if (!any) return {}; // (2,0) and (0,2) parts vanish identically
  auto F = [&](double v, double th) -> cplx {
    double u = smoothstep(v);
    double rho = u / (1 - u);
    cplx w = std::polar(rho, th);
    cplx x = ch.f.inverse(w);
    double J = std::norm(ch.f.inverse_derivative(w)) * rho / ((1 - u) * (1 - u)) * smoothstep_derivative(v);
    double hv = std::abs(ch.h_at(w, x));
    cplx s = 0, xk = 1;
    for (int k = 0; k < g; ++k, xk *= x) {
      cplx xm = 1;
      for (int m = 0; m < g; ++m, xm *= std::conj(x)) s += C[k * g + m] * xk * xm;
    }
    cplx val = s / hv * cplx(0, -2) * 2.0 * J;
    switch (weight) {
    case Weight::One:
      return val;
    case Weight::Log:
      return val * cplx(std::log(rho), th);
    case Weight::LogAbs:
      return val * std::log(rho);
    }
    return val;
  };
  quad::CubatureOptions co;
  co.abs_tol = opt.tol_surface;
  co.max_cells = opt.max_cells;
  return quad::Cubature(co).integrate(F, ch.ugrid, ch.tgrid);
}

// Riemann bilinear relation for closed forms: int_C phi ^ psi from alpha-periods.
inline cplx bilinear_pairing(const PeriodData &pd, const DifferentialForm &phi, const DifferentialForm &psi) {
  cplx s = 0;
  for (int i = 0; i < pd.g; ++i)
    s += alpha_period(pd, i, phi) * alpha_period(pd, pd.g + i, psi) -
         alpha_period(pd, pd.g + i, phi) * alpha_period(pd, i, psi);
  return s;
}

// ---------------------------------------------------------------------------
// the Z_QR instance

struct RegulatorSetup {
  const HyperellipticModel *m = nullptr;
  SymplecticBasis sb;
  PeriodData pd;
  HarmonicBasis hb;
  CurvePoint Q, R, P;
  Mobius f; // c (x - x_Q)/(x - x_R) with f(P) = 1
  int N = 2;
  GammaTrace gamma;
  SurfaceChart chart;
  cplx out_dir; // direction leaving P into the side where log f = 0
  RegulatorOptions opt;

  DifferentialForm dz(int i) const { return pd.dz(i); }
  const DifferentialForm &dx(int k) const { return hb.dx.at(k); }
  OneForm dlog_f() const {
    Mobius ff = f;
    return [ff](cplx x, cplx, cplx dx) { return ff.derivative(x) / ff(x) * dx; };
  }
};

inline RegulatorSetup make_setup(const HyperellipticModel &m, int q_index, int r_index, cplx xP, int sheetP,
                                 RegulatorOptions opt = {}, cplx scale = 1) {
  if (q_index == r_index) throw PreconditionError("Q = R: Z_QR is degenerate");
  RegulatorSetup s;
  s.m = &m;
  s.opt = opt;
  s.sb = homology_symplectic(m);
  PathQuadOptions po;
  po.tol = opt.tol_path;
  s.pd = period_matrix(m, s.sb, po);
  s.hb = harmonic_dual_basis(s.sb, s.pd);
  s.Q = CurvePoint::weierstrass_point(m, q_index, "Q");
  s.R = CurvePoint::weierstrass_point(m, r_index, "R");
  s.P = CurvePoint::finite(m, xP, sheetP, "P");
  if (s.P.weierstrass) throw PreconditionError("P must not be a Weierstrass point");
  cplx a = s.Q.x, b = s.R.x;
  s.f = Mobius{scale * (xP - b) / (xP - a), a, b};
  s.N = 2;
  s.gamma = trace_gamma(m, Mobius{(xP - b) / (xP - a), a, b});
  cplx fp = s.f.derivative(xP);
  s.out_dir = cplx(0, 1) * std::abs(fp) / fp;
  s.chart = make_chart(m, s.f, 0.0);
  return s;
}

// ---------------------------------------------------------------------------
// loops based at P

inline std::vector<Piece> stadium_from_top(cplx e1, cplx e2, double r) {
  cplx u = (e2 - e1) / std::abs(e2 - e1), nrm = cplx(0, 1) * u;
  double tn = std::arg(nrm);
  cplx mid = 0.5 * (e1 + e2) + r * nrm;
  return {Piece::segment(mid, e1 + r * nrm), Piece::arc(e1, r, tn, tn + pi), Piece::segment(e1 - r * nrm, e2 - r * nrm),
          Piece::arc(e2, r, tn - pi, tn), Piece::segment(e2 + r * nrm, mid)};
}

inline int crossings_with_arc(const LiftedPath &p, const Piece &arc, int samples = 4000) {
  std::vector<cplx> a(samples + 1);
  for (int i = 0; i <= samples; ++i) a[i] = arc.x(std::clamp(double(i) / samples, 1e-9, 1 - 1e-9));
  int count = 0;
  const int np = samples * std::max(1, p.size() / 2);
  cplx prev = p.x(0), base = p.x(0);
  for (int i = 1; i <= np; ++i) {
    cplx cur = p.x(double(i) / np);
    for (int j = 0; j < samples; ++j) {
      cplx e = cur - prev, f = a[j + 1] - a[j], w = a[j] - prev;
      double den = e.real() * (-f.imag()) + f.real() * e.imag();
      if (std::abs(den) < 1e-300) continue;
      double s = (w.real() * (-f.imag()) + f.real() * w.imag()) / den;
      double t = (e.real() * w.imag() - e.imag() * w.real()) / den;
      if (s >= 0 && s < 1 && t >= 0 && t < 1 && std::abs(prev + s * e - base) > 1e-6) ++count;
    }
    prev = cur;
  }
  return count;
}

struct BasedLoop {
  LiftedPath path;
  int index = 0;              // alpha index 0..2g-1
  int gamma_crossings = 0;    // x-plane crossings with gamma (excluding the base point)
  cplx dlog_period = 0;       // int_alpha dlog f
  std::vector<int> loop_sign; // s_m: based loop around branch pair m is s_m * loops[m]
};

class BasedLoops {
public:
  explicit BasedLoops(const RegulatorSetup &s) : s_(s) {
    const auto &bp = s.m->branch_points();
    double top = -1e300;
    for (auto &b : bp) top = std::max(top, b.x.imag());
    const int n = 2 * s.sb.g;
    for (int m = 0; m < n; ++m) {
      auto [i1, i2] = s.sb.pairs[m];
      cplx e1 = bp[i1].x, e2 = bp[i2].x;
      double d = 1e300;
      for (std::size_t k = 0; k < bp.size(); ++k)
        if (static_cast<int>(k) != i1 && static_cast<int>(k) != i2) d = std::min(d, point_segment_distance(bp[k].x, e1, e2));
      d = std::min(d, 2 * std::abs(e2 - e1));
      double r = (m % 2 == 0 ? 0.45 : 0.25) * d;
      bool qr = (std::abs(e1 - s.Q.x) < 1e-12 && std::abs(e2 - s.R.x) < 1e-12) ||
                (std::abs(e1 - s.R.x) < 1e-12 && std::abs(e2 - s.Q.x) < 1e-12);
      if (qr) {
        // enclose all of gamma
        double reach = 0;
        for (int k = 1; k < 200; ++k) reach = std::max(reach, point_segment_distance(s.gamma.components[0].x(k / 200.0), e1, e2));
        if (reach + 0.1 * d < 0.9 * d) r = reach + 0.1 * d;
      }
      radii_.push_back(r);
      top = std::max(top, std::max(e1.imag(), e2.imag()) + r);
    }
    height_ = top + 1;
    for (int m = 0; m < n; ++m) lassos_.push_back(make_lasso(m));
  }

  const LiftedPath &lasso(int m) const { return lassos_[m].first; }
  int lasso_sign(int m) const { return lassos_[m].second; }

  BasedLoop alpha(int j) const {
    BasedLoop b;
    b.index = j;
    std::optional<LiftedPath> acc;
    for (int m = 0; m < 2 * s_.sb.g; ++m) {
      long long e = s_.sb.change[j][m] * lassos_[m].second;
      for (long long r = 0; r < std::llabs(e); ++r) {
        LiftedPath piece = e > 0 ? lassos_[m].first : lassos_[m].first.reversed();
        acc = acc ? LiftedPath::concat(*acc, piece) : piece;
      }
      b.loop_sign.push_back(lassos_[m].second);
    }
    if (!acc) throw StructuralError("empty alpha class");
    b.path = *acc;
    PathQuadOptions po;
    po.tol = s_.opt.tol_path;
    b.dlog_period = integrate_1form(b.path, s_.dlog_f(), po).value;
    b.gamma_crossings = crossings_with_arc(b.path, s_.gamma.components[0].pieces()[0]);
    return b;
  }

private:
  std::pair<LiftedPath, int> make_lasso(int m) const {
    const auto &bp = s_.m->branch_points();
    auto [i1, i2] = s_.sb.pairs[m];
    cplx e1 = bp[i1].x, e2 = bp[i2].x;
    double r = radii_[m];
    auto loop_pieces = stadium_from_top(e1, e2, r);
    cplx A = loop_pieces[0].x(0);
    cplx P = s_.P.x;
    double delta = 0.05 * std::min(1.0, s_.m->min_separation());
    cplx P1 = P + delta * s_.out_dir;
    std::vector<cplx> pts = {P, P1, cplx(P1.real(), height_), cplx(A.real(), height_), A};
    std::vector<cplx> clean = {pts[0]};
    for (std::size_t k = 1; k < pts.size(); ++k)
      if (std::abs(pts[k] - clean.back()) > 1e-12) clean.push_back(pts[k]);
    std::vector<Piece> conn;
    for (std::size_t k = 0; k + 1 < clean.size(); ++k) conn.push_back(Piece::segment(clean[k], clean[k + 1]));
    LiftOptions lo;
    lo.clearance = 0.1 * r;
    LiftedPath c = LiftedPath::lift(s_.m, conn, 0.0, s_.P.y, lo);
    LiftedPath loop = LiftedPath::lift(s_.m, loop_pieces, 0.0, *c.end_y(), lo);
    LiftedPath lasso = LiftedPath::concat(LiftedPath::concat(c, loop), c.reversed());
    // orientation class relative to the reference loop, from a period
    PathQuadOptions po;
    po.tol = s_.opt.tol_path;
    cplx p1 = integrate_1form(loop, holomorphic_form(0), po).value, p0 = s_.pd.raw(m, 0);
    int sign;
    if (std::abs(p1 - p0) < 1e-8 * std::abs(p0))
      sign = 1;
    else if (std::abs(p1 + p0) < 1e-8 * std::abs(p0))
      sign = -1;
    else
      throw NumericalError("based loop is not homologous to +-the reference loop");
    return {lasso, sign};
  }

  const RegulatorSetup &s_;
  std::vector<double> radii_;
  double height_ = 0;
  std::vector<std::pair<LiftedPath, int>> lassos_;
};

// ---------------------------------------------------------------------------
// pairings

// omega = phi (x) psi, pulled back along the diagonal to phi ^ psi
struct TwoForm {
  DifferentialForm phi, psi;
  std::string label;
};

// Pullback of phi (x) psi to a component of a cycle. On C x {p} the second factor
// restricts to a point and on {p} x C the first one does, so those are the zero form.
inline TwoForm restrict_to_component(const TwoForm &w, CurveTag tag) {
  DifferentialForm zero{std::vector<cplx>(w.phi.genus(), 0.0), std::vector<cplx>(w.phi.genus(), 0.0)};
  switch (tag) {
  case CurveTag::Diagonal:
    return w;
  case CurveTag::CxPoint:
    return {w.phi, zero, w.label + " on C x {p}"};
  case CurveTag::PointxC:
    return {zero, w.psi, w.label + " on {p} x C"};
  case CurveTag::Generic:
    break;
  }
  throw PreconditionError("restriction to a generic component needs its parametrisation");
}

// Sums over the gamma components of the length-2 integrals and of the product term.
struct GammaTerms {
  cplx phi_psi = 0; // sum_n int_{gamma^n} phi psi
  cplx psi_phi = 0; // sum_n int_{gamma^n} psi phi
  cplx product = 0; // sum_n int phi * int psi
  double error = 0;
};

inline GammaTerms gamma_terms(const RegulatorSetup &s, const DifferentialForm &phi, const DifferentialForm &psi) {
  GammaTerms t;
  PathQuadOptions po;
  po.tol = s.opt.tol_path;
  for (const auto &c : s.gamma.components) {
    auto a = iterated_integral(c, {phi.one_form(), psi.one_form()}, po);
    auto b = iterated_integral(c, {psi.one_form(), phi.one_form()}, po);
    t.phi_psi += a.value;
    t.psi_phi += b.value;
    t.product += integrate_1form(c, phi.one_form(), po).value * integrate_1form(c, psi.one_form(), po).value;
    t.error += a.error + b.error;
  }
  return t;
}

// The paper variant adds N pi i int_{gamma^-} phi psi; the corrected one subtracts it
// (see the disc-integral convention in the README).
enum class GammaSign { Corrected, Paper };

struct PairingValue {
  cplx value = 0;
  cplx surface = 0;
  cplx gamma = 0;
  double error = 0;
};

inline PairingValue regulator_pairing(const RegulatorSetup &s, const TwoForm &w, GammaSign sign = GammaSign::Corrected) {
  PairingValue r;
  auto S = surface_integral(s.chart, w.phi, w.psi, Weight::Log, s.opt);
  GammaTerms t = gamma_terms(s, w.phi, w.psi);
  // int_{gamma^-} phi psi = int_gamma psi phi
  cplx npi = cplx(0, pi * s.N) * t.psi_phi;
  r.surface = S.value;
  r.gamma = sign == GammaSign::Corrected ? -npi : npi;
  r.value = r.surface + r.gamma;
  r.error = S.error + pi * s.N * t.error;
  return r;
}

// (2g+1)(int_{C - gamma} log f dx_j ^ dz_i + 2 pi i int_gamma dx_j dz_i)
inline PairingValue carlson_pairing(const RegulatorSetup &s, int j, int i) {
  PairingValue r;
  const double k = 2 * s.sb.g + 1;
  auto S = surface_integral(s.chart, s.dx(j), s.dz(i), Weight::Log, s.opt);
  GammaTerms t = gamma_terms(s, s.dx(j), s.dz(i));
  r.surface = k * S.value;
  r.gamma = k * two_pi_i * t.phi_psi;
  r.value = r.surface + r.gamma;
  r.error = k * (S.error + 2 * pi * t.error);
  return r;
}

// Loop route: (2g+1) int_{alpha_j} log f dz_i, the branch of log f continued from
// log f(P) = 0 along the based loop.
inline PairingValue carlson_pairing_loop(const RegulatorSetup &s, const BasedLoop &a, int i) {
  PathQuadOptions po;
  po.tol = s.opt.tol_path;
  auto L = iterated_integral(a.path, {s.dlog_f(), s.dz(i).one_form()}, po);
  PairingValue r;
  r.value = double(2 * s.sb.g + 1) * L.value;
  r.error = (2 * s.sb.g + 1) * L.error;
  return r;
}

// ---------------------------------------------------------------------------
// Colombo's identity  int_alpha log f psi = int_{C - gamma} phi ^ log f psi + 2 pi i int_gamma phi psi

struct ColomboReport {
  int j = 0;
  std::string psi_label;
  cplx lhs = 0, rhs = 0, surface = 0, gamma = 0;
  double difference = 0;
  int gamma_crossings = 0;
  cplx dlog_period = 0;
  bool pass = false;
  // sign audit: the same right side with phi = c(j) dx_sigma(j) instead of dx_j
  cplx rhs_audit = 0;
  double audit_difference = 0;
};

inline ColomboReport colombo_identity_check(const RegulatorSetup &s, const BasedLoop &a, const DifferentialForm &phi,
                                            const DifferentialForm &psi, double tol, const DifferentialForm *phi_audit = nullptr) {
  ColomboReport r;
  r.j = a.index;
  r.gamma_crossings = a.gamma_crossings;
  r.dlog_period = a.dlog_period;
  PathQuadOptions po;
  po.tol = s.opt.tol_path;
  r.lhs = iterated_integral(a.path, {s.dlog_f(), psi.one_form()}, po).value;
  r.surface = surface_integral(s.chart, phi, psi, Weight::Log, s.opt).value;
  r.gamma = two_pi_i * gamma_terms(s, phi, psi).phi_psi;
  r.rhs = r.surface + r.gamma;
  r.difference = std::abs(r.lhs - r.rhs);
  r.pass = r.difference <= tol;
  if (phi_audit) {
    r.rhs_audit = surface_integral(s.chart, *phi_audit, psi, Weight::Log, s.opt).value +
                  two_pi_i * gamma_terms(s, *phi_audit, psi).phi_psi;
    r.audit_difference = std::abs(r.lhs - r.rhs_audit);
  }
  return r;
}

// ---------------------------------------------------------------------------
// main theorem comparison

struct RegulatorReport {
  int j = 0, i = 0; // alpha_j, zeta_i
  cplx regulator = 0, carlson = 0;
  std::optional<cplx> carlson_loop; // only for loops disjoint from gamma
  cplx ratio = 0;                   // carlson / regulator
  cplx fitted = 0;                  // carlson_loop / regulator when available
  double tolerance = 0;
  std::vector<double> lattice_offset; // coordinates of the row difference in 2 pi i * period lattice
  double residual = 0;                // row distance to the lattice, relative
  int gamma_crossings = 0;
  bool pass = false;
};

// For every alpha_j, the g-vector over i of carlson - (2g+1) reg is reduced modulo
// 2 pi i times the period lattice; the pair passes when the remainder is below tol
// relative to the size of the carlson row.
inline std::vector<RegulatorReport> main_theorem_check(const RegulatorSetup &s, const std::vector<int> &js, double tol = 1e-4,
                                                       bool loop_route = true) {
  const int g = s.sb.g;
  const double k = 2 * g + 1;
  std::vector<RegulatorReport> out;
  std::optional<BasedLoops> bl;
  if (loop_route) bl.emplace(s);
  Lattice lat;
  lat.gens = two_pi_i * s.pd.Pz;
  for (int j : js) {
    std::optional<BasedLoop> a;
    if (bl) a = bl->alpha(j);
    Eigen::VectorXcd diff(g);
    double scale = 0;
    std::vector<RegulatorReport> row;
    for (int i = 0; i < g; ++i) {
      RegulatorReport r;
      r.j = j;
      r.i = i;
      r.tolerance = tol;
      r.regulator = regulator_pairing(s, {s.dx(j), s.dz(i), ""}).value;
      r.carlson = carlson_pairing(s, j, i).value;
      r.ratio = r.carlson / r.regulator;
      if (a) {
        r.gamma_crossings = a->gamma_crossings;
        if (a->gamma_crossings == 0) {
          r.carlson_loop = carlson_pairing_loop(s, *a, i).value;
          r.fitted = *r.carlson_loop / r.regulator;
        }
      }
      diff(i) = r.carlson - k * r.regulator;
      scale = std::max(scale, std::abs(r.carlson));
      row.push_back(r);
    }
    Eigen::VectorXd coords;
    double dist = lat.distance(diff, &coords);
    for (auto &r : row) {
      r.lattice_offset.assign(coords.data(), coords.data() + coords.size());
      r.residual = dist / std::max(scale, 1e-300);
      r.pass = r.residual <= tol;
      out.push_back(r);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// real regulator  <reg_R, dz_i (x) conj(dz_j)> = int over the dual cycle of conj(dz_j) of log|f| dz_i

struct RealRegulator {
  cplx value = 0;
  std::vector<cplx> loop_integrals; // int_{alpha_m} log|f| dz_i
};

inline RealRegulator real_regulator(const RegulatorSetup &s, const BasedLoops &bl, int i, int j,
                                    std::function<double(cplx)> logabs = {}) {
  if (!logabs) {
    Mobius f = s.f;
    logabs = [f](cplx x) { return std::log(std::abs(f(x))); };
  }
  const int g = s.sb.g;
  DifferentialForm dz = s.dz(i);
  OneForm w = [dz, logabs](cplx x, cplx y, cplx dx) { return logabs(x) * dz(x, y, dx); };
  PathQuadOptions po;
  po.tol = s.opt.tol_path;
  RealRegulator r;
  // conj(dz_j) = sum_m conj(Pz(m, j)) c(m) dx_sigma(m), and dx_sigma(m) is dual to c(m) alpha_m
  for (int m = 0; m < 2 * g; ++m) {
    cplx v = integrate_1form(bl.alpha(m).path, w, po).value;
    r.loop_integrals.push_back(v);
    r.value += std::conj(s.pd.Pz(m, j)) * v;
  }
  return r;
}

// ---------------------------------------------------------------------------
// decomposable baseline: <reg((C, a)), omega> = log(a) int_C phi ^ psi

struct DecomposableReport {
  cplx regulator = 0; // log(a) times the surface quadrature
  cplx period = 0;    // log(a) times the bilinear-relation value
  double difference = 0;
  double error = 0;
};

inline DecomposableReport decomposable_baseline(const RegulatorSetup &s, cplx a, const TwoForm &w) {
  DecomposableReport d;
  cplx la = std::log(a);
  auto S = surface_integral(s.chart, w.phi, w.psi, Weight::One, s.opt);
  d.regulator = la * S.value;
  d.period = la * bilinear_pairing(s.pd, w.phi, w.psi);
  d.difference = std::abs(d.regulator - d.period);
  d.error = std::abs(la) * S.error;
  return d;
}

} // namespace hypreg
