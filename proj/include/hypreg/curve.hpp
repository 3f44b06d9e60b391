#pragma once

// Homology loops, symplectic normalisation, periods, the harmonic dual basis and the
// Abel-Jacobi map for hyperelliptic models.

#include <Eigen/Dense>
#include <map>
#include <numeric>

#include "model.hpp"
#include "paths.hpp"

namespace hypreg {

using IMat = std::vector<std::vector<long long>>;

inline IMat imat_mul(const IMat &a, const IMat &b) {
  IMat c(a.size(), std::vector<long long>(b[0].size(), 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}
inline IMat imat_transpose(const IMat &a) {
  IMat t(a[0].size(), std::vector<long long>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}
inline IMat standard_symplectic(int g) {
  IMat J(2 * g, std::vector<long long>(2 * g, 0));
  for (int i = 0; i < g; ++i) J[i][g + i] = 1, J[g + i][i] = -1;
  return J;
}
inline long long imat_det(const IMat &a) {
  QMat q(a.size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) q(i, j) = Rat(a[i][j]);
  Rat d = 1;
  const std::size_t n = a.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && q(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) q.swap_rows(p, c), d = -d;
    d *= q(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      Rat f = q(r, c) / q(c, c);
      for (std::size_t k = c; k < n; ++k) q(r, k) -= f * q(c, k);
    }
  }
  return boost::multiprecision::numerator(d).convert_to<long long>();
}

// Loop around the segment [e1, e2]: two parallel lines and two half circles of radius r,
// counterclockwise in the x-plane.
inline std::vector<Piece> stadium(cplx e1, cplx e2, double r) {
  cplx u = (e2 - e1) / std::abs(e2 - e1), nrm = cplx(0, 1) * u;
  double tn = std::arg(nrm);
  return {Piece::segment(e1 - r * nrm, e2 - r * nrm), Piece::arc(e2, r, tn - pi, tn),
          Piece::segment(e2 + r * nrm, e1 + r * nrm), Piece::arc(e1, r, tn, tn + pi)};
}

inline double point_segment_distance(cplx p, cplx a, cplx b) {
  cplx d = b - a;
  double t = std::clamp(((p - a) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

// Signed intersection number of two closed lifted paths, from transverse crossings of
// their x-projections on a common sheet.
inline int intersection_number(const LiftedPath &p, const LiftedPath &q, int samples = 4096) {
  auto sample = [samples](const LiftedPath &l) {
    std::vector<cplx> xs(samples + 1);
    for (int i = 0; i <= samples; ++i) xs[i] = l.x(double(i) / samples);
    return xs;
  };
  auto xp = sample(p), xq = sample(q);
  int total = 0;
  for (int i = 0; i < samples; ++i) {
    cplx a = xp[i], e = xp[i + 1] - xp[i];
    double axmin = std::min(a.real(), xp[i + 1].real()), axmax = std::max(a.real(), xp[i + 1].real());
    double aymin = std::min(a.imag(), xp[i + 1].imag()), aymax = std::max(a.imag(), xp[i + 1].imag());
    for (int j = 0; j < samples; ++j) {
      cplx c = xq[j], f = xq[j + 1] - xq[j];
      if (std::max(c.real(), xq[j + 1].real()) < axmin || std::min(c.real(), xq[j + 1].real()) > axmax ||
          std::max(c.imag(), xq[j + 1].imag()) < aymin || std::min(c.imag(), xq[j + 1].imag()) > aymax)
        continue;
      double den = e.real() * (-f.imag()) + f.real() * e.imag();
      if (std::abs(den) < 1e-300) continue;
      cplx w = c - a;
      double s = (w.real() * (-f.imag()) + f.real() * w.imag()) / den;
      double u = (e.real() * w.imag() - e.imag() * w.real()) / den;
      if (s < 0 || s >= 1 || u < 0 || u >= 1) continue;
      double tp = (i + s) / samples, tq = (j + u) / samples;
      cplx yp = p.y(tp), yq = q.y(tq);
      if (std::abs(yp - yq) < std::abs(yp + yq)) {
        double orient = (std::conj(e) * f).imag();
        total += orient > 0 ? 1 : -1;
      }
    }
  }
  return total;
}

struct SymplecticBasis {
  int g = 0;
  std::vector<LiftedPath> loops; // 2g branch-pair loops
  std::vector<std::pair<int, int>> pairs;
  IMat intersection;             // loops[i] . loops[j]
  IMat change;                   // rows: alpha_1..alpha_2g in terms of the loops
  IMat standard;                 // change * intersection * change^T
  long long determinant = 0;

  int c(int i) const { return i < g ? 1 : -1; }
  int sigma(int i) const { return i + c(i) * g; }
};

// Integer symplectic Gram-Schmidt: returns rows a_1..a_g, b_1..b_g with a_i.b_i = 1.
inline IMat symplectic_reduce(const IMat &I) {
  const std::size_t n = I.size();
  auto form = [&](const std::vector<long long> &u, const std::vector<long long> &v) {
    long long s = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) s += u[i] * I[i][j] * v[j];
    return s;
  };
  std::vector<std::vector<long long>> pool;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<long long> e(n, 0);
    e[i] = 1;
    pool.push_back(e);
  }
  std::vector<std::vector<long long>> as, bs;
  while (!pool.empty()) {
    bool found = false;
    std::size_t fi = 0, fj = 0;
    for (std::size_t i = 0; i < pool.size() && !found; ++i)
      for (std::size_t j = 0; j < pool.size() && !found; ++j)
        if (i != j && std::abs(form(pool[i], pool[j])) == 1) fi = i, fj = j, found = true;
    if (!found) throw StructuralError("intersection form is not unimodular on the remaining loops");
    auto u = pool[fi], v = pool[fj];
    long long s = form(u, v);
    for (auto &x : v) x *= s;
    std::vector<std::vector<long long>> rest;
    for (std::size_t k = 0; k < pool.size(); ++k) {
      if (k == fi || k == fj) continue;
      auto z = pool[k];
      long long zv = form(z, v), zu = form(z, u);
      for (std::size_t m = 0; m < n; ++m) z[m] = z[m] - zv * u[m] + zu * v[m];
      rest.push_back(z);
    }
    as.push_back(u);
    bs.push_back(v);
    pool = rest;
  }
  IMat M;
  for (auto &a : as) M.push_back(a);
  for (auto &b : bs) M.push_back(b);
  return M;
}

inline SymplecticBasis homology_symplectic(const HyperellipticModel &m, LiftOptions opt = {}) {
  const auto &bp = m.branch_points();
  if (m.min_separation() < 1e-8) throw NumericalError("branch points closer than 1e-8: homology is ill-conditioned");
  SymplecticBasis sb;
  sb.g = m.genus();
  for (int i = 0; i < 2 * sb.g; ++i) {
    cplx e1 = bp[i].x, e2 = bp[i + 1].x;
    double d = 1e300;
    for (std::size_t k = 0; k < bp.size(); ++k)
      if (static_cast<int>(k) != i && static_cast<int>(k) != i + 1) d = std::min(d, point_segment_distance(bp[k].x, e1, e2));
    d = std::min(d, 2 * std::abs(e2 - e1));
    // alternating radii keep neighbouring loops transverse
    double r = (i % 2 == 0 ? 0.45 : 0.25) * d;
    LiftOptions lo = opt;
    lo.clearance = std::min(opt.clearance, 0.5 * r);
    sb.loops.push_back(LiftedPath::lift_sheet(&m, stadium(e1, e2, r), 0.0, 1, lo));
    sb.pairs.push_back({i, i + 1});
  }
  const int n = 2 * sb.g;
  sb.intersection.assign(n, std::vector<long long>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      int v = intersection_number(sb.loops[i], sb.loops[j]);
      sb.intersection[i][j] = v;
      sb.intersection[j][i] = -v;
    }
  sb.determinant = imat_det(sb.intersection);
  if (sb.determinant != 1) throw StructuralError("loop intersection matrix is not unimodular (det " + std::to_string(sb.determinant) + ")");
  sb.change = symplectic_reduce(sb.intersection);
  sb.standard = imat_mul(imat_mul(sb.change, sb.intersection), imat_transpose(sb.change));
  if (sb.standard != standard_symplectic(sb.g)) throw StructuralError("symplectic reduction failed");
  return sb;
}

struct PeriodData {
  int g = 0;
  Eigen::MatrixXcd raw;   // 2g x g: int over loop i of x^k dx/y
  Eigen::MatrixXcd alpha; // 2g x g: same over alpha_i
  Eigen::MatrixXcd Cz;    // dz_j = sum_k Cz(j,k) x^k dx/y
  Eigen::MatrixXcd Pz;    // 2g x g: int_{alpha_i} dz_j (rows generate the lattice)
  Eigen::MatrixXcd tau;   // g x g
  double symmetry_error = 0;
  double min_imag_eigenvalue = 0;
  double quadrature_error = 0;

  DifferentialForm dz(int j) const {
    DifferentialForm f{std::vector<cplx>(g), std::vector<cplx>(g, 0.0)};
    for (int k = 0; k < g; ++k) f.a[k] = Cz(j, k);
    return f;
  }
};

inline OneForm holomorphic_form(int k) {
  return [k](cplx x, cplx y, cplx dx) { return std::pow(x, k) * dx / y; };
}

inline PeriodData period_matrix(const HyperellipticModel &m, const SymplecticBasis &sb, PathQuadOptions opt = {}) {
  PeriodData pd;
  const int g = sb.g;
  pd.g = g;
  pd.raw.resize(2 * g, g);
  std::vector<OneForm> forms;
  for (int k = 0; k < g; ++k) forms.push_back(holomorphic_form(k));
  for (int i = 0; i < 2 * g; ++i)
    for (int k = 0; k < g; ++k) {
      auto r = integrate_1form(sb.loops[i], forms[k], opt);
      pd.raw(i, k) = r.value;
      pd.quadrature_error = std::max(pd.quadrature_error, r.error);
    }
  Eigen::MatrixXd M(2 * g, 2 * g);
  for (int i = 0; i < 2 * g; ++i)
    for (int j = 0; j < 2 * g; ++j) M(i, j) = static_cast<double>(sb.change[i][j]);
  pd.alpha = M.cast<cplx>() * pd.raw;
  Eigen::MatrixXcd A = pd.alpha.topRows(g), B = pd.alpha.bottomRows(g);
  if (std::abs(A.determinant()) < 1e-12) throw NumericalError("alpha-period matrix is singular");
  pd.Cz = A.inverse().transpose();
  pd.Pz = pd.alpha * pd.Cz.transpose();
  pd.tau = B * pd.Cz.transpose();
  pd.symmetry_error = (pd.tau - pd.tau.transpose()).cwiseAbs().maxCoeff();
  Eigen::MatrixXd im = pd.tau.imag();
  im = 0.5 * (im + im.transpose());
  pd.min_imag_eigenvalue = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(im).eigenvalues().minCoeff();
  return pd;
}

struct HarmonicBasis {
  std::vector<DifferentialForm> dx; // dx_1..dx_2g (0-based here)
  double residual = 0;
};

// Real harmonic forms eta = sum a_k w_k + conj(a_k) conj(w_k) with prescribed alpha-periods.
inline DifferentialForm harmonic_with_periods(const PeriodData &pd, const std::vector<double> &target) {
  const int g = pd.g;
  Eigen::MatrixXd A(2 * g, 2 * g);
  Eigen::VectorXd b(2 * g);
  for (int i = 0; i < 2 * g; ++i) {
    for (int k = 0; k < g; ++k) {
      A(i, k) = 2 * pd.alpha(i, k).real();
      A(i, g + k) = -2 * pd.alpha(i, k).imag();
    }
    b(i) = target[i];
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (lu.rank() < 2 * g) throw NumericalError("period pairing is numerically singular");
  Eigen::VectorXd s = lu.solve(b);
  DifferentialForm f{std::vector<cplx>(g), std::vector<cplx>(g)};
  for (int k = 0; k < g; ++k) {
    f.a[k] = cplx(s(k), s(g + k));
    f.b[k] = std::conj(f.a[k]);
  }
  return f;
}

// Period of a form over alpha_i from the tabulated periods (exact for harmonic forms).
inline cplx alpha_period(const PeriodData &pd, int i, const DifferentialForm &f) {
  cplx s = 0;
  for (int k = 0; k < pd.g; ++k) s += f.a[k] * pd.alpha(i, k) + f.b[k] * std::conj(pd.alpha(i, k));
  return s;
}

inline HarmonicBasis harmonic_dual_basis(const SymplecticBasis &sb, const PeriodData &pd) {
  HarmonicBasis hb;
  const int g = sb.g;
  for (int k = 0; k < 2 * g; ++k) {
    std::vector<double> t(2 * g, 0.0);
    for (int i = 0; i < 2 * g; ++i)
      if (sb.sigma(i) == k) t[i] = sb.c(i);
    hb.dx.push_back(harmonic_with_periods(pd, t));
  }
  for (int k = 0; k < 2 * g; ++k)
    for (int i = 0; i < 2 * g; ++i) {
      double want = sb.sigma(i) == k ? sb.c(i) : 0;
      hb.residual = std::max(hb.residual, std::abs(alpha_period(pd, i, hb.dx[k]) - want));
    }
  return hb;
}

// ---------------------------------------------------------------------------
// Abel-Jacobi

// Polyline from a to b keeping 'clearance' away from the given points.
inline std::vector<cplx> route(cplx a, cplx b, const std::vector<cplx> &avoid, double clearance, int depth = 0) {
  if (depth > 10) throw GeometryError("could not route a path around the branch locus");
  int worst = -1;
  double wd = clearance;
  for (std::size_t k = 0; k < avoid.size(); ++k) {
    if (std::abs(avoid[k] - a) < 1e-12 || std::abs(avoid[k] - b) < 1e-12) continue;
    double d = point_segment_distance(avoid[k], a, b);
    if (d < wd) wd = d, worst = static_cast<int>(k);
  }
  if (worst < 0) return {a, b};
  cplx e = avoid[worst], d = b - a;
  double t = std::clamp(((e - a) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
  cplx foot = a + t * d;
  cplx away = foot - e;
  if (std::abs(away) < 1e-12) away = cplx(0, 1) * d;
  away /= std::abs(away);
  cplx w = e + 2 * clearance * away;
  auto left = route(a, w, avoid, clearance, depth + 1), right = route(w, b, avoid, clearance, depth + 1);
  left.pop_back();
  left.insert(left.end(), right.begin(), right.end());
  return left;
}

struct Lattice {
  Eigen::MatrixXcd gens; // 2g rows in C^g
  // distance of v to the nearest lattice point found by rounding real coordinates
  double distance(const Eigen::VectorXcd &v, Eigen::VectorXd *coords = nullptr) const {
    const int g = static_cast<int>(gens.cols()), n = static_cast<int>(gens.rows());
    Eigen::MatrixXd R(2 * g, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < g; ++j) R(j, i) = gens(i, j).real(), R(g + j, i) = gens(i, j).imag();
    Eigen::VectorXd rv(2 * g);
    for (int j = 0; j < g; ++j) rv(j) = v(j).real(), rv(g + j) = v(j).imag();
    Eigen::VectorXd c = R.colPivHouseholderQr().solve(rv);
    Eigen::VectorXd rc = c.array().round();
    if (coords) *coords = c;
    return (R * rc - rv).norm();
  }
  bool contains(const Eigen::VectorXcd &v, double tol) const { return distance(v) <= tol; }
};

class AbelJacobi {
public:
  AbelJacobi(const HyperellipticModel &m, const PeriodData &pd, PathQuadOptions opt = {}) : m_(m), pd_(pd), opt_(opt) {
    for (auto &b : m.branch_points()) avoid_.push_back(b.x);
    clearance_ = 0.3 * std::min(1.0, m.min_separation());
    lattice_.gens = pd.Pz;
  }

  const Lattice &lattice() const { return lattice_; }

  // path from the base Weierstrass point (first branch point) to p
  LiftedPath path_to(const CurvePoint &p) const {
    cplx e0 = m_.branch_points()[0].x;
    LiftOptions lo;
    lo.clearance = 0.5 * clearance_;
    if (p.weierstrass && !p.at_infinity && std::abs(p.x - e0) < 1e-12) return LiftedPath();
    if (p.at_infinity) {
      double R = 1;
      for (auto &b : m_.branch_points()) R = std::max(R, 2 * std::abs(b.x) + 1);
      double best = 0, theta = 0;
      for (int k = 0; k < 64; ++k) {
        double th = 2 * pi * k / 64, gap = 1e300;
        for (auto &b : m_.branch_points()) gap = std::min(gap, std::abs(std::remainder(th - std::arg(b.x - e0 + 1e-300), 2 * pi)));
        if (gap > best) best = gap, theta = th;
      }
      cplx a = R * std::exp(cplx(0, theta));
      auto pieces = polyline(route(e0, a, avoid_, clearance_), true, false);
      int power = m_.infinity() == InfinityType::Branch ? 2 : 1;
      pieces.push_back(Piece::to_infinity(a, power));
      double t_anchor = double(pieces.size() - 1) / pieces.size();
      cplx y = std::sqrt(m_.h(a));
      if (power == 1) {
        cplx lc = std::sqrt(cplx(to_double(m_.h().leading()), 0));
        cplx xg = std::pow(a, m_.genus() + 1);
        y = static_cast<double>(p.inf_sign) * lc * xg * std::sqrt(m_.h(a) / (lc * lc * xg * xg));
      }
      return LiftedPath::lift(&m_, pieces, t_anchor, y, lo);
    }
    auto pts = route(e0, p.x, avoid_, clearance_);
    if (p.weierstrass) {
      if (pts.size() == 2) pts.insert(pts.begin() + 1, 0.5 * (pts[0] + pts[1]) + cplx(0, 1) * clearance_ * (pts[1] - pts[0]) / std::abs(pts[1] - pts[0]));
      auto pieces = polyline(pts, true, true);
      return LiftedPath::lift_sheet(&m_, pieces, 0.5, 1, lo);
    }
    auto pieces = polyline(pts, true, false);
    return LiftedPath::lift(&m_, pieces, 1.0, p.y, lo);
  }

  Eigen::VectorXcd point(const CurvePoint &p) const {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(pd_.g);
    LiftedPath path = path_to(p);
    if (path.size() == 0) return v;
    for (int j = 0; j < pd_.g; ++j) v(j) = integrate_1form(path, pd_.dz(j).one_form(), opt_).value;
    return v;
  }

  Eigen::VectorXcd divisor(const std::vector<std::pair<CurvePoint, long long>> &D) const {
    long long deg = 0;
    for (auto &t : D) deg += t.second;
    if (deg != 0) throw PreconditionError("Abel-Jacobi needs a degree-0 divisor (degree " + std::to_string(deg) + ")");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(pd_.g);
    for (auto &[p, n] : D) v += static_cast<double>(n) * point(p);
    return v;
  }

private:
  std::vector<Piece> polyline(const std::vector<cplx> &pts, bool from_branch, bool to_branch) const {
    std::vector<Piece> out;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      if (i == 0 && from_branch)
        out.push_back(Piece::from_branch(pts[0], pts[1]));
      else if (i + 2 == pts.size() && to_branch)
        out.push_back(Piece::to_branch(pts[i], pts[i + 1]));
      else
        out.push_back(Piece::segment(pts[i], pts[i + 1]));
    }
    return out;
  }

  const HyperellipticModel &m_;
  const PeriodData &pd_;
  PathQuadOptions opt_;
  std::vector<cplx> avoid_;
  double clearance_;
  Lattice lattice_;
};

struct TorsionReport {
  bool is_torsion = false;
  int order = 0;                    // smallest n <= bound with n AJ(Q - R) in the lattice
  double witness_distance = 0;      // distance for N * AJ(2g(Q - R))
  int N = 0;
  int bound = 64;
};

// N AJ(2g(Q - R)) in the lattice, with N from div(f) = N(Q - R), plus a bounded order search.
inline TorsionReport k_class_torsion_check(const AbelJacobi &aj, int g, const CurvePoint &Q, const CurvePoint &R,
                                           int N, double tol = 1e-8, int bound = 64) {
  TorsionReport t;
  t.N = N;
  t.bound = bound;
  Eigen::VectorXcd d = aj.divisor({{Q, 1}, {R, -1}});
  t.witness_distance = aj.lattice().distance(static_cast<double>(N * 2 * g) * d);
  for (int n = 1; n <= bound; ++n)
    if (aj.lattice().contains(static_cast<double>(n) * d, tol)) {
      t.order = n;
      break;
    }
  t.is_torsion = t.order > 0;
  return t;
}

} // namespace hypreg
