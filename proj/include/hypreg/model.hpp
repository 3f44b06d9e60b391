#pragma once

// Hyperelliptic models y^2 = h(x), points on them and the differentials x^k dx/y.

#include <Eigen/Dense>
#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"
#include "poly.hpp"

namespace hypreg {

struct BranchPoint {
  cplx x;
  std::optional<Rat> exact; // rational roots are detected and stored exactly
  double error_bound = 0;   // Newton-based enclosure radius
};

enum class InfinityType { Branch, TwoPoints };

class HyperellipticModel {
public:
  explicit HyperellipticModel(RatPoly h) : h_(std::move(h)) {
    if (h_.degree() < 3) throw PreconditionError("deg h must be at least 3, got " + std::to_string(h_.degree()));
    if (!h_.squarefree()) throw StructuralError("singular model: h has a repeated root");
    genus_ = (h_.degree() - 1) / 2;
    dh_ = h_.derivative();
    find_roots();
  }

  static HyperellipticModel from_roots(const std::vector<Rat> &roots, const Rat &lead = 1) {
    return HyperellipticModel(RatPoly::monomial(lead, 0) * RatPoly::from_roots(roots));
  }

  const RatPoly &h() const { return h_; }
  int genus() const { return genus_; }
  int degree() const { return h_.degree(); }
  InfinityType infinity() const { return degree() % 2 ? InfinityType::Branch : InfinityType::TwoPoints; }
  const std::vector<BranchPoint> &branch_points() const { return roots_; }

  cplx h(cplx x) const { return h_(x); }
  cplx leading() const { return {to_double(h_.leading()), 0.0}; }
  cplx dh(cplx x) const { return dh_(x); }

  double min_separation() const {
    double m = 1e300;
    for (std::size_t i = 0; i < roots_.size(); ++i)
      for (std::size_t j = i + 1; j < roots_.size(); ++j) m = std::min(m, std::abs(roots_[i].x - roots_[j].x));
    return m;
  }

  // index of a finite branch point at x (within tol), or -1
  int branch_index(cplx x, double tol = 1e-9) const {
    for (std::size_t i = 0; i < roots_.size(); ++i)
      if (std::abs(roots_[i].x - x) <= tol * std::max(1.0, std::abs(x))) return static_cast<int>(i);
    return -1;
  }

  std::string describe() const {
    return "y^2 = " + h_.str() + " (genus " + std::to_string(genus_) + ", " +
           (infinity() == InfinityType::Branch ? "one branch point at infinity" : "two points at infinity") + ")";
  }

private:
  void find_roots() {
    const int n = h_.degree();
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    const auto &c = h_.coeffs_double();
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[i] / c[n];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    for (int i = 0; i < n; ++i) {
      cplx z = es.eigenvalues()(i);
      for (int it = 0; it < 60; ++it) {
        cplx d = h_(z) / dh_(z);
        z -= d;
        if (std::abs(d) < 1e-17 * std::max(1.0, std::abs(z))) break;
      }
      BranchPoint b;
      b.x = z;
      b.error_bound = 2 * std::abs(h_(z) / dh_(z)) + 4e-16 * std::max(1.0, std::abs(z));
      if (std::abs(z.imag()) < 1e-9 * std::max(1.0, std::abs(z))) {
        if (auto r = rational_guess(z.real()); r && h_(*r) == 0) {
          b.exact = *r;
          b.x = cplx(to_double(*r), 0);
          b.error_bound = 0;
        } else {
          b.x = cplx(z.real(), 0);
        }
      }
      roots_.push_back(b);
    }
    std::sort(roots_.begin(), roots_.end(), [](const BranchPoint &a, const BranchPoint &b) {
      if (a.x.real() != b.x.real()) return a.x.real() < b.x.real();
      return a.x.imag() < b.x.imag();
    });
    for (std::size_t i = 0; i + 1 < roots_.size(); ++i)
      if (std::abs(roots_[i].x - roots_[i + 1].x) < 1e-14)
        throw NumericalError("branch points could not be separated");
  }

  // continued-fraction convergents with bounded denominators
  static std::optional<Rat> rational_guess(double v) {
    Int p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double r = v;
    for (int k = 0; k < 40; ++k) {
      double a = std::floor(r);
      if (std::abs(a) > 1e15) break;
      Int ai(static_cast<long long>(a));
      Int p2 = ai * p1 + p0, q2 = ai * q1 + q0;
      p0 = p1;
      q0 = q1;
      p1 = p2;
      q1 = q2;
      if (q1 > Int(1000000000)) break;
      Rat cand(p1, q1);
      if (std::abs(to_double(cand) - v) < 1e-12 * std::max(1.0, std::abs(v))) return cand;
      double frac = r - a;
      if (frac < 1e-14) break;
      r = 1 / frac;
    }
    return std::nullopt;
  }

  RatPoly h_, dh_;
  int genus_ = 0;
  std::vector<BranchPoint> roots_;
};

// A point of the smooth model. Points at infinity carry inf_sign (0 for the single
// ramified point of an odd model, +-1 for the sheets y ~ +-sqrt(lc) x^(g+1)).
struct CurvePoint {
  bool at_infinity = false;
  int inf_sign = 0;
  cplx x = 0, y = 0;
  std::optional<Rat> exact_x; // set for Weierstrass points and rational inputs
  bool weierstrass = false;
  std::string label;

  static CurvePoint finite(const HyperellipticModel &m, cplx x, int sheet, std::string label = {}) {
    CurvePoint p;
    p.x = x;
    p.y = std::sqrt(m.h(x)) * static_cast<double>(sheet >= 0 ? 1 : -1);
    p.label = std::move(label);
    if (std::abs(p.y) < 1e-12) {
      int b = m.branch_index(x, 1e-9);
      if (b < 0) throw NumericalError("point is nearly on the branch locus but not a branch point");
      return weierstrass_point(m, b, p.label);
    }
    return p;
  }
  static CurvePoint finite_xy(const HyperellipticModel &m, cplx x, cplx y, std::string label = {}) {
    CurvePoint p;
    p.x = x;
    p.y = y;
    p.label = std::move(label);
    double res = std::abs(y * y - m.h(x));
    if (res > 1e-8 * std::max(1.0, std::abs(m.h(x)))) throw PreconditionError("point is not on the curve");
    return p;
  }
  static CurvePoint rational(const HyperellipticModel &m, const Rat &x, int sheet, std::string label = {}) {
    CurvePoint p = finite(m, cplx(to_double(x), 0), sheet, std::move(label));
    p.exact_x = x;
    if (m.h()(x) == 0) {
      p.y = 0;
      p.weierstrass = true;
    }
    return p;
  }
  static CurvePoint weierstrass_point(const HyperellipticModel &m, int index, std::string label = {}) {
    const auto &b = m.branch_points().at(index);
    CurvePoint p;
    p.x = b.x;
    p.y = 0;
    p.exact_x = b.exact;
    p.weierstrass = true;
    p.label = std::move(label);
    return p;
  }
  static CurvePoint infinity(const HyperellipticModel &m, int sign = 0, std::string label = {}) {
    CurvePoint p;
    p.at_infinity = true;
    if (m.infinity() == InfinityType::Branch) {
      p.weierstrass = true;
      p.inf_sign = 0;
    } else {
      if (sign == 0) throw PreconditionError("even-degree model: choose the sheet at infinity");
      p.inf_sign = sign > 0 ? 1 : -1;
    }
    p.label = std::move(label);
    return p;
  }

  CurvePoint involution() const {
    CurvePoint p = *this;
    p.y = -y;
    p.inf_sign = -inf_sign;
    return p;
  }

  double residual(const HyperellipticModel &m) const {
    if (at_infinity) return 0;
    if (weierstrass) return exact_x ? to_double(abs(m.h()(*exact_x))) : std::abs(m.h(x));
    return std::abs(y * y - m.h(x));
  }

  // key used for exact divisor bookkeeping
  std::string key() const {
    if (at_infinity) return inf_sign == 0 ? "inf" : (inf_sign > 0 ? "inf+" : "inf-");
    char buf[128];
    if (exact_x && weierstrass) return "W(" + rat_str(*exact_x) + ")";
    if (weierstrass) {
      std::snprintf(buf, sizeof buf, "W(%.10g%+.10gi)", x.real(), x.imag());
      return buf;
    }
    std::string xs;
    if (exact_x)
      xs = rat_str(*exact_x);
    else {
      std::snprintf(buf, sizeof buf, "%.10g%+.10gi", x.real(), x.imag());
      xs = buf;
    }
    std::snprintf(buf, sizeof buf, ";%.8g%+.8gi", y.real() + 0.0, y.imag() + 0.0);
    return "(" + xs + buf + ")";
  }

  std::string str() const { return label.empty() ? key() : label; }
};

// Pullback value of a 1-form: omega(x, y, dx) where dx is the parameter derivative.
using OneForm = std::function<cplx(cplx x, cplx y, cplx dx)>;

enum class FormKind { Holomorphic, Antiholomorphic, Harmonic };

// sum_k a_k x^k dx/y + sum_k b_k conj(x^k dx/y)
struct DifferentialForm {
  std::vector<cplx> a, b;

  static DifferentialForm holomorphic(int g, int k) {
    DifferentialForm f{std::vector<cplx>(g, 0.0), std::vector<cplx>(g, 0.0)};
    f.a.at(k) = 1;
    return f;
  }
  static DifferentialForm from(std::vector<cplx> a, std::vector<cplx> b) { return {std::move(a), std::move(b)}; }

  int genus() const { return static_cast<int>(a.size()); }
  FormKind kind() const {
    bool ha = std::any_of(a.begin(), a.end(), [](cplx c) { return c != 0.0; });
    bool hb = std::any_of(b.begin(), b.end(), [](cplx c) { return c != 0.0; });
    if (!hb) return FormKind::Holomorphic;
    if (!ha) return FormKind::Antiholomorphic;
    return FormKind::Harmonic;
  }
  bool is_zero() const { return kind() == FormKind::Holomorphic && std::all_of(a.begin(), a.end(), [](cplx c) { return c == 0.0; }); }

  cplx operator()(cplx x, cplx y, cplx dx) const {
    cplx base = dx / y, s = 0, p = 1;
    cplx hs = 0, as = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      hs += a[k] * p;
      as += b[k] * std::conj(p);
      p *= x;
    }
    s = hs * base + as * std::conj(base);
    return s;
  }
  OneForm one_form() const {
    DifferentialForm self = *this;
    return [self](cplx x, cplx y, cplx dx) { return self(x, y, dx); };
  }

  DifferentialForm conj() const {
    DifferentialForm f{b, a};
    for (auto &c : f.a) c = std::conj(c);
    for (auto &c : f.b) c = std::conj(c);
    return f;
  }
  friend DifferentialForm operator+(const DifferentialForm &u, const DifferentialForm &v) {
    DifferentialForm w = u;
    for (std::size_t k = 0; k < w.a.size(); ++k) w.a[k] += v.a[k], w.b[k] += v.b[k];
    return w;
  }
  friend DifferentialForm operator*(cplx s, const DifferentialForm &u) {
    DifferentialForm w = u;
    for (auto &c : w.a) c *= s;
    for (auto &c : w.b) c *= s;
    return w;
  }
};

} // namespace hypreg
