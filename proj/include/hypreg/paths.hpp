#pragma once

// Lifted paths on y^2 = h(x), adaptive panel quadrature of 1-forms and iterated
// integrals, branch-tracked logarithms, the level set gamma = f^-1([0, inf]) and
// the disc double integral.

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "model.hpp"
#include "quadrature.hpp"

namespace hypreg {

struct LiftOptions {
  double clearance = 1e-6; // minimum distance to branch points away from the endpoints
  double max_arg = 0.35;   // continuation step bound on |arg h(x)/h(x_k)|
};

// One smooth piece s in [0,1] with its own continuation record.
struct Piece {
  std::function<cplx(double)> x, dx;
  std::vector<double> cs; // checkpoint parameters, increasing
  std::vector<cplx> cy, ch;
  // accurate x - e near branch points e the piece runs into
  std::vector<std::pair<cplx, std::function<cplx(double)>>> near;

  cplx h(const HyperellipticModel &m, double s) const {
    if (near.empty()) return m.h(x(s));
    cplx xs = x(s), v = m.leading();
    for (auto &b : m.branch_points()) {
      cplx d = xs - b.x;
      for (auto &[e, off] : near)
        if (std::abs(e - b.x) < 1e-12) d = off(s);
      v *= d;
    }
    return v;
  }

  static Piece segment(cplx a, cplx b) {
    return {[a, b](double s) { return a + (b - a) * s; }, [a, b](double) { return b - a; }, {}, {}, {}};
  }
  // circular arc around c from angle t0 to t1
  static Piece arc(cplx c, double r, double t0, double t1) {
    return {[=](double s) { return c + r * std::exp(cplx(0, t0 + (t1 - t0) * s)); },
            [=](double s) { return cplx(0, t1 - t0) * r * std::exp(cplx(0, t0 + (t1 - t0) * s)); },
            {}, {}, {}};
  }
  // from a branch point e to b with x - e ~ s^2 (so integrands dx/y stay smooth)
  static Piece from_branch(cplx e, cplx b) {
    return {[e, b](double s) { return e + (b - e) * s * s; },
            [e, b](double s) { return 2.0 * (b - e) * s; },
            {}, {}, {},
            {{e, [e, b](double s) { return (b - e) * s * s; }}}};
  }
  static Piece to_branch(cplx a, cplx e) {
    return {[a, e](double s) { return e + (a - e) * (1 - s) * (1 - s); },
            [a, e](double s) { return -2.0 * (a - e) * (1 - s); },
            {}, {}, {},
            {{e, [a, e](double s) { return (a - e) * (1 - s) * (1 - s); }}}};
  }
  // from a to infinity along the ray through a; 'power' 2 for a ramified infinity
  static Piece to_infinity(cplx a, int power) {
    if (power == 2)
      return {[a](double s) { return a / ((1 - s) * (1 - s)); },
              [a](double s) { return 2.0 * a / ((1 - s) * (1 - s) * (1 - s)); }, {}, {}, {}};
    return {[a](double s) { return a / (1 - s); }, [a](double s) { return a / ((1 - s) * (1 - s)); }, {}, {}, {}};
  }

  Piece reversed() const {
    Piece p;
    auto fx = x;
    auto fd = dx;
    p.x = [fx](double s) { return fx(1 - s); };
    p.dx = [fd](double s) { return -fd(1 - s); };
    for (auto &[e, off] : near) {
      auto o = off;
      p.near.push_back({e, [o](double s) { return o(1 - s); }});
    }
    for (std::size_t k = cs.size(); k-- > 0;) {
      p.cs.push_back(1 - cs[k]);
      p.cy.push_back(cy[k]);
      p.ch.push_back(ch[k]);
    }
    return p;
  }

  cplx y(const HyperellipticModel *m, double s) const {
    if (!m) return 1;
    if (cs.empty()) throw GeometryError("piece has no continuation record");
    auto it = std::upper_bound(cs.begin(), cs.end(), s);
    std::size_t k = it == cs.begin() ? 0 : static_cast<std::size_t>(it - cs.begin() - 1);
    return cy[k] * std::sqrt(h(*m, s) / ch[k]);
  }
};

class LiftedPath {
public:
  LiftedPath() = default;

  // Lifts the concatenation of pieces with y fixed to anchor_y at global parameter
  // anchor_t; a null model gives the rational line with y = 1.
  static LiftedPath lift(const HyperellipticModel *m, std::vector<Piece> pieces, double anchor_t, cplx anchor_y,
                         LiftOptions opt = {}) {
    LiftedPath p;
    p.model_ = m;
    p.pieces_ = std::move(pieces);
    p.opt_ = opt;
    if (p.pieces_.empty()) throw PreconditionError("empty path");
    if (m) p.continue_from(anchor_t, anchor_y);
    return p;
  }
  static LiftedPath lift_sheet(const HyperellipticModel *m, std::vector<Piece> pieces, double anchor_t, int sheet,
                               LiftOptions opt = {}) {
    if (!m) return lift(m, std::move(pieces), anchor_t, 1, opt);
    int n = static_cast<int>(pieces.size());
    int k = std::min(n - 1, static_cast<int>(anchor_t * n));
    cplx y = std::sqrt(pieces[k].h(*m, anchor_t * n - k)) * static_cast<double>(sheet >= 0 ? 1 : -1);
    return lift(m, std::move(pieces), anchor_t, y, opt);
  }

  const HyperellipticModel *model() const { return model_; }
  const std::vector<Piece> &pieces() const { return pieces_; }
  int size() const { return static_cast<int>(pieces_.size()); }

  cplx x(double t) const {
    auto [k, s] = locate(t);
    return pieces_[k].x(s);
  }
  cplx dx(double t) const {
    auto [k, s] = locate(t);
    return pieces_[k].dx(s) * static_cast<double>(size());
  }
  cplx y(double t) const {
    auto [k, s] = locate(t);
    return pieces_[k].y(model_, s);
  }
  cplx start_x() const { return pieces_.front().x(0); }
  cplx end_x() const { return pieces_.back().x(1); }

  // y at the endpoints; zero at branch points, nullopt at infinity
  std::optional<cplx> end_y() const { return endpoint_y(false); }
  std::optional<cplx> start_y() const { return endpoint_y(true); }

  LiftedPath reversed() const {
    LiftedPath p = *this;
    p.pieces_.clear();
    for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) p.pieces_.push_back(it->reversed());
    return p;
  }

  // Defined only when the end of a meets the start of b on the same sheet.
  static LiftedPath concat(const LiftedPath &a, const LiftedPath &b) {
    if (a.model_ != b.model_) throw PreconditionError("concatenating paths on different models");
    cplx xa = a.end_x(), xb = b.start_x();
    if (!(std::abs(xa - xb) <= 1e-9 * std::max(1.0, std::abs(xa))))
      throw PreconditionError("concatenation: endpoints do not match");
    auto ya = a.end_y(), yb = b.start_y();
    if (a.model_ && ya && yb && std::abs(*ya) > 1e-12 && std::abs(*ya - *yb) > 1e-8 * std::abs(*ya))
      throw PreconditionError("concatenation: sheets do not match");
    LiftedPath p = a;
    for (auto &q : b.pieces_) p.pieces_.push_back(q);
    return p;
  }

  bool closed(double tol = 1e-9) const {
    if (std::abs(start_x() - end_x()) > tol * std::max(1.0, std::abs(start_x()))) return false;
    auto a = start_y(), b = end_y();
    if (!model_ || !a || !b) return true;
    return std::abs(*a - *b) <= 1e-8 * std::max(1.0, std::abs(*a));
  }

  // (piece index, local parameter)
  std::pair<int, double> locate(double t) const {
    const int n = size();
    double u = std::clamp(t, 0.0, 1.0) * n;
    int k = std::min(n - 1, static_cast<int>(u));
    return {k, u - k};
  }

  std::size_t checkpoint_count() const {
    std::size_t c = 0;
    for (auto &q : pieces_) c += q.cs.size();
    return c;
  }

private:
  std::optional<cplx> endpoint_y(bool start) const {
    const Piece &q = start ? pieces_.front() : pieces_.back();
    double s = start ? 0.0 : 1.0;
    cplx x = q.x(s);
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return std::nullopt;
    if (!model_) return cplx(1);
    if (std::abs(q.h(*model_, s)) < 1e-20) return cplx(0);
    return q.y(model_, s);
  }

  bool singular_at(const Piece &q, double s) const {
    cplx x = q.x(s);
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return true;
    return std::abs(q.h(*model_, s)) < 1e-24 * std::max(1.0, std::pow(std::abs(x), model_->degree()));
  }

  void check_clearance(const Piece &q, int k, double s) const {
    if (opt_.clearance <= 0) return;
    cplx x = q.x(s);
    if (!std::isfinite(x.real())) return;
    cplx x0 = pieces_.front().x(0), x1 = pieces_.back().x(1);
    for (auto &b : model_->branch_points()) {
      double d = std::abs(x - b.x);
      if (d >= opt_.clearance) continue;
      // approaching a branch point that is itself an endpoint of the path is allowed
      bool endpoint = (std::abs(b.x - x0) < 1e-12 && k == 0) || (std::abs(b.x - x1) < 1e-12 && k == size() - 1);
      if (!endpoint)
        throw GeometryError("path passes within " + std::to_string(d) + " of branch point (" +
                            std::to_string(b.x.real()) + "," + std::to_string(b.x.imag()) + ")");
    }
  }

  void add_checkpoint(Piece &q, double s, cplx y) {
    cplx h = q.h(*model_, s);
    auto it = std::lower_bound(q.cs.begin(), q.cs.end(), s);
    std::size_t i = static_cast<std::size_t>(it - q.cs.begin());
    if (it != q.cs.end() && *it == s) return;
    q.cs.insert(q.cs.begin() + i, s);
    q.cy.insert(q.cy.begin() + i, y);
    q.ch.insert(q.ch.begin() + i, h);
  }

  // continue y inside piece k from s0 (value y0) to s1; returns y(s1) unless singular there
  std::optional<cplx> march(int k, double s0, cplx y0, double s1) {
    Piece &q = pieces_[k];
    add_checkpoint(q, s0, y0);
    check_clearance(q, k, s0);
    const double dir = s1 > s0 ? 1 : -1;
    double s = s0, ds = 1.0 / 64;
    cplx y = y0, h = q.h(*model_, s0);
    const bool end_singular = singular_at(q, s1);
    while (dir * (s1 - s) > 0) {
      double sn = s + dir * std::min(ds, dir * (s1 - s));
      bool at_end = sn == s1;
      bool ok = true;
      for (double f : {0.25, 0.5, 0.75, 1.0}) {
        double sp = s + (sn - s) * f;
        if (at_end && f == 1.0 && end_singular) continue;
        cplx r = q.h(*model_, sp) / h;
        if (!(std::abs(std::arg(r)) < opt_.max_arg)) {
          ok = false;
          break;
        }
      }
      if (!ok) {
        ds *= 0.5;
        if (ds < 1e-13) throw GeometryError("continuation stalled near s=" + std::to_string(s) + " on piece " + std::to_string(k));
        continue;
      }
      if (at_end && end_singular) return std::nullopt;
      cplx hn = q.h(*model_, sn);
      y = y * std::sqrt(hn / h);
      h = hn;
      s = sn;
      add_checkpoint(q, s, y);
      check_clearance(q, k, s);
      ds *= 1.5;
    }
    return y;
  }

  void continue_from(double t, cplx y) {
    auto [k, s] = locate(t);
    if (singular_at(pieces_[k], s)) throw PreconditionError("anchor lies on the branch locus");
    cplx hv = pieces_[k].h(*model_, s);
    if (std::abs(y * y - hv) > 1e-8 * std::max(1.0, std::abs(hv))) throw PreconditionError("anchor y is not on the curve");
    auto fwd = march(k, s, y, 1.0);
    for (int j = k + 1; j < size(); ++j) {
      if (!fwd) throw GeometryError("path passes through a branch point or infinity between pieces");
      fwd = march(j, 0.0, *fwd, 1.0);
    }
    auto bwd = march(k, s, y, 0.0);
    for (int j = k - 1; j >= 0; --j) {
      if (!bwd) throw GeometryError("path passes through a branch point or infinity between pieces");
      bwd = march(j, 1.0, *bwd, 0.0);
    }
  }

  const HyperellipticModel *model_ = nullptr;
  std::vector<Piece> pieces_;
  LiftOptions opt_;
};

// ---------------------------------------------------------------------------
// quadrature along paths

struct PathQuadOptions {
  double tol = 1e-12;
  int max_depth = 42;
  int initial_split = 2;
};

struct PathPanel {
  int piece;
  double s0, s1;
  std::vector<std::vector<cplx>> f; // pulled-back values per form at the nodes
};

// Values of several 1-forms pulled back along the path, on panels refined until the
// trailing Legendre coefficients of every form are below tol (relative to max(1,|f|)).
inline std::vector<PathPanel> adapt_panels(const LiftedPath &p, const std::vector<OneForm> &forms,
                                           const PathQuadOptions &opt, double *err_out = nullptr) {
  const auto &R = quad::panel_rule();
  std::vector<PathPanel> out;
  double err = 0;
  const double n = p.size();
  for (int k = 0; k < p.size(); ++k) {
    const Piece &q = p.pieces()[k];
    struct Item {
      double s0, s1;
      int depth;
    };
    std::vector<Item> stack;
    for (int i = opt.initial_split - 1; i >= 0; --i)
      stack.push_back({double(i) / opt.initial_split, double(i + 1) / opt.initial_split, 0});
    while (!stack.empty()) {
      Item it = stack.back();
      stack.pop_back();
      PathPanel pan{k, it.s0, it.s1, std::vector<std::vector<cplx>>(forms.size(), std::vector<cplx>(R.n))};
      const double hw = 0.5 * (it.s1 - it.s0), c = 0.5 * (it.s1 + it.s0);
      for (int i = 0; i < R.n; ++i) {
        double s = c + hw * R.g.x[i];
        cplx x = q.x(s), dx = q.dx(s) * n, y = q.y(p.model(), s);
        for (std::size_t j = 0; j < forms.size(); ++j) pan.f[j][i] = forms[j](x, y, dx);
      }
      bool ok = true;
      double e = 0;
      for (auto &fv : pan.f) {
        double scale = 1;
        for (auto &v : fv) {
          if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw NumericalError("integrand not finite on path panel [" + std::to_string(it.s0) + "," + std::to_string(it.s1) + "]");
          scale = std::max(scale, std::abs(v));
        }
        double t = R.tail(fv.data());
        e += t * hw / n;
        if (t > opt.tol * scale) ok = false;
      }
      if (ok) {
        err += e;
        out.push_back(std::move(pan));
      } else {
        if (it.depth >= opt.max_depth)
          throw NumericalError("path quadrature did not converge near s=" + std::to_string(c) + " on piece " + std::to_string(k));
        stack.push_back({c, it.s1, it.depth + 1});
        stack.push_back({it.s0, c, it.depth + 1});
      }
    }
  }
  if (err_out) *err_out = err;
  return out;
}

// int_path w1 w2 ... wk over 0 <= t1 <= ... <= tk <= 1 via running integrals.
inline quad::Result iterated_integral(const LiftedPath &p, const std::vector<OneForm> &forms, PathQuadOptions opt = {}) {
  if (forms.empty() || forms.size() > 3) throw PreconditionError("iterated integrals of length 1..3 only");
  quad::Result res;
  double err = 0;
  auto panels = adapt_panels(p, forms, opt, &err);
  const auto &R = quad::panel_rule();
  const double n = p.size();
  std::vector<cplx> acc(forms.size() + 1, 0.0);
  acc[0] = 1;
  std::vector<cplx> prev(R.n), g(R.n), run(R.n);
  for (auto &pan : panels) {
    const double hw = 0.5 * (pan.s1 - pan.s0) / n;
    std::fill(prev.begin(), prev.end(), cplx(1));
    std::vector<cplx> start = acc;
    for (std::size_t j = 0; j < forms.size(); ++j) {
      cplx total = 0;
      for (int i = 0; i < R.n; ++i) {
        g[i] = prev[i] * pan.f[j][i];
        total += R.g.w[i] * g[i];
      }
      for (int i = 0; i < R.n; ++i) {
        cplx s = 0;
        for (int l = 0; l < R.n; ++l) s += R.running[i * R.n + l] * g[l];
        run[i] = start[j + 1] + hw * s;
      }
      acc[j + 1] = start[j + 1] + hw * total;
      prev = run;
    }
    res.evaluations += R.n;
  }
  res.value = acc[forms.size()];
  double mag = 1;
  for (auto &a : acc) mag = std::max(mag, std::abs(a));
  res.error = err * mag;
  return res;
}

inline quad::Result integrate_1form(const LiftedPath &p, const OneForm &w, PathQuadOptions opt = {}) {
  return iterated_integral(p, {w}, opt);
}

// Iterated integrals whose first factor is a function: int F w (t) with F(t) known in
// closed form on the curve (used for log f expressed through dlog f).
inline OneForm dlog_form(std::function<cplx(cplx)> f, std::function<cplx(cplx)> df) {
  return [f, df](cplx x, cplx, cplx dx) { return df(x) / f(x) * dx; };
}
inline OneForm exact_form(std::function<cplx(cplx, cplx)> F_dx, std::function<cplx(cplx, cplx)> F_dy,
                          const HyperellipticModel *m) {
  // dF = F_x dx + F_y dy with dy = h'(x) dx / (2y)
  return [=](cplx x, cplx y, cplx dx) {
    cplx dy = m ? m->dh(x) * dx / (2.0 * y) : cplx(0);
    return F_dx(x, y) * dx + F_dy(x, y) * dy;
  };
}

// ---------------------------------------------------------------------------
// branch-tracked logarithm

class BranchedLog {
public:
  // continuous branch of log f along p starting at start_value (defaults to the
  // principal value at the start)
  BranchedLog(const LiftedPath &p, std::function<cplx(cplx)> f, std::optional<cplx> start_value = std::nullopt,
              double max_step_arg = 0.5)
      : f_(std::move(f)), path_(p) {
    const int n = p.size();
    double t = 0;
    cplx v = f_(p.x(0));
    if (!(std::abs(v) > 0) || !std::isfinite(std::abs(v))) throw NumericalError("log: f vanishes or blows up at the start");
    cplx L = start_value ? *start_value : std::log(v);
    if (std::abs(std::exp(L) - v) > 1e-10 * std::abs(v)) throw PreconditionError("log: start value is not a logarithm of f");
    ts_.push_back(0);
    ls_.push_back(L);
    fs_.push_back(v);
    double dt = 1.0 / (64 * n);
    while (t < 1) {
      double tn = std::min(1.0, t + dt);
      bool ok = true;
      for (double fr : {0.25, 0.5, 0.75, 1.0}) {
        cplx w = f_(p.x(t + (tn - t) * fr));
        if (!(std::abs(w) > 1e-300) || !std::isfinite(std::abs(w))) throw NumericalError("log: f has a zero or pole on the path");
        if (!(std::abs(std::arg(w / v)) < max_step_arg)) {
          ok = false;
          break;
        }
      }
      if (!ok) {
        dt *= 0.5;
        if (dt < 1e-14) throw NumericalError("log: continuation stalled (zero or pole on the path)");
        continue;
      }
      cplx w = f_(p.x(tn));
      L += std::log(w / v);
      v = w;
      t = tn;
      ts_.push_back(t);
      ls_.push_back(L);
      fs_.push_back(v);
      dt *= 1.5;
    }
  }

  cplx at(double t) const {
    auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
    std::size_t k = it == ts_.begin() ? 0 : static_cast<std::size_t>(it - ts_.begin() - 1);
    return ls_[k] + std::log(f_(path_.x(t)) / fs_[k]);
  }
  cplx start() const { return ls_.front(); }
  cplx end() const { return ls_.back(); }
  // total change of arg f along the path divided by 2 pi
  double winding() const { return (ls_.back() - ls_.front()).imag() / (2 * pi); }
  std::size_t steps() const { return ts_.size(); }

private:
  std::function<cplx(cplx)> f_;
  LiftedPath path_;
  std::vector<double> ts_;
  std::vector<cplx> ls_, fs_;
};

// ---------------------------------------------------------------------------
// gamma = f^-1([0, inf]) for f = c (x - a)/(x - b)

struct Mobius {
  cplx c, a, b;
  cplx operator()(cplx x) const { return c * (x - a) / (x - b); }
  cplx derivative(cplx x) const { return c * (a - b) / ((x - b) * (x - b)); }
  cplx inverse(cplx w) const { return (b * w - c * a) / (w - c); }
  cplx inverse_derivative(cplx w) const { return c * (a - b) / ((w - c) * (w - c)); }
};

// Parametrisation of the x-arc: w = (t/(1-t))^2 so both ends are smooth on the curve.
inline Piece gamma_piece(const Mobius &f) {
  return {[f](double t) {
            if (t >= 1) return f.b;
            double u = t / (1 - t);
            return f.inverse(u * u);
          },
          [f](double t) {
            if (t >= 1) return cplx(0);
            double u = t / (1 - t);
            return f.inverse_derivative(u * u) * (2 * t / ((1 - t) * (1 - t) * (1 - t)));
          },
          {}, {}, {},
          {{f.a, [f](double t) {
              if (t >= 1) return f.b - f.a;
              double u = t / (1 - t);
              return u * u * (f.b - f.a) / (u * u - f.c);
            }},
           {f.b, [f](double t) {
              if (t >= 1) return cplx(0);
              double u = t / (1 - t);
              return f.c * (f.b - f.a) / (u * u - f.c);
            }}}};
}

struct TracedPoint {
  double value; // f(x) on the ray
  cplx x;
};

// Predictor-corrector continuation of f(x) = s for s running over (0, inf) on a
// logarithmic grid; independent of the closed-form inverse.
inline std::vector<TracedPoint> trace_level_set(const std::function<cplx(cplx)> &f,
                                                const std::function<cplx(cplx)> &df, cplx zero, int steps = 400,
                                                double smin = 1e-6, double smax = 1e6) {
  std::vector<TracedPoint> out;
  cplx x = zero + smin / df(zero); // first-order start off the simple zero
  double ls0 = std::log(smin), ls1 = std::log(smax);
  cplx xprev = x;
  double sprev = 0;
  for (int k = 0; k <= steps; ++k) {
    double s = std::exp(ls0 + (ls1 - ls0) * k / steps);
    if (k > 0) {
      // predictor: tangent along the level set, ds/dx = f'
      x = xprev + (s - sprev) / df(xprev);
    }
    for (int it = 0; it < 50; ++it) {
      cplx d = (f(x) - s) / df(x);
      x -= d;
      if (std::abs(d) < 1e-15 * std::max(1.0, std::abs(x))) break;
      if (it == 49) throw NumericalError("gamma trace: corrector stalled at f = " + std::to_string(s));
    }
    out.push_back({s, x});
    xprev = x;
    sprev = s;
  }
  return out;
}

struct GammaTrace {
  Mobius f;
  int N = 2;
  std::vector<LiftedPath> components; // sheet +1, then sheet -1
  std::vector<TracedPoint> samples;
  double max_imag_f = 0;   // over traced points, relative to |f|
  double max_deviation = 0; // traced points vs closed-form parametrisation
  bool monotone = true;
};

// f = c (x - a)/(x - b) with a, b branch points, scaled so f(P) = 1.
inline GammaTrace trace_gamma(const HyperellipticModel &m, const Mobius &f, LiftOptions opt = {}) {
  if (m.branch_index(f.a) < 0 || m.branch_index(f.b) < 0)
    throw PreconditionError("trace_gamma: zero and pole of f must be finite branch points");
  if (std::abs(f.a - f.b) < 1e-12) throw PreconditionError("trace_gamma: degenerate f");
  GammaTrace g;
  g.f = f;
  g.N = 2;
  auto F = [f](cplx x) { return f(x); };
  auto dF = [f](cplx x) { return f.derivative(x); };
  g.samples = trace_level_set(F, dF, f.a);
  double prev = -1;
  for (auto &t : g.samples) {
    cplx v = f(t.x);
    g.max_imag_f = std::max(g.max_imag_f, std::abs(v.imag()) / std::max(1.0, std::abs(v)));
    if (!(v.real() > prev)) g.monotone = false;
    prev = v.real();
    double d = std::abs(t.x - f.inverse(t.value));
    g.max_deviation = std::max(g.max_deviation, d);
  }
  if (g.max_deviation > 1e-8) throw NumericalError("gamma trace disagrees with the closed-form arc");
  for (int sheet : {1, -1}) g.components.push_back(LiftedPath::lift_sheet(&m, {gamma_piece(f)}, 0.5, sheet, opt));
  return g;
}

// int int over [0,1]^2 of phi(gamma(t)) psi(gamma(b)) b_s ds dt with
// b = t(1-s)/(1-s(1-t)); the inner integral runs b from t down to 0, so this equals
// -int_gamma psi phi = int_gamma phi psi - int_gamma phi int_gamma psi.
inline quad::Result disc_double_integral(const LiftedPath &gam, const OneForm &phi, const OneForm &psi,
                                         double tol = 1e-9, long max_cells = 400000) {
  auto pull = [&gam](const OneForm &w, double t) { return w(gam.x(t), gam.y(t), gam.dx(t)); };
  quad::CubatureOptions o;
  o.abs_tol = tol;
  o.max_cells = max_cells;
  quad::Cubature cub(o);
  auto F = [&](double s, double t) {
    double den = 1 - s * (1 - t);
    double b = t * (1 - s) / den;
    double bs = -t * t / (den * den);
    return pull(phi, t) * pull(psi, b) * bs;
  };
  std::vector<double> grid = {0, 0.25, 0.5, 0.75, 1};
  return cub.integrate(F, grid, grid);
}

} // namespace hypreg
