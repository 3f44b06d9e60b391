#pragma once

// Divisors, factored functions in x (times a power of y), tame symbols and the
// motivic cycles Z_QR and Z_f on C x C with exact cocycle bookkeeping.

#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "model.hpp"

namespace hypreg {

// Formal integer combination of points. Points are keyed by CurvePoint::key() or by
// a free label (cusps, abstract torsion sets).
struct Divisor {
  std::map<std::string, Int> coef;
  std::map<std::string, CurvePoint> points;

  void add(const std::string &label, const Int &n) {
    if (n == 0) return;
    Int &c = coef[label];
    c += n;
    if (c == 0) coef.erase(label);
  }
  void add(const CurvePoint &p, const Int &n) {
    std::string k = p.key();
    points.emplace(k, p);
    add(k, n);
  }

  Int degree() const {
    Int d = 0;
    for (auto &[k, c] : coef) d += c;
    return d;
  }
  bool is_zero() const { return coef.empty(); }
  Int operator[](const std::string &k) const {
    auto it = coef.find(k);
    return it == coef.end() ? Int(0) : it->second;
  }

  friend Divisor operator+(Divisor a, const Divisor &b) {
    for (auto &[k, c] : b.coef) a.add(k, c);
    for (auto &[k, p] : b.points) a.points.emplace(k, p);
    return a;
  }
  friend Divisor operator*(const Int &n, const Divisor &a) {
    Divisor d;
    d.points = a.points;
    for (auto &[k, c] : a.coef) d.add(k, n * c);
    return d;
  }
  friend Divisor operator-(const Divisor &a, const Divisor &b) { return a + Int(-1) * b; }
  friend bool operator==(const Divisor &a, const Divisor &b) { return a.coef == b.coef; }

  std::string str() const {
    if (coef.empty()) return "0";
    std::string s;
    for (auto &[k, c] : coef) {
      std::string n = c.str();
      if (s.empty())
        s = (c == 1 ? "" : c == -1 ? "-" : n + "*") + k;
      else
        s += (c > 0 ? " + " : " - ") + (abs(c) == 1 ? std::string() : Int(abs(c)).str() + "*") + k;
    }
    return s;
  }
};

// lead * prod (x - a)^e * y^y_power
struct FactoredFunction {
  cplx lead = 1;
  std::vector<std::pair<Rat, int>> factors;
  int y_power = 0;

  static FactoredFunction linear(const Rat &a) { return {1, {{a, 1}}, 0}; }
  static FactoredFunction ratio(const Rat &a, const Rat &b) { return {1, {{a, 1}, {b, -1}}, 0}; }

  friend FactoredFunction operator*(FactoredFunction f, const FactoredFunction &g) {
    f.lead *= g.lead;
    f.factors.insert(f.factors.end(), g.factors.begin(), g.factors.end());
    f.y_power += g.y_power;
    return f;
  }
  FactoredFunction inverse() const {
    if (lead == 0.0) throw StructuralError("the zero function has no inverse");
    FactoredFunction f = *this;
    f.lead = 1.0 / lead;
    for (auto &fa : f.factors) fa.second = -fa.second;
    f.y_power = -y_power;
    return f;
  }
  int x_degree() const {
    int d = 0;
    for (auto &fa : factors) d += fa.second;
    return d;
  }

  cplx operator()(cplx x, cplx y = 1) const {
    cplx v = lead;
    for (auto &[a, e] : factors) v *= std::pow(x - to_double(a), e);
    if (y_power) v *= std::pow(y, y_power);
    return v;
  }
  cplx at(const CurvePoint &p) const {
    if (p.at_infinity) throw PreconditionError("evaluation at infinity is not supported; use local_data");
    return (*this)(p.x, p.y);
  }

  std::string str() const {
    std::string s;
    char buf[64];
    if (lead != 1.0) {
      std::snprintf(buf, sizeof buf, "(%.12g%+.12gi)", lead.real(), lead.imag());
      s = buf;
    }
    for (auto &[a, e] : factors) {
      if (!s.empty()) s += "*";
      s += "(x - " + rat_str(a) + ")";
      if (e != 1) s += "^" + std::to_string(e);
    }
    if (y_power) s += (s.empty() ? "" : "*") + std::string("y") + (y_power != 1 ? "^" + std::to_string(y_power) : "");
    return s.empty() ? "1" : s;
  }
};

// Points of the projective line are represented by CurvePoint with y = 0 and no model.
inline CurvePoint line_point(const Rat &x) {
  CurvePoint p;
  p.x = cplx(to_double(x), 0);
  p.exact_x = x;
  return p;
}
inline CurvePoint line_infinity() {
  CurvePoint p;
  p.at_infinity = true;
  return p;
}
inline std::string line_key(const CurvePoint &p) { return p.at_infinity ? "inf" : rat_str(*p.exact_x); }

// div(f). With m == nullptr the function lives on the projective line.
inline Divisor divisor_of(const HyperellipticModel *m, const FactoredFunction &f) {
  if (f.lead == 0.0) throw StructuralError("degenerate function: identically zero");
  Divisor D;
  std::map<Rat, int> mult;
  for (auto &[a, e] : f.factors) mult[a] += e;
  int dx = 0;
  for (auto &[a, e] : mult) dx += e;
  if (!m) {
    if (f.y_power) throw PreconditionError("y is not a function on the projective line");
    for (auto &[a, e] : mult)
      if (e) D.add(line_key(line_point(a)), e), D.points.emplace(line_key(line_point(a)), line_point(a));
    if (dx) D.add("inf", -dx), D.points.emplace("inf", line_infinity());
    return D;
  }
  const int g = m->genus();
  for (auto &[a, e] : mult) {
    if (!e) continue;
    if (m->h()(a) == 0) {
      D.add(CurvePoint::rational(*m, a, 1), 2 * e);
    } else {
      D.add(CurvePoint::rational(*m, a, 1), e);
      D.add(CurvePoint::rational(*m, a, -1), e);
    }
  }
  if (f.y_power) {
    for (int k = 0; k < m->degree(); ++k) D.add(CurvePoint::weierstrass_point(*m, k), f.y_power);
  }
  if (m->infinity() == InfinityType::Branch) {
    int ord = -2 * dx - (2 * g + 1) * f.y_power;
    D.add(CurvePoint::infinity(*m), ord);
  } else {
    int ord = -dx - (g + 1) * f.y_power;
    D.add(CurvePoint::infinity(*m, 1), ord);
    D.add(CurvePoint::infinity(*m, -1), ord);
  }
  return D;
}

// (order, leading coefficient) of f at p in a fixed local parameter:
// x - x0 at ordinary points, y at finite Weierstrass points, x^g / y at the ramified
// infinity and 1/x at unramified infinities and on the line.
inline std::pair<int, cplx> local_data(const HyperellipticModel *m, const FactoredFunction &f, const CurvePoint &p) {
  if (f.lead == 0.0) throw StructuralError("degenerate function: identically zero");
  int ord = 0;
  cplx c = f.lead;
  auto acc = [&](int o, cplx lc, int e) {
    ord += o * e;
    c *= std::pow(lc, e);
  };
  if (!m) {
    if (f.y_power) throw PreconditionError("y is not a function on the projective line");
    for (auto &[a, e] : f.factors) {
      if (p.at_infinity)
        acc(-1, 1.0, e);
      else if (p.exact_x && *p.exact_x == a)
        acc(1, 1.0, e);
      else
        acc(0, p.x - to_double(a), e);
    }
    return {ord, c};
  }
  const int g = m->genus();
  if (p.at_infinity) {
    cplx lc = m->leading();
    if (m->infinity() == InfinityType::Branch) {
      for (auto &fa : f.factors) acc(-2, 1.0 / lc, fa.second);
      acc(-(2 * g + 1), std::pow(lc, -g), f.y_power);
    } else {
      for (auto &fa : f.factors) acc(-1, 1.0, fa.second);
      acc(-(g + 1), static_cast<double>(p.inf_sign) * std::sqrt(lc), f.y_power);
    }
    return {ord, c};
  }
  if (p.weierstrass) {
    for (auto &[a, e] : f.factors) {
      bool same = p.exact_x ? *p.exact_x == a : std::abs(p.x - to_double(a)) < 1e-12;
      if (same)
        acc(2, 1.0 / m->dh(p.x), e);
      else
        acc(0, p.x - to_double(a), e);
    }
    acc(1, 1.0, f.y_power);
    return {ord, c};
  }
  for (auto &[a, e] : f.factors) {
    bool same = p.exact_x ? *p.exact_x == a : std::abs(p.x - to_double(a)) < 1e-12;
    if (same)
      acc(1, 1.0, e);
    else
      acc(0, p.x - to_double(a), e);
  }
  acc(0, p.y, f.y_power);
  return {ord, c};
}

// (-1)^{mn} f^n / g^m at p, m = ord f, n = ord g
inline cplx tame_symbol(const HyperellipticModel *m, const FactoredFunction &f, const FactoredFunction &g,
                        const CurvePoint &p) {
  auto [a, ca] = local_data(m, f, p);
  auto [b, cb] = local_data(m, g, p);
  cplx v = std::pow(ca, b) / std::pow(cb, a);
  if ((a * b) % 2) v = -v;
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw NumericalError("tame symbol is indeterminate at " + p.key());
  return v;
}

// The symbol at every point of |div f| + |div g|.
inline std::vector<std::pair<std::string, cplx>> tame_symbol_map(const HyperellipticModel *m, const FactoredFunction &f,
                                                                 const FactoredFunction &g) {
  Divisor D = divisor_of(m, f), E = divisor_of(m, g);
  std::map<std::string, CurvePoint> support;
  for (auto &[k, c] : D.coef) support.emplace(k, D.points.at(k));
  for (auto &[k, c] : E.coef) support.emplace(k, E.points.at(k));
  std::vector<std::pair<std::string, cplx>> out;
  for (auto &[k, p] : support) out.emplace_back(k, tame_symbol(m, f, g, p));
  return out;
}

// ---------------------------------------------------------------------------
// cycles on C x C

using PointPair = std::pair<std::string, std::string>;
using SurfaceDivisor = std::map<PointPair, Int>;

inline void add_to(SurfaceDivisor &S, const PointPair &k, const Int &n) {
  if (n == 0) return;
  Int &c = S[k];
  c += n;
  if (c == 0) S.erase(k);
}

enum class CurveTag { CxPoint, PointxC, Diagonal, Generic };

inline std::string tag_name(CurveTag t, const std::string &pt) {
  switch (t) {
  case CurveTag::CxPoint:
    return "C x " + pt;
  case CurveTag::PointxC:
    return pt + " x C";
  case CurveTag::Diagonal:
    return "Delta_C";
  case CurveTag::Generic:
    return "generic";
  }
  return "?";
}

struct CycleComponent {
  CurveTag tag = CurveTag::Diagonal;
  std::string point;                     // the fixed point for C x {p} and {p} x C
  Divisor divisor;                       // divisor of the function on the curve component
  std::optional<FactoredFunction> f;     // when the function is known explicitly
  SurfaceDivisor generic;                // pushed-forward divisor for generic components
  Int multiplicity = 1;
  std::string label;

  SurfaceDivisor pushforward() const {
    SurfaceDivisor S;
    if (tag == CurveTag::Generic) {
      for (auto &[k, c] : generic) add_to(S, k, multiplicity * c);
      return S;
    }
    for (auto &[k, c] : divisor.coef) {
      PointPair pp = tag == CurveTag::CxPoint ? PointPair{k, point} : tag == CurveTag::PointxC ? PointPair{point, k} : PointPair{k, k};
      add_to(S, pp, multiplicity * c);
    }
    return S;
  }
};

struct CycleElement {
  std::vector<CycleComponent> components;
};

struct CocycleReport {
  bool valid = false;
  SurfaceDivisor witness; // sum of the pushed-forward divisors
};

inline CocycleReport cocycle_check(const CycleElement &Z) {
  CocycleReport r;
  for (auto &c : Z.components)
    for (auto &[k, n] : c.pushforward()) add_to(r.witness, k, n);
  r.valid = r.witness.empty();
  return r;
}

inline std::string surface_divisor_str(const SurfaceDivisor &S) {
  if (S.empty()) return "0";
  std::string s;
  for (auto &[k, c] : S) {
    if (!s.empty()) s += c > 0 ? " + " : " - ";
    else if (c < 0) s += "-";
    if (abs(c) != 1) s += Int(abs(c)).str() + "*";
    s += "(" + k.first + ", " + k.second + ")";
  }
  return s;
}

// f_QR = c (x - x_Q)/(x - x_R) for Weierstrass Q, R (either may be the ramified infinity)
inline FactoredFunction simple_weierstrass_function(const HyperellipticModel &m, const CurvePoint &Q, const CurvePoint &R) {
  if (!Q.weierstrass || !R.weierstrass) throw PreconditionError("Q and R must be Weierstrass points");
  auto exact = [](const CurvePoint &p) -> Rat {
    if (!p.exact_x) throw PreconditionError("no simple function found for this pair: " + p.str() + " is not rational");
    return *p.exact_x;
  };
  FactoredFunction f;
  if (!Q.at_infinity) f.factors.push_back({exact(Q), 1});
  if (!R.at_infinity) f.factors.push_back({exact(R), -1});
  (void)m;
  return f;
}

struct ZQR {
  CycleElement cycle;
  FactoredFunction f; // normalized so that f(P) = 1
  int N = 2;
  CurvePoint Q, R, P;
  double normalization_error = 0; // |f(P) - 1|
};

// (C x Q, 1/f) + (Delta_C, f) + (R x C, 1/f)
inline ZQR build_Z_QR(const HyperellipticModel &m, const CurvePoint &Q, const CurvePoint &R, const CurvePoint &P) {
  if (Q.key() == R.key()) throw PreconditionError("Q = R: the cycle is degenerate");
  if (P.at_infinity || P.key() == Q.key() || P.key() == R.key()) throw PreconditionError("P must be a finite point distinct from Q and R");
  ZQR z;
  z.Q = Q;
  z.R = R;
  z.P = P;
  z.f = simple_weierstrass_function(m, Q, R);
  z.f.lead = 1.0 / z.f.at(P);
  z.normalization_error = std::abs(z.f.at(P) - 1.0);
  Divisor D = divisor_of(&m, z.f);
  Int N = D[Q.key()];
  if (N <= 0 || D[R.key()] != -N || D.coef.size() != 2) throw StructuralError("div f is not N(Q - R): " + D.str());
  z.N = static_cast<int>(N);
  FactoredFunction inv = z.f.inverse();
  Divisor Dinv = divisor_of(&m, inv);
  z.cycle.components.push_back({CurveTag::CxPoint, Q.key(), Dinv, inv, {}, 1, "(C x Q, 1/f^Q)"});
  z.cycle.components.push_back({CurveTag::Diagonal, "", D, z.f, {}, 1, "(Delta_C, f)"});
  z.cycle.components.push_back({CurveTag::PointxC, R.key(), Dinv, inv, {}, 1, "(R x C, 1/f^R)"});
  return z;
}

// ---------------------------------------------------------------------------
// simple-function decomposition and Z_f

struct SimplePair {
  std::string Q, R;
  Int m;  // D contributes m (Q - R)
  Int N;  // order: div f_QR = N (Q - R)
  Int e;  // exponent of f_QR in f^k
};

struct Decomposition {
  std::vector<SimplePair> pairs;
  Int k = 1;
};

// Greedy: match the first positive point with the first negative point (key order).
// order(Q, R) is the smallest N with N(Q - R) principal.
inline Decomposition decompose_simple(const Divisor &D, const std::function<Int(const std::string &, const std::string &)> &order) {
  if (D.degree() != 0) throw PreconditionError("decompose_simple needs a degree-0 divisor, got degree " + D.degree().str());
  std::vector<std::pair<std::string, Int>> pos, neg;
  for (auto &[k, c] : D.coef) (c > 0 ? pos : neg).emplace_back(k, abs(c));
  Decomposition dec;
  std::size_t i = 0, j = 0;
  while (i < pos.size() && j < neg.size()) {
    Int m = pos[i].second < neg[j].second ? pos[i].second : neg[j].second;
    Int N = order(pos[i].first, neg[j].first);
    if (N <= 0) throw PreconditionError("order of " + pos[i].first + " - " + neg[j].first + " must be positive");
    dec.pairs.push_back({pos[i].first, neg[j].first, m, N, 0});
    pos[i].second -= m;
    neg[j].second -= m;
    if (pos[i].second == 0) ++i;
    if (neg[j].second == 0) ++j;
  }
  // f^k = prod f_QR^e with e N = k m
  Int k = 1;
  for (auto &p : dec.pairs) {
    Int need = p.N / gcd(p.N, p.m);
    k = k / gcd(k, need) * need;
  }
  dec.k = k;
  for (auto &p : dec.pairs) p.e = k * p.m / p.N;
  return dec;
}

inline Divisor simple_sum(const Decomposition &dec) {
  Divisor S;
  for (auto &p : dec.pairs) {
    S.add(p.Q, p.e * p.N);
    S.add(p.R, -p.e * p.N);
  }
  return S;
}

// k (Delta_C, f) - sum_{pairs} e [ (Q x C, f_QR) + (C x R, f_QR) ]
inline CycleElement build_Z_f(const Divisor &div_f, const Decomposition &dec) {
  Divisor kD = dec.k * div_f;
  if (!(kD == simple_sum(dec)))
    throw StructuralError("decomposition does not match div f: k div f = " + kD.str() + ", simple sum = " + simple_sum(dec).str());
  CycleElement Z;
  CycleComponent diag;
  diag.tag = CurveTag::Diagonal;
  diag.divisor = div_f;
  diag.multiplicity = dec.k;
  diag.label = "(Delta_C, f)";
  Z.components.push_back(diag);
  for (auto &p : dec.pairs) {
    Divisor d;
    d.add(p.Q, p.N);
    d.add(p.R, -p.N);
    CycleComponent a{CurveTag::PointxC, p.Q, d, std::nullopt, {}, -p.e, "(" + p.Q + " x C, f_QR)"};
    CycleComponent b{CurveTag::CxPoint, p.R, d, std::nullopt, {}, -p.e, "(C x " + p.R + ", f_QR)"};
    Z.components.push_back(a);
    Z.components.push_back(b);
  }
  return Z;
}

} // namespace hypreg
