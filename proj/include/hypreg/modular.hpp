#pragma once

// Exact q-series, the modular units Delta_N on X_0(N) for squarefree N, their cusp
// divisors and the weight-2 Eisenstein series E_N = q d/dq log Delta_N.

#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "core.hpp"
#include "exact.hpp"
#include "poly.hpp"

namespace hypreg {

// sum_k c[k] q^(val + k), known modulo q^prec
struct QSeries {
  int val = 0;
  int prec = 0;
  std::vector<Rat> c;

  QSeries() = default;
  QSeries(int v, int p, std::vector<Rat> coeffs) : val(v), prec(p), c(std::move(coeffs)) { normalize(); }

  static QSeries one(int prec) { return QSeries(0, prec, {Rat(1)}); }
  static QSeries monomial(const Rat &a, int e, int prec) { return QSeries(e, prec, {a}); }

  // coefficient of q^n (0 outside the stored range; throws past the precision)
  Rat operator[](int n) const {
    if (n >= prec) throw PreconditionError("coefficient q^" + std::to_string(n) + " is beyond the precision O(q^" + std::to_string(prec) + ")");
    int k = n - val;
    return k < 0 || k >= static_cast<int>(c.size()) ? Rat(0) : c[k];
  }
  bool is_zero() const { return c.empty(); }
  Rat leading() const { return c.empty() ? Rat(0) : c.front(); }

  void normalize() {
    std::size_t z = 0;
    while (z < c.size() && c[z] == 0) ++z;
    c.erase(c.begin(), c.begin() + z);
    val += static_cast<int>(z);
    if (val + static_cast<int>(c.size()) > prec) c.resize(std::max(0, prec - val));
    while (!c.empty() && c.back() == 0) c.pop_back();
    if (c.empty()) val = prec;
  }

  friend QSeries operator+(const QSeries &a, const QSeries &b) {
    int v = std::min(a.val, b.val), p = std::min(a.prec, b.prec);
    std::vector<Rat> r(std::max(0, p - v));
    for (int n = v; n < p; ++n) {
      int ka = n - a.val, kb = n - b.val;
      if (ka >= 0 && ka < static_cast<int>(a.c.size())) r[n - v] += a.c[ka];
      if (kb >= 0 && kb < static_cast<int>(b.c.size())) r[n - v] += b.c[kb];
    }
    return QSeries(v, p, std::move(r));
  }
  friend QSeries operator*(const Rat &s, QSeries a) {
    for (auto &x : a.c) x *= s;
    a.normalize();
    return a;
  }
  friend QSeries operator-(const QSeries &a, const QSeries &b) { return a + Rat(-1) * b; }

  friend QSeries operator*(const QSeries &a, const QSeries &b) {
    if (a.is_zero() || b.is_zero()) {
      int p = std::min(a.prec + b.val, a.val + b.prec);
      return QSeries(p, p, {});
    }
    int v = a.val + b.val;
    int p = std::min(a.prec + b.val, b.prec + a.val);
    int len = std::max(0, p - v);
    std::vector<Rat> r(len);
    for (int i = 0; i < static_cast<int>(a.c.size()) && i < len; ++i) {
      if (a.c[i] == 0) continue;
      for (int j = 0; j < static_cast<int>(b.c.size()) && i + j < len; ++j) r[i + j] += a.c[i] * b.c[j];
    }
    return QSeries(v, p, std::move(r));
  }

  QSeries inverse() const {
    if (is_zero()) throw StructuralError("series division by zero: no nonzero coefficient below O(q^" + std::to_string(prec) + ")");
    int len = prec - val; // relative precision is preserved
    std::vector<Rat> r(len);
    Rat inv0 = Rat(1) / c[0];
    for (int n = 0; n < len; ++n) {
      Rat s = n == 0 ? Rat(1) : Rat(0);
      for (int k = 1; k <= n && k < static_cast<int>(c.size()); ++k) s -= c[k] * r[n - k];
      r[n] = s * inv0;
    }
    return QSeries(-val, -2 * val + prec, std::move(r));
  }
  friend QSeries operator/(const QSeries &a, const QSeries &b) { return a * b.inverse(); }

  QSeries pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    if (e == 0) return one(prec - val);
    QSeries r, b = *this;
    bool have = false;
    while (e) {
      if (e & 1) r = have ? r * b : b, have = true;
      e >>= 1;
      if (e) b = b * b;
    }
    return r;
  }

  // f(q^k)
  QSeries substitute(int k) const {
    if (k <= 0) throw PreconditionError("substitution exponent must be positive");
    std::vector<Rat> r(c.empty() ? 0 : (c.size() - 1) * k + 1);
    for (std::size_t i = 0; i < c.size(); ++i) r[i * k] = c[i];
    return QSeries(val * k, prec * k, std::move(r));
  }

  // q d/dq
  QSeries theta() const {
    std::vector<Rat> r = c;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] *= val + static_cast<int>(i);
    return QSeries(val, prec, std::move(r));
  }

  QSeries truncate(int p) const {
    QSeries s = *this;
    s.prec = std::min(prec, p);
    s.normalize();
    return s;
  }

  // coefficients of q^from .. q^(to-1)
  std::vector<Rat> coefficients(int from, int to) const {
    std::vector<Rat> out;
    for (int n = from; n < to; ++n) out.push_back((*this)[n]);
    return out;
  }

  friend bool operator==(const QSeries &a, const QSeries &b) {
    int p = std::min(a.prec, b.prec);
    return a.truncate(p).c == b.truncate(p).c && (a.truncate(p).val == b.truncate(p).val);
  }

  std::string str(int terms = 6) const {
    std::string s;
    int shown = 0;
    for (std::size_t i = 0; i < c.size() && shown < terms; ++i) {
      if (c[i] == 0) continue;
      std::string a = rat_str(c[i]);
      int e = val + static_cast<int>(i);
      if (!s.empty()) s += a[0] == '-' ? " - " : " + ";
      else if (a[0] == '-') s += "-";
      if (a[0] == '-') a.erase(0, 1);
      if (e == 0) s += a;
      else s += (a == "1" ? "" : a + "*") + "q" + (e == 1 ? "" : "^" + std::to_string(e));
      ++shown;
    }
    return (s.empty() ? "0" : s) + " + O(q^" + std::to_string(prec) + ")";
  }
};

// ---------------------------------------------------------------------------
// arithmetic helpers

inline std::vector<int> prime_factors(int n) {
  std::vector<int> p;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) {
      p.push_back(d);
      while (n % d == 0) n /= d;
    }
  if (n > 1) p.push_back(n);
  return p;
}

inline bool is_squarefree(int n) {
  if (n < 1) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % (d * d) == 0) return false;
  return true;
}

inline int mobius(int n) {
  if (!is_squarefree(n)) return 0;
  return prime_factors(n).size() % 2 ? -1 : 1;
}

inline std::vector<int> divisors(int n) {
  std::vector<int> d;
  for (int k = 1; k <= n; ++k)
    if (n % k == 0) d.push_back(k);
  return d;
}

inline Int sigma1(int n) {
  Int s = 0;
  for (int d : divisors(n)) s += d;
  return s;
}

inline void require_squarefree(int N) {
  if (!is_squarefree(N)) throw PreconditionError("N = " + std::to_string(N) + " is not squarefree");
}

// ---------------------------------------------------------------------------
// Delta and Delta_N

// Coefficients of prod_m prod_{n >= 1} (1 - q^{m n})^{e_m} modulo q^L, in place on integers.
// Multiplying by (1 - q^k) is a backward sweep, dividing by it a forward sweep.
inline std::vector<Int> eta_product(const std::map<int, int> &exponents, int L) {
  std::vector<Int> a(std::max(L, 0), 0);
  if (L <= 0) return a;
  a[0] = 1;
  for (auto &[m, e] : exponents) {
    if (m <= 0) throw PreconditionError("eta product needs positive scalings");
    for (int k = m; k < L; k += m)
      for (int rep = 0; rep < std::abs(e); ++rep) {
        if (e > 0)
          for (int i = L - 1; i >= k; --i) a[i] -= a[i - k];
        else
          for (int i = k; i < L; ++i) a[i] += a[i - k];
      }
  }
  return a;
}

// q prod_{n >= 1} (1 - q^n)^24, modulo q^M
inline QSeries delta_series(int M) {
  if (M < 1) throw PreconditionError("delta_series needs M >= 1");
  auto a = eta_product({{1, 24}}, M - 1);
  return QSeries(1, M, std::vector<Rat>(a.begin(), a.end()));
}

// sum_{d | N} mu(d) N/d: the order of Delta_N at infinity
inline int delta_N_leading_exponent(int N) {
  require_squarefree(N);
  int s = 0;
  for (int d : divisors(N)) s += mobius(d) * (N / d);
  return s;
}

// prod_{d | N} Delta((N/d) z)^mu(d), modulo q^M. All exponents N/d are integers, so
// Delta_N = q^lead prod_{d | N} prod_n (1 - q^{(N/d) n})^{24 mu(d)} exactly.
inline QSeries delta_N_series(int N, int M) {
  require_squarefree(N);
  if (M < 1) throw PreconditionError("delta_N_series needs M >= 1");
  int lead = delta_N_leading_exponent(N);
  std::map<int, int> ex;
  for (int d : divisors(N)) ex[N / d] += 24 * mobius(d);
  auto a = eta_product(ex, M - lead);
  return QSeries(lead, M, std::vector<Rat>(a.begin(), a.end()));
}


// ---------------------------------------------------------------------------
// cusp divisors on X_0(N); P_d = [1/d], P_N is infinity and P_1 is 0

struct CuspDivisor {
  int N = 1;
  std::map<int, Int> coef; // d | N -> coefficient

  Int degree() const {
    Int s = 0;
    for (auto &[d, c] : coef) s += c;
    return s;
  }
  Int operator[](int d) const {
    auto it = coef.find(d);
    return it == coef.end() ? Int(0) : it->second;
  }
  void add(int d, const Int &n) {
    if (N % d) throw PreconditionError("P_" + std::to_string(d) + " is not a cusp of X_0(" + std::to_string(N) + ")");
    if (n == 0) return;
    Int &c = coef[d];
    c += n;
    if (c == 0) coef.erase(d);
  }
  friend CuspDivisor operator*(const Int &k, CuspDivisor D) {
    for (auto &[d, c] : D.coef) c *= k;
    if (k == 0) D.coef.clear();
    return D;
  }
  friend bool operator==(const CuspDivisor &a, const CuspDivisor &b) { return a.N == b.N && a.coef == b.coef; }

  std::string str() const {
    if (coef.empty()) return "0";
    std::string s;
    for (auto &[d, c] : coef) {
      if (!s.empty()) s += c > 0 ? " + " : " - ";
      else if (c < 0) s += "-";
      if (abs(c) != 1) s += Int(abs(c)).str() + "*";
      s += "P" + std::to_string(d);
    }
    return s;
  }
};

// prod_{p | N} (p - 1) sum_{d | N} mu(N/d) P_d
inline CuspDivisor div_delta_N(int N) {
  require_squarefree(N);
  Int phi = 1;
  for (int p : prime_factors(N)) phi *= p - 1;
  CuspDivisor D;
  D.N = N;
  for (int d : divisors(N)) D.add(d, phi * mobius(N / d));
  return D;
}

// Width of the cusp 1/c of Gamma_0(N): N / gcd(c^2, N), which is N/c for squarefree N.
inline int cusp_width(int N, int c) {
  require_squarefree(N);
  if (N % c) throw PreconditionError("c must divide N");
  return N / std::gcd(c * c, N);
}

// Order of the eta quotient prod_delta eta(delta z)^(24 mu(N/delta)) at the cusp 1/c,
// in the local parameter of that cusp (Ligozat's formula).
inline Rat ligozat_order(int N, int c) {
  require_squarefree(N);
  if (N % c) throw PreconditionError("c must divide N");
  Rat s = 0;
  const int g = std::gcd(c, N / c);
  for (int delta : divisors(N)) {
    int r = 24 * mobius(N / delta);
    int gd = std::gcd(c, delta);
    s += Rat(Int(gd) * gd * r, Int(g) * c * delta);
  }
  return Rat(N, 24) * s;
}

inline CuspDivisor ligozat_divisor(int N) {
  CuspDivisor D;
  D.N = N;
  for (int c : divisors(N)) {
    Rat o = ligozat_order(N, c);
    if (!is_integral(o)) throw StructuralError("non-integral cusp order at 1/" + std::to_string(c));
    D.add(c, boost::multiprecision::numerator(o));
  }
  return D;
}

// Order at the cusp 0 read off a q-series: Delta_N(-1/(N z)) is a constant times
// prod_{e | N} Delta(e z)^mu(e), whose q-order is the order at P_1.
inline int fricke_order_at_zero(int N) {
  require_squarefree(N);
  // each factor of order e costs at most 2e of precision
  const int M = 2 * static_cast<int>(sigma1(N)) + N + 4;
  QSeries s = QSeries::one(M);
  for (int e : divisors(N)) {
    QSeries f = delta_series(M / e + 2).substitute(e).truncate(M);
    s = s * (mobius(e) < 0 ? f.inverse() : f);
  }
  if (s.is_zero()) throw StructuralError("Fricke transform vanished to the working precision");
  return s.val;
}

// ---------------------------------------------------------------------------
// decomposition into simple units

struct LambdaTerm {
  int d;      // d | N/p0; F_d has divisor Lambda_d (P_d - P_{d p0})
  Int lambda;
};

struct LambdaDecomposition {
  int N = 1, p0 = 1;
  Int kappa = 1;
  std::vector<LambdaTerm> terms;
  CuspDivisor lhs, rhs; // kappa div(Delta_N) and sum Lambda_d (P_d - P_{d p0})
  bool verified = false;
};

inline LambdaDecomposition lambda_decomposition(int N, int p0) {
  require_squarefree(N);
  if (p0 < 2 || N % p0 || prime_factors(p0).size() != 1 || prime_factors(p0)[0] != p0)
    throw PreconditionError("p0 = " + std::to_string(p0) + " is not a prime dividing N = " + std::to_string(N));
  LambdaDecomposition r;
  r.N = N;
  r.p0 = p0;
  Int prod = 1;
  for (int p : prime_factors(N)) {
    if (p == p0) continue;
    r.kappa *= p + 1;
    prod *= Int(p) * p - 1;
  }
  r.rhs.N = N;
  for (int d : divisors(N / p0)) {
    Int L = Int(p0 - 1) * mobius(N / d) * prod;
    r.terms.push_back({d, L});
    r.rhs.add(d, L);
    r.rhs.add(d * p0, -L);
  }
  r.lhs = r.kappa * div_delta_N(N);
  r.verified = r.lhs == r.rhs;
  return r;
}

// ---------------------------------------------------------------------------
// Eisenstein series

// 1 - 24 sum sigma_1(n) q^n, modulo q^M
inline QSeries e2_series(int M) {
  std::vector<Rat> c(M);
  c[0] = 1;
  for (int n = 1; n < M; ++n) c[n] = Rat(-24 * sigma1(n));
  return QSeries(0, M, std::move(c));
}

// (q d/dq Delta_N) / Delta_N, i.e. (2 pi i)^-1 d/dz log Delta_N
inline QSeries eisenstein_EN(int N, int M) {
  require_squarefree(N);
  int lead = delta_N_leading_exponent(N);
  QSeries D = delta_N_series(N, M + lead + 1);
  if (D.is_zero() || D.leading() == 0) throw StructuralError("Delta_N series has no leading term");
  return (D.theta() / D).truncate(M);
}

// sum_{d | N} mu(d) (N/d) E_2((N/d) z)
inline QSeries eisenstein_EN_from_E2(int N, int M) {
  require_squarefree(N);
  QSeries s(M, M, {});
  for (int d : divisors(N)) {
    int k = N / d;
    s = s + Rat(mobius(d) * k) * e2_series(M / k + 1).substitute(k).truncate(M);
  }
  return s;
}

} // namespace hypreg
