#pragma once

// Univariate polynomials with exact rational coefficients.

#include <string>
#include <vector>

#include "core.hpp"
#include "exact.hpp"

namespace hypreg {

inline double to_double(const Rat &r) { return r.convert_to<double>(); }

// Parses "3", "-7/2", "0.25".
inline Rat parse_rational(const std::string &s) {
  auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      Int n(s.substr(0, slash)), d(s.substr(slash + 1));
      if (d == 0) throw PreconditionError("zero denominator in '" + s + "'");
      return Rat(n, d);
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      Int n(digits.empty() || digits == "-" ? std::string("0") : digits);
      Int d = 1;
      for (std::size_t k = dot + 1; k < s.size(); ++k) d *= 10;
      return Rat(n, d);
    }
    return Rat(Int(s));
  } catch (const std::runtime_error &) {
    throw PreconditionError("not a rational number: '" + s + "'");
  }
}

inline std::string rat_str(const Rat &r) {
  if (boost::multiprecision::denominator(r) == 1) return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

class RatPoly {
public:
  RatPoly() = default;
  explicit RatPoly(std::vector<Rat> c) : c_(std::move(c)) { trim(); } // ascending powers

  static RatPoly monomial(const Rat &a, std::size_t k) {
    std::vector<Rat> c(k + 1, Rat(0));
    c[k] = a;
    return RatPoly(c);
  }
  // product of (x - r)
  static RatPoly from_roots(const std::vector<Rat> &roots) {
    RatPoly p({Rat(1)});
    for (auto &r : roots) p = p * RatPoly({-r, Rat(1)});
    return p;
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rat> &coeffs() const { return c_; }
  Rat coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Rat(0); }
  Rat leading() const { return c_.empty() ? Rat(0) : c_.back(); }

  Rat operator()(const Rat &x) const {
    Rat v = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * x + *it;
    return v;
  }
  cplx operator()(cplx x) const {
    cplx v = 0;
    for (auto it = cd_.rbegin(); it != cd_.rend(); ++it) v = v * x + *it;
    return v;
  }
  const std::vector<cplx> &coeffs_double() const { return cd_; }

  RatPoly derivative() const {
    std::vector<Rat> d;
    for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * Rat(static_cast<long long>(k)));
    return RatPoly(d);
  }

  friend RatPoly operator+(const RatPoly &a, const RatPoly &b) {
    std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()), Rat(0));
    for (std::size_t k = 0; k < a.c_.size(); ++k) c[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) c[k] += b.c_[k];
    return RatPoly(c);
  }
  friend RatPoly operator-(const RatPoly &a, const RatPoly &b) { return a + RatPoly::monomial(Rat(-1), 0) * b; }
  friend RatPoly operator*(const RatPoly &a, const RatPoly &b) {
    if (a.is_zero() || b.is_zero()) return RatPoly();
    std::vector<Rat> c(a.c_.size() + b.c_.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return RatPoly(c);
  }
  friend bool operator==(const RatPoly &a, const RatPoly &b) { return a.c_ == b.c_; }

  // a = q b + r
  static void divmod(const RatPoly &a, const RatPoly &b, RatPoly &q, RatPoly &r) {
    if (b.is_zero()) throw PreconditionError("polynomial division by zero");
    std::vector<Rat> rem = a.c_;
    std::vector<Rat> quo(a.degree() >= b.degree() ? a.degree() - b.degree() + 1 : 0, Rat(0));
    for (int k = a.degree() - b.degree(); k >= 0; --k) {
      Rat f = rem[k + b.degree()] / b.leading();
      quo[k] = f;
      for (int j = 0; j <= b.degree(); ++j) rem[k + j] -= f * b.c_[j];
    }
    q = RatPoly(quo);
    r = RatPoly(rem);
  }

  static RatPoly gcd(RatPoly a, RatPoly b) {
    while (!b.is_zero()) {
      RatPoly q, r;
      divmod(a, b, q, r);
      a = b;
      b = r;
    }
    if (!a.is_zero()) a = RatPoly::monomial(Rat(1) / a.leading(), 0) * a;
    return a;
  }

  bool squarefree() const { return gcd(*this, derivative()).degree() == 0; }

  std::string str() const {
    std::string s;
    for (int k = degree(); k >= 0; --k) {
      if (c_[k] == 0) continue;
      if (!s.empty()) s += " + ";
      s += "(" + rat_str(c_[k]) + ")";
      if (k >= 1) s += "x";
      if (k >= 2) s += "^" + std::to_string(k);
    }
    return s.empty() ? "0" : s;
  }

private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
    cd_.clear();
    for (auto &x : c_) cd_.emplace_back(to_double(x), 0.0);
  }
  std::vector<Rat> c_;
  std::vector<cplx> cd_;
};

} // namespace hypreg
