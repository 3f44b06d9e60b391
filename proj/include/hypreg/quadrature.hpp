#pragma once

// Gauss-Legendre panels with spectral running integrals, and a global adaptive
// tensor cubature on rectangles.

#include <array>
#include <cmath>
#include <functional>
#include <queue>
#include <vector>

#include "core.hpp"

namespace hypreg::quad {

struct GaussRule {
  std::vector<double> x, w; // on [-1, 1]
};

inline GaussRule gauss_legendre(int n) {
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5)), dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1);
      double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1, p1 = z;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1);
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1 - z * z) * dp * dp);
  }
  return r;
}

inline std::vector<double> legendre_values(int nmax, double x) {
  std::vector<double> P(nmax + 2);
  P[0] = 1;
  if (nmax + 1 >= 1) P[1] = x;
  for (int k = 1; k <= nmax; ++k) P[k + 1] = ((2 * k + 1) * x * P[k] - k * P[k - 1]) / (k + 1);
  return P;
}

// Node data for one panel order: forward Legendre transform and the running-integral
// matrix (values of the antiderivative from -1 at every node).
struct PanelRule {
  int n = 0;
  GaussRule g;
  std::vector<double> to_coef; // n x n, row k gives Legendre coefficient k
  std::vector<double> running; // n x n

  explicit PanelRule(int order = 20) : n(order), g(gauss_legendre(order)) {
    to_coef.assign(n * n, 0.0);
    running.assign(n * n, 0.0);
    std::vector<std::vector<double>> P(n);
    for (int i = 0; i < n; ++i) P[i] = legendre_values(n, g.x[i]);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) to_coef[k * n + i] = (2 * k + 1) / 2.0 * g.w[i] * P[i][k];
    // S[i][k] = int_{-1}^{x_i} P_k
    std::vector<double> S(n * n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        S[i * n + k] = k == 0 ? g.x[i] + 1 : (P[i][k + 1] - P[i][k - 1]) / (2 * k + 1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0;
        for (int k = 0; k < n; ++k) s += S[i * n + k] * to_coef[k * n + j];
        running[i * n + j] = s;
      }
  }

  // size of the trailing Legendre coefficients: a resolution measure
  double tail(const cplx *f) const {
    double t = 0;
    for (int k = n - 3; k < n; ++k) {
      cplx c = 0;
      for (int i = 0; i < n; ++i) c += to_coef[k * n + i] * f[i];
      t += std::abs(c);
    }
    return t;
  }
};

inline const PanelRule &panel_rule() {
  static const PanelRule r(20);
  return r;
}

struct Result {
  cplx value = 0;
  double error = 0;
  long evaluations = 0;
};

// ---------------------------------------------------------------------------
// 2-d cubature

struct Rect {
  double u0, u1, v0, v1;
};

struct CubatureOptions {
  double abs_tol = 1e-9;
  long max_cells = 400000;
  int low = 8, high = 12;
};

// Globally adaptive: always splits the cell with the largest local error estimate
// (difference of a low and a high order tensor Gauss rule) into four.
class Cubature {
public:
  using Fn = std::function<cplx(double, double)>;

  explicit Cubature(CubatureOptions o = {}) : opt_(o), lo_(gauss_legendre(o.low)), hi_(gauss_legendre(o.high)) {}

  Result integrate(const Fn &f, const std::vector<double> &ugrid, const std::vector<double> &vgrid) const {
    struct Cell {
      Rect r;
      cplx v;
      double e;
      bool operator<(const Cell &o) const { return e < o.e; }
    };
    std::priority_queue<Cell> heap;
    Result res;
    auto eval = [&](const Rect &r) {
      cplx a = rule(f, r, lo_), b = rule(f, r, hi_);
      res.evaluations += opt_.low * opt_.low + opt_.high * opt_.high;
      return Cell{r, b, std::abs(b - a)};
    };
    cplx total = 0;
    double err = 0;
    for (std::size_t i = 0; i + 1 < ugrid.size(); ++i)
      for (std::size_t j = 0; j + 1 < vgrid.size(); ++j) {
        if (ugrid[i + 1] <= ugrid[i] || vgrid[j + 1] <= vgrid[j]) continue;
        Cell c = eval({ugrid[i], ugrid[i + 1], vgrid[j], vgrid[j + 1]});
        total += c.v;
        err += c.e;
        heap.push(c);
      }
    long cells = static_cast<long>(heap.size());
    while (err > opt_.abs_tol) {
      if (cells > opt_.max_cells) {
        res.value = total;
        res.error = err;
        throw NumericalError("cubature did not converge: error " + std::to_string(err) + " after " +
                             std::to_string(cells) + " cells; worst cell [" + std::to_string(heap.top().r.u0) +
                             "," + std::to_string(heap.top().r.u1) + "]x[" + std::to_string(heap.top().r.v0) + "," +
                             std::to_string(heap.top().r.v1) + "]");
      }
      Cell c = heap.top();
      heap.pop();
      total -= c.v;
      err -= c.e;
      double um = 0.5 * (c.r.u0 + c.r.u1), vm = 0.5 * (c.r.v0 + c.r.v1);
      for (const Rect &r : {Rect{c.r.u0, um, c.r.v0, vm}, Rect{um, c.r.u1, c.r.v0, vm}, Rect{c.r.u0, um, vm, c.r.v1},
                            Rect{um, c.r.u1, vm, c.r.v1}}) {
        Cell d = eval(r);
        total += d.v;
        err += d.e;
        heap.push(d);
      }
      cells += 3;
      if (err < 0) err = 0; // cancellation drift
    }
    // recompute the error sum to remove drift
    double e = 0;
    cplx v = 0;
    while (!heap.empty()) {
      e += heap.top().e;
      v += heap.top().v;
      heap.pop();
    }
    res.value = v;
    res.error = e;
    return res;
  }

private:
  static cplx rule(const Fn &f, const Rect &r, const GaussRule &g) {
    const double hu = 0.5 * (r.u1 - r.u0), hv = 0.5 * (r.v1 - r.v0);
    const double cu = 0.5 * (r.u1 + r.u0), cv = 0.5 * (r.v1 + r.v0);
    cplx s = 0;
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      cplx row = 0;
      for (std::size_t j = 0; j < g.x.size(); ++j) row += g.w[j] * f(cu + hu * g.x[i], cv + hv * g.x[j]);
      s += g.w[i] * row;
    }
    return s * hu * hv;
  }

  CubatureOptions opt_;
  GaussRule lo_, hi_;
};

} // namespace hypreg::quad
