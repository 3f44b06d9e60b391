#pragma once

// Finite mixed Hodge data: lattices with Hodge filtrations, intermediate Jacobians,
// Carlson representatives of separated extensions and equality in J.

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"
#include "exact.hpp"

namespace hypreg {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// orthonormal basis of the column span
inline CMat orth(const CMat &A, double tol = 1e-10) {
  if (A.cols() == 0) return CMat(A.rows(), 0);
  Eigen::JacobiSVD<CMat> svd(A, Eigen::ComputeThinU);
  const auto &s = svd.singularValues();
  double top = s.size() ? s(0) : 0;
  int r = 0;
  while (r < s.size() && s(r) > tol * std::max(1.0, top)) ++r;
  return svd.matrixU().leftCols(r);
}

// orthonormal basis of {x : A x = 0}
inline CMat null_space(const CMat &A, double tol = 1e-10) {
  const int n = static_cast<int>(A.cols());
  if (A.rows() == 0) return CMat::Identity(n, n);
  Eigen::JacobiSVD<CMat> svd(A, Eigen::ComputeFullV);
  const auto &s = svd.singularValues();
  double top = s.size() ? s(0) : 0;
  int r = 0;
  while (r < s.size() && s(r) > tol * std::max(1.0, top)) ++r;
  return svd.matrixV().rightCols(n - r);
}

inline CMat to_cmat(const QMat &m) {
  CMat c(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) c(i, j) = m(i, j).convert_to<double>();
  return c;
}

// A lattice V_Z = L Z^n inside C^n with a weight and a decreasing Hodge filtration.
// F[k] spans F^{pmin + k}; F^p is everything for p <= pmin and 0 past the list.
struct HodgeLattice {
  int rank = 0;
  CMat L;
  std::vector<int> weights; // weights of the graded pieces (one entry for pure lattices)
  int pmin = 0;
  std::vector<CMat> F;
  int twist = 0;

  CMat filtration(int p) const {
    if (p <= pmin) return CMat::Identity(rank, rank);
    int k = p - pmin;
    if (k >= static_cast<int>(F.size())) return CMat(rank, 0);
    return F[k];
  }
  int max_weight() const { return *std::max_element(weights.begin(), weights.end()); }
  int min_weight() const { return *std::min_element(weights.begin(), weights.end()); }
  int pmax() const { return pmin + static_cast<int>(F.size()) - 1; }

  // Z(n)^r: lattice (2 pi i)^n Z, weight -2n, F^{-n} everything and F^{-n+1} = 0
  static HodgeLattice tate(int n, int r = 1) {
    HodgeLattice V;
    V.rank = r;
    V.L = std::pow(two_pi_i, n) * CMat::Identity(r, r);
    V.weights = {-2 * n};
    V.pmin = -n;
    V.F = {CMat::Identity(r, r)};
    V.twist = n;
    return V;
  }
};

// F^0 Hom(B, A) = {phi : phi F^q B in F^q A for all q}, as vectors vec(phi) (column-major a x b)
inline CMat hom_F0(const HodgeLattice &B, const HodgeLattice &A) {
  const int a = A.rank, b = B.rank;
  std::vector<CMat> blocks;
  for (int q = B.pmin; q <= B.pmax(); ++q) {
    CMat FB = B.filtration(q), FA = orth(A.filtration(q));
    if (FB.cols() == 0) continue;
    CMat P = CMat::Identity(a, a) - FA * FA.adjoint();
    // (I - P_FA) phi v = 0  <=>  (v^T kron (I - P_FA)) vec(phi) = 0
    for (int k = 0; k < FB.cols(); ++k) {
      CMat blk(a, a * b);
      for (int j = 0; j < b; ++j) blk.block(0, j * a, a, a) = FB(j, k) * P;
      blocks.push_back(blk);
    }
  }
  int rows = 0;
  for (auto &m : blocks) rows += static_cast<int>(m.rows());
  CMat C(rows, a * b);
  int r = 0;
  for (auto &m : blocks) {
    C.middleRows(r, m.rows()) = m;
    r += static_cast<int>(m.rows());
  }
  return null_space(C);
}

inline HodgeLattice hom(const HodgeLattice &B, const HodgeLattice &A) {
  HodgeLattice V;
  const int a = A.rank, b = B.rank;
  V.rank = a * b;
  V.L.resize(a * b, a * b);
  CMat Binv = B.L.inverse();
  for (int k = 0; k < a; ++k)
    for (int l = 0; l < b; ++l) {
      CMat E = CMat::Zero(a, b);
      E(k, l) = 1;
      CMat phi = A.L * E * Binv;
      V.L.col(l * a + k) = Eigen::Map<CVec>(phi.data(), a * b);
    }
  for (int wa : A.weights)
    for (int wb : B.weights) V.weights.push_back(wa - wb);
  V.pmin = -1;
  V.F = {CMat::Identity(a * b, a * b), hom_F0(B, A)};
  V.twist = A.twist - B.twist;
  return V;
}

// ---------------------------------------------------------------------------
// intermediate Jacobian and its elements

struct JacobianData {
  int dim = 0;   // complex dimension of V_C
  CMat F0;       // orthonormal basis of F^0
  CMat lattice;  // columns generate V_Z
};

inline JacobianData intermediate_jacobian(const HodgeLattice &V) {
  if (V.max_weight() >= 0)
    throw PreconditionError("intermediate Jacobian needs all weights negative (max weight " + std::to_string(V.max_weight()) + ")");
  JacobianData J;
  J.dim = V.rank;
  J.F0 = orth(V.filtration(0));
  J.lattice = V.L;
  return J;
}

struct JacobianElement {
  CVec value;
  JacobianData data;
};

// ---------------------------------------------------------------------------
// lattice reduction

// LLL on the columns of B (real), delta = 0.75.
inline Eigen::MatrixXd lll(Eigen::MatrixXd B, double delta = 0.75) {
  const int n = static_cast<int>(B.cols());
  auto gso = [&](Eigen::MatrixXd &Bs, Eigen::MatrixXd &mu) {
    Bs = B;
    mu = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) {
        double nn = Bs.col(j).squaredNorm();
        mu(i, j) = nn > 0 ? B.col(i).dot(Bs.col(j)) / nn : 0;
        Bs.col(i) -= mu(i, j) * Bs.col(j);
      }
  };
  Eigen::MatrixXd Bs, mu;
  gso(Bs, mu);
  int k = 1, guard = 0;
  while (k < n && ++guard < 100000) {
    for (int j = k - 1; j >= 0; --j) {
      double q = std::round(mu(k, j));
      if (q != 0) {
        B.col(k) -= q * B.col(j);
        gso(Bs, mu);
      }
    }
    if (Bs.col(k).squaredNorm() >= (delta - mu(k, k - 1) * mu(k, k - 1)) * Bs.col(k - 1).squaredNorm()) {
      ++k;
    } else {
      B.col(k).swap(B.col(k - 1));
      gso(Bs, mu);
      k = std::max(k - 1, 1);
    }
  }
  return B;
}

enum class JVerdict { Equal, NotEqual, Indeterminate };

struct JEqualResult {
  JVerdict verdict = JVerdict::Indeterminate;
  double distance = 0;      // distance to the nearest lattice point found, modulo F^0
  double certified_radius = 0; // half the shortest Gram-Schmidt length of the reduced basis
  double margin = 0;        // how far the decision is from flipping
  bool ill_conditioned = false;
  std::vector<double> coords; // lattice coordinates of the offset
  bool equal() const { return verdict == JVerdict::Equal; }
};

// Distance of v to F^0 + lattice: project off F^0, reduce the projected lattice and
// run Babai's nearest plane. Any lattice point closer than certified_radius is found.
inline JEqualResult j_distance(const JacobianData &J, const CVec &v, double tol) {
  const int n = J.dim;
  CMat Q = CMat::Identity(n, n) - J.F0 * J.F0.adjoint();
  CVec d = Q * v;
  const int m = static_cast<int>(J.lattice.cols());
  Eigen::MatrixXd G(2 * n, m);
  for (int k = 0; k < m; ++k) {
    CVec g = Q * J.lattice.col(k);
    G.col(k) << g.real(), g.imag();
  }
  Eigen::VectorXd rd(2 * n);
  rd << d.real(), d.imag();
  JEqualResult r;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(G);
  const auto &s = svd.singularValues();
  r.ill_conditioned = s.size() == 0 || s(s.size() - 1) < 1e-8 * std::max(1.0, s(0));
  Eigen::MatrixXd Bred = lll(G);
  // Gram-Schmidt of the reduced basis
  Eigen::MatrixXd Bs = Bred;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < i; ++j) {
      double nn = Bs.col(j).squaredNorm();
      if (nn > 0) Bs.col(i) -= Bred.col(i).dot(Bs.col(j)) / nn * Bs.col(j);
    }
  double shortest = 1e300;
  for (int i = 0; i < m; ++i) shortest = std::min(shortest, Bs.col(i).norm());
  r.certified_radius = 0.5 * shortest;
  Eigen::VectorXd t = rd, closest = Eigen::VectorXd::Zero(2 * n);
  for (int i = m - 1; i >= 0; --i) {
    double nn = Bs.col(i).squaredNorm();
    if (nn == 0) continue;
    double c = std::round(t.dot(Bs.col(i)) / nn);
    t -= c * Bred.col(i);
    closest += c * Bred.col(i);
  }
  r.distance = (rd - closest).norm();
  Eigen::VectorXd c = G.colPivHouseholderQr().solve(closest);
  r.coords.assign(c.data(), c.data() + c.size());
  if (r.distance <= tol) {
    r.verdict = JVerdict::Equal;
    r.margin = tol - r.distance;
  } else if (tol + 10 * tol < r.certified_radius) {
    r.verdict = JVerdict::NotEqual;
    r.margin = std::min(r.distance - tol, r.certified_radius - tol);
  } else {
    r.verdict = JVerdict::Indeterminate;
  }
  return r;
}

inline JEqualResult j_equal(const JacobianElement &a, const JacobianElement &b, double tol = 1e-9) {
  if (a.value.size() != b.value.size() || a.data.dim != b.data.dim) throw StructuralError("j_equal: different ambient data");
  return j_distance(a.data, a.value - b.value, tol);
}

// ---------------------------------------------------------------------------
// extensions 0 -> A -> H -> B -> 0 (i, pi integer matrices in lattice coordinates)

struct MHSExtension {
  HodgeLattice A, H, B;
  QMat i, p;

  bool separated() const { return B.min_weight() > A.max_weight(); }
};

inline CMat complex_map(const QMat &M, const HodgeLattice &src, const HodgeLattice &dst) {
  return dst.L * to_cmat(M) * src.L.inverse();
}

struct Retraction {
  QMat R;           // particular integral retraction, R i = 1
  QMat kernel_dirs; // generators phi with phi i = 0, as (a*n) x k vec'd matrices
};

inline Retraction integral_retraction(const MHSExtension &E) {
  const std::size_t a = E.A.rank, n = E.H.rank;
  // R i = I  <=>  i^T R^T = I
  auto sol = solve(E.i.transpose(), QMat::identity(a), Ring::Integers);
  if (!sol) throw StructuralError("A is not a direct summand of H: no integral retraction");
  Retraction r;
  r.R = sol->transpose();
  // R + phi p with phi in Hom(B, A) covers all retractions
  (void)n;
  return r;
}

struct FilteredSection {
  CMat s;        // n x b, complex, in H coordinates
  CMat kernel;   // directions (n*b columns) preserving both conditions
  double residual = 0;
};

inline FilteredSection filtered_section(const MHSExtension &E) {
  const int n = E.H.rank, b = E.B.rank;
  CMat P = complex_map(E.p, E.H, E.B);
  // unknown vec(s) (column-major n x b): P s = I and (I - P_FqH) s v = 0 for v in F^q B
  std::vector<std::pair<CMat, CVec>> rows;
  {
    CMat blk = CMat::Zero(b * b, n * b);
    CVec rhs = CVec::Zero(b * b);
    for (int j = 0; j < b; ++j) {
      blk.block(j * b, j * n, b, n) = P;
      rhs(j * b + j) = 1;
    }
    rows.emplace_back(blk, rhs);
  }
  for (int q = std::max(E.B.pmin, E.H.pmin + 1); q <= E.B.pmax(); ++q) {
    CMat FB = E.B.filtration(q), FH = orth(E.H.filtration(q));
    CMat Pq = CMat::Identity(n, n) - FH * FH.adjoint();
    for (int k = 0; k < FB.cols(); ++k) {
      CMat blk = CMat::Zero(n, n * b);
      for (int j = 0; j < b; ++j) blk.block(0, j * n, n, n) = FB(j, k) * Pq;
      rows.emplace_back(blk, CVec::Zero(n));
    }
  }
  int total = 0;
  for (auto &r : rows) total += static_cast<int>(r.first.rows());
  CMat M(total, n * b);
  CVec y(total);
  int off = 0;
  for (auto &r : rows) {
    M.middleRows(off, r.first.rows()) = r.first;
    y.segment(off, r.first.rows()) = r.second;
    off += static_cast<int>(r.first.rows());
  }
  Eigen::CompleteOrthogonalDecomposition<CMat> cod(M);
  CVec x = cod.solve(y);
  FilteredSection fs;
  fs.residual = (M * x - y).norm();
  if (fs.residual > 1e-8) throw StructuralError("no filtered section exists (residual " + std::to_string(fs.residual) + ")");
  fs.s = Eigen::Map<CMat>(x.data(), n, b);
  fs.kernel = null_space(M);
  return fs;
}

// Class of r_Z o s_F in J(Hom(B, A)). Optional integer phi (a x b) changes the retraction
// to R + phi p; optional coefficients move the section inside its solution space.
inline JacobianElement carlson_representative(const MHSExtension &E, const QMat *phi = nullptr,
                                              const CVec *section_shift = nullptr) {
  if (!E.separated()) throw PreconditionError("extension is not separated");
  Retraction rt = integral_retraction(E);
  QMat R = rt.R;
  if (phi) R = R + (*phi) * E.p;
  FilteredSection fs = filtered_section(E);
  CMat s = fs.s;
  if (section_shift) {
    CVec ds = fs.kernel * (*section_shift);
    s += Eigen::Map<CMat>(ds.data(), s.rows(), s.cols());
  }
  CMat r = complex_map(R, E.H, E.A);
  CMat c = r * s;
  JacobianElement j;
  j.value = Eigen::Map<CVec>(c.data(), c.size());
  j.data = intermediate_jacobian(hom(E.B, E.A));
  return j;
}

// ---------------------------------------------------------------------------
// constructions

// basis of Z^n / span(D) for saturated D: returns q (quotient map) and a section
struct LatticeQuotient {
  QMat q, section;
};
inline LatticeQuotient lattice_quotient(const QMat &D) {
  SmithForm s = smith(D, Ring::Integers);
  for (std::size_t k = 0; k < s.rank; ++k)
    if (abs(s.D(k, k)) != 1) throw StructuralError("quotient lattice has torsion");
  const std::size_t n = D.rows(), r = s.rank;
  LatticeQuotient lq;
  lq.q = QMat(n - r, n);
  lq.section = QMat(n, n - r);
  for (std::size_t i = r; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      lq.q(i - r, j) = s.U(i, j);
      lq.section(j, i - r) = s.Uinv(j, i);
    }
  return lq;
}

inline CMat lattice_coords(const HodgeLattice &V, const CMat &X) { return V.L.inverse() * X; }

// F^p of a sublattice-quotient construction: image under (q o K^+) of the given spans
inline HodgeLattice derived_lattice(const std::vector<CMat> &Fspans, int pmin, const QMat &K, const LatticeQuotient &lq,
                                    std::vector<int> weights) {
  HodgeLattice V;
  V.rank = static_cast<int>(lq.q.rows());
  V.L = CMat::Identity(V.rank, V.rank);
  V.weights = std::move(weights);
  V.pmin = pmin;
  CMat Kc = to_cmat(K), qc = to_cmat(lq.q);
  Eigen::CompleteOrthogonalDecomposition<CMat> cod(Kc);
  for (auto &F : Fspans) {
    CMat img = F.cols() ? CMat(qc * cod.solve(F)) : CMat(V.rank, 0);
    V.F.push_back(orth(img));
  }
  return V;
}

// Baer sum: fiber product over B modulo the antidiagonal of A
inline MHSExtension baer_sum(const MHSExtension &E1, const MHSExtension &E2) {
  const std::size_t n1 = E1.H.rank, n2 = E2.H.rank, a = E1.A.rank;
  if (E1.A.rank != E2.A.rank || E1.B.rank != E2.B.rank) throw StructuralError("Baer sum needs equal end terms");
  QMat Pm = hstack(E1.p, -E2.p);
  QMat K = kernel(Pm, Ring::Integers); // (n1+n2) x k
  QMat anti = vstack(E1.i, -E2.i);
  auto d = solve(K, anti, Ring::Integers);
  if (!d) throw StructuralError("antidiagonal is not in the fiber product");
  LatticeQuotient lq = lattice_quotient(*d);
  // filtrations: pairs (x1, x2) in F^p H1 + F^p H2 with p1 x1 = p2 x2
  int pmin = std::min(E1.H.pmin, E2.H.pmin), pmax = std::max(E1.H.pmax(), E2.H.pmax());
  CMat P1 = to_cmat(E1.p), P2 = to_cmat(E2.p);
  std::vector<CMat> spans;
  for (int p = pmin; p <= pmax; ++p) {
    CMat F1 = lattice_coords(E1.H, E1.H.filtration(p)), F2 = lattice_coords(E2.H, E2.H.filtration(p));
    CMat C(P1.rows(), F1.cols() + F2.cols());
    C << P1 * F1, -P2 * F2;
    CMat N = null_space(C);
    CMat X(n1 + n2, N.cols());
    X.topRows(n1) = F1 * N.topRows(F1.cols());
    X.bottomRows(n2) = F2 * N.bottomRows(F2.cols());
    spans.push_back(X);
  }
  MHSExtension E;
  E.A = E1.A;
  E.B = E1.B;
  std::vector<int> w = E1.A.weights;
  w.insert(w.end(), E1.B.weights.begin(), E1.B.weights.end());
  E.H = derived_lattice(spans, pmin, K, lq, w);
  QMat top = vstack(E1.i, QMat(n2, a));
  E.i = lq.q * *solve(K, top, Ring::Integers);
  E.p = hstack(E1.p, QMat(E1.p.rows(), n2)) * K * lq.section;
  return E;
}

// Pushforward along an integral morphism g : A -> A2 of Hodge lattices:
// H2 = (A2 + H) / {(g a, -i a)}
inline MHSExtension pushforward(const MHSExtension &E, const QMat &g, const HodgeLattice &A2) {
  const std::size_t a2 = A2.rank, n = E.H.rank;
  QMat D = vstack(g, -E.i);
  LatticeQuotient lq = lattice_quotient(D);
  QMat K = QMat::identity(a2 + n);
  int pmin = std::min(A2.pmin, E.H.pmin), pmax = std::max(A2.pmax(), E.H.pmax());
  std::vector<CMat> spans;
  for (int p = pmin; p <= pmax; ++p) {
    CMat FA = lattice_coords(A2, A2.filtration(p)), FH = lattice_coords(E.H, E.H.filtration(p));
    CMat X = CMat::Zero(a2 + n, FA.cols() + FH.cols());
    X.block(0, 0, a2, FA.cols()) = FA;
    X.block(a2, FA.cols(), n, FH.cols()) = FH;
    spans.push_back(X);
  }
  MHSExtension out;
  out.A = A2;
  out.B = E.B;
  std::vector<int> w = A2.weights;
  w.insert(w.end(), E.B.weights.begin(), E.B.weights.end());
  out.H = derived_lattice(spans, pmin, K, lq, w);
  out.i = lq.q * vstack(QMat::identity(a2), QMat(n, a2));
  out.p = hstack(QMat(E.p.rows(), a2), E.p) * lq.section;
  return out;
}

} // namespace hypreg

#include <random>

namespace hypreg::hodge_gen {

using Rng = std::mt19937_64;

inline long long uniform(Rng &rng, long long lo, long long hi) {
  return std::uniform_int_distribution<long long>(lo, hi)(rng);
}
inline double uniform_real(Rng &rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline CMat random_cmat(Rng &rng, int r, int c) {
  CMat M(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) M(i, j) = cplx(uniform_real(rng, -1, 1), uniform_real(rng, -1, 1));
  return M;
}

inline QMat random_unimodular(Rng &rng, int n) {
  QMat G = QMat::identity(n);
  for (int k = 0; k < 3 * n; ++k) {
    int i = static_cast<int>(uniform(rng, 0, n - 1)), j = static_cast<int>(uniform(rng, 0, n - 1));
    if (i == j) continue;
    Rat c(uniform(rng, -2, 2));
    for (int r = 0; r < n; ++r) G(r, i) += c * G(r, j);
  }
  return G;
}

// Weight -1 lattice Z^2m with F^0 spanned by the columns of [tau; I], tau symmetric, Im tau > 0.
inline HodgeLattice random_weight_minus_one(Rng &rng, int m) {
  HodgeLattice A;
  A.rank = 2 * m;
  A.L = CMat::Identity(2 * m, 2 * m);
  A.weights = {-1};
  A.pmin = -1;
  CMat tau(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= i; ++j) {
      cplx z(uniform_real(rng, -1, 1), i == j ? 1.0 + uniform_real(rng, 0, 1) : 0.2 * uniform_real(rng, -1, 1));
      tau(i, j) = tau(j, i) = z;
    }
  CMat W(2 * m, m);
  W.topRows(m) = tau;
  W.bottomRows(m) = CMat::Identity(m, m);
  A.F = {CMat::Identity(2 * m, 2 * m), W};
  return A;
}

struct ExtensionSample {
  MHSExtension E;
  CMat u; // extension datum in lattice coordinates; the class is L_A u L_B^-1
};

// H = A + B as lattices with F^p H = F^p A + graph(u) over F^p B, then a random
// unimodular change of lattice basis of H.
inline ExtensionSample random_extension(Rng &rng, const HodgeLattice &A, const HodgeLattice &B, const CMat &u) {
  const int a = A.rank, b = B.rank, n = a + b;
  QMat G = random_unimodular(rng, n);
  QMat Gi = *solve(G, QMat::identity(n), Ring::Integers);
  MHSExtension E;
  E.A = A;
  E.B = B;
  E.i = Gi * vstack(QMat::identity(a), QMat(b, a));
  E.p = hstack(QMat(b, a), QMat::identity(b)) * G;
  E.H.rank = n;
  E.H.L = CMat::Identity(n, n);
  E.H.weights = {A.weights[0], B.weights[0]};
  E.H.pmin = std::min(A.pmin, B.pmin);
  const int pmax = std::max(A.pmax(), B.pmax());
  CMat Gic = to_cmat(Gi);
  for (int p = E.H.pmin; p <= pmax; ++p) {
    CMat FA = A.L.inverse() * A.filtration(p), FB = B.L.inverse() * B.filtration(p);
    CMat X = CMat::Zero(n, FA.cols() + FB.cols());
    X.block(0, 0, a, FA.cols()) = FA;
    X.block(0, FA.cols(), a, FB.cols()) = u * FB;
    X.block(a, FA.cols(), b, FB.cols()) = FB;
    E.H.F.push_back(orth(Gic * X));
  }
  return {E, u};
}

inline JacobianElement expected_class(const ExtensionSample &s, const JacobianData &J) {
  CMat c = s.E.A.L * s.u * s.E.B.L.inverse();
  return {Eigen::Map<CVec>(c.data(), c.size()), J};
}

} // namespace hypreg::hodge_gen
