#pragma once

// Dense exact matrices and a Smith normal form that works over Z and over Q.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"

namespace hypreg {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

enum class Ring { Integers, Rationals };

inline const char *ring_name(Ring r) { return r == Ring::Integers ? "Z" : "Q"; }

template <class T> class Mat {
public:
  Mat() = default;
  Mat(std::size_t r, std::size_t c) : r_(r), c_(c), a_(r * c, T(0)) {}

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }
  static Mat from_rows(const std::vector<std::vector<T>> &rows, std::size_t ncols = 0) {
    std::size_t c = rows.empty() ? ncols : rows[0].size();
    Mat m(rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != c) throw StructuralError("ragged matrix rows");
      for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  T &operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  const T &operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

  bool is_zero() const {
    for (auto &x : a_)
      if (x != 0) return false;
    return true;
  }

  Mat transpose() const {
    Mat t(c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Mat col(std::size_t j) const {
    Mat v(r_, 1);
    for (std::size_t i = 0; i < r_; ++i) v(i, 0) = (*this)(i, j);
    return v;
  }
  Mat block(std::size_t i0, std::size_t j0, std::size_t nr, std::size_t nc) const {
    Mat b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(i0 + i, j0 + j);
    return b;
  }
  void set_block(std::size_t i0, std::size_t j0, const Mat &b) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) (*this)(i0 + i, j0 + j) = b(i, j);
  }

  friend Mat operator*(const Mat &x, const Mat &y) {
    if (x.c_ != y.r_) throw StructuralError("matrix product shape mismatch");
    Mat z(x.r_, y.c_);
    for (std::size_t i = 0; i < x.r_; ++i)
      for (std::size_t k = 0; k < x.c_; ++k) {
        const T &xik = x(i, k);
        if (xik == 0) continue;
        for (std::size_t j = 0; j < y.c_; ++j) z(i, j) += xik * y(k, j);
      }
    return z;
  }
  friend Mat operator+(Mat x, const Mat &y) {
    if (x.r_ != y.r_ || x.c_ != y.c_) throw StructuralError("matrix sum shape mismatch");
    for (std::size_t i = 0; i < x.a_.size(); ++i) x.a_[i] += y.a_[i];
    return x;
  }
  friend Mat operator-(Mat x, const Mat &y) {
    if (x.r_ != y.r_ || x.c_ != y.c_) throw StructuralError("matrix difference shape mismatch");
    for (std::size_t i = 0; i < x.a_.size(); ++i) x.a_[i] -= y.a_[i];
    return x;
  }
  friend Mat operator-(Mat x) {
    for (auto &v : x.a_) v = -v;
    return x;
  }
  friend Mat operator*(const T &s, Mat x) {
    for (auto &v : x.a_) v *= s;
    return x;
  }
  friend bool operator==(const Mat &x, const Mat &y) {
    return x.r_ == y.r_ && x.c_ == y.c_ && x.a_ == y.a_;
  }

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < c_; ++k) std::swap((*this)(i, k), (*this)(j, k));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < r_; ++k) std::swap((*this)(k, i), (*this)(k, j));
  }
  // row_i += s * row_j
  void add_row(std::size_t i, std::size_t j, const T &s) {
    if (s == 0) return;
    for (std::size_t k = 0; k < c_; ++k) (*this)(i, k) += s * (*this)(j, k);
  }
  void add_col(std::size_t i, std::size_t j, const T &s) {
    if (s == 0) return;
    for (std::size_t k = 0; k < r_; ++k) (*this)(k, i) += s * (*this)(k, j);
  }
  void scale_row(std::size_t i, const T &s) {
    for (std::size_t k = 0; k < c_; ++k) (*this)(i, k) *= s;
  }
  void scale_col(std::size_t i, const T &s) {
    for (std::size_t k = 0; k < r_; ++k) (*this)(k, i) *= s;
  }

  std::string str() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < r_; ++i) {
      os << (i ? ", [" : "[");
      for (std::size_t j = 0; j < c_; ++j) os << (j ? ", " : "") << (*this)(i, j);
      os << "]";
    }
    os << "]";
    return os.str();
  }

private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<T> a_;
};

template <class T> Mat<T> hstack(const Mat<T> &a, const Mat<T> &b) {
  if (a.rows() != b.rows()) throw StructuralError("hstack row mismatch");
  Mat<T> m(a.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  return m;
}
template <class T> Mat<T> vstack(const Mat<T> &a, const Mat<T> &b) {
  if (a.cols() != b.cols()) throw StructuralError("vstack column mismatch");
  Mat<T> m(a.rows() + b.rows(), a.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), 0, b);
  return m;
}
template <class T> Mat<T> diag_stack(const Mat<T> &a, const Mat<T> &b) {
  Mat<T> m(a.rows() + b.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), a.cols(), b);
  return m;
}

using QMat = Mat<Rat>;

inline bool is_integral(const Rat &x) { return boost::multiprecision::denominator(x) == 1; }
inline bool is_integral(const QMat &m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!is_integral(m(i, j))) return false;
  return true;
}

// Euclidean structure of the scalar ring. Over Q every nonzero element is a unit.
struct RingOps {
  Ring ring;

  Int norm(const Rat &x) const {
    if (ring == Ring::Rationals) return x == 0 ? Int(0) : Int(1);
    Int n = boost::multiprecision::numerator(x);
    return n < 0 ? Int(-n) : n;
  }
  // q with a - q b small (zero over Q)
  Rat quot(const Rat &a, const Rat &b) const {
    if (ring == Ring::Rationals) return a / b;
    Int na = boost::multiprecision::numerator(a), nb = boost::multiprecision::numerator(b);
    Int q = na / nb; // truncation
    Int r = na - q * nb;
    // nearest remainder keeps entries small
    if (2 * abs(r) > abs(nb)) q += ((r < 0) == (nb < 0)) ? 1 : -1;
    return Rat(q);
  }
  bool divides(const Rat &d, const Rat &x) const {
    if (d == 0) return x == 0;
    if (ring == Ring::Rationals) return true;
    Int nd = boost::multiprecision::numerator(d), nx = boost::multiprecision::numerator(x);
    return nx % nd == 0;
  }
  bool is_unit(const Rat &x) const {
    if (ring == Ring::Rationals) return x != 0;
    return x == 1 || x == -1;
  }
  // associate normalisation: positive over Z, 1 over Q
  Rat unit_normaliser(const Rat &x) const {
    if (x == 0) return Rat(1);
    if (ring == Ring::Rationals) return Rat(1) / x;
    return x < 0 ? Rat(-1) : Rat(1);
  }
};

// U A V = D with U, V invertible over the ring and D diagonal with d_0 | d_1 | ...
struct SmithForm {
  QMat U, Uinv, V, Vinv, D;
  std::size_t rank = 0;
  std::vector<Rat> diag() const {
    std::vector<Rat> d;
    for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) d.push_back(D(i, i));
    return d;
  }
};

inline SmithForm smith(const QMat &A, Ring ring) {
  RingOps R{ring};
  const std::size_t m = A.rows(), n = A.cols();
  SmithForm s;
  s.D = A;
  s.U = QMat::identity(m);
  s.Uinv = QMat::identity(m);
  s.V = QMat::identity(n);
  s.Vinv = QMat::identity(n);
  QMat &D = s.D;

  // Elementary operations, mirrored on the transforms and their inverses.
  auto rswap = [&](std::size_t i, std::size_t j) {
    D.swap_rows(i, j);
    s.U.swap_rows(i, j);
    s.Uinv.swap_cols(i, j);
  };
  auto cswap = [&](std::size_t i, std::size_t j) {
    D.swap_cols(i, j);
    s.V.swap_cols(i, j);
    s.Vinv.swap_rows(i, j);
  };
  auto radd = [&](std::size_t i, std::size_t j, const Rat &q) { // row_i += q row_j
    D.add_row(i, j, q);
    s.U.add_row(i, j, q);
    s.Uinv.add_col(j, i, -q);
  };
  auto cadd = [&](std::size_t i, std::size_t j, const Rat &q) { // col_i += q col_j
    D.add_col(i, j, q);
    s.V.add_col(i, j, q);
    s.Vinv.add_row(j, i, -q);
  };
  auto rscale = [&](std::size_t i, const Rat &u) {
    D.scale_row(i, u);
    s.U.scale_row(i, u);
    s.Uinv.scale_col(i, Rat(1) / u);
  };

  std::size_t t = 0;
  while (t < std::min(m, n)) {
    // pivot: smallest nonzero norm in the trailing block
    bool found = false;
    Int best = 0;
    std::size_t pi = t, pj = t;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j)
        if (D(i, j) != 0) {
          Int nv = R.norm(D(i, j));
          if (!found || nv < best) {
            found = true;
            best = nv;
            pi = i;
            pj = j;
            if (best == 1) goto picked;
          }
        }
  picked:
    if (!found) break;
    rswap(t, pi);
    cswap(t, pj);

    for (;;) {
      bool dirty = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (D(i, t) == 0) continue;
        radd(i, t, -R.quot(D(i, t), D(t, t)));
        if (D(i, t) != 0) {
          dirty = true;
          if (R.norm(D(i, t)) < R.norm(D(t, t))) rswap(t, i);
        }
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (D(t, j) == 0) continue;
        cadd(j, t, -R.quot(D(t, j), D(t, t)));
        if (D(t, j) != 0) {
          dirty = true;
          if (R.norm(D(t, j)) < R.norm(D(t, t))) cswap(t, j);
        }
      }
      if (dirty) continue;
      // divisibility of the trailing block by the pivot
      bool fixed = true;
      for (std::size_t i = t + 1; i < m && fixed; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!R.divides(D(t, t), D(i, j))) {
            radd(t, i, Rat(1));
            fixed = false;
            break;
          }
      if (fixed) break;
    }
    rscale(t, R.unit_normaliser(D(t, t)));
    ++t;
  }
  s.rank = t;
  return s;
}

// Column echelon basis of the column span (Hermite normal form over Z, reduced
// echelon form over Q). Zero columns are dropped.
inline QMat hnf_cols(const QMat &A, Ring ring) {
  RingOps R{ring};
  QMat H = A;
  const std::size_t m = H.rows(), n = H.cols();
  std::size_t t = 0;
  for (std::size_t i = 0; i < m && t < n; ++i) {
    for (;;) {
      // smallest nonzero in row i among columns t..
      std::size_t best = n;
      for (std::size_t j = t; j < n; ++j)
        if (H(i, j) != 0 && (best == n || R.norm(H(i, j)) < R.norm(H(i, best)))) best = j;
      if (best == n) break;
      H.swap_cols(t, best);
      bool clean = true;
      for (std::size_t j = t + 1; j < n; ++j) {
        if (H(i, j) == 0) continue;
        H.add_col(j, t, -R.quot(H(i, j), H(i, t)));
        if (H(i, j) != 0) clean = false;
      }
      if (clean) break;
    }
    if (H(i, t) == 0) continue;
    H.scale_col(t, R.unit_normaliser(H(i, t)));
    const Rat &piv = H(i, t);
    for (std::size_t j = 0; j < t; ++j) {
      if (H(i, j) == 0) continue;
      Rat q;
      if (ring == Ring::Rationals) {
        q = H(i, j) / piv;
      } else {
        Int a = boost::multiprecision::numerator(H(i, j)), p = boost::multiprecision::numerator(piv);
        Int f = a / p;
        if (a - f * p < 0) f -= 1;
        q = Rat(f);
      }
      H.add_col(j, t, -q);
    }
    ++t;
  }
  return H.block(0, 0, m, t);
}

// Reduces the columns of v modulo a lattice given in hnf_cols form.
inline QMat reduce_mod(const QMat &H, QMat v, Ring ring) {
  std::size_t row = 0;
  for (std::size_t k = 0; k < H.cols(); ++k) {
    while (row < H.rows() && H(row, k) == 0) ++row;
    if (row == H.rows()) break;
    const Rat &piv = H(row, k);
    for (std::size_t c = 0; c < v.cols(); ++c) {
      if (v(row, c) == 0) continue;
      Rat q;
      if (ring == Ring::Rationals) {
        q = v(row, c) / piv;
      } else {
        Int a = boost::multiprecision::numerator(v(row, c)), p = boost::multiprecision::numerator(piv);
        Int f = a / p;
        if (a - f * p < 0) f -= 1;
        q = Rat(f);
      }
      for (std::size_t i = 0; i < H.rows(); ++i) v(i, c) -= q * H(i, k);
    }
    ++row;
  }
  return v;
}

// Solves A x = b over the ring; empty when no solution exists.
inline std::optional<QMat> solve(const QMat &A, const QMat &b, Ring ring) {
  if (A.rows() != b.rows()) throw StructuralError("solve: row mismatch");
  RingOps R{ring};
  SmithForm s = smith(A, ring);
  QMat c = s.U * b;
  QMat y(A.cols(), b.cols());
  for (std::size_t k = 0; k < b.cols(); ++k) {
    for (std::size_t i = 0; i < A.rows(); ++i) {
      if (i < s.rank) {
        const Rat &d = s.D(i, i);
        if (!R.divides(d, c(i, k))) return std::nullopt;
        y(i, k) = c(i, k) / d;
      } else if (c(i, k) != 0) {
        return std::nullopt;
      }
    }
  }
  return s.V * y;
}

// Generators of {x : A x = 0} over the ring, as columns.
inline QMat kernel(const QMat &A, Ring ring) {
  SmithForm s = smith(A, ring);
  QMat K(A.cols(), A.cols() - s.rank);
  for (std::size_t j = s.rank; j < A.cols(); ++j)
    for (std::size_t i = 0; i < A.cols(); ++i) K(i, j - s.rank) = s.V(i, j);
  return hnf_cols(K, ring);
}

inline bool in_span(const QMat &A, const QMat &b, Ring ring) { return solve(A, b, ring).has_value(); }

inline std::size_t rank_of(const QMat &A) { return smith(A, Ring::Rationals).rank; }

inline QMat to_qmat(const std::vector<std::vector<long long>> &rows, std::size_t ncols = 0) {
  std::vector<std::vector<Rat>> r;
  for (auto &row : rows) {
    std::vector<Rat> rr;
    for (auto v : row) rr.emplace_back(v);
    r.push_back(rr);
  }
  return QMat::from_rows(r, ncols);
}

} // namespace hypreg
