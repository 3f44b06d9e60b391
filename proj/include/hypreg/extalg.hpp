#pragma once

// Short exact sequences of finitely generated abelian groups and of Q-vector
// spaces: exactness, Baer sums, push/pull, congruence and Rabi's generalised
// Baer difference.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "exact.hpp"

namespace hypreg::extalg {

// Z^n / (column span of rel), or Q^n / span when ring is Rationals.
struct FGModule {
  Ring ring = Ring::Integers;
  std::size_t ngens = 0;
  QMat rel; // ngens x nrel

  FGModule() = default;
  FGModule(Ring r, std::size_t n, const QMat &relations) : ring(r), ngens(n) {
    if (relations.rows() != ngens) throw StructuralError("presentation rows must equal generator count");
    if (ring == Ring::Integers && !is_integral(relations)) throw StructuralError("integer presentation has fractions");
    rel = hnf_cols(relations, ring);
  }
  static FGModule free(Ring r, std::size_t n) { return FGModule(r, n, QMat(n, 0)); }
  // Z/d1 + Z/d2 + ... ; d = 0 gives a free summand
  static FGModule cyclic_sum(const std::vector<long long> &d) {
    QMat R(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) R(i, i) = d[i];
    return FGModule(Ring::Integers, d.size(), R);
  }

  bool is_zero(const QMat &v) const { return in_span(rel, v, ring); }
  bool equal(const QMat &v, const QMat &w) const { return is_zero(v - w); }

  // nontrivial elementary divisors (0 for free summands), e.g. {2, 4, 0}
  std::vector<Rat> invariants() const {
    RingOps R{ring};
    SmithForm s = smith(rel, ring);
    std::vector<Rat> out;
    for (std::size_t i = 0; i < ngens; ++i) {
      Rat d = i < s.rank ? s.D(i, i) : Rat(0);
      if (!R.is_unit(d)) out.push_back(d);
    }
    return out;
  }
  // order of a finite group, 0 if infinite
  Int order() const {
    Int o = 1;
    for (auto &d : invariants()) {
      if (d == 0) return 0;
      o *= boost::multiprecision::numerator(d);
    }
    return o;
  }
  std::string describe() const {
    std::string s;
    auto inv = invariants();
    if (inv.empty()) return "0";
    for (std::size_t i = 0; i < inv.size(); ++i) {
      if (i) s += " + ";
      if (inv[i] == 0)
        s += ring_name(ring);
      else
        s += "Z/" + boost::multiprecision::numerator(inv[i]).str();
    }
    return s;
  }
};

inline bool same_presentation(const FGModule &a, const FGModule &b) {
  return a.ring == b.ring && a.ngens == b.ngens && a.rel == b.rel;
}

struct ModuleMap {
  FGModule source, target;
  QMat m; // target.ngens x source.ngens

  ModuleMap() = default;
  ModuleMap(FGModule s, FGModule t, const QMat &mat) : source(std::move(s)), target(std::move(t)) {
    if (source.ring != target.ring) throw StructuralError("map between different rings");
    if (mat.rows() != target.ngens || mat.cols() != source.ngens) throw StructuralError("map matrix shape mismatch");
    if (source.ring == Ring::Integers && !is_integral(mat)) throw StructuralError("integer map has fractions");
    m = reduce_mod(target.rel, mat, target.ring);
    if (!well_defined()) throw StructuralError("map does not respect relations");
  }
  bool well_defined() const { return in_span(target.rel, m * source.rel, target.ring); }
  static ModuleMap identity(const FGModule &M) { return ModuleMap(M, M, QMat::identity(M.ngens)); }
  static ModuleMap zero(const FGModule &s, const FGModule &t) { return ModuleMap(s, t, QMat(t.ngens, s.ngens)); }
};

inline ModuleMap compose(const ModuleMap &g, const ModuleMap &f) {
  if (!same_presentation(f.target, g.source)) throw StructuralError("compose: middle modules differ");
  return ModuleMap(f.source, g.target, g.m * f.m);
}

// Two maps agree as homomorphisms.
inline bool maps_equal(const ModuleMap &f, const ModuleMap &g) {
  return in_span(f.target.rel, f.m - g.m, f.target.ring);
}

struct ExactnessReport {
  bool injective = false, surjective = false, middle = false;
  std::vector<QMat> kernel_witnesses;    // nonzero kernel elements of inject
  std::vector<QMat> cokernel_witnesses;  // generators of right not hit
  std::vector<QMat> middle_witnesses;    // in ker(project) but not in im(inject), or vice versa
  bool ok() const { return injective && surjective && middle; }
};

struct ShortExactSequence {
  FGModule left, mid, right;
  ModuleMap inject, project;
};

inline void check_shapes(const ShortExactSequence &E) {
  if (!same_presentation(E.inject.source, E.left) || !same_presentation(E.inject.target, E.mid) ||
      !same_presentation(E.project.source, E.mid) || !same_presentation(E.project.target, E.right))
    throw StructuralError("sequence maps do not match its terms");
}

inline ExactnessReport verify_exact(const ShortExactSequence &E) {
  check_shapes(E);
  const Ring ring = E.mid.ring;
  ExactnessReport r;
  const QMat &I = E.inject.m, &P = E.project.m;
  const std::size_t na = E.left.ngens, nb = E.mid.ngens, nc = E.right.ngens;

  // injectivity: a with I a in rel_B must already be zero in A
  {
    QMat K = kernel(hstack(I, -E.mid.rel), ring);
    r.injective = true;
    for (std::size_t j = 0; j < K.cols(); ++j) {
      QMat a = K.block(0, j, na, 1);
      if (!E.left.is_zero(a)) {
        r.injective = false;
        r.kernel_witnesses.push_back(a);
      }
    }
  }
  // surjectivity
  {
    QMat PR = hstack(P, E.right.rel);
    r.surjective = true;
    for (std::size_t j = 0; j < nc; ++j) {
      QMat e(nc, 1);
      e(j, 0) = 1;
      if (!in_span(PR, e, ring)) {
        r.surjective = false;
        r.cokernel_witnesses.push_back(e);
      }
    }
  }
  // image(inject) == kernel(project)
  {
    r.middle = true;
    QMat PI = P * I;
    for (std::size_t j = 0; j < na; ++j)
      if (!E.right.is_zero(PI.col(j))) {
        r.middle = false;
        r.middle_witnesses.push_back(I.col(j));
      }
    QMat K = kernel(hstack(P, -E.right.rel), ring);
    QMat IR = hstack(I, E.mid.rel);
    for (std::size_t j = 0; j < K.cols(); ++j) {
      QMat b = K.block(0, j, nb, 1);
      if (!in_span(IR, b, ring)) {
        r.middle = false;
        r.middle_witnesses.push_back(b);
      }
    }
  }
  return r;
}

inline ShortExactSequence make_sequence(const FGModule &A, const FGModule &B, const FGModule &C, const QMat &i,
                                        const QMat &p) {
  ShortExactSequence E{A, B, C, ModuleMap(A, B, i), ModuleMap(B, C, p)};
  return E;
}

inline ShortExactSequence make_exact(const FGModule &A, const FGModule &B, const FGModule &C, const QMat &i,
                                     const QMat &p) {
  auto E = make_sequence(A, B, C, i, p);
  auto rep = verify_exact(E);
  if (!rep.ok()) throw StructuralError("sequence is not exact");
  return E;
}

// ---------------------------------------------------------------------------
// submodules and presentations

// The submodule of M generated by the columns of G, presented on those columns.
struct SubPresentation {
  FGModule module;
  QMat gens; // M.ngens x k
  FGModule ambient;

  // coordinates (in the sub generators) of an element of M lying in the submodule
  QMat coords(const QMat &v) const {
    auto x = solve(hstack(gens, ambient.rel), v, ambient.ring);
    if (!x) throw StructuralError("element not in submodule");
    return x->block(0, 0, gens.cols(), v.cols());
  }
};

inline SubPresentation sub_presentation(const FGModule &M, const QMat &G) {
  QMat K = kernel(hstack(G, -M.rel), M.ring);
  QMat rel = K.block(0, 0, G.cols(), K.cols());
  return SubPresentation{FGModule(M.ring, G.cols(), rel), G, M};
}

// {v in M : F v = 0 in N}, generated by a kernel lattice.
inline SubPresentation kernel_submodule(const ModuleMap &F) {
  const auto &M = F.source;
  QMat K = kernel(hstack(F.m, -F.target.rel), M.ring);
  QMat G = K.block(0, 0, M.ngens, K.cols());
  return sub_presentation(M, G);
}

inline FGModule quotient(const FGModule &M, const QMat &extra) {
  return FGModule(M.ring, M.ngens, hstack(M.rel, extra));
}

inline FGModule direct_sum(const FGModule &a, const FGModule &b) {
  if (a.ring != b.ring) throw StructuralError("direct sum of different rings");
  return FGModule(a.ring, a.ngens + b.ngens, diag_stack(a.rel, b.rel));
}

// Re-present M on its elementary divisors. to_new maps old coordinates to new ones,
// to_old sends new generators to old elements.
struct Simplified {
  FGModule module;
  QMat to_new, to_old;
};

inline Simplified simplify(const FGModule &M) {
  RingOps R{M.ring};
  SmithForm s = smith(M.rel, M.ring);
  std::vector<std::size_t> keep;
  std::vector<Rat> d;
  for (std::size_t i = 0; i < M.ngens; ++i) {
    Rat di = i < s.rank ? s.D(i, i) : Rat(0);
    if (!R.is_unit(di)) {
      keep.push_back(i);
      d.push_back(di);
    }
  }
  QMat rel(keep.size(), 0);
  std::size_t ntors = 0;
  for (auto &x : d)
    if (x != 0) ++ntors;
  rel = QMat(keep.size(), ntors);
  std::size_t c = 0;
  for (std::size_t k = 0; k < keep.size(); ++k)
    if (d[k] != 0) rel(k, c++) = d[k];
  QMat to_new(keep.size(), M.ngens), to_old(M.ngens, keep.size());
  for (std::size_t k = 0; k < keep.size(); ++k) {
    for (std::size_t j = 0; j < M.ngens; ++j) to_new(k, j) = s.U(keep[k], j);
    for (std::size_t i = 0; i < M.ngens; ++i) to_old(i, k) = s.Uinv(i, keep[k]);
  }
  return Simplified{FGModule(M.ring, keep.size(), rel), to_new, to_old};
}

// Reduce the rows of a map matrix modulo a diagonal target presentation.
inline QMat reduce_rows(const FGModule &target, QMat m) {
  if (target.ring != Ring::Integers) return m;
  for (std::size_t c = 0; c < target.rel.cols(); ++c) {
    std::size_t row = target.ngens, nz = 0;
    for (std::size_t i = 0; i < target.ngens; ++i)
      if (target.rel(i, c) != 0) {
        row = i;
        ++nz;
      }
    if (nz != 1) continue;
    Int d = abs(boost::multiprecision::numerator(target.rel(row, c)));
    for (std::size_t j = 0; j < m.cols(); ++j) {
      Int v = boost::multiprecision::numerator(m(row, j)) % d;
      if (v < 0) v += d;
      m(row, j) = Rat(v);
    }
  }
  return m;
}

// Replace the middle term by its simplified presentation.
inline ShortExactSequence simplify_middle(const ShortExactSequence &E) {
  Simplified s = simplify(E.mid);
  return make_sequence(E.left, s.module, E.right, reduce_rows(s.module, s.to_new * E.inject.m),
                       reduce_rows(E.right, E.project.m * s.to_old));
}

// ---------------------------------------------------------------------------
// Baer calculus

inline void require_same_ends(const ShortExactSequence &E1, const ShortExactSequence &E2) {
  if (!same_presentation(E1.left, E2.left) || !same_presentation(E1.right, E2.right))
    throw StructuralError("extensions have different end terms");
}

// H/D with H = {(b1,b2): p1 b1 = sign_p * p2 b2} and D = {(i1 a, i2 a)}.
inline ShortExactSequence baer_combine(const ShortExactSequence &E1, const ShortExactSequence &E2, int sign_p) {
  require_same_ends(E1, E2);
  const FGModule &A = E1.left, &C = E1.right;
  FGModule B12 = direct_sum(E1.mid, E2.mid);
  QMat psi = hstack(E1.project.m, Rat(-sign_p) * E2.project.m);
  SubPresentation H = kernel_submodule(ModuleMap(B12, C, psi));
  QMat diagA = vstack(E1.inject.m, E2.inject.m);
  QMat Dc = H.coords(diagA);
  FGModule Bq = quotient(H.module, Dc);
  QMat i = H.coords(vstack(E1.inject.m, QMat(E2.mid.ngens, A.ngens)));
  QMat p = hstack(E1.project.m, QMat(C.ngens, E2.mid.ngens)) * H.gens;
  return simplify_middle(make_sequence(A, Bq, C, i, p));
}

inline ShortExactSequence baer_difference(const ShortExactSequence &E1, const ShortExactSequence &E2) {
  return baer_combine(E1, E2, +1);
}
// sum: p2 negated
inline ShortExactSequence baer_sum(const ShortExactSequence &E1, const ShortExactSequence &E2) {
  return baer_combine(E1, E2, -1);
}

inline ShortExactSequence negate(const ShortExactSequence &E) {
  return make_sequence(E.left, E.mid, E.right, -E.inject.m, E.project.m);
}

inline ShortExactSequence split_sequence(const FGModule &A, const FGModule &C) {
  FGModule B = direct_sum(A, C);
  QMat i = vstack(QMat::identity(A.ngens), QMat(C.ngens, A.ngens));
  QMat p = hstack(QMat(C.ngens, A.ngens), QMat::identity(C.ngens));
  return make_sequence(A, B, C, i, p);
}

// Pushout along g : A -> A'.
inline ShortExactSequence pushforward(const ShortExactSequence &E, const ModuleMap &g) {
  if (!same_presentation(g.source, E.left)) throw StructuralError("pushforward: map source is not the left term");
  const FGModule &A2 = g.target;
  FGModule S = direct_sum(A2, E.mid);
  QMat glue = vstack(g.m, -E.inject.m);
  FGModule B = quotient(S, glue);
  QMat i = vstack(QMat::identity(A2.ngens), QMat(E.mid.ngens, A2.ngens));
  QMat p = hstack(QMat(E.right.ngens, A2.ngens), E.project.m);
  return simplify_middle(make_sequence(A2, B, E.right, i, p));
}

// Pullback along g : C' -> C.
inline ShortExactSequence pullback(const ShortExactSequence &E, const ModuleMap &g) {
  if (!same_presentation(g.target, E.right)) throw StructuralError("pullback: map target is not the right term");
  const FGModule &C2 = g.source;
  FGModule S = direct_sum(E.mid, C2);
  SubPresentation H = kernel_submodule(ModuleMap(S, E.right, hstack(E.project.m, -g.m)));
  QMat i = H.coords(vstack(E.inject.m, QMat(C2.ngens, E.left.ngens)));
  QMat p = hstack(QMat(C2.ngens, E.mid.ngens), QMat::identity(C2.ngens)) * H.gens;
  return simplify_middle(make_sequence(E.left, H.module, C2, i, p));
}

// ---------------------------------------------------------------------------
// linear systems in matrix unknowns

// Accumulates equations  sum_k L_k X_k R_k = T  in unknown matrices X_k.
class MatrixSystem {
public:
  explicit MatrixSystem(Ring r) : ring_(r) {}
  std::size_t unknown(std::size_t rows, std::size_t cols) {
    blocks_.push_back({rows, cols, nvars_});
    nvars_ += rows * cols;
    return blocks_.size() - 1;
  }
  struct Term {
    std::size_t var;
    QMat L, R;
  };
  void equation(const std::vector<Term> &terms, const QMat &T) { eqs_.push_back({terms, T}); }

  std::optional<std::vector<QMat>> solve_system() const {
    std::size_t neq = 0;
    for (auto &e : eqs_) neq += e.T.rows() * e.T.cols();
    QMat A(neq, nvars_), b(neq, 1);
    std::size_t row = 0;
    for (auto &e : eqs_) {
      const std::size_t p = e.T.rows(), q = e.T.cols();
      for (auto &t : e.terms) {
        const auto &bl = blocks_[t.var];
        // (L X R)_{ij} = sum_{a,c} L_{ia} X_{ac} R_{cj}
        for (std::size_t i = 0; i < p; ++i)
          for (std::size_t a = 0; a < bl.rows; ++a) {
            if (t.L(i, a) == 0) continue;
            for (std::size_t c = 0; c < bl.cols; ++c)
              for (std::size_t j = 0; j < q; ++j) {
                if (t.R(c, j) == 0) continue;
                A(row + i * q + j, bl.offset + a * bl.cols + c) += t.L(i, a) * t.R(c, j);
              }
          }
      }
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < q; ++j) b(row + i * q + j, 0) = e.T(i, j);
      row += p * q;
    }
    auto x = solve(A, b, ring_);
    if (!x) return std::nullopt;
    std::vector<QMat> out;
    for (auto &bl : blocks_) {
      QMat X(bl.rows, bl.cols);
      for (std::size_t a = 0; a < bl.rows; ++a)
        for (std::size_t c = 0; c < bl.cols; ++c) X(a, c) = (*x)(bl.offset + a * bl.cols + c, 0);
      out.push_back(X);
    }
    return out;
  }

private:
  struct Block {
    std::size_t rows, cols, offset;
  };
  Ring ring_;
  std::size_t nvars_ = 0;
  std::vector<Block> blocks_;
  struct Eq {
    std::vector<Term> terms;
    QMat T;
  };
  std::vector<Eq> eqs_;
};

// A retraction r : mid -> left with r o inject = id, if one exists.
inline std::optional<ModuleMap> is_split(const ShortExactSequence &E) {
  const FGModule &A = E.left, &B = E.mid;
  MatrixSystem sys(A.ring);
  auto r = sys.unknown(A.ngens, B.ngens);
  auto S = sys.unknown(A.rel.cols(), B.rel.cols());
  auto T = sys.unknown(A.rel.cols(), A.ngens);
  // r rel_B = rel_A S
  sys.equation({{r, QMat::identity(A.ngens), B.rel}, {S, -A.rel, QMat::identity(B.rel.cols())}},
               QMat(A.ngens, B.rel.cols()));
  // r i - rel_A T = I
  sys.equation({{r, QMat::identity(A.ngens), E.inject.m}, {T, -A.rel, QMat::identity(A.ngens)}},
               QMat::identity(A.ngens));
  auto sol = sys.solve_system();
  if (!sol) return std::nullopt;
  return ModuleMap(B, A, (*sol)[0]);
}

// Middle map phi : E1.mid -> E2.mid with phi i1 = i2 and p2 phi = p1, if one exists.
inline std::optional<ModuleMap> find_congruence(const ShortExactSequence &E1, const ShortExactSequence &E2) {
  require_same_ends(E1, E2);
  const FGModule &B1 = E1.mid, &B2 = E2.mid, &A = E1.left, &C = E1.right;
  MatrixSystem sys(A.ring);
  auto X = sys.unknown(B2.ngens, B1.ngens);
  auto S1 = sys.unknown(B2.rel.cols(), B1.rel.cols());
  auto S2 = sys.unknown(B2.rel.cols(), A.ngens);
  auto S3 = sys.unknown(C.rel.cols(), B1.ngens);
  sys.equation({{X, QMat::identity(B2.ngens), B1.rel}, {S1, -B2.rel, QMat::identity(B1.rel.cols())}},
               QMat(B2.ngens, B1.rel.cols()));
  sys.equation({{X, QMat::identity(B2.ngens), E1.inject.m}, {S2, -B2.rel, QMat::identity(A.ngens)}},
               E2.inject.m);
  sys.equation({{X, E2.project.m, QMat::identity(B1.ngens)}, {S3, -C.rel, QMat::identity(B1.ngens)}},
               E1.project.m);
  auto sol = sys.solve_system();
  if (!sol) return std::nullopt;
  return ModuleMap(B1, B2, (*sol)[0]);
}

inline bool congruent(const ShortExactSequence &E1, const ShortExactSequence &E2) {
  return find_congruence(E1, E2).has_value();
}

// ---------------------------------------------------------------------------
// Rabi's diagram

// Rows E_j : 0 -> B1j -> B2j -> B3 -> 0 and columns V_j : 0 -> A1 -> B1j -> C1 -> 0.
struct RabiDiagram {
  ShortExactSequence E1, E2, V1, V2;

  void validate() const {
    if (!same_presentation(E1.right, E2.right)) throw StructuralError("rows must share the right term");
    if (!same_presentation(V1.left, V2.left) || !same_presentation(V1.right, V2.right))
      throw StructuralError("columns must share end terms");
    if (!same_presentation(V1.mid, E1.left) || !same_presentation(V2.mid, E2.left))
      throw StructuralError("column middles must be the row left terms");
    for (auto *E : {&E1, &E2, &V1, &V2})
      if (!verify_exact(*E).ok()) throw StructuralError("diagram sequence is not exact");
  }
};

struct GeneralizedBaer {
  ShortExactSequence BB1;   // column Baer difference 0 -> A1 -> B1 -> C1 -> 0
  ShortExactSequence inner; // 0 -> B1 -> B2 -> F -> 0
  ShortExactSequence F;     // 0 -> C1 -> F -> B3 -> 0
  FGModule BB2;
};

inline GeneralizedBaer generalized_baer_difference(const RabiDiagram &d) {
  d.validate();
  const Ring ring = d.E1.mid.ring;
  const FGModule &A1 = d.V1.left, &C1 = d.V1.right, &B3 = d.E1.right;
  const FGModule &B11 = d.E1.left, &B12 = d.E2.left, &B21 = d.E1.mid, &B22 = d.E2.mid;

  // column difference, kept unsimplified so the inclusion of H1 is explicit
  FGModule S1 = direct_sum(B11, B12);
  SubPresentation H1 = kernel_submodule(ModuleMap(S1, C1, hstack(d.V1.project.m, -d.V2.project.m)));
  QMat D1 = H1.coords(vstack(d.V1.inject.m, d.V2.inject.m));
  FGModule BB1m = quotient(H1.module, D1);

  FGModule S2 = direct_sum(B21, B22);
  SubPresentation H2 = kernel_submodule(ModuleMap(S2, B3, hstack(d.E1.project.m, -d.E2.project.m)));
  QMat fi = vstack(d.E1.inject.m * d.V1.inject.m, d.E2.inject.m * d.V2.inject.m);
  QMat D2 = H2.coords(fi);
  FGModule BB2m = quotient(H2.module, D2);

  // f = f1 + f2 on H1 -> H2
  QMat f12 = diag_stack(d.E1.inject.m, d.E2.inject.m);
  QMat fm = H2.coords(f12 * H1.gens);

  Simplified s1 = simplify(BB1m), s2 = simplify(BB2m);
  QMat i1 = H1.coords(vstack(d.V1.inject.m, QMat(B12.ngens, A1.ngens)));
  QMat p1 = hstack(d.V1.project.m, QMat(C1.ngens, B12.ngens)) * H1.gens;
  ShortExactSequence BB1 = make_sequence(A1, s1.module, C1, reduce_rows(s1.module, s1.to_new * i1),
                                         reduce_rows(C1, p1 * s1.to_old));

  QMat fs = reduce_rows(s2.module, s2.to_new * fm * s1.to_old);
  FGModule Fm = quotient(s2.module, fs);
  ShortExactSequence inner = make_sequence(s1.module, s2.module, Fm, fs, QMat::identity(s2.module.ngens));

  // phi(c) = [(f1 b, 0)] with pi1 b = c
  auto lift = solve(hstack(d.V1.project.m, C1.rel), QMat::identity(C1.ngens), ring);
  if (!lift) throw StructuralError("column projection is not surjective");
  QMat b = lift->block(0, 0, B11.ngens, C1.ngens);
  QMat phi = s2.to_new * H2.coords(vstack(d.E1.inject.m * b, QMat(B22.ngens, C1.ngens)));
  QMat pbar = hstack(d.E1.project.m, QMat(B3.ngens, B22.ngens)) * H2.gens * s2.to_old;
  ShortExactSequence F = simplify_middle(make_sequence(C1, Fm, B3, phi, reduce_rows(B3, pbar)));

  return GeneralizedBaer{BB1, inner, F, s2.module};
}

struct RabiCheck {
  bool bb1_exact = false, inner_exact = false, f_exact = false, congruent = false;
  bool ok() const { return bb1_exact && inner_exact && f_exact && congruent; }
};

inline RabiCheck rabi_check(const RabiDiagram &d) {
  RabiCheck r;
  GeneralizedBaer g = generalized_baer_difference(d);
  r.bb1_exact = verify_exact(g.BB1).ok();
  r.inner_exact = verify_exact(g.inner).ok();
  r.f_exact = verify_exact(g.F).ok();
  ShortExactSequence e1 = pushforward(d.E1, d.V1.project);
  ShortExactSequence e2 = pushforward(d.E2, d.V2.project);
  r.congruent = congruent(g.F, baer_difference(e1, e2));
  return r;
}

inline bool rabi_corollary_check(const RabiDiagram &d) { return rabi_check(d).ok(); }

} // namespace hypreg::extalg

#include <random>

namespace hypreg::extalg::gen {

using Rng = std::mt19937_64;

inline long long uniform(Rng &rng, long long lo, long long hi) {
  return std::uniform_int_distribution<long long>(lo, hi)(rng);
}

// Random invertible change of generators (unimodular over Z).
inline QMat random_basis_change(Rng &rng, std::size_t n, Ring ring) {
  QMat U = QMat::identity(n);
  if (n < 2) {
    if (n == 1 && ring == Ring::Rationals) U(0, 0) = Rat(uniform(rng, 1, 3), uniform(rng, 1, 3));
    return U;
  }
  for (int k = 0; k < 3 * static_cast<int>(n); ++k) {
    std::size_t i = uniform(rng, 0, n - 1), j = uniform(rng, 0, n - 1);
    if (i == j) continue;
    U.add_row(i, j, Rat(uniform(rng, -2, 2)));
  }
  if (ring == Ring::Rationals)
    for (std::size_t i = 0; i < n; ++i) U.scale_row(i, Rat(uniform(rng, 1, 3), uniform(rng, 1, 3)));
  return U;
}

inline QMat inverse(const QMat &U) {
  auto x = solve(U, QMat::identity(U.rows()), Ring::Rationals);
  if (!x) throw StructuralError("singular matrix");
  return *x;
}

// A finite abelian group with components Z/2, Z/4, Z/8 and order at most max_order.
inline FGModule random_finite_group(Rng &rng, long long max_order) {
  std::vector<long long> d;
  long long order = 1;
  int parts = static_cast<int>(uniform(rng, 0, 3));
  for (int k = 0; k < parts; ++k) {
    long long c = 1LL << uniform(rng, 1, 3);
    if (order * c > max_order) break;
    d.push_back(c);
    order *= c;
  }
  return FGModule::cyclic_sum(d);
}

inline FGModule random_vector_space(Rng &rng, std::size_t max_dim) {
  return FGModule::free(Ring::Rationals, uniform(rng, 0, static_cast<long long>(max_dim)));
}

// Random extension 0 -> A -> B -> C -> 0 with scrambled middle generators.
inline ShortExactSequence random_extension(Rng &rng, const FGModule &A, const FGModule &C) {
  const Ring ring = A.ring;
  const std::size_t na = A.ngens, nc = C.ngens;
  QMat X(na, C.rel.cols());
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < C.rel.cols(); ++j) X(i, j) = uniform(rng, -3, 3);
  QMat rel(na + nc, A.rel.cols() + C.rel.cols());
  rel.set_block(0, 0, A.rel);
  rel.set_block(0, A.rel.cols(), X);
  rel.set_block(na, A.rel.cols(), C.rel);
  QMat i = vstack(QMat::identity(na), QMat(nc, na));
  QMat p = hstack(QMat(nc, na), QMat::identity(nc));
  QMat U = random_basis_change(rng, na + nc, ring), Ui = inverse(U);
  FGModule B(ring, na + nc, U * rel);
  return make_sequence(A, B, C, U * i, p * Ui);
}

inline RabiDiagram random_rabi(Rng &rng, Ring ring, long long max_order = 64, std::size_t max_dim = 4) {
  FGModule A1, C1, B3;
  if (ring == Ring::Integers) {
    for (;;) {
      A1 = random_finite_group(rng, 16);
      C1 = random_finite_group(rng, 16);
      B3 = random_finite_group(rng, 16);
      Int o = A1.order() * C1.order() * B3.order();
      if (o <= max_order) break;
    }
  } else {
    for (;;) {
      A1 = random_vector_space(rng, 2);
      C1 = random_vector_space(rng, 2);
      B3 = random_vector_space(rng, 2);
      if (A1.ngens + C1.ngens + B3.ngens <= max_dim) break;
    }
  }
  RabiDiagram d;
  d.V1 = random_extension(rng, A1, C1);
  d.V2 = random_extension(rng, A1, C1);
  d.E1 = random_extension(rng, d.V1.mid, B3);
  d.E2 = random_extension(rng, d.V2.mid, B3);
  return d;
}

} // namespace hypreg::extalg::gen
