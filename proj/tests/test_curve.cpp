#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <hypreg/curve.hpp>

using namespace hypreg;

namespace {

// SL2(Z) reduction to the standard fundamental domain
cplx reduce_tau(cplx t) {
  for (int k = 0; k < 100; ++k) {
    t -= std::round(t.real());
    if (std::abs(t) < 1 - 1e-12) t = -1.0 / t;
    else break;
  }
  return t;
}

// 2 int_a^b |x^k| / sqrt|h(x)| dx by tanh-sinh for a monic h with real roots
double real_loop_period(const HyperellipticModel &m, double a, double b, int k) {
  boost::math::quadrature::tanh_sinh<double> ts;
  // xc is the signed distance to the nearer endpoint, so |h| keeps full relative accuracy there
  auto f = [&](double x, double xc) {
    double da = xc < 0 ? -xc : x - a, db = xc > 0 ? xc : b - x;
    double hx = da * db;
    for (auto &e : m.branch_points())
      if (std::abs(e.x.real() - a) > 1e-12 && std::abs(e.x.real() - b) > 1e-12) hx *= std::abs(x - e.x.real());
    return std::pow(std::abs(x), k) / std::sqrt(hx);
  };
  return 2 * ts.integrate(f, a, b, 1e-14);
}

struct Genus2 : ::testing::Test {
  static void SetUpTestSuite() {
    m = new HyperellipticModel(HyperellipticModel::from_roots({0, 1, 2, 3, 4}));
    sb = new SymplecticBasis(homology_symplectic(*m));
    pd = new PeriodData(period_matrix(*m, *sb));
  }
  static void TearDownTestSuite() {
    delete pd;
    delete sb;
    delete m;
  }
  static HyperellipticModel *m;
  static SymplecticBasis *sb;
  static PeriodData *pd;
};
HyperellipticModel *Genus2::m = nullptr;
SymplecticBasis *Genus2::sb = nullptr;
PeriodData *Genus2::pd = nullptr;

} // namespace

TEST(Model, RejectsBadPolynomials) {
  EXPECT_THROW(HyperellipticModel::from_roots({0, 1}), PreconditionError);
  EXPECT_THROW(HyperellipticModel::from_roots({0, 1, 1, 2}), StructuralError);
}

TEST(Model, GenusAndInfinity) {
  auto odd = HyperellipticModel::from_roots({0, 1, 2, 3, 4});
  auto even = HyperellipticModel::from_roots({0, 1, 2, 3, 4, 5});
  EXPECT_EQ(odd.genus(), 2);
  EXPECT_EQ(even.genus(), 2);
  EXPECT_EQ(odd.infinity(), InfinityType::Branch);
  EXPECT_EQ(even.infinity(), InfinityType::TwoPoints);
  ASSERT_EQ(odd.branch_points().size(), 5u);
  for (int k = 0; k < 5; ++k) {
    ASSERT_TRUE(odd.branch_points()[k].exact.has_value());
    EXPECT_EQ(*odd.branch_points()[k].exact, Rat(k));
  }
  EXPECT_THROW(CurvePoint::infinity(even), PreconditionError);
}

TEST(Model, IrrationalRootsAreFound) {
  // x^3 - 2 has one real and two complex roots
  auto m = HyperellipticModel(RatPoly(std::vector<Rat>{-2, 0, 0, 1}));
  for (auto &b : m.branch_points()) EXPECT_NEAR(std::abs(b.x * b.x * b.x - 2.0), 0.0, 1e-12);
}

TEST(Curve, LemniscaticPeriod) {
  auto m = HyperellipticModel::from_roots({-1, 0, 1});
  auto sb = homology_symplectic(m);
  auto pd = period_matrix(m, sb);
  // int_0^1 dx / sqrt(x - x^3) = B(1/4, 1/2) / 2
  double half = 0.5 * std::tgamma(0.25) * std::tgamma(0.5) / std::tgamma(0.75);
  for (int i = 0; i < 2; ++i) EXPECT_NEAR(std::abs(pd.raw(i, 0)), 2 * half, 1e-10);
  cplx t = reduce_tau(pd.tau(0, 0));
  EXPECT_NEAR(std::abs(t - cplx(0, 1)), 0.0, 1e-10);
}

TEST_F(Genus2, LoopPeriodsMatchRealQuadrature) {
  ASSERT_EQ(sb->pairs.size(), 4u);
  for (std::size_t l = 0; l < sb->pairs.size(); ++l) {
    auto [i, j] = sb->pairs[l];
    double a = m->branch_points()[i].x.real(), b = m->branch_points()[j].x.real();
    for (int k = 0; k < 2; ++k) EXPECT_NEAR(std::abs(pd->raw(l, k)), real_loop_period(*m, a, b, k), 1e-9) << l << " " << k;
  }
}

TEST_F(Genus2, SymplecticBasis) {
  EXPECT_EQ(sb->determinant, 1);
  EXPECT_EQ(sb->standard, standard_symplectic(2));
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(sb->sigma(sb->sigma(i)), i);
    EXPECT_EQ(sb->c(i) * sb->c(sb->sigma(i)), -1);
  }
}

TEST_F(Genus2, RiemannRelations) {
  EXPECT_LT(pd->symmetry_error, 1e-9);
  EXPECT_GT(pd->min_imag_eigenvalue, 0.0);
  // normalized: int_{a_i} dz_j = delta_ij
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_NEAR(std::abs(pd->Pz(i, j) - (i == j ? 1.0 : 0.0)), 0.0, 1e-10);
}

TEST_F(Genus2, HarmonicDualBasis) {
  auto hb = harmonic_dual_basis(*sb, *pd);
  EXPECT_LT(hb.residual, 1e-10);
  // Poincare duality: dx_k pairs with c(i) alpha_i for sigma(i) = k
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      double want = sb->sigma(i) == k ? sb->c(i) : 0.0;
      EXPECT_NEAR(std::abs(alpha_period(*pd, i, hb.dx[k]) - want), 0.0, 1e-10);
    }
  for (auto &f : hb.dx) EXPECT_EQ(f.kind(), FormKind::Harmonic);
}

TEST_F(Genus2, AbelOnPrincipalDivisors) {
  AbelJacobi aj(*m, *pd);
  auto inf = CurvePoint::infinity(*m);
  for (cplx c : {cplx(0.3, 0.7), cplx(5.5, -2)}) {
    auto v = aj.divisor({{CurvePoint::finite(*m, c, 1), 1}, {CurvePoint::finite(*m, c, -1), 1}, {inf, -2}});
    EXPECT_LT(aj.lattice().distance(v), 1e-8);
  }
  std::vector<std::pair<CurvePoint, long long>> D;
  for (int k = 0; k < 5; ++k) D.push_back({CurvePoint::weierstrass_point(*m, k), 1});
  D.push_back({inf, -5});
  EXPECT_LT(aj.lattice().distance(aj.divisor(D)), 1e-8);
}

TEST_F(Genus2, WeierstrassDifferencesAreTwoTorsion) {
  AbelJacobi aj(*m, *pd);
  auto Q = CurvePoint::weierstrass_point(*m, 0), R = CurvePoint::weierstrass_point(*m, 3);
  auto t = k_class_torsion_check(aj, 2, Q, R, 2);
  EXPECT_TRUE(t.is_torsion);
  EXPECT_EQ(t.order, 2);
  EXPECT_LT(t.witness_distance, 1e-8);
  // a generic point is not torsion of small order
  auto P = CurvePoint::finite(*m, {0.5, 0.5}, 1);
  auto g = k_class_torsion_check(aj, 2, P, Q, 2, 1e-8, 12);
  EXPECT_FALSE(g.is_torsion);
}

TEST_F(Genus2, AbelJacobiNeedsDegreeZero) {
  AbelJacobi aj(*m, *pd);
  EXPECT_THROW(aj.divisor({{CurvePoint::weierstrass_point(*m, 1), 1}}), PreconditionError);
}
