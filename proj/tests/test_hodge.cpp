#include <gtest/gtest.h>

#include <hypreg/hodge.hpp>

using namespace hypreg;
using namespace hypreg::hodge_gen;

namespace {

// Kummer extension of Z(0) by Z(1) with class u in C / 2 pi i Z
ExtensionSample kummer(Rng &rng, cplx u) {
  CMat ul(1, 1);
  ul(0, 0) = u / two_pi_i;
  return random_extension(rng, HodgeLattice::tate(1), HodgeLattice::tate(0), ul);
}

JacobianElement shifted(const JacobianElement &j, cplx delta) {
  return {j.value + CVec::Constant(j.value.size(), delta), j.data};
}

} // namespace

TEST(Hodge, KummerClass) {
  Rng rng(1);
  const cplx u(0.3, 0.7);
  auto s = kummer(rng, u);
  auto j = carlson_representative(s.E);
  ASSERT_EQ(j.value.size(), 1);
  JacobianElement target{CVec::Constant(1, u), j.data};
  EXPECT_TRUE(j_equal(j, target).equal());
  EXPECT_TRUE(j_equal(j, shifted(target, 3.0 * two_pi_i)).equal());
  auto half = j_equal(j, shifted(target, 0.5 * two_pi_i));
  EXPECT_EQ(half.verdict, JVerdict::NotEqual);
  EXPECT_NEAR(half.distance, pi, 1e-9);
}

TEST(Hodge, KummerClassesAddUnderBaerSum) {
  Rng rng(2);
  auto s1 = kummer(rng, {0.4, -1.1}), s2 = kummer(rng, {-0.25, 2.0});
  auto j = carlson_representative(baer_sum(s1.E, s2.E));
  JacobianElement target{CVec::Constant(1, cplx(0.15, 0.9)), j.data};
  EXPECT_TRUE(j_equal(j, target).equal());
}

TEST(Hodge, TateLattices) {
  auto T = HodgeLattice::tate(2, 3);
  EXPECT_EQ(T.rank, 3);
  EXPECT_EQ(T.weights, std::vector<int>{-4});
  EXPECT_EQ(T.pmin, -2);
  EXPECT_NEAR(std::abs(T.L(0, 0) - two_pi_i * two_pi_i), 0.0, 1e-12);
  EXPECT_EQ(T.filtration(-1).cols(), 0);
  EXPECT_EQ(T.filtration(-3).cols(), 3);
}

TEST(Hodge, IntermediateJacobianNeedsNegativeWeights) {
  EXPECT_THROW(intermediate_jacobian(HodgeLattice::tate(0)), PreconditionError);
  auto J = intermediate_jacobian(HodgeLattice::tate(1, 2));
  EXPECT_EQ(J.dim, 2);
  EXPECT_EQ(J.F0.cols(), 0);
}

TEST(Hodge, HomFromTrivialKeepsShape) {
  Rng rng(3);
  auto A = random_weight_minus_one(rng, 2);
  auto H = hom(HodgeLattice::tate(0), A);
  EXPECT_EQ(H.rank, 4);
  EXPECT_EQ(H.weights, std::vector<int>{-1});
  // F^0 of a weight -1 lattice of rank 2g is g-dimensional
  EXPECT_EQ(H.filtration(0).cols(), 2);
  auto J = intermediate_jacobian(H);
  EXPECT_EQ(J.F0.cols(), 2);
}

TEST(Hodge, LllPreservesLatticeAndShortens) {
  Eigen::MatrixXd B(2, 2);
  B << 1, 100, 0, 1;
  Eigen::MatrixXd R = lll(B);
  EXPECT_NEAR(std::abs(R.determinant()), 1.0, 1e-9);
  // the columns of R are integer combinations of those of B and vice versa
  Eigen::MatrixXd C = B.inverse() * R;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_NEAR(C(i, j), std::round(C(i, j)), 1e-9);
  EXPECT_LE(R.col(0).norm(), 1.0 + 1e-12);
  EXPECT_LE(R.col(1).norm(), 1.0 + 1e-12);
}

TEST(Hodge, JEqualIsIndeterminateWhenToleranceIsCoarse) {
  Rng rng(4);
  auto s = kummer(rng, {0.1, 0.2});
  auto j = carlson_representative(s.E);
  auto r = j_equal(j, shifted(j, 2.0), 1.0);
  EXPECT_EQ(r.verdict, JVerdict::Indeterminate);
}

TEST(Hodge, JEqualRejectsMismatchedData) {
  Rng rng(5);
  auto a = carlson_representative(kummer(rng, 0.5).E);
  JacobianElement b{CVec::Zero(2), intermediate_jacobian(HodgeLattice::tate(1, 2))};
  EXPECT_THROW(j_equal(a, b), StructuralError);
}

TEST(Hodge, PushforwardMatchesComplexMap) {
  Rng rng(6);
  auto A = HodgeLattice::tate(1, 2), A2 = HodgeLattice::tate(1, 3), B = HodgeLattice::tate(0, 2);
  auto s = random_extension(rng, A, B, random_cmat(rng, 2, 2));
  QMat g(3, 2);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 2; ++k) g(i, k) = Rat(uniform(rng, -3, 3));
  auto jp = carlson_representative(pushforward(s.E, g, A2));
  auto j = carlson_representative(s.E);
  CMat jm = Eigen::Map<CMat>(j.value.data(), 2, 2);
  CMat pushed = complex_map(g, A, A2) * jm;
  JacobianElement target{Eigen::Map<CVec>(pushed.data(), 6), jp.data};
  EXPECT_TRUE(j_equal(jp, target).equal());
}

TEST(Hodge, NonSeparatedExtensionIsRejected) {
  Rng rng(7);
  auto s = random_extension(rng, HodgeLattice::tate(0), HodgeLattice::tate(1), random_cmat(rng, 1, 1));
  EXPECT_THROW(carlson_representative(s.E), PreconditionError);
}

// Well-definedness under changes of retraction and section, additivity, and the
// independent class vec(L_A u L_B^-1) used to build the sample.
class CarlsonProperty : public ::testing::TestWithParam<int> {};

TEST_P(CarlsonProperty, RandomSeparatedExtensions) {
  const int family = GetParam();
  Rng rng(100 + family);
  for (int it = 0; it < 25; ++it) {
    int m = static_cast<int>(uniform(rng, 1, 2)), b = static_cast<int>(uniform(rng, 1, 2));
    HodgeLattice A = family == 0 ? random_weight_minus_one(rng, m) : HodgeLattice::tate(1, m);
    HodgeLattice B = HodgeLattice::tate(0, b);
    auto s1 = random_extension(rng, A, B, random_cmat(rng, A.rank, b));
    auto s2 = random_extension(rng, A, B, random_cmat(rng, A.rank, b));
    auto j1 = carlson_representative(s1.E);
    EXPECT_TRUE(j_equal(j1, expected_class(s1, j1.data)).equal()) << it;
    QMat phi(A.rank, b);
    for (int i = 0; i < A.rank; ++i)
      for (int k = 0; k < b; ++k) phi(i, k) = Rat(uniform(rng, -3, 3));
    CVec shift = random_cmat(rng, static_cast<int>(filtered_section(s1.E).kernel.cols()), 1);
    EXPECT_TRUE(j_equal(j1, carlson_representative(s1.E, &phi, &shift)).equal()) << it;
    auto j2 = carlson_representative(s2.E);
    JacobianElement sum{j1.value + j2.value, j1.data};
    EXPECT_TRUE(j_equal(carlson_representative(baer_sum(s1.E, s2.E)), sum).equal()) << it;
  }
}

INSTANTIATE_TEST_SUITE_P(Families, CarlsonProperty, ::testing::Values(0, 1),
                         [](const auto &info) { return std::string(info.param == 0 ? "WeightMinusOne" : "TateOne"); });
