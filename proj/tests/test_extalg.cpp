#include <gtest/gtest.h>

#include <hypreg/extalg.hpp>

using namespace hypreg;
using namespace hypreg::extalg;

namespace {

QMat col(std::initializer_list<long long> v) {
  QMat m(v.size(), 1);
  std::size_t i = 0;
  for (long long x : v) m(i++, 0) = Rat(x);
  return m;
}
QMat row(std::initializer_list<long long> v) {
  QMat m(1, v.size());
  std::size_t i = 0;
  for (long long x : v) m(0, i++) = Rat(x);
  return m;
}

// 0 -> Z/p -> Z/p^2 -> Z/p -> 0, 1 -> u p
ShortExactSequence cyclic_extension(long long p, long long u) {
  auto A = FGModule::cyclic_sum({p}), B = FGModule::cyclic_sum({p * p});
  return make_exact(A, B, A, col({u * p}), row({1}));
}

} // namespace

TEST(Extalg, CyclicExtensionIsExactAndNotSplit) {
  auto E = cyclic_extension(2, 1);
  EXPECT_TRUE(verify_exact(E).ok());
  EXPECT_FALSE(is_split(E).has_value());
  EXPECT_EQ(E.mid.describe(), "Z/4");
}

TEST(Extalg, SplitSequenceSplits) {
  auto A = FGModule::cyclic_sum({2}), C = FGModule::cyclic_sum({3});
  auto S = split_sequence(A, C);
  EXPECT_TRUE(verify_exact(S).ok());
  EXPECT_TRUE(is_split(S).has_value());
}

TEST(Extalg, BaerSumInExtZ2Z2) {
  auto E = cyclic_extension(2, 1);
  auto S = baer_sum(E, E);
  EXPECT_TRUE(verify_exact(S).ok());
  EXPECT_TRUE(is_split(S).has_value());
  EXPECT_EQ(simplify_middle(S).mid.describe(), "Z/2 + Z/2");
}

TEST(Extalg, BaerSumInExtZ3Z3) {
  // Ext^1(Z/3, Z/3) = Z/3: [E_1] + [E_1] = [E_2] and [E_1] - [E_1] = 0
  auto E1 = cyclic_extension(3, 1), E2 = cyclic_extension(3, 2);
  EXPECT_FALSE(congruent(E1, E2));
  EXPECT_TRUE(congruent(baer_sum(E1, E1), E2));
  EXPECT_TRUE(is_split(baer_difference(E1, E1)).has_value());
  EXPECT_TRUE(congruent(negate(E1), E2));
}

TEST(Extalg, NonExactSequenceIsRejected) {
  auto Z = FGModule::free(Ring::Integers, 1), Z2 = FGModule::free(Ring::Integers, 2);
  QMat i(2, 1), p(1, 2);
  i(0, 0) = 1;
  p(0, 1) = 2;
  auto E = make_sequence(Z, Z2, Z, i, p);
  auto r = verify_exact(E);
  EXPECT_TRUE(r.injective);
  EXPECT_FALSE(r.surjective);
  EXPECT_FALSE(r.cokernel_witnesses.empty());
  EXPECT_THROW(make_exact(Z, Z2, Z, i, p), StructuralError);
}

TEST(Extalg, MapMustRespectRelations) {
  auto Z2 = FGModule::cyclic_sum({2}), Z3 = FGModule::cyclic_sum({3});
  EXPECT_THROW(ModuleMap(Z2, Z3, row({1})), StructuralError);
  EXPECT_NO_THROW(ModuleMap(Z3, Z3, row({2})));
}

TEST(Extalg, IntegerPresentationRejectsFractions) {
  QMat r(1, 1);
  r(0, 0) = Rat(1, 2);
  EXPECT_THROW(FGModule(Ring::Integers, 1, r), StructuralError);
}

TEST(Extalg, InvariantsAndOrder) {
  auto M = FGModule::cyclic_sum({4, 6, 0});
  EXPECT_EQ(M.describe(), "Z/2 + Z/12 + Z");
  EXPECT_EQ(M.order(), 0);
  EXPECT_EQ(FGModule::cyclic_sum({4, 6}).order(), 24);
}

TEST(Extalg, VectorSpaceExtensionsSplit) {
  gen::Rng rng(11);
  for (int k = 0; k < 20; ++k) {
    auto A = gen::random_vector_space(rng, 3), C = gen::random_vector_space(rng, 3);
    auto E = gen::random_extension(rng, A, C);
    ASSERT_TRUE(verify_exact(E).ok());
    EXPECT_TRUE(is_split(E).has_value());
  }
}

TEST(Extalg, PushforwardAlongIdentityIsCongruent) {
  auto E = cyclic_extension(3, 1);
  EXPECT_TRUE(congruent(pushforward(E, ModuleMap::identity(E.left)), E));
  EXPECT_TRUE(congruent(pullback(E, ModuleMap::identity(E.right)), E));
}

class RabiProperty : public ::testing::TestWithParam<Ring> {};

TEST_P(RabiProperty, GeneralizedBaerDifference) {
  gen::Rng rng(GetParam() == Ring::Integers ? 3 : 5);
  for (int k = 0; k < 40; ++k) {
    auto d = gen::random_rabi(rng, GetParam(), 64, 4);
    auto c = rabi_check(d);
    EXPECT_TRUE(c.bb1_exact) << k;
    EXPECT_TRUE(c.inner_exact) << k;
    EXPECT_TRUE(c.f_exact) << k;
    EXPECT_TRUE(c.congruent) << k;
  }
}

INSTANTIATE_TEST_SUITE_P(Rings, RabiProperty, ::testing::Values(Ring::Integers, Ring::Rationals),
                         [](const auto &info) { return std::string(info.param == Ring::Integers ? "Z" : "Q"); });
