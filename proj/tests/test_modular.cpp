#include <gtest/gtest.h>

#include <hypreg/modular.hpp>

using namespace hypreg;

TEST(QSeries, ArithmeticAndPrecision) {
  auto a = QSeries(0, 10, {1, -1});         // 1 - q
  auto inv = a.inverse();                    // 1 + q + q^2 + ...
  for (int n = 0; n < 10; ++n) EXPECT_EQ(inv[n], 1);
  EXPECT_THROW(inv[10], PreconditionError);
  EXPECT_TRUE((a * inv) == QSeries::one(10));
  auto b = QSeries::monomial(3, 2, 8);       // 3 q^2 + O(q^8)
  auto p = b * a;
  EXPECT_EQ(p.val, 2);
  EXPECT_EQ(p.prec, 8);
  EXPECT_EQ(p[3], -3);
  auto t = QSeries(0, 6, {0, 1, 1, 1, 1, 1}).theta();
  for (int n = 1; n < 6; ++n) EXPECT_EQ(t[n], n);
  EXPECT_EQ(a.substitute(3)[3], -1);
}

TEST(Modular, ArithmeticHelpers) {
  EXPECT_EQ(mobius(1), 1);
  EXPECT_EQ(mobius(30), -1);
  EXPECT_EQ(mobius(12), 0);
  EXPECT_EQ(divisors(12), (std::vector<int>{1, 2, 3, 4, 6, 12}));
  EXPECT_EQ(prime_factors(210), (std::vector<int>{2, 3, 5, 7}));
  EXPECT_EQ(sigma1(12), 28);
  EXPECT_TRUE(is_squarefree(210));
  EXPECT_FALSE(is_squarefree(18));
}

TEST(Modular, RamanujanTau) {
  // 1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920
  const long long tau[] = {1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920};
  auto D = delta_series(11);
  EXPECT_EQ(D.val, 1);
  for (int n = 1; n <= 10; ++n) EXPECT_EQ(D[n], tau[n - 1]) << n;
  auto big = delta_series(60);
  EXPECT_EQ(big[6], big[2] * big[3]);
  EXPECT_EQ(big[35], big[5] * big[7]);
  // Hecke relation at p = 2: tau(4) = tau(2)^2 - 2^11
  EXPECT_EQ(big[4], big[2] * big[2] - 2048);
}

TEST(Modular, EtaProductMatchesSeriesProduct) {
  // Delta(z) Delta(2z)^-1 computed two ways
  const int M = 30;
  auto direct = eta_product({{1, 24}, {2, -24}}, M);
  QSeries q = delta_series(M + 1) / delta_series(M / 2 + 2).substitute(2).truncate(M + 2);
  // the integer vector omits the leading q^(1 - 2) = q^-1
  EXPECT_EQ(q.val, -1);
  for (int n = 0; n < M - 1; ++n) EXPECT_EQ(Rat(direct[n]), q[n - 1]) << n;
}

TEST(Modular, LeadingExponent) {
  EXPECT_EQ(delta_N_leading_exponent(1), 1);
  EXPECT_EQ(delta_N_leading_exponent(2), 1);
  EXPECT_EQ(delta_N_leading_exponent(6), 2);
  EXPECT_EQ(delta_N_series(6, 10).val, 2);
  EXPECT_EQ(delta_N_series(6, 10)[2], 1);
}

TEST(Modular, DivisorOfDeltaN) {
  auto D = div_delta_N(6);
  EXPECT_EQ(D[1], 2);
  EXPECT_EQ(D[2], -2);
  EXPECT_EQ(D[3], -2);
  EXPECT_EQ(D[6], 2);
  // Delta itself is a cusp form, so N = 1 gives the single cusp with degree 1
  EXPECT_EQ(div_delta_N(1).degree(), 1);
}

TEST(Modular, DivisorAgreesWithLigozatAndHasDegreeZero) {
  for (int N = 2; N <= 210; ++N) {
    if (!is_squarefree(N)) continue;
    auto D = div_delta_N(N);
    EXPECT_EQ(D.degree(), 0) << N;
    EXPECT_TRUE(D == ligozat_divisor(N)) << N;
    EXPECT_EQ(D[N], delta_N_leading_exponent(N)) << N;
  }
}

TEST(Modular, CuspWidths) {
  EXPECT_EQ(cusp_width(30, 1), 30);
  EXPECT_EQ(cusp_width(30, 5), 6);
  EXPECT_EQ(cusp_width(30, 30), 1);
  EXPECT_THROW(cusp_width(30, 4), PreconditionError);
}

TEST(Modular, FrickeOrderAtZero) {
  for (int N : {2, 3, 5, 6, 10, 14, 15, 21, 30}) EXPECT_EQ(Int(fricke_order_at_zero(N)), div_delta_N(N)[1]) << N;
}

TEST(Modular, LambdaDecompositionLevelSix) {
  auto L = lambda_decomposition(6, 2);
  EXPECT_TRUE(L.verified);
  EXPECT_EQ(L.kappa, 4);
  ASSERT_EQ(L.terms.size(), 2u);
  EXPECT_EQ(L.terms[0].d, 1);
  EXPECT_EQ(L.terms[0].lambda, 8);
  EXPECT_EQ(L.terms[1].d, 3);
  EXPECT_EQ(L.terms[1].lambda, -8);
  EXPECT_TRUE(L.lhs == L.rhs);
}

TEST(Modular, LambdaDecompositionAllLevels) {
  int cases = 0;
  for (int N = 2; N <= 210; ++N) {
    if (!is_squarefree(N)) continue;
    for (int p : prime_factors(N)) {
      EXPECT_TRUE(lambda_decomposition(N, p).verified) << N << " " << p;
      ++cases;
    }
  }
  EXPECT_EQ(cases, 231);
}

TEST(Modular, Preconditions) {
  EXPECT_THROW(lambda_decomposition(12, 2), PreconditionError);
  EXPECT_THROW(lambda_decomposition(30, 6), PreconditionError);
  EXPECT_THROW(lambda_decomposition(30, 7), PreconditionError);
  EXPECT_THROW(div_delta_N(18), PreconditionError);
  EXPECT_THROW(delta_N_series(4, 10), PreconditionError);
}

TEST(Modular, EisensteinSeries) {
  auto E1 = eisenstein_EN(1, 6);
  EXPECT_EQ(E1[0], 1);
  EXPECT_EQ(E1[1], -24);
  EXPECT_EQ(E1[2], -72);
  auto E6 = eisenstein_EN(6, 6);
  EXPECT_EQ(E6[0], 2);
  EXPECT_EQ(E6[1], -24);
  for (int N : {1, 2, 6, 30, 210}) EXPECT_TRUE(eisenstein_EN(N, 100) == eisenstein_EN_from_E2(N, 100)) << N;
}
