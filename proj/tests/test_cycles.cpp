#include <gtest/gtest.h>

#include <random>

#include <hypreg/cycles.hpp>

using namespace hypreg;

namespace {

HyperellipticModel quintic() { return HyperellipticModel::from_roots({0, 1, 2, 3, 4}); }

cplx weil_product(const HyperellipticModel *m, const FactoredFunction &f, const FactoredFunction &g) {
  cplx p = 1;
  for (auto &[k, v] : tame_symbol_map(m, f, g)) p *= v;
  return p;
}

} // namespace

TEST(Cycles, DivisorsOfCoordinateFunctions) {
  auto m = quintic();
  EXPECT_EQ(divisor_of(&m, FactoredFunction::linear(0)).str(), "2*W(0) - 2*inf");
  FactoredFunction y{1, {}, 1};
  EXPECT_EQ(divisor_of(&m, y).str(), "W(0) + W(1) + W(2) + W(3) + W(4) - 5*inf");
  auto d = divisor_of(&m, FactoredFunction::linear(Rat(1, 2)));
  EXPECT_EQ(d.degree(), 0);
  EXPECT_EQ(d.coef.size(), 3u);
  EXPECT_EQ(d["inf"], -2);
}

TEST(Cycles, DivisorsOnTheEvenModel) {
  auto m = HyperellipticModel::from_roots({0, 1, 2, 3, 4, 5});
  auto d = divisor_of(&m, FactoredFunction::linear(0));
  EXPECT_EQ(d.str(), "2*W(0) - inf+ - inf-");
  FactoredFunction y{1, {}, 1};
  EXPECT_EQ(divisor_of(&m, y).degree(), 0);
}

TEST(Cycles, TameSymbolHandValues) {
  auto m = quintic();
  // at W(0) the local parameter is y; ord x = 2, ord (x - 2) = 0, so the symbol is (x - 2)^-2 = 1/4
  auto W0 = CurvePoint::weierstrass_point(m, 0);
  EXPECT_NEAR(std::abs(tame_symbol(&m, FactoredFunction::linear(0), FactoredFunction::linear(2), W0) - 0.25), 0.0, 1e-14);
  // on the line: {x, x - 2} at 0 is (x - 2)^-1 = -1/2, and the Steinberg symbol {x, 1 - x} is 1
  FactoredFunction a{1.0, {{Rat(0), 1}}, 0}, b{-1.0, {{Rat(1), 1}}, 0};
  EXPECT_NEAR(std::abs(tame_symbol(nullptr, a, FactoredFunction::linear(2), line_point(0)) + 0.5), 0.0, 1e-14);
  for (auto &[k, v] : tame_symbol_map(nullptr, a, b)) EXPECT_NEAR(std::abs(v - 1.0), 0.0, 1e-14) << k;
}

TEST(Cycles, WeilReciprocityOnRandomFunctions) {
  auto m = quintic();
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 4), ex(-2, 2), yp(0, 1);
  for (int it = 0; it < 30; ++it) {
    auto rnd = [&] {
      FactoredFunction f;
      int c = 0;
      while (c == 0) c = num(rng);
      f.lead = cplx(c, 0);
      for (int k = 0; k < 2; ++k) {
        int e = ex(rng);
        if (e) f.factors.push_back({Rat(num(rng), den(rng)), e});
      }
      f.y_power = yp(rng);
      return f;
    };
    auto f = rnd(), g = rnd();
    EXPECT_NEAR(std::abs(weil_product(&m, f, g) - 1.0), 0.0, 1e-9) << it;
    EXPECT_NEAR(std::abs(weil_product(nullptr, FactoredFunction{f.lead, f.factors, 0}, FactoredFunction{g.lead, g.factors, 0}) - 1.0),
                0.0, 1e-9)
        << it;
  }
}

TEST(Cycles, ZQRIsACocycle) {
  auto m = quintic();
  auto Q = CurvePoint::weierstrass_point(m, 0), R = CurvePoint::weierstrass_point(m, 1);
  auto P = CurvePoint::finite(m, {0.5, 0.5}, 1);
  auto z = build_Z_QR(m, Q, R, P);
  EXPECT_EQ(z.N, 2);
  EXPECT_LT(z.normalization_error, 1e-14);
  EXPECT_EQ(z.cycle.components.size(), 3u);
  EXPECT_TRUE(cocycle_check(z.cycle).valid);
  auto broken = z.cycle;
  broken.components.pop_back();
  auto c = cocycle_check(broken);
  EXPECT_FALSE(c.valid);
  EXPECT_EQ(surface_divisor_str(c.witness), "2*(W(1), W(0)) - 2*(W(1), W(1))");
}

TEST(Cycles, ZQRWithInfinity) {
  auto m = quintic();
  auto z = build_Z_QR(m, CurvePoint::weierstrass_point(m, 2), CurvePoint::infinity(m), CurvePoint::finite(m, {1.5, 0.25}, -1));
  EXPECT_EQ(z.N, 2);
  EXPECT_TRUE(cocycle_check(z.cycle).valid);
}

TEST(Cycles, ZQRPreconditions) {
  auto m = quintic();
  auto Q = CurvePoint::weierstrass_point(m, 0);
  auto P = CurvePoint::finite(m, {0.5, 0.5}, 1);
  EXPECT_THROW(build_Z_QR(m, Q, Q, P), PreconditionError);
  EXPECT_THROW(build_Z_QR(m, Q, P, P), PreconditionError);
  EXPECT_THROW(build_Z_QR(m, Q, CurvePoint::weierstrass_point(m, 1), Q), PreconditionError);
}

TEST(Cycles, SimpleDecompositionAndZf) {
  Divisor D;
  D.add("P1", 2);
  D.add("P2", -2);
  D.add("P3", -2);
  D.add("P6", 2);
  auto dec = decompose_simple(D, [](const std::string &, const std::string &) { return Int(2); });
  EXPECT_EQ(dec.k, 1);
  EXPECT_EQ(simple_sum(dec), dec.k * D);
  auto Z = build_Z_f(D, dec);
  EXPECT_TRUE(cocycle_check(Z).valid);
  // orders that do not divide the coefficients force k > 1
  auto dec3 = decompose_simple(D, [](const std::string &, const std::string &) { return Int(3); });
  EXPECT_EQ(dec3.k, 3);
  EXPECT_TRUE(cocycle_check(build_Z_f(D, dec3)).valid);
  Divisor bad;
  bad.add("P1", 1);
  EXPECT_THROW(decompose_simple(bad, [](const std::string &, const std::string &) { return Int(2); }), PreconditionError);
}
