#include <gtest/gtest.h>

#include <random>

#include <hypreg/paths.hpp>

using namespace hypreg;

namespace {

const OneForm dx_form = [](cplx, cplx, cplx dx) { return dx; };
const OneForm x_dx = [](cplx x, cplx, cplx dx) { return x * dx; };

HyperellipticModel quintic() { return HyperellipticModel::from_roots({0, 1, 2, 3, 4}); }

cplx holo(int k, cplx x, cplx y, cplx dx) { return std::pow(x, k) * dx / y; }

} // namespace

TEST(Paths, ResidueOnTheLine) {
  auto circ = LiftedPath::lift(nullptr, {Piece::arc(0, 1, 0, 2 * pi)}, 0, 1);
  auto r = integrate_1form(circ, [](cplx x, cplx, cplx dx) { return dx / x; });
  EXPECT_NEAR(std::abs(r.value - two_pi_i), 0.0, 1e-12);
}

TEST(Paths, LengthTwoOnSegmentMatchesClosedForm) {
  const cplx a(0.5, -1), b(2, 0.75);
  auto p = LiftedPath::lift(nullptr, {Piece::segment(a, b)}, 0, 1);
  // int dx dx = (b - a)^2 / 2 ; int dx (x dx) = int_a^b (t - a) t dt
  EXPECT_NEAR(std::abs(iterated_integral(p, {dx_form, dx_form}).value - 0.5 * (b - a) * (b - a)), 0.0, 1e-12);
  cplx closed = (b * b * b - a * a * a) / 3.0 - a * (b * b - a * a) / 2.0;
  EXPECT_NEAR(std::abs(iterated_integral(p, {dx_form, x_dx}).value - closed), 0.0, 1e-12);
}

TEST(Paths, LengthThreeOnPolylineMatchesClosedForm) {
  // for exact forms df, int df df df = (f(b) - f(a))^3 / 6 on any path
  std::vector<Piece> poly = {Piece::segment(0, {1, 1}), Piece::segment({1, 1}, {2, -0.5}), Piece::segment({2, -0.5}, 3)};
  auto p = LiftedPath::lift(nullptr, poly, 0, 1);
  cplx d = p.end_x() - p.start_x();
  EXPECT_NEAR(std::abs(iterated_integral(p, {dx_form, dx_form, dx_form}).value - d * d * d / 6.0), 0.0, 1e-12);
}

TEST(Paths, MonodromyAroundBranchPoint) {
  auto m = quintic();
  auto l = LiftedPath::lift_sheet(&m, {Piece::arc(0, 0.5, 0, 2 * pi)}, 0, 1);
  EXPECT_NEAR(std::abs(*l.start_y() + *l.end_y()), 0.0, 1e-9);
  auto l2 = LiftedPath::lift_sheet(&m, {Piece::arc(0.5, 1.0, 0, 2 * pi)}, 0, 1);
  EXPECT_NEAR(std::abs(*l2.start_y() - *l2.end_y()), 0.0, 1e-9);
  EXPECT_TRUE(l2.closed());
}

TEST(Paths, ReversalSwapsFactors) {
  auto m = quintic();
  auto p = LiftedPath::lift_sheet(&m, {Piece::segment({0.5, 1}, {2.5, -0.7}), Piece::segment({2.5, -0.7}, {3.5, 0.4})}, 0, 1);
  OneForm w0 = [](cplx x, cplx y, cplx dx) { return holo(0, x, y, dx); };
  OneForm w1 = [](cplx x, cplx y, cplx dx) { return holo(1, x, y, dx); };
  cplx fwd = iterated_integral(p, {w0, w1}).value, back = iterated_integral(p.reversed(), {w1, w0}).value;
  EXPECT_NEAR(std::abs(fwd - back), 0.0, 1e-11);
}

TEST(Paths, ExactFormIntegratesToEndpointDifference) {
  auto m = quintic();
  auto p = LiftedPath::lift_sheet(&m, {Piece::segment({-1, 1}, {1.5, 1.5}), Piece::segment({1.5, 1.5}, {5, -1})}, 0, -1);
  auto F = [](cplx x, cplx y) { return x * x * y; };
  OneForm dF = exact_form([](cplx x, cplx y) { return 2.0 * x * y; }, [](cplx x, cplx) { return x * x; }, &m);
  cplx expect = F(p.end_x(), *p.end_y()) - F(p.start_x(), *p.start_y());
  EXPECT_NEAR(std::abs(integrate_1form(p, dF).value - expect), 0.0, 1e-10 * std::abs(expect));
}

TEST(Paths, ConcatenationChecksEndpoints) {
  auto m = quintic();
  auto a = LiftedPath::lift_sheet(&m, {Piece::segment({0.5, 1}, {1.5, 1})}, 0, 1);
  auto b = LiftedPath::lift(&m, {Piece::segment({1.5, 1}, {2.5, 1})}, 0, -*a.end_y());
  auto c = LiftedPath::lift(&m, {Piece::segment({1.5, 1}, {2.5, 1})}, 0, *a.end_y());
  auto far = LiftedPath::lift_sheet(&m, {Piece::segment({7, 1}, {8, 1})}, 0, 1);
  EXPECT_THROW(LiftedPath::concat(a, b), PreconditionError);
  EXPECT_THROW(LiftedPath::concat(a, far), PreconditionError);
  auto ac = LiftedPath::concat(a, c);
  EXPECT_EQ(ac.size(), 2);
}

TEST(Paths, BranchedLogWinding) {
  auto circ = LiftedPath::lift(nullptr, {Piece::arc(0, 2, 0, 2 * pi)}, 0, 1);
  BranchedLog L(circ, [](cplx x) { return (x - 1.0) * (x + 0.5) / (x - 3.0); });
  EXPECT_NEAR(L.winding(), 2.0, 1e-12);
  EXPECT_NEAR(std::abs(L.end() - L.start() - 2.0 * two_pi_i), 0.0, 1e-12);
}

TEST(Paths, DiscIntegralIsMinusReversedLengthTwo) {
  // on a segment of the line with polynomial forms the double integral has a closed form
  auto p = LiftedPath::lift(nullptr, {Piece::segment(0, {1, 1})}, 0, 1);
  OneForm phi = [](cplx x, cplx, cplx dx) { return x * x * dx; };
  auto D = disc_double_integral(p, phi, dx_form, 1e-10);
  cplx b = cplx(1, 1);
  // int_gamma psi phi = int_0^b t^2 * t dt
  cplx psiphi = std::pow(b, 4) / 4.0;
  EXPECT_NEAR(std::abs(D.value + psiphi), 0.0, 1e-8);
}

TEST(Paths, ShuffleOnRandomPaths) {
  auto m = quintic();
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 10; ++k) {
    cplx a(0.5 + 0.2 * u(rng), 1 + 0.5 * u(rng)), b(3.5 + 0.2 * u(rng), -1 + 0.5 * u(rng));
    auto p = LiftedPath::lift_sheet(&m, {Piece::segment(a, b)}, 0, 1);
    cplx c0(u(rng), u(rng)), c1(u(rng), u(rng));
    OneForm w0 = [c0](cplx x, cplx y, cplx dx) { return c0 * holo(0, x, y, dx) + holo(1, x, y, dx); };
    OneForm w1 = [c1](cplx x, cplx y, cplx dx) { return std::conj(c1 * holo(1, x, y, dx)); };
    cplx lhs = iterated_integral(p, {w0, w1}).value + iterated_integral(p, {w1, w0}).value;
    cplx rhs = integrate_1form(p, w0).value * integrate_1form(p, w1).value;
    EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-10) << k;
  }
}
