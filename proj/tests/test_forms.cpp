#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "frameforge/forms.hpp"
#include "frameforge/frames.hpp"

using namespace frameforge;

namespace {

Form1 constant_form(Real p, Real q) {
  return {[p, q](const ParamPoint&) { return Vec2(p, q); },
          [](const ParamPoint&) { return Mat2::Zero().eval(); }};
}

const Domain kUnitSquare{0, 1, 0, 1};

}  // namespace

TEST_CASE("wedge of the basis forms is the area form") {
  const Form2 w = wedge11(constant_form(1, 0), constant_form(0, 1));
  CHECK(w.coeff({0.3, 0.7}) == doctest::Approx(1));
}

TEST_CASE("wedge is antisymmetric pointwise") {
  const Form1 alpha = {[](const ParamPoint& p) { return Vec2(p.u1, p.u1 * p.u2); }, {}};
  CHECK(wedge11(alpha, alpha).coeff({0.4, 0.9}) == 0.0);
}

TEST_CASE("wedge hand expansion") {
  const Form2 w = wedge11(constant_form(2, 1), constant_form(1, -1));
  CHECK(w.coeff({0.2, 0.8}) == doctest::Approx(-3));
}

TEST_CASE("wedge is bilinear at random points") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<Real> unit(0.1, 0.9);
  for (int trial = 0; trial < 50; ++trial) {
    const Form1 a = constant_form(unit(rng), unit(rng));
    const Form1 b = constant_form(unit(rng), unit(rng));
    const Form1 c = constant_form(unit(rng), unit(rng));
    const Real s = unit(rng);
    const ParamPoint p{unit(rng), unit(rng)};
    CHECK(wedge11(a + b, c).coeff(p) ==
          doctest::Approx(wedge11(a, c).coeff(p) + wedge11(b, c).coeff(p)));
    CHECK(wedge11(s * a, c).coeff(p) == doctest::Approx(s * wedge11(a, c).coeff(p)));
    CHECK(wedge11(a, b).coeff(p) == doctest::Approx(-wedge11(b, a).coeff(p)));
  }
}

TEST_CASE("d1 of a constant form vanishes") {
  CHECK(d1(constant_form(1, 0), DerivMode::analytic).coeff({0.5, 0.5}) == 0.0);
  CHECK(std::abs(d1(constant_form(1, 0), DerivMode::finite_difference).coeff({0.5, 0.5})) <
        1e-12);
}

TEST_CASE("d1 of u2 du1") {
  const Form1 alpha = {[](const ParamPoint& p) { return Vec2(p.u2, 0); },
                       [](const ParamPoint&) {
                         Mat2 j;
                         j << 0, 1, 0, 0;  // dp/du1, dp/du2; dq/du1, dq/du2
                         return j;
                       }};
  CHECK(d1(alpha, DerivMode::analytic).coeff({0.5, 0.5}) == doctest::Approx(-1));
}

TEST_CASE("d1 of u1 u2 du2, analytic against finite differences") {
  const Form1 alpha = {[](const ParamPoint& p) { return Vec2(0, p.u1 * p.u2); },
                       [](const ParamPoint& p) {
                         Mat2 j;
                         j << 0, 0, p.u2, p.u1;
                         return j;
                       }};
  const ParamPoint p{0.3, 0.6};
  CHECK(d1(alpha, DerivMode::analytic).coeff(p) == doctest::Approx(0.6));
  CHECK(std::abs(d1(alpha, DerivMode::finite_difference, 1e-4).coeff(p) -
                 d1(alpha, DerivMode::analytic).coeff(p)) < 1e-8);
}

TEST_CASE("d1 finite differences converge at second order") {
  const Form1 alpha = {
      [](const ParamPoint& p) { return Vec2(std::sin(3 * p.u2), std::cos(2 * p.u1)); },
      [](const ParamPoint& p) {
        Mat2 j;
        j << 0, 3 * std::cos(3 * p.u2), -2 * std::sin(2 * p.u1), 0;
        return j;
      }};
  auto err = [&](Real h) {
    Real worst = 0;
    for (const ParamPoint& p : grid_points(kUnitSquare, {8, 8, 0.1})) {
      worst = std::max(worst,
                       std::abs(d1(alpha, DerivMode::finite_difference, h).coeff(p) -
                                d1(alpha, DerivMode::analytic).coeff(p)));
    }
    return worst;
  };
  const Real ratio = err(2e-3) / err(1e-3);
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.0);
}

TEST_CASE("d of d vanishes on scalar fields") {
  auto scalar = [](const ParamPoint& p) { return std::sin(p.u1) * std::cos(2 * p.u2); };

  SUBCASE("finite differences") {
    const Form2 dd = d1(d0(scalar, 1e-4), DerivMode::finite_difference, 1e-4);
    CHECK(grid_max(dd, kUnitSquare, {8, 8, 0.1}) < 1e-6);
  }

  SUBCASE("analytic coefficients") {
    const Form1 dg = {[scalar](const ParamPoint& p) {
                        return Vec2(std::cos(p.u1) * std::cos(2 * p.u2),
                                    -2 * std::sin(p.u1) * std::sin(2 * p.u2));
                      },
                      [](const ParamPoint& p) {
                        Mat2 j;
                        j << -std::sin(p.u1) * std::cos(2 * p.u2),
                            -2 * std::cos(p.u1) * std::sin(2 * p.u2),
                            -2 * std::cos(p.u1) * std::sin(2 * p.u2),
                            -4 * std::sin(p.u1) * std::cos(2 * p.u2);
                        return j;
                      }};
    CHECK(grid_max(d1(dg, DerivMode::analytic), kUnitSquare, {8, 8, 0.1}) < 1e-12);
  }
}

TEST_CASE("grid_max basics") {
  const Form2 zero = {[](const ParamPoint&) { return 0.0; }};
  CHECK(grid_max(zero, kUnitSquare, {8, 8}) == 0.0);

  const Form2 c = {[](const ParamPoint&) { return -2.5; }};
  CHECK(grid_max(c, kUnitSquare, {8, 8}) == doctest::Approx(2.5));

  const Form2 sine = {[](const ParamPoint& p) { return std::sin(p.u1); }};
  const Domain band{0, 2 * M_PI, 0, 1};
  CHECK(std::abs(grid_max(sine, band, {16, 4, 0.0}) - 1.0) < 0.02);
}

TEST_CASE("GridSpec validation") {
  CHECK_THROWS_AS(grid_points(kUnitSquare, {2, 2}), BadParameter);
  CHECK_THROWS_AS(grid_points(kUnitSquare, {8, 8, 0.6}), BadParameter);
}

TEST_CASE("analytic d1 requires the Jacobian") {
  const Form1 bare = {[](const ParamPoint&) { return Vec2(1, 0); }, {}};
  CHECK_THROWS_AS(d1(bare, DerivMode::analytic), BadParameter);
}

TEST_CASE("finite-difference d1 of patch-backed forms hits the domain edge") {
  const SurfacePatch torus = make_torus_family(0.6, 0.8);
  const Coframe cf = coframe(torus);
  const Form2 d_theta1 = d1(cf.theta1, DerivMode::finite_difference, 1e-3);
  CHECK_THROWS_AS(d_theta1.coeff({0.0, 0.5}), OutOfDomain);
  CHECK_NOTHROW(d_theta1.coeff({0.5, 0.5}));
}
