#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "frameforge/forms.hpp"
#include "frameforge/patch.hpp"

using namespace frameforge;

namespace {

const Real kInvSqrt2 = 1.0 / std::sqrt(2.0);

Real max_jet_difference(const Jet2& a, const Jet2& b) {
  return std::max({(a.x - b.x).cwiseAbs().maxCoeff(),
                   (a.x_u1 - b.x_u1).cwiseAbs().maxCoeff(),
                   (a.x_u2 - b.x_u2).cwiseAbs().maxCoeff(),
                   (a.x_u1u1 - b.x_u1u1).cwiseAbs().maxCoeff(),
                   (a.x_u1u2 - b.x_u1u2).cwiseAbs().maxCoeff(),
                   (a.x_u2u2 - b.x_u2u2).cwiseAbs().maxCoeff()});
}

}  // namespace

TEST_CASE("sphere cap jet at the chart origin") {
  const SurfacePatch patch = make_sphere_family(0.6);
  const Jet2 jet = eval_jet(patch, {0, 0});
  CHECK((jet.x - Vec4(0.8, 0, 0, 0.6)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("torus jet at the chart origin") {
  const SurfacePatch patch = make_torus_family(kInvSqrt2, kInvSqrt2);
  const Jet2 jet = eval_jet(patch, {0, 0});
  CHECK((jet.x - Vec4(kInvSqrt2, 0, kInvSqrt2, 0)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("analytic jets satisfy the differentiated sphere constraints") {
  const SurfacePatch patches[] = {make_sphere_family(0.6), make_torus_family(0.6, 0.8),
                                  make_perturbed_torus(0.6, 0.8, 0.05, 3)};
  for (const auto& patch : patches) {
    for (const ParamPoint& p : grid_points(patch.domain, {12, 12})) {
      const Jet2 jet = eval_jet(patch, p);
      CHECK(std::abs(jet.x.squaredNorm() - 1.0) < 1e-12);
      CHECK(std::abs(jet.x.dot(jet.x_u1)) < 1e-12);
      CHECK(std::abs(jet.x.dot(jet.x_u2)) < 1e-12);
    }
  }
}

TEST_CASE("torus chart is arclength and orthogonal") {
  const SurfacePatch patch = make_torus_family(0.28, 0.96);
  for (const ParamPoint& p : grid_points(patch.domain, {12, 12})) {
    const Jet2 jet = eval_jet(patch, p);
    CHECK(std::abs(jet.x_u1.norm() - 1.0) < 1e-12);
    CHECK(std::abs(jet.x_u2.norm() - 1.0) < 1e-12);
    CHECK(std::abs(jet.x_u1.dot(jet.x_u2)) < 1e-12);
  }
}

TEST_CASE("generators satisfy their implicit equations on a grid") {
  const SurfacePatch sphere = make_sphere_family(0.6);
  for (const ParamPoint& p : grid_points(sphere.domain, {16, 16})) {
    CHECK(implicit_residual(*sphere.descriptor, eval_jet(sphere, p).x) < 1e-12);
  }
  const SurfacePatch torus = make_torus_family(0.6, 0.8);
  for (const ParamPoint& p : grid_points(torus.domain, {16, 16})) {
    CHECK(implicit_residual(*torus.descriptor, eval_jet(torus, p).x) < 1e-12);
  }
}

TEST_CASE("generator parameter validation") {
  CHECK_THROWS_AS(make_sphere_family(1.0), BadParameter);
  CHECK_THROWS_AS(make_sphere_family(-0.1), BadParameter);
  CHECK_THROWS_AS(make_torus_family(0.5, 0.5), BadParameter);
  CHECK_THROWS_AS(make_torus_family(-0.6, 0.8), BadParameter);
  CHECK_THROWS_AS(make_perturbed_torus(0.6, 0.8, 0.3, 2), BadParameter);
  CHECK_THROWS_AS(make_perturbed_torus(0.6, 0.8, 0.05, 0), BadParameter);
}

TEST_CASE("perturbed torus reduces to the torus at eps = 0") {
  const SurfacePatch torus = make_torus_family(0.6, 0.8);
  const SurfacePatch flat = make_perturbed_torus(0.6, 0.8, 0.0, 3);
  for (const ParamPoint& p : grid_points(torus.domain, {8, 8})) {
    CHECK(max_jet_difference(eval_jet(torus, p), eval_jet(flat, p)) < 1e-14);
  }
}

TEST_CASE("perturbed torus is renormalized onto the sphere") {
  const SurfacePatch patch = make_perturbed_torus(kInvSqrt2, kInvSqrt2, 0.05, 3);
  for (const ParamPoint& p : grid_points(patch.domain, {16, 16})) {
    CHECK(std::abs(eval_jet(patch, p).x.squaredNorm() - 1.0) < 1e-12);
  }
}

TEST_CASE("apply_isometry composes linearly with the jet") {
  const SurfacePatch torus = make_torus_family(0.6, 0.8);

  SUBCASE("identity leaves jets unchanged") {
    const SurfacePatch same = apply_isometry(IsometryG{}, torus);
    for (const ParamPoint& p : grid_points(torus.domain, {6, 6})) {
      CHECK(max_jet_difference(eval_jet(torus, p), eval_jet(same, p)) == 0.0);
    }
  }

  SUBCASE("jets commute with the isometry") {
    const IsometryG g = random_so4(7);
    const SurfacePatch moved = apply_isometry(g, torus);
    for (const ParamPoint& p : grid_points(torus.domain, {6, 6})) {
      const Jet2 a = eval_jet(torus, p);
      Jet2 expect;
      expect.x = g(a.x);
      expect.x_u1 = g(a.x_u1);
      expect.x_u2 = g(a.x_u2);
      expect.x_u1u1 = g(a.x_u1u1);
      expect.x_u1u2 = g(a.x_u1u2);
      expect.x_u2u2 = g(a.x_u2u2);
      CHECK(max_jet_difference(eval_jet(moved, p), expect) < 1e-13);
    }
  }

  SUBCASE("block rotations preserve the torus quadrics") {
    const SurfacePatch moved = apply_isometry(so4_block_rotation(0.7, -1.1), torus);
    for (const ParamPoint& p : grid_points(torus.domain, {8, 8})) {
      CHECK(implicit_residual(*moved.descriptor, eval_jet(moved, p).x) < 1e-12);
    }
  }

  SUBCASE("orthogonality of tangents is preserved") {
    const SurfacePatch moved = apply_isometry(random_so4(9), torus);
    for (const ParamPoint& p : grid_points(torus.domain, {6, 6})) {
      const Jet2 a = eval_jet(torus, p);
      const Jet2 b = eval_jet(moved, p);
      CHECK(std::abs(a.x_u1.dot(a.x_u2) - b.x_u1.dot(b.x_u2)) < 1e-12);
    }
  }
}

TEST_CASE("implicit_residual hand values") {
  CHECK(implicit_residual(SphereCap{0.6}, Vec4(0.8, 0, 0, 0.6)) < 1e-15);
  CHECK(implicit_residual(TorusAB{0.6, 0.8}, Vec4(0.6, 0, 0.8, 0)) < 1e-15);
  // x = (1,0,0,0): the plane equation misses by 0.6, the radius one by 0.36.
  CHECK(implicit_residual(SphereCap{0.6}, Vec4(1, 0, 0, 0)) == doctest::Approx(0.6));
  CHECK_THROWS_AS(implicit_residual(PerturbedTorus{0.6, 0.8, 0.05, 3}, Vec4(1, 0, 0, 0)),
                  UnsupportedSpec);
}

TEST_CASE("implicit_residual undoes Transformed wrappers") {
  const IsometryG g = random_so4(13);
  const FamilySpec spec =
      Transformed{g, std::make_shared<const FamilySpec>(FamilySpec{TorusAB{0.6, 0.8}})};
  CHECK(implicit_residual(spec, g(Vec4(0.6, 0, 0.8, 0))) < 1e-14);
}

TEST_CASE("eval_jet domain and immersion guards") {
  const SurfacePatch sphere = make_sphere_family(0.3);
  CHECK_THROWS_AS(eval_jet(sphere, {0, 2.0}), OutOfDomain);

  SurfacePatch degenerate;
  degenerate.domain = {0, 1, 0, 1};
  degenerate.evaluator = [](const ParamPoint& p) {
    Jet2 j;
    j.x = Vec4(std::cos(p.u1), std::sin(p.u1), 0, 0);
    j.x_u1 = Vec4(-std::sin(p.u1), std::cos(p.u1), 0, 0);
    j.x_u2 = Vec4::Zero();  // rank drop
    j.x_u1u1 = -j.x;
    j.x_u1u2 = Vec4::Zero();
    j.x_u2u2 = Vec4::Zero();
    return j;
  };
  CHECK_THROWS_AS(eval_jet(degenerate, {0.5, 0.5}), NotImmersed);
}

TEST_CASE("finite-difference jets approximate analytic jets at O(h^2)") {
  const SurfacePatch torus = make_torus_family(0.6, 0.8);
  auto max_error = [&](Real h) {
    const SurfacePatch fd = with_fd_jets(torus, h);
    Real err = 0;
    for (const ParamPoint& p : grid_points(torus.domain, {8, 8})) {
      err = std::max(err, max_jet_difference(eval_jet(torus, p), eval_jet(fd, p)));
    }
    return err;
  };
  const Real coarse = max_error(2e-3);
  const Real fine = max_error(1e-3);
  CHECK(coarse / fine > 3.0);
  CHECK(coarse / fine < 5.0);

  // Default step: jets satisfy the constraints at the fd tolerance.
  const SurfacePatch fd = with_fd_jets(torus);
  for (const ParamPoint& p : grid_points(torus.domain, {8, 8})) {
    const Jet2 jet = eval_jet(fd, p);
    CHECK(std::abs(jet.x.dot(jet.x_u1)) < 1e-6);
    CHECK(std::abs(jet.x.dot(jet.x_u2)) < 1e-6);
  }
}

TEST_CASE("finite-difference stencil respects the domain") {
  const SurfacePatch fd = with_fd_jets(make_sphere_family(0.3), 1e-3);
  CHECK_THROWS_AS(eval_jet(fd, {0.0, 0.0}), OutOfDomain);  // u1 at the boundary
  CHECK_NOTHROW(eval_jet(fd, {0.5, 0.0}));
}

TEST_CASE("perturbed torus develops curvature spread downstream") {
  // Sanity for the negative control: the position field genuinely leaves
  // the torus quadric.
  const SurfacePatch patch = make_perturbed_torus(kInvSqrt2, kInvSqrt2, 0.05, 3);
  Real deviation = 0;
  for (const ParamPoint& p : grid_points(patch.domain, {24, 8})) {
    const Vec4 x = eval_jet(patch, p).x;
    deviation = std::max(deviation,
                         std::abs(x[0] * x[0] + x[1] * x[1] - kInvSqrt2 * kInvSqrt2));
  }
  CHECK(deviation > 0.01);
}
