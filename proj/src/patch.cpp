#include "frameforge/patch.hpp"

#include <cmath>

namespace frameforge {

namespace {

constexpr Real kPoleGap = 0.05;  // collar excluded around the chart poles
constexpr Real kTwoPi = 2.0 * M_PI;

bool jet_finite(const Jet2& j) {
  return j.x.allFinite() && j.x_u1.allFinite() && j.x_u2.allFinite() &&
         j.x_u1u1.allFinite() && j.x_u1u2.allFinite() && j.x_u2u2.allFinite();
}

void check_torus_radii(Real a, Real b) {
  if (!(a > 0) || !(b > 0) || std::abs(a * a + b * b - 1.0) > tol::sphere) {
    throw BadParameter("torus family: need a, b > 0 with a^2 + b^2 = 1");
  }
}

}  // namespace

Real immersion_density(const Jet2& jet) {
  const Real g11 = jet.x_u1.squaredNorm();
  const Real g22 = jet.x_u2.squaredNorm();
  const Real g12 = jet.x_u1.dot(jet.x_u2);
  return std::sqrt(std::max<Real>(0, g11 * g22 - g12 * g12));
}

Jet2 eval_jet(const SurfacePatch& patch, const ParamPoint& p) {
  if (!patch.domain.contains(p)) {
    throw OutOfDomain("eval_jet: chart point outside the patch domain");
  }
  Jet2 jet = patch.evaluator(p);
  if (!jet_finite(jet)) throw BadParameter("eval_jet: non-finite jet");

  const Real stol = patch.constraint_tol;
  if (std::abs(jet.x.squaredNorm() - 1.0) > stol ||
      std::abs(jet.x.dot(jet.x_u1)) > stol || std::abs(jet.x.dot(jet.x_u2)) > stol) {
    throw BadParameter("eval_jet: jet does not satisfy the S^3 constraints");
  }
  if (immersion_density(jet) < tol::rank) {
    throw NotImmersed("eval_jet: chart tangents nearly dependent");
  }
  return jet;
}

Jet2 normalize_to_sphere(const Jet2& y) {
  const Real s = y.x.squaredNorm();
  if (!(s > 0)) throw DegenerateInput("normalize_to_sphere: zero vector");
  const Real n = std::sqrt(s);

  const Real s1 = 2 * y.x.dot(y.x_u1);
  const Real s2 = 2 * y.x.dot(y.x_u2);
  const Real s11 = 2 * (y.x_u1.dot(y.x_u1) + y.x.dot(y.x_u1u1));
  const Real s12 = 2 * (y.x_u1.dot(y.x_u2) + y.x.dot(y.x_u1u2));
  const Real s22 = 2 * (y.x_u2.dot(y.x_u2) + y.x.dot(y.x_u2u2));

  const Real n1 = s1 / (2 * n);
  const Real n2 = s2 / (2 * n);
  const Real n3 = n * n * n;
  const Real n11 = s11 / (2 * n) - s1 * s1 / (4 * n3);
  const Real n12 = s12 / (2 * n) - s1 * s2 / (4 * n3);
  const Real n22 = s22 / (2 * n) - s2 * s2 / (4 * n3);

  const Real inv = 1 / n;
  const Real inv2 = inv * inv;
  const Real inv3 = inv2 * inv;
  Jet2 out;
  out.x = y.x * inv;
  out.x_u1 = y.x_u1 * inv - y.x * (n1 * inv2);
  out.x_u2 = y.x_u2 * inv - y.x * (n2 * inv2);
  out.x_u1u1 = y.x_u1u1 * inv - (y.x_u1 * n1 + y.x_u1 * n1) * inv2 -
               y.x * (n11 * inv2) + y.x * (2 * n1 * n1 * inv3);
  out.x_u1u2 = y.x_u1u2 * inv - (y.x_u1 * n2 + y.x_u2 * n1) * inv2 -
               y.x * (n12 * inv2) + y.x * (2 * n1 * n2 * inv3);
  out.x_u2u2 = y.x_u2u2 * inv - (y.x_u2 * n2 + y.x_u2 * n2) * inv2 -
               y.x * (n22 * inv2) + y.x * (2 * n2 * n2 * inv3);
  return out;
}

SurfacePatch make_sphere_family(Real k) {
  if (!(k >= 0 && k < 1)) throw BadParameter("sphere family: need 0 <= k < 1");
  const Real r = std::sqrt(1.0 - k * k);

  SurfacePatch patch;
  patch.domain = {0, kTwoPi, -M_PI / 2 + kPoleGap, M_PI / 2 - kPoleGap, true, false};
  patch.descriptor = FamilySpec{SphereCap{k}};
  patch.evaluator = [r, k](const ParamPoint& p) {
    const Real c1 = std::cos(p.u1), s1 = std::sin(p.u1);
    const Real c2 = std::cos(p.u2), s2 = std::sin(p.u2);
    Jet2 j;
    j.x = Vec4(r * c1 * c2, r * s1 * c2, r * s2, k);
    j.x_u1 = Vec4(-r * s1 * c2, r * c1 * c2, 0, 0);
    j.x_u2 = Vec4(-r * c1 * s2, -r * s1 * s2, r * c2, 0);
    j.x_u1u1 = Vec4(-r * c1 * c2, -r * s1 * c2, 0, 0);
    j.x_u1u2 = Vec4(r * s1 * s2, -r * c1 * s2, 0, 0);
    j.x_u2u2 = Vec4(-r * c1 * c2, -r * s1 * c2, -r * s2, 0);
    return j;
  };
  return patch;
}

SurfacePatch make_torus_family(Real a, Real b) {
  check_torus_radii(a, b);

  SurfacePatch patch;
  patch.domain = {0, kTwoPi * a, 0, kTwoPi * b, true, true};
  patch.descriptor = FamilySpec{TorusAB{a, b}};
  patch.evaluator = [a, b](const ParamPoint& p) {
    const Real ca = std::cos(p.u1 / a), sa = std::sin(p.u1 / a);
    const Real cb = std::cos(p.u2 / b), sb = std::sin(p.u2 / b);
    Jet2 j;
    j.x = Vec4(a * ca, a * sa, b * cb, b * sb);
    j.x_u1 = Vec4(-sa, ca, 0, 0);
    j.x_u2 = Vec4(0, 0, -sb, cb);
    j.x_u1u1 = Vec4(-ca / a, -sa / a, 0, 0);
    j.x_u1u2 = Vec4::Zero();
    j.x_u2u2 = Vec4(0, 0, -cb / b, -sb / b);
    return j;
  };
  return patch;
}

SurfacePatch make_perturbed_torus(Real a, Real b, Real eps, int mode) {
  check_torus_radii(a, b);
  if (!(eps >= 0 && eps <= 0.2)) {
    throw BadParameter("perturbed torus: eps must lie in [0, 0.2]");
  }
  if (mode < 1) throw BadParameter("perturbed torus: mode must be >= 1");

  SurfacePatch patch;
  patch.domain = {0, kTwoPi * a, 0, kTwoPi * b, true, true};
  patch.descriptor = FamilySpec{PerturbedTorus{a, b, eps, mode}};
  const Real m = static_cast<Real>(mode);
  patch.evaluator = [a, b, eps, m](const ParamPoint& p) {
    const Real phase = m * p.u1 / a;
    const Real rho = a * (1 + eps * std::cos(phase));
    const Real drho = -eps * m * std::sin(phase);
    const Real ddrho = -eps * m * m / a * std::cos(phase);
    const Real ca = std::cos(p.u1 / a), sa = std::sin(p.u1 / a);
    const Real cb = std::cos(p.u2 / b), sb = std::sin(p.u2 / b);
    Jet2 y;
    y.x = Vec4(rho * ca, rho * sa, b * cb, b * sb);
    y.x_u1 = Vec4(drho * ca - rho * sa / a, drho * sa + rho * ca / a, 0, 0);
    y.x_u2 = Vec4(0, 0, -sb, cb);
    y.x_u1u1 = Vec4(ddrho * ca - 2 * drho * sa / a - rho * ca / (a * a),
                    ddrho * sa + 2 * drho * ca / a - rho * sa / (a * a), 0, 0);
    y.x_u1u2 = Vec4::Zero();
    y.x_u2u2 = Vec4(0, 0, -cb / b, -sb / b);
    return normalize_to_sphere(y);
  };

  // The modulation must keep the map an immersion; probe a grid dense
  // enough to resolve the highest mode.
  const int n1 = 16 * std::max(2, mode);
  for (int i = 0; i < n1; ++i) {
    for (int jdx = 0; jdx < 8; ++jdx) {
      const ParamPoint p{patch.domain.ext1() * i / n1, patch.domain.ext2() * jdx / 8};
      (void)eval_jet(patch, p);
    }
  }
  return patch;
}

SurfacePatch apply_isometry(const IsometryG& g, const SurfacePatch& patch) {
  SurfacePatch out;
  out.domain = patch.domain;
  out.jet_kind = patch.jet_kind;
  out.constraint_tol = patch.constraint_tol;
  const Mat4 m = g.m;
  auto inner = patch.evaluator;
  out.evaluator = [m, inner](const ParamPoint& p) {
    Jet2 j = inner(p);
    j.x = m * j.x;
    j.x_u1 = m * j.x_u1;
    j.x_u2 = m * j.x_u2;
    j.x_u1u1 = m * j.x_u1u1;
    j.x_u1u2 = m * j.x_u1u2;
    j.x_u2u2 = m * j.x_u2u2;
    return j;
  };
  if (patch.descriptor) {
    out.descriptor =
        FamilySpec{Transformed{g, std::make_shared<const FamilySpec>(*patch.descriptor)}};
  }
  return out;
}

SurfacePatch with_fd_jets(const SurfacePatch& patch, Real h_fd) {
  if (!(h_fd > 0)) throw BadParameter("with_fd_jets: step must be positive");
  SurfacePatch out;
  out.domain = patch.domain;
  out.descriptor = patch.descriptor;
  out.jet_kind = JetKind::finite_difference;
  out.constraint_tol = std::max(1e-5, 50 * h_fd * h_fd);
  const Domain dom = patch.domain;
  auto inner = patch.evaluator;
  auto pos = [inner](Real u1, Real u2) { return inner(ParamPoint{u1, u2}).x; };
  out.evaluator = [pos, dom, h_fd](const ParamPoint& p) {
    if (p.u1 - h_fd < dom.lo1 || p.u1 + h_fd > dom.hi1 || p.u2 - h_fd < dom.lo2 ||
        p.u2 + h_fd > dom.hi2) {
      throw OutOfDomain("finite-difference jet: stencil leaves the domain");
    }
    const Real h = h_fd;
    Jet2 j;
    j.x = pos(p.u1, p.u2);
    j.x_u1 = (pos(p.u1 + h, p.u2) - pos(p.u1 - h, p.u2)) / (2 * h);
    j.x_u2 = (pos(p.u1, p.u2 + h) - pos(p.u1, p.u2 - h)) / (2 * h);
    j.x_u1u1 = (pos(p.u1 + h, p.u2) - 2 * j.x + pos(p.u1 - h, p.u2)) / (h * h);
    j.x_u2u2 = (pos(p.u1, p.u2 + h) - 2 * j.x + pos(p.u1, p.u2 - h)) / (h * h);
    j.x_u1u2 = (pos(p.u1 + h, p.u2 + h) - pos(p.u1 + h, p.u2 - h) -
                pos(p.u1 - h, p.u2 + h) + pos(p.u1 - h, p.u2 - h)) /
               (4 * h * h);
    return j;
  };
  return out;
}

Real implicit_residual(const FamilySpec& spec, const Vec4& x) {
  if (const auto* cap = std::get_if<SphereCap>(&spec)) {
    const Real r2 = 1.0 - cap->k * cap->k;
    const Real plane = std::abs(x[3] - cap->k);
    const Real radius = std::abs(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - r2);
    return std::max(plane, radius);
  }
  if (const auto* torus = std::get_if<TorusAB>(&spec)) {
    const Real q1 = std::abs(x[0] * x[0] + x[1] * x[1] - torus->a * torus->a);
    const Real q2 = std::abs(x[2] * x[2] + x[3] * x[3] - torus->b * torus->b);
    return std::max(q1, q2);
  }
  if (const auto* wrapped = std::get_if<Transformed>(&spec)) {
    return implicit_residual(*wrapped->inner, wrapped->g.m.transpose() * x);
  }
  throw UnsupportedSpec("implicit_residual: perturbed families have no implicit form");
}

}  // namespace frameforge
