#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <variant>

#include "frameforge/linalg.hpp"
#include "frameforge/types.hpp"

namespace frameforge {

/// Chart coordinates (u1, u2) on the rectangular parameter domain.
struct ParamPoint {
  Real u1 = 0, u2 = 0;
};

struct Domain {
  Real lo1 = 0, hi1 = 1, lo2 = 0, hi2 = 1;
  bool periodic1 = false, periodic2 = false;

  Real ext1() const { return hi1 - lo1; }
  Real ext2() const { return hi2 - lo2; }
  bool contains(const ParamPoint& p) const {
    return p.u1 >= lo1 && p.u1 <= hi1 && p.u2 >= lo2 && p.u2 <= hi2;
  }
  ParamPoint mid() const { return {(lo1 + hi1) / 2, (lo2 + hi2) / 2}; }
};

/// 2-jet of the immersion at a chart point: position, first and second
/// partial derivatives, all in R^4.
struct Jet2 {
  Vec4 x, x_u1, x_u2, x_u1u1, x_u1u2, x_u2u2;
};

struct SphereCap {
  Real k = 0;  // the cap x^4 = k, 0 <= k < 1
};

struct TorusAB {
  Real a = 0, b = 0;  // product torus radii, a^2 + b^2 = 1
};

struct PerturbedTorus {
  Real a = 0, b = 0, eps = 0;
  int mode = 2;  // angular frequency of the radial modulation
};

struct Transformed;

using FamilySpec = std::variant<SphereCap, TorusAB, PerturbedTorus, Transformed>;

struct Transformed {
  IsometryG g;
  std::shared_ptr<const FamilySpec> inner;
};

enum class JetKind { analytic, finite_difference };

/// A parametrized surface patch in S^3 with 2-jet evaluation. The evaluator
/// must be a pure function of the chart point; patches are immutable after
/// construction and safe to evaluate concurrently.
struct SurfacePatch {
  Domain domain;
  std::function<Jet2(const ParamPoint&)> evaluator;
  JetKind jet_kind = JetKind::analytic;
  std::optional<FamilySpec> descriptor;
  // Slack for the S^3 jet checks; finite-difference jets widen it with the
  // square of their step.
  Real constraint_tol = 1e-9;
};

/// Evaluates the 2-jet and checks it: p inside the domain, jet on the unit
/// sphere with tangent first derivatives, and x_u1, x_u2 independent.
/// Throws OutOfDomain / BadParameter / NotImmersed respectively.
Jet2 eval_jet(const SurfacePatch& patch, const ParamPoint& p);

/// Area of the parallelogram spanned by the chart tangents; the immersion
/// test compares this against tol::rank.
Real immersion_density(const Jet2& jet);

/// Re-normalizes a 2-jet of an arbitrary map y onto the unit sphere,
/// producing the exact 2-jet of y/|y|.
Jet2 normalize_to_sphere(const Jet2& raw);

/// Latitude/longitude chart of the 2-sphere x^4 = k. The chart excludes a
/// 0.05 rad collar at both poles where it degenerates.
SurfacePatch make_sphere_family(Real k);

/// Product torus in arclength coordinates, so the chart tangents are the
/// orthonormal tangent frame: |x_ui| = 1 and <x_u1, x_u2> = 0.
SurfacePatch make_torus_family(Real a, Real b);

/// Torus with the first radius modulated by a*(1 + eps*cos(mode*u1/a)) and
/// the result projected back onto S^3. Reduces to make_torus_family at
/// eps = 0; a negative control for the classification.
SurfacePatch make_perturbed_torus(Real a, Real b, Real eps, int mode);

/// Composes g linearly with every vector of the jet; the descriptor is
/// wrapped as Transformed{g, inner}.
SurfacePatch apply_isometry(const IsometryG& g, const SurfacePatch& patch);

/// Same surface with jets replaced by central differences of the position
/// map (step h_fd). Shrinks the usable domain by h_fd at the boundary.
SurfacePatch with_fd_jets(const SurfacePatch& patch, Real h_fd = Steps{}.h_fd);

/// Max absolute violation of the family's defining equations at x, after
/// undoing any Transformed wrapper. Throws UnsupportedSpec for perturbed
/// families, which have no implicit description.
Real implicit_residual(const FamilySpec& spec, const Vec4& x);

}  // namespace frameforge
