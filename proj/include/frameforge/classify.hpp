#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "frameforge/curvature.hpp"

namespace frameforge {

struct ClassifyTols {
  Real tol_const = tol::constancy;  // max principal-curvature deviation
  Real tol_umb = tol::umb;          // umbilic gap
  Real tol_geo = tol::geo;          // |lambda| cutoff for the great sphere
  Real tol_family = tol::family;    // reconstruction consistency
};

/// Grid statistics of the sorted principal curvature fields.
struct ConstancyStats {
  Real mean1 = 0, mean2 = 0;
  Real dev1 = 0, dev2 = 0;    // max |lambda_i - mean_i|
  Real umbilic_gap = 0;       // max |lambda1 - lambda2|
};

/// A circle in R^4 cut out by two plane constraints <c, n_i> = offset_i.
struct CircleData {
  Vec4 center;
  Real radius = 0;
  std::array<Vec4, 2> plane_normals;
  std::array<Real, 2> plane_offsets;
  Real center_dev = 0;
};

/// Data recovered by the non-umbilic branch: the rotated f-frame that
/// decouples the surface into two plane circles in mutually orthogonal
/// planes, and the product-torus radii they imply.
struct TorusReconstruction {
  Real k1 = 0, k2 = 0;        // k_i = sqrt(lambda_i^2 + 1), paired with u^i
  Real a_rec = 0, b_rec = 0;  // 1/k1, 1/k2
  CircleData circle1, circle2;
  Real plane_orthogonality_defect = 0;
  Real ccc_residual = 0;      // max finite-difference residual of the df_i system
  std::function<std::array<Vec4, 4>(const ParamPoint&)> f_frame;
};

struct GreatSphereData {
  Vec4 hyperplane_normal;
};

struct RoundSphereData {
  Real lambda = 0;
  Vec4 center;
  Real radius = 0;
  Real center_dev = 0;
};

struct FlatTorusData {
  TorusReconstruction recon;
};

struct NonConstantData {
  ConstancyStats stats;
};

using Classification =
    std::variant<GreatSphereData, RoundSphereData, FlatTorusData, NonConstantData>;

ConstancyStats sample_constancy(const SurfacePatch& patch, const GridSpec& grid,
                                const Steps& steps = {});

/// Decision tree of the classification: non-constant curvatures are
/// rejected; constant umbilic surfaces are great or round spheres; constant
/// distinct curvatures force lambda1*lambda2 = -1 and a flat torus.
Classification classify(const SurfacePatch& patch, const GridSpec& grid,
                        const ClassifyTols& tols = {}, const Steps& steps = {});

/// Same decision tree on precomputed constancy statistics.
Classification classify_from_stats(const SurfacePatch& patch, const GridSpec& grid,
                                   const ConstancyStats& stats,
                                   const ClassifyTols& tols = {},
                                   const Steps& steps = {});

/// Sphere branch: the center x + (1/lambda) e3 is constant on the surface;
/// returns its grid mean, the max deviation, and the radius 1/|lambda|.
RoundSphereData reconstruct_sphere(const SurfacePatch& patch, const GridSpec& grid,
                                   Real lambda, const Steps& steps = {},
                                   const ClassifyTols& tols = {});

/// Torus branch. lambda_u1 / lambda_u2 are the principal curvatures paired
/// with the u1 / u2 chart directions (the chart of a flat torus is
/// principal); k_i = sqrt(lambda_i^2+1) and the two circles run along the
/// chart lines.
TorusReconstruction reconstruct_torus(const SurfacePatch& patch, const GridSpec& grid,
                                      Real lambda_u1, Real lambda_u2,
                                      const Steps& steps = {},
                                      const ClassifyTols& tols = {});

/// An isometry of S^3 preserving the family and mapping x(p) to x(q):
/// a block rotation for the torus, a rotation of the first three coordinates
/// for the sphere cap. Conjugated through any Transformed wrapper.
IsometryG homogeneity_witness(const FamilySpec& spec, const ParamPoint& p,
                              const ParamPoint& q);

struct InvarianceRow {
  std::uint64_t seed = 0;
  Real max_dK = 0, max_dlambda1 = 0, max_dlambda2 = 0;
};

/// For each seeded random isometry g, the grid maxima of |K - K∘g| and
/// |lambda_i - lambda_i∘g| comparing the patch against apply_isometry(g, .)
/// at identical chart points.
std::vector<InvarianceRow> invariance_suite(const SurfacePatch& patch,
                                            const std::vector<std::uint64_t>& seeds,
                                            const GridSpec& grid,
                                            const Steps& steps = {});

}  // namespace frameforge
