#pragma once

#include <array>
#include <functional>

#include "frameforge/forms.hpp"
#include "frameforge/patch.hpp"

namespace frameforge {

/// Orthonormal frame of R^4 adapted to the patch: e1, e2 span the tangent
/// plane (e1 parallel to x_u1), e4 = -x exactly, and e3 is the surface
/// normal inside TS^3 with the orientation fixed by det(e1,e2,e3,e4) = +1.
struct AdaptedFrame {
  Vec4 e1, e2, e3, e4;

  const Vec4& e(int i) const {
    switch (i) {
      case 1: return e1;
      case 2: return e2;
      case 3: return e3;
      default: return e4;
    }
  }
  Mat4 as_columns() const {
    Mat4 m;
    m.col(0) = e1;
    m.col(1) = e2;
    m.col(2) = e3;
    m.col(3) = e4;
    return m;
  }
};

struct FrameField {
  std::function<AdaptedFrame(const ParamPoint&)> at;
  Real h_frame = Steps{}.h_frame;
};

/// Coframe restricted to the surface chart. theta3 vanishes identically on
/// the surface; its measured coefficients are kept as a health witness.
struct Coframe {
  Form1 theta1, theta2, theta3;
};

/// All sixteen connection coefficients at one chart point:
/// omega[i][j] = <D e_{i+1}, e_{j+1}> as a (du1, du2) coefficient pair,
/// antisymmetrized, plus the pre-antisymmetrization defect.
struct ConnectionSample {
  std::array<std::array<Vec2, 4>, 4> omega;
  Real antisym_defect = 0;
};

/// Matrix of connection 1-forms omega_i^j with de_i = omega_i^k e_k,
/// antisymmetric by construction. Index accessors are 1-based to match the
/// frame legs.
struct ConnectionMatrix {
  std::array<std::array<Form1, 4>, 4> omega_forms;
  std::function<Real(const ParamPoint&)> antisym_defect;

  const Form1& omega(int i, int j) const { return omega_forms[i - 1][j - 1]; }
};

/// Expansion coefficients Gamma[i][j][k] (upper index first) of a candidate
/// solution omega~_j^i = sum_k Gamma_jk^i theta^k of the torsion equations.
struct StructureCoefficients {
  Real gamma[2][2][2] = {};
};

struct CartanSolution {
  Vec2 omega12;  // (du1, du2) coefficients of omega_1^2 at the point
  StructureCoefficients coeffs;
};

/// Named grid maxima of every structural-equation residual 2-form, together
/// with the 1-form identities omega_4^i = -theta^i and the raw antisymmetry
/// defect of the measured connection.
struct StructureResiduals {
  std::array<Real, 3> first_surface{};   // d theta^i + omega-wedge terms, theta3 = 0 version
  std::array<Real, 3> second_surface{};  // curvature identities restricted to the surface
  std::array<Real, 3> first_sphere{};    // full ambient first structural equations
  std::array<Real, 3> second_sphere{};   // full ambient second structural equations
  std::array<Real, 3> omega4_theta{};    // max |omega_4^i + theta^i| coefficients
  Real extra_condition = 0;              // omega_1^4^theta^1 + omega_2^4^theta^2 + omega_3^4^theta^3
  Real antisymmetry = 0;                 // pre-antisymmetrization defect, grid max
  Real theta3 = 0;                       // max |theta^3| coefficient

  Real max_residual() const;
};

AdaptedFrame adapted_frame(const SurfacePatch& patch, const ParamPoint& p);
AdaptedFrame adapted_frame(const Jet2& jet);
FrameField frame_field(const SurfacePatch& patch, Real h_frame = Steps{}.h_frame);

Coframe coframe(const SurfacePatch& patch);

ConnectionSample connection_at(const SurfacePatch& patch, const ParamPoint& p,
                               Real h_frame = Steps{}.h_frame);
ConnectionMatrix connection_forms(const SurfacePatch& patch,
                                  Real h_frame = Steps{}.h_frame);

/// Unique antisymmetric solution of the torsion-free equations
/// d theta^1 + omega_2^1 ^ theta^2 = 0, d theta^2 + omega_1^2 ^ theta^1 = 0,
/// solved pointwise as a 2x2 linear system. The returned coefficients hold
/// a (gauge) candidate solution so the symmetrization formula of the
/// existence proof can be cross-checked against the direct solve.
CartanSolution cartan_solve(const Coframe& th, const Form2& dtheta1,
                            const Form2& dtheta2, const ParamPoint& p,
                            Real tol_rank = tol::rank);

/// The n = 2 antisymmetrization formula applied to Gamma; returns omega_1^2
/// in the theta basis. Used as an independent route to the cartan_solve
/// output.
Vec2 omega12_from_gamma(const StructureCoefficients& coeffs);

StructureResiduals structural_residuals(const SurfacePatch& patch, const GridSpec& grid,
                                        const Steps& steps = {});

/// Max coefficient difference of the measured connection forms between the
/// patch and its image under g, at identical chart points. The adapted-frame
/// construction is SO(4)-equivariant, so this is the pullback identity
/// omega = f* omega~ read coefficient-wise.
Real pullback_check(const SurfacePatch& patch, const IsometryG& g, const GridSpec& grid,
                    Real h_frame = Steps{}.h_frame);

}  // namespace frameforge
