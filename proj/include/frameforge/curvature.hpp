#pragma once

#include "frameforge/frames.hpp"

namespace frameforge {

/// Second fundamental form coefficients in the theta basis,
/// omega_i^3 = h_i1 theta^1 + h_i2 theta^2, symmetrized with the raw
/// asymmetry recorded (Cartan's Lemma makes the exact matrix symmetric).
struct SecondFundamental {
  SymMat2 h;
  Real symmetry_defect = 0;
};

struct PrincipalData {
  Real lambda1 = 0, lambda2 = 0;  // sorted, lambda1 >= lambda2
  Vec2 dir1, dir2;                // principal directions in the (e1, e2) basis
  bool umbilic = false;
};

struct CurvatureReport {
  Real K_ext = 0;       // 1 + lambda1*lambda2
  Real K_int = 0;       // d omega_2^1 / theta^1 ^ theta^2
  Real H = 0;           // mean curvature (lambda1 + lambda2)/2
  Real cross_check = 0; // |K_ext - K_int|
};

/// Grid maxima of the two Mainardi-Codazzi residual 2-forms
/// d lambda_i ^ theta^i + (lambda1 - lambda2) omega_1^2 ^ theta^j,
/// evaluated in the principal frame (chart frame near umbilics).
struct CodazziResiduals {
  Real r1 = 0, r2 = 0;
};

SecondFundamental second_fundamental(const SurfacePatch& patch, const ParamPoint& p,
                                     Real h_frame = Steps{}.h_frame);

PrincipalData principal_curvatures(const SurfacePatch& patch, const ParamPoint& p,
                                   Real h_frame = Steps{}.h_frame,
                                   Real tol_umb = tol::umb);

Real gaussian_extrinsic(const PrincipalData& pd);

/// Intrinsic Gaussian curvature from the Gauss equation
/// d omega_2^1 = K theta^1 ^ theta^2. Needs a finite-difference stencil of
/// the measured connection, so p must sit h_form inside the domain.
Real gaussian_intrinsic(const SurfacePatch& patch, const ParamPoint& p,
                        const Steps& steps = {}, Real tol_rank = tol::rank);

CurvatureReport curvature_report(const SurfacePatch& patch, const ParamPoint& p,
                                 const Steps& steps = {});

CodazziResiduals codazzi_residuals(const SurfacePatch& patch, const GridSpec& grid,
                                   const Steps& steps = {}, Real tol_umb = tol::umb);

}  // namespace frameforge
