#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace frameforge {

using Real = double;
using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;

/// Default numerical tolerances, sitting an order of magnitude above the
/// noise floor observed on 32x32 analytic-jet grids. The classification and
/// reporting thresholds are overridable through RunConfig.
namespace tol {
inline constexpr Real ortho = 1e-10;   // orthonormality of frames / isometries
inline constexpr Real rank = 1e-8;     // linear-independence / immersion floor
inline constexpr Real eig = 1e-9;      // 2x2 eigen reconstruction
inline constexpr Real umb = 1e-6;      // umbilic gap |l1 - l2|
inline constexpr Real sphere = 1e-10;  // |<x,x> - 1| for points flagged on S^3
inline constexpr Real conn = 1e-8;     // connection-form identities
inline constexpr Real cartan = 1e-7;   // second-fundamental symmetry defect
inline constexpr Real constancy = 1e-5;
inline constexpr Real geo = 1e-6;      // |lambda| cutoff for the great sphere
inline constexpr Real family = 1e-5;   // reconstruction consistency checks
}  // namespace tol

/// Default central-difference step sizes, chosen to balance O(h^2)
/// truncation against cancellation at double precision.
struct Steps {
  Real h_fd = 1e-4;     // finite-difference jets
  Real h_frame = 1e-4;  // frame-field differentiation
  Real h_form = 1e-4;   // exterior derivative of measured 1-forms
};

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateInput : Error { using Error::Error; };
struct OutOfDomain : Error { using Error::Error; };
struct NotImmersed : Error { using Error::Error; };
struct BadParameter : Error { using Error::Error; };
struct UnsupportedSpec : Error { using Error::Error; };
struct SingularCoframe : Error { using Error::Error; };
struct InconsistentConstants : Error { using Error::Error; };
struct NotConstantCenter : Error { using Error::Error; };
struct PlaneDrift : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace frameforge
