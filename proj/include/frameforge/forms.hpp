#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "frameforge/patch.hpp"
#include "frameforge/types.hpp"

namespace frameforge {

/// Differential 1-form on the parameter chart, stored as the coefficient
/// field (p, q) of p du1 + q du2. `dcoeff`, when present, supplies the
/// analytic Jacobian of the coefficients (rows = coefficient, cols = axis).
struct Form1 {
  std::function<Vec2(const ParamPoint&)> coeff;
  std::function<Mat2(const ParamPoint&)> dcoeff;
};

/// 2-form w du1 ^ du2 as the scalar coefficient field w.
struct Form2 {
  std::function<Real(const ParamPoint&)> coeff;
};

enum class DerivMode { analytic, finite_difference };

/// Sampling grid: n1 x n2 points, inset from the domain boundary by
/// margin_frac of each extent (keeps finite-difference stencils inside).
struct GridSpec {
  int n1 = 32, n2 = 32;
  Real margin_frac = 0.03;

  void validate() const {
    if (n1 < 4 || n2 < 4) throw BadParameter("GridSpec: need at least 4x4 samples");
    if (margin_frac < 0 || margin_frac >= 0.5) {
      throw BadParameter("GridSpec: margin_frac must lie in [0, 0.5)");
    }
  }
};

Form1 operator+(const Form1& a, const Form1& b);
Form1 operator-(const Form1& a, const Form1& b);
Form1 operator*(Real s, const Form1& a);
Form2 operator+(const Form2& a, const Form2& b);
Form2 operator-(const Form2& a, const Form2& b);
Form2 operator*(Real s, const Form2& a);

/// Pointwise wedge of two 1-forms: w = p_a q_b - q_a p_b.
Form2 wedge11(const Form1& a, const Form1& b);

/// Differential of a scalar field as a 1-form, by central differences.
Form1 d0(std::function<Real(const ParamPoint&)> f, Real h = Steps{}.h_form);

/// Exterior derivative w = dq/du1 - dp/du2. Analytic mode requires the
/// form's dcoeff; finite-difference mode shrinks the usable domain by h.
Form2 d1(const Form1& a, DerivMode mode, Real h = Steps{}.h_form);

std::vector<ParamPoint> grid_points(const Domain& dom, const GridSpec& grid);

/// One row of the sampling grid (fixed u2), for line statistics.
std::vector<ParamPoint> grid_row(const Domain& dom, const GridSpec& grid, int row);

Real grid_max(const Form2& w, const Domain& dom, const GridSpec& grid);

}  // namespace frameforge
