#include "frameforge/forms.hpp"

#include <cmath>

namespace frameforge {

Form1 operator+(const Form1& a, const Form1& b) {
  return {[pa = a.coeff, pb = b.coeff](const ParamPoint& p) { return pa(p) + pb(p); }, {}};
}

Form1 operator-(const Form1& a, const Form1& b) {
  return {[pa = a.coeff, pb = b.coeff](const ParamPoint& p) { return pa(p) - pb(p); }, {}};
}

Form1 operator*(Real s, const Form1& a) {
  return {[s, pa = a.coeff](const ParamPoint& p) { return Vec2(s * pa(p)); }, {}};
}

Form2 operator+(const Form2& a, const Form2& b) {
  return {[wa = a.coeff, wb = b.coeff](const ParamPoint& p) { return wa(p) + wb(p); }};
}

Form2 operator-(const Form2& a, const Form2& b) {
  return {[wa = a.coeff, wb = b.coeff](const ParamPoint& p) { return wa(p) - wb(p); }};
}

Form2 operator*(Real s, const Form2& a) {
  return {[s, wa = a.coeff](const ParamPoint& p) { return s * wa(p); }};
}

Form2 wedge11(const Form1& a, const Form1& b) {
  return {[pa = a.coeff, pb = b.coeff](const ParamPoint& p) {
    const Vec2 u = pa(p);
    const Vec2 v = pb(p);
    return u[0] * v[1] - u[1] * v[0];
  }};
}

Form1 d0(std::function<Real(const ParamPoint&)> f, Real h) {
  if (!(h > 0)) throw BadParameter("d0: step must be positive");
  return {[f = std::move(f), h](const ParamPoint& p) {
            const Real du1 =
                (f({p.u1 + h, p.u2}) - f({p.u1 - h, p.u2})) / (2 * h);
            const Real du2 =
                (f({p.u1, p.u2 + h}) - f({p.u1, p.u2 - h})) / (2 * h);
            return Vec2(du1, du2);
          },
          {}};
}

Form2 d1(const Form1& a, DerivMode mode, Real h) {
  if (mode == DerivMode::analytic) {
    if (!a.dcoeff) {
      throw BadParameter("d1: analytic mode needs the coefficient Jacobian");
    }
    return {[da = a.dcoeff](const ParamPoint& p) {
      const Mat2 j = da(p);
      return j(1, 0) - j(0, 1);  // dq/du1 - dp/du2
    }};
  }
  if (!(h > 0)) throw BadParameter("d1: step must be positive");
  return {[c = a.coeff, h](const ParamPoint& p) {
    const Real q_u1 = (c({p.u1 + h, p.u2})[1] - c({p.u1 - h, p.u2})[1]) / (2 * h);
    const Real p_u2 = (c({p.u1, p.u2 + h})[0] - c({p.u1, p.u2 - h})[0]) / (2 * h);
    return q_u1 - p_u2;
  }};
}

std::vector<ParamPoint> grid_points(const Domain& dom, const GridSpec& grid) {
  grid.validate();
  const Real m1 = grid.margin_frac * dom.ext1();
  const Real m2 = grid.margin_frac * dom.ext2();
  std::vector<ParamPoint> pts;
  pts.reserve(static_cast<std::size_t>(grid.n1) * grid.n2);
  for (int j = 0; j < grid.n2; ++j) {
    const Real u2 = dom.lo2 + m2 + (dom.ext2() - 2 * m2) * j / (grid.n2 - 1);
    for (int i = 0; i < grid.n1; ++i) {
      const Real u1 = dom.lo1 + m1 + (dom.ext1() - 2 * m1) * i / (grid.n1 - 1);
      pts.push_back({u1, u2});
    }
  }
  return pts;
}

std::vector<ParamPoint> grid_row(const Domain& dom, const GridSpec& grid, int row) {
  grid.validate();
  if (row < 0 || row >= grid.n2) throw BadParameter("grid_row: row out of range");
  const Real m1 = grid.margin_frac * dom.ext1();
  const Real m2 = grid.margin_frac * dom.ext2();
  const Real u2 = dom.lo2 + m2 + (dom.ext2() - 2 * m2) * row / (grid.n2 - 1);
  std::vector<ParamPoint> pts;
  pts.reserve(grid.n1);
  for (int i = 0; i < grid.n1; ++i) {
    const Real u1 = dom.lo1 + m1 + (dom.ext1() - 2 * m1) * i / (grid.n1 - 1);
    pts.push_back({u1, u2});
  }
  return pts;
}

Real grid_max(const Form2& w, const Domain& dom, const GridSpec& grid) {
  Real best = 0;
  for (const ParamPoint& p : grid_points(dom, grid)) {
    best = std::max(best, std::abs(w.coeff(p)));
  }
  return best;
}

}  // namespace frameforge
