#include "frameforge/curvature.hpp"

#include <algorithm>
#include <cmath>

#include "frameforge/concurrency.hpp"

namespace frameforge {

namespace {

// Coframe coefficients and the tangential connection at one point, shared by
// the second-fundamental solve and the Codazzi evaluation.
struct CurvPoint {
  Vec2 th1, th2;    // theta^1, theta^2 in the du basis
  Vec2 omega12;     // omega_1^2
  Vec2 omega13, omega23;
  Real defect = 0;
};

CurvPoint curv_point(const SurfacePatch& patch, const ParamPoint& p, Real h_frame) {
  const Jet2 jet = eval_jet(patch, p);
  const AdaptedFrame f = adapted_frame(jet);
  const ConnectionSample conn = connection_at(patch, p, h_frame);
  CurvPoint c;
  c.th1 = Vec2(jet.x_u1.dot(f.e1), jet.x_u2.dot(f.e1));
  c.th2 = Vec2(jet.x_u1.dot(f.e2), jet.x_u2.dot(f.e2));
  c.omega12 = conn.omega[0][1];
  c.omega13 = conn.omega[0][2];
  c.omega23 = conn.omega[1][2];
  c.defect = conn.antisym_defect;
  return c;
}

Real wedge(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }

SecondFundamental second_fundamental_from(const CurvPoint& c) {
  // omega_i^3 = h_i1 theta^1 + h_i2 theta^2, solved rowwise in the du basis.
  const Real w = wedge(c.th1, c.th2);
  if (std::abs(w) < tol::rank) {
    throw SingularCoframe("second_fundamental: coframe wedge nearly zero");
  }
  auto solve = [&](const Vec2& v) {
    return Vec2((c.th2[1] * v[0] - c.th2[0] * v[1]) / w,
                (-c.th1[1] * v[0] + c.th1[0] * v[1]) / w);
  };
  const Vec2 row1 = solve(c.omega13);  // (h11, h12)
  const Vec2 row2 = solve(c.omega23);  // (h21, h22)
  SecondFundamental sf;
  sf.symmetry_defect = std::abs(row1[1] - row2[0]);
  sf.h = SymMat2{row1[0], (row1[1] + row2[0]) / 2, row2[1]};
  return sf;
}

// Principal angle of dir1 in the tangent frame, as a direction mod pi.
Real principal_angle(const Vec2& dir1) {
  Real phi = std::atan2(dir1[1], dir1[0]);
  if (phi < 0) phi += M_PI;
  if (phi >= M_PI) phi -= M_PI;
  return phi;
}

}  // namespace

SecondFundamental second_fundamental(const SurfacePatch& patch, const ParamPoint& p,
                                     Real h_frame) {
  return second_fundamental_from(curv_point(patch, p, h_frame));
}

PrincipalData principal_curvatures(const SurfacePatch& patch, const ParamPoint& p,
                                   Real h_frame, Real tol_umb) {
  const EigSym2 e = eig_sym2(second_fundamental(patch, p, h_frame).h, tol_umb);
  return {e.lambda1, e.lambda2, e.dir1, e.dir2, e.umbilic};
}

Real gaussian_extrinsic(const PrincipalData& pd) {
  return 1.0 + pd.lambda1 * pd.lambda2;
}

Real gaussian_intrinsic(const SurfacePatch& patch, const ParamPoint& p,
                        const Steps& steps, Real tol_rank) {
  const Real h = steps.h_form;
  // d omega_2^1, coefficient of du1^du2 by central differences.
  const Vec2 o1p = connection_at(patch, {p.u1 + h, p.u2}, steps.h_frame).omega[1][0];
  const Vec2 o1m = connection_at(patch, {p.u1 - h, p.u2}, steps.h_frame).omega[1][0];
  const Vec2 o2p = connection_at(patch, {p.u1, p.u2 + h}, steps.h_frame).omega[1][0];
  const Vec2 o2m = connection_at(patch, {p.u1, p.u2 - h}, steps.h_frame).omega[1][0];
  const Real dw = (o1p[1] - o1m[1]) / (2 * h) - (o2p[0] - o2m[0]) / (2 * h);

  const Jet2 jet = eval_jet(patch, p);
  const AdaptedFrame f = adapted_frame(jet);
  const Vec2 th1(jet.x_u1.dot(f.e1), jet.x_u2.dot(f.e1));
  const Vec2 th2(jet.x_u1.dot(f.e2), jet.x_u2.dot(f.e2));
  const Real w = wedge(th1, th2);
  if (std::abs(w) < tol_rank) {
    throw SingularCoframe("gaussian_intrinsic: coframe wedge nearly zero");
  }
  return dw / w;
}

CurvatureReport curvature_report(const SurfacePatch& patch, const ParamPoint& p,
                                 const Steps& steps) {
  const PrincipalData pd = principal_curvatures(patch, p, steps.h_frame);
  CurvatureReport r;
  r.K_ext = gaussian_extrinsic(pd);
  r.K_int = gaussian_intrinsic(patch, p, steps);
  r.H = (pd.lambda1 + pd.lambda2) / 2;
  r.cross_check = std::abs(r.K_ext - r.K_int);
  return r;
}

CodazziResiduals codazzi_residuals(const SurfacePatch& patch, const GridSpec& grid,
                                   const Steps& steps, Real tol_umb) {
  const auto pts = grid_points(patch.domain, grid);
  const Real h = steps.h_form;

  // Sorted principal-curvature fields and the principal angle mod pi.
  auto lam_phi = [&](const ParamPoint& q) {
    const EigSym2 e =
        eig_sym2(second_fundamental(patch, q, steps.h_frame).h, tol_umb);
    struct { Real l1, l2, phi; } out{e.lambda1, e.lambda2, principal_angle(e.dir1)};
    return out;
  };

  std::vector<CodazziResiduals> rows(grid.n2);
  parallel_for(grid.n2, [&](int row) {
    CodazziResiduals acc;
    for (int col = 0; col < grid.n1; ++col) {
      const ParamPoint p = pts[static_cast<std::size_t>(row) * grid.n1 + col];
      const CurvPoint c = curv_point(patch, p, steps.h_frame);
      const EigSym2 e = eig_sym2(second_fundamental_from(c).h, tol_umb);

      const auto c1p = lam_phi({p.u1 + h, p.u2});
      const auto c1m = lam_phi({p.u1 - h, p.u2});
      const auto c2p = lam_phi({p.u1, p.u2 + h});
      const auto c2m = lam_phi({p.u1, p.u2 - h});
      const Vec2 dl1((c1p.l1 - c1m.l1) / (2 * h), (c2p.l1 - c2m.l1) / (2 * h));
      const Vec2 dl2((c1p.l2 - c1m.l2) / (2 * h), (c2p.l2 - c2m.l2) / (2 * h));

      Vec2 th1 = c.th1, th2 = c.th2, om = c.omega12;
      if (!e.umbilic) {
        // Rotate into the principal frame; omega picks up d(phi) and the
        // angle field is unwrapped mod pi around the centre value.
        const Real phi0 = principal_angle(e.dir1);
        auto unwrap = [phi0](Real phi) {
          return phi - M_PI * std::round((phi - phi0) / M_PI);
        };
        const Vec2 dphi((unwrap(c1p.phi) - unwrap(c1m.phi)) / (2 * h),
                        (unwrap(c2p.phi) - unwrap(c2m.phi)) / (2 * h));
        const Real cs = std::cos(phi0), sn = std::sin(phi0);
        th1 = cs * c.th1 + sn * c.th2;
        th2 = -sn * c.th1 + cs * c.th2;
        om = c.omega12 + dphi;
      }

      const Real gap = e.lambda1 - e.lambda2;
      acc.r1 = std::max(acc.r1, std::abs(wedge(dl1, th1) + gap * wedge(om, th2)));
      acc.r2 = std::max(acc.r2, std::abs(wedge(dl2, th2) + gap * wedge(om, th1)));
    }
    rows[row] = acc;
  });

  CodazziResiduals out;
  for (const auto& r : rows) {
    out.r1 = std::max(out.r1, r.r1);
    out.r2 = std::max(out.r2, r.r2);
  }
  return out;
}

}  // namespace frameforge
