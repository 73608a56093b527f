#include "frameforge/frames.hpp"

#include <algorithm>
#include <cmath>

#include "frameforge/concurrency.hpp"

namespace frameforge {

namespace {

AdaptedFrame frame_from_jet(const Jet2& jet) {
  std::vector<Vec4> tangent;
  try {
    tangent = gram_schmidt4<Real>({jet.x_u1, jet.x_u2});
  } catch (const DegenerateInput&) {
    throw NotImmersed("adapted_frame: tangents degenerate");
  }
  AdaptedFrame f;
  f.e1 = tangent[0];
  f.e2 = tangent[1];
  f.e4 = -jet.x;
  f.e3 = cross4<Real>(f.e1, f.e2, f.e4).normalized();
  if (f.as_columns().determinant() < 0) f.e3 = -f.e3;
  return f;
}

// Everything the structural equations need at one chart point: coframe
// coefficients theta^1..theta^3 and the antisymmetrized connection.
struct PointSample {
  std::array<Vec2, 3> theta;
  std::array<std::array<Vec2, 4>, 4> omega;
  Real defect = 0;
};

PointSample sample_point(const SurfacePatch& patch, const ParamPoint& p, Real h) {
  const Jet2 jet = eval_jet(patch, p);
  const AdaptedFrame f0 = frame_from_jet(jet);
  const AdaptedFrame f1p = frame_from_jet(eval_jet(patch, {p.u1 + h, p.u2}));
  const AdaptedFrame f1m = frame_from_jet(eval_jet(patch, {p.u1 - h, p.u2}));
  const AdaptedFrame f2p = frame_from_jet(eval_jet(patch, {p.u1, p.u2 + h}));
  const AdaptedFrame f2m = frame_from_jet(eval_jet(patch, {p.u1, p.u2 - h}));

  PointSample s;
  for (int i = 0; i < 3; ++i) {
    s.theta[i] = Vec2(jet.x_u1.dot(f0.e(i + 1)), jet.x_u2.dot(f0.e(i + 1)));
  }

  Real raw[4][4][2];
  for (int i = 0; i < 4; ++i) {
    const Vec4 d1 = (f1p.e(i + 1) - f1m.e(i + 1)) / (2 * h);
    const Vec4 d2 = (f2p.e(i + 1) - f2m.e(i + 1)) / (2 * h);
    for (int j = 0; j < 4; ++j) {
      raw[i][j][0] = d1.dot(f0.e(j + 1));
      raw[i][j][1] = d2.dot(f0.e(j + 1));
    }
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 2; ++k) {
        s.omega[i][j][k] = (raw[i][j][k] - raw[j][i][k]) / 2;
        if (j > i) {
          s.defect = std::max(s.defect, std::abs(raw[i][j][k] + raw[j][i][k]));
        }
      }
    }
  }
  return s;
}

Real wedge(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }

}  // namespace

Real StructureResiduals::max_residual() const {
  Real m = std::max({extra_condition, antisymmetry, theta3});
  for (int i = 0; i < 3; ++i) {
    m = std::max({m, first_surface[i], second_surface[i], first_sphere[i],
                  second_sphere[i], omega4_theta[i]});
  }
  return m;
}

AdaptedFrame adapted_frame(const SurfacePatch& patch, const ParamPoint& p) {
  return frame_from_jet(eval_jet(patch, p));
}

AdaptedFrame adapted_frame(const Jet2& jet) { return frame_from_jet(jet); }

FrameField frame_field(const SurfacePatch& patch, Real h_frame) {
  return {[patch](const ParamPoint& p) { return adapted_frame(patch, p); }, h_frame};
}

Coframe coframe(const SurfacePatch& patch) {
  auto theta = [patch](int leg) {
    return Form1{[patch, leg](const ParamPoint& p) {
                   const Jet2 jet = eval_jet(patch, p);
                   const AdaptedFrame f = frame_from_jet(jet);
                   return Vec2(jet.x_u1.dot(f.e(leg)), jet.x_u2.dot(f.e(leg)));
                 },
                 {}};
  };
  return {theta(1), theta(2), theta(3)};
}

ConnectionSample connection_at(const SurfacePatch& patch, const ParamPoint& p,
                               Real h_frame) {
  const PointSample s = sample_point(patch, p, h_frame);
  return {s.omega, s.defect};
}

ConnectionMatrix connection_forms(const SurfacePatch& patch, Real h_frame) {
  ConnectionMatrix cm;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      cm.omega_forms[i][j] =
          Form1{[patch, h_frame, i, j](const ParamPoint& p) {
                  return connection_at(patch, p, h_frame).omega[i][j];
                },
                {}};
    }
  }
  cm.antisym_defect = [patch, h_frame](const ParamPoint& p) {
    return connection_at(patch, p, h_frame).antisym_defect;
  };
  return cm;
}

CartanSolution cartan_solve(const Coframe& th, const Form2& dtheta1,
                            const Form2& dtheta2, const ParamPoint& p, Real tol_rank) {
  const Vec2 a = th.theta1.coeff(p);
  const Vec2 b = th.theta2.coeff(p);
  const Real d1 = dtheta1.coeff(p);
  const Real d2 = dtheta2.coeff(p);
  const Real w = wedge(a, b);
  if (std::abs(w) < tol_rank) {
    throw SingularCoframe("cartan_solve: coframe wedge nearly zero");
  }
  CartanSolution sol;
  // Unique antisymmetric solution of d theta^1 = omega_1^2 ^ theta^2 and
  // d theta^2 = theta^1 ^ omega_1^2, as a 2x2 solve in the du basis.
  sol.omega12 = Vec2((a[0] * d1 + b[0] * d2) / w, (a[1] * d1 + b[1] * d2) / w);
  // Gauge candidate omega~_2^1 = -(d1/w) theta^1, omega~_1^2 = (d2/w) theta^2
  // for the Gamma-symmetrization route.
  sol.coeffs.gamma[0][1][0] = -d1 / w;
  sol.coeffs.gamma[1][0][1] = d2 / w;
  return sol;
}

Vec2 omega12_from_gamma(const StructureCoefficients& c) {
  auto g = [&c](int i, int j, int k) { return c.gamma[i - 1][j - 1][k - 1]; };
  Vec2 out;
  const int i = 2, j = 1;
  for (int k = 1; k <= 2; ++k) {
    out[k - 1] = (g(i, j, k) + g(j, k, i) + g(k, j, i) - g(i, k, j) - g(j, i, k) -
                  g(k, i, j)) /
                 2;
  }
  return out;
}

StructureResiduals structural_residuals(const SurfacePatch& patch, const GridSpec& grid,
                                        const Steps& steps) {
  const auto pts = grid_points(patch.domain, grid);
  const Real hc = steps.h_frame;
  const Real hd = steps.h_form;

  std::vector<StructureResiduals> rows(grid.n2);
  parallel_for(grid.n2, [&](int row) {
    StructureResiduals acc;
    for (int col = 0; col < grid.n1; ++col) {
      const ParamPoint p = pts[static_cast<std::size_t>(row) * grid.n1 + col];
      const PointSample c = sample_point(patch, p, hc);
      const PointSample u1p = sample_point(patch, {p.u1 + hd, p.u2}, hc);
      const PointSample u1m = sample_point(patch, {p.u1 - hd, p.u2}, hc);
      const PointSample u2p = sample_point(patch, {p.u1, p.u2 + hd}, hc);
      const PointSample u2m = sample_point(patch, {p.u1, p.u2 - hd}, hc);

      // d(p du1 + q du2) = (dq/du1 - dp/du2) du1^du2 by central differences.
      auto dtheta = [&](int i) {
        return (u1p.theta[i][1] - u1m.theta[i][1]) / (2 * hd) -
               (u2p.theta[i][0] - u2m.theta[i][0]) / (2 * hd);
      };
      auto domega = [&](int i, int j) {
        return (u1p.omega[i][j][1] - u1m.omega[i][j][1]) / (2 * hd) -
               (u2p.omega[i][j][0] - u2m.omega[i][j][0]) / (2 * hd);
      };
      auto om = [&](int i, int j) { return c.omega[i - 1][j - 1]; };
      const Vec2 th1 = c.theta[0], th2 = c.theta[1], th3 = c.theta[2];

      const Real first_surf[3] = {
          dtheta(0) + wedge(om(2, 1), th2),
          dtheta(1) + wedge(om(1, 2), th1),
          wedge(om(1, 3), th1) + wedge(om(2, 3), th2),
      };
      const Real first_sph[3] = {
          dtheta(0) + wedge(om(2, 1), th2) + wedge(om(3, 1), th3),
          dtheta(1) + wedge(om(1, 2), th1) + wedge(om(3, 2), th3),
          dtheta(2) + wedge(om(1, 3), th1) + wedge(om(2, 3), th2),
      };
      const Real gauss = domega(1, 0) + wedge(om(3, 1), om(2, 3)) - wedge(th1, th2);
      const Real second_surf[3] = {
          gauss,
          domega(2, 1) + wedge(om(1, 2), om(3, 1)),
          domega(0, 2) + wedge(om(2, 3), om(1, 2)),
      };
      const Real second_sph[3] = {
          gauss,
          domega(2, 1) + wedge(om(1, 2), om(3, 1)) - wedge(th2, th3),
          domega(0, 2) + wedge(om(2, 3), om(1, 2)) - wedge(th3, th1),
      };
      const Real extra = wedge(om(1, 4), th1) + wedge(om(2, 4), th2) + wedge(om(3, 4), th3);

      for (int i = 0; i < 3; ++i) {
        acc.first_surface[i] = std::max(acc.first_surface[i], std::abs(first_surf[i]));
        acc.first_sphere[i] = std::max(acc.first_sphere[i], std::abs(first_sph[i]));
        acc.second_surface[i] = std::max(acc.second_surface[i], std::abs(second_surf[i]));
        acc.second_sphere[i] = std::max(acc.second_sphere[i], std::abs(second_sph[i]));
        const Vec2 o4 = om(4, i + 1) + c.theta[i];
        acc.omega4_theta[i] =
            std::max({acc.omega4_theta[i], std::abs(o4[0]), std::abs(o4[1])});
      }
      acc.extra_condition = std::max(acc.extra_condition, std::abs(extra));
      acc.antisymmetry = std::max(acc.antisymmetry, c.defect);
      acc.theta3 = std::max({acc.theta3, std::abs(th3[0]), std::abs(th3[1])});
    }
    rows[row] = acc;
  });

  StructureResiduals out;
  for (const auto& acc : rows) {
    for (int i = 0; i < 3; ++i) {
      out.first_surface[i] = std::max(out.first_surface[i], acc.first_surface[i]);
      out.first_sphere[i] = std::max(out.first_sphere[i], acc.first_sphere[i]);
      out.second_surface[i] = std::max(out.second_surface[i], acc.second_surface[i]);
      out.second_sphere[i] = std::max(out.second_sphere[i], acc.second_sphere[i]);
      out.omega4_theta[i] = std::max(out.omega4_theta[i], acc.omega4_theta[i]);
    }
    out.extra_condition = std::max(out.extra_condition, acc.extra_condition);
    out.antisymmetry = std::max(out.antisymmetry, acc.antisymmetry);
    out.theta3 = std::max(out.theta3, acc.theta3);
  }
  return out;
}

Real pullback_check(const SurfacePatch& patch, const IsometryG& g, const GridSpec& grid,
                    Real h_frame) {
  const SurfacePatch moved = apply_isometry(g, patch);
  const auto pts = grid_points(patch.domain, grid);
  std::vector<Real> rows(grid.n2, 0.0);
  parallel_for(grid.n2, [&](int row) {
    Real acc = 0;
    for (int col = 0; col < grid.n1; ++col) {
      const ParamPoint p = pts[static_cast<std::size_t>(row) * grid.n1 + col];
      const ConnectionSample a = connection_at(patch, p, h_frame);
      const ConnectionSample b = connection_at(moved, p, h_frame);
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
          acc = std::max(acc, (a.omega[i][j] - b.omega[i][j]).cwiseAbs().maxCoeff());
        }
      }
    }
    rows[row] = acc;
  });
  return *std::max_element(rows.begin(), rows.end());
}

}  // namespace frameforge
