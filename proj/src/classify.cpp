#include "frameforge/classify.hpp"

#include <algorithm>
#include <cmath>

#include "frameforge/concurrency.hpp"

namespace frameforge {

namespace {

// Rotation of R^3 carrying unit vector u onto unit vector v (Rodrigues).
Eigen::Matrix3d rotation_between(const Eigen::Vector3d& u, const Eigen::Vector3d& v) {
  const double d = u.dot(v);
  if (d > 1.0 - 1e-14) return Eigen::Matrix3d::Identity();
  Eigen::Vector3d axis;
  double angle;
  if (d < -1.0 + 1e-14) {
    // Antipodal: half turn about any axis orthogonal to u.
    axis = u.cross(std::abs(u[0]) < 0.9 ? Eigen::Vector3d::UnitX()
                                        : Eigen::Vector3d::UnitY())
               .normalized();
    angle = M_PI;
  } else {
    const Eigen::Vector3d c = u.cross(v);
    axis = c.normalized();
    angle = std::atan2(c.norm(), d);
  }
  Eigen::Matrix3d k;
  k << 0, -axis[2], axis[1], axis[2], 0, -axis[0], -axis[1], axis[0], 0;
  return Eigen::Matrix3d::Identity() + std::sin(angle) * k +
         (1 - std::cos(angle)) * k * k;
}

struct LinePoint {
  Vec4 x;
  std::array<Vec4, 4> f;
};

std::array<Vec4, 4> f_frame_at(const AdaptedFrame& fr, Real mu1, Real mu2, Real k1,
                               Real k2) {
  return {fr.e1, fr.e2, Vec4((mu1 * fr.e3 + fr.e4) / k1),
          Vec4((mu2 * fr.e3 + fr.e4) / k2)};
}

CircleData circle_from_line(const std::vector<LinePoint>& line, Real radius_expected,
                            int leg_center, int leg_n1, int leg_n2, Real tol_family) {
  CircleData circle;
  Vec4 center = Vec4::Zero();
  for (const auto& lp : line) center += lp.x + radius_expected * lp.f[leg_center];
  center /= static_cast<Real>(line.size());

  Real center_dev = 0, radius_mean = 0;
  for (const auto& lp : line) {
    center_dev = std::max(
        center_dev, (lp.x + radius_expected * lp.f[leg_center] - center).norm());
    radius_mean += (lp.x - center).norm();
  }
  radius_mean /= static_cast<Real>(line.size());
  if (center_dev > tol_family) {
    throw NotConstantCenter("reconstruct_torus: circle centre drifts along the line");
  }
  if (std::abs(radius_mean - radius_expected) > tol_family) {
    throw NotConstantCenter("reconstruct_torus: circle radius mismatch");
  }

  Vec4 n1 = Vec4::Zero(), n2 = Vec4::Zero();
  for (const auto& lp : line) {
    n1 += lp.f[leg_n1];
    n2 += lp.f[leg_n2];
  }
  n1.normalize();
  n2.normalize();
  if (std::abs(n1.dot(n2)) > tol_family) {
    throw PlaneDrift("reconstruct_torus: plane normals not orthogonal");
  }
  Real off1 = 0, off2 = 0;
  for (const auto& lp : line) {
    off1 += lp.x.dot(n1);
    off2 += lp.x.dot(n2);
  }
  off1 /= static_cast<Real>(line.size());
  off2 /= static_cast<Real>(line.size());
  Real drift = 0;
  for (const auto& lp : line) {
    drift = std::max({drift, std::abs(lp.x.dot(n1) - off1), std::abs(lp.x.dot(n2) - off2)});
  }
  if (drift > tol_family) {
    throw PlaneDrift("reconstruct_torus: plane offsets drift along the line");
  }

  circle.center = center;
  circle.radius = radius_mean;
  circle.plane_normals = {n1, n2};
  circle.plane_offsets = {off1, off2};
  circle.center_dev = center_dev;
  return circle;
}

}  // namespace

ConstancyStats sample_constancy(const SurfacePatch& patch, const GridSpec& grid,
                                const Steps& steps) {
  const auto pts = grid_points(patch.domain, grid);
  std::vector<Real> l1(pts.size()), l2(pts.size());
  parallel_for(grid.n2, [&](int row) {
    for (int col = 0; col < grid.n1; ++col) {
      const std::size_t idx = static_cast<std::size_t>(row) * grid.n1 + col;
      const PrincipalData pd = principal_curvatures(patch, pts[idx], steps.h_frame);
      l1[idx] = pd.lambda1;
      l2[idx] = pd.lambda2;
    }
  });

  ConstancyStats st;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    st.mean1 += l1[i];
    st.mean2 += l2[i];
  }
  st.mean1 /= static_cast<Real>(pts.size());
  st.mean2 /= static_cast<Real>(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    st.dev1 = std::max(st.dev1, std::abs(l1[i] - st.mean1));
    st.dev2 = std::max(st.dev2, std::abs(l2[i] - st.mean2));
    st.umbilic_gap = std::max(st.umbilic_gap, std::abs(l1[i] - l2[i]));
  }
  return st;
}

Classification classify(const SurfacePatch& patch, const GridSpec& grid,
                        const ClassifyTols& tols, const Steps& steps) {
  return classify_from_stats(patch, grid, sample_constancy(patch, grid, steps), tols,
                             steps);
}

Classification classify_from_stats(const SurfacePatch& patch, const GridSpec& grid,
                                   const ConstancyStats& st, const ClassifyTols& tols,
                                   const Steps& steps) {
  if (st.dev1 > tols.tol_const || st.dev2 > tols.tol_const) {
    return NonConstantData{st};
  }

  if (st.umbilic_gap < tols.tol_umb) {
    const Real lambda = (st.mean1 + st.mean2) / 2;
    if (std::abs(lambda) < tols.tol_geo) {
      // Totally geodesic: lambda = 0 makes de_3 = 0, so the constant normal
      // is the datum (the surface is the slice of S^3 by its hyperplane).
      Vec4 normal = Vec4::Zero();
      for (const ParamPoint& p : grid_points(patch.domain, grid)) {
        normal += adapted_frame(patch, p).e3;
      }
      normal.normalize();
      return GreatSphereData{normal};
    }
    return reconstruct_sphere(patch, grid, lambda, steps, tols);
  }

  // Distinct constant curvatures. Pair the sorted means with the chart
  // directions (the chart of every generator is principal).
  const PrincipalData pd =
      principal_curvatures(patch, patch.domain.mid(), steps.h_frame, tols.tol_umb);
  Real mu1 = st.mean1, mu2 = st.mean2;
  if (std::abs(pd.dir1[0]) < std::abs(pd.dir1[1])) std::swap(mu1, mu2);
  return FlatTorusData{reconstruct_torus(patch, grid, mu1, mu2, steps, tols)};
}

RoundSphereData reconstruct_sphere(const SurfacePatch& patch, const GridSpec& grid,
                                   Real lambda, const Steps& steps,
                                   const ClassifyTols& tols) {
  (void)steps;
  if (std::abs(lambda) < tols.tol_geo) {
    throw BadParameter("reconstruct_sphere: lambda too close to zero");
  }
  const auto pts = grid_points(patch.domain, grid);
  std::vector<Vec4> centers(pts.size());
  std::vector<Vec4> positions(pts.size());
  parallel_for(grid.n2, [&](int row) {
    for (int col = 0; col < grid.n1; ++col) {
      const std::size_t idx = static_cast<std::size_t>(row) * grid.n1 + col;
      const Jet2 jet = eval_jet(patch, pts[idx]);
      const AdaptedFrame f = adapted_frame(jet);
      // With de_3 = -lambda(theta^1 e_1 + theta^2 e_2) the field
      // x + (1/lambda) e_3 has zero differential, hence is the centre.
      centers[idx] = jet.x + f.e3 / lambda;
      positions[idx] = jet.x;
    }
  });

  RoundSphereData out;
  out.lambda = lambda;
  out.radius = 1.0 / std::abs(lambda);
  Vec4 center = Vec4::Zero();
  for (const Vec4& c : centers) center += c;
  center /= static_cast<Real>(centers.size());
  out.center = center;
  for (const Vec4& c : centers) {
    out.center_dev = std::max(out.center_dev, (c - center).norm());
  }
  if (out.center_dev > tols.tol_family) {
    throw NotConstantCenter("reconstruct_sphere: centre field is not constant");
  }
  for (const Vec4& x : positions) {
    if (std::abs((x - center).norm() - out.radius) > tols.tol_family) {
      throw NotConstantCenter("reconstruct_sphere: points off the reconstructed sphere");
    }
  }
  return out;
}

TorusReconstruction reconstruct_torus(const SurfacePatch& patch, const GridSpec& grid,
                                      Real lambda_u1, Real lambda_u2, const Steps& steps,
                                      const ClassifyTols& tols) {
  if (std::abs(lambda_u1 - lambda_u2) < tols.tol_umb) {
    throw InconsistentConstants("reconstruct_torus: curvatures not distinct");
  }
  if (std::abs(lambda_u1 * lambda_u2 + 1.0) > tols.tol_family) {
    throw InconsistentConstants(
        "reconstruct_torus: lambda_1 * lambda_2 = -1 violated; the Gauss equation "
        "forbids this for constant distinct curvatures in S^3");
  }
  // Project the measured constants onto the exact relation; the construction
  // below assumes it and the raw grid means carry O(h^2) bias.
  const Real scale = std::sqrt(-lambda_u1 * lambda_u2);
  const Real mu1 = lambda_u1 / scale;
  const Real mu2 = lambda_u2 / scale;

  TorusReconstruction rec;
  rec.k1 = std::sqrt(mu1 * mu1 + 1);
  rec.k2 = std::sqrt(mu2 * mu2 + 1);
  rec.a_rec = 1.0 / rec.k1;
  rec.b_rec = 1.0 / rec.k2;
  rec.f_frame = [patch, mu1, mu2, k1 = rec.k1, k2 = rec.k2](const ParamPoint& p) {
    return f_frame_at(adapted_frame(patch, p), mu1, mu2, k1, k2);
  };

  auto line_points = [&](bool along_u1) {
    std::vector<LinePoint> line;
    const auto pts = along_u1 ? grid_row(patch.domain, grid, grid.n2 / 2)
                              : [&] {
                                  // middle column: fixed u1, u2 sweeping rows
                                  std::vector<ParamPoint> col;
                                  const auto all = grid_points(patch.domain, grid);
                                  for (int r = 0; r < grid.n2; ++r) {
                                    col.push_back(
                                        all[static_cast<std::size_t>(r) * grid.n1 +
                                            grid.n1 / 2]);
                                  }
                                  return col;
                                }();
    line.reserve(pts.size());
    for (const ParamPoint& p : pts) {
      const Jet2 jet = eval_jet(patch, p);
      line.push_back({jet.x, f_frame_at(adapted_frame(jet), mu1, mu2, rec.k1, rec.k2)});
    }
    return line;
  };

  // Circle along u1: centre c_1 + (1/k1) f_3, plane normals f_2 and f_4.
  rec.circle1 = circle_from_line(line_points(true), rec.a_rec, 2, 1, 3, tols.tol_family);
  // Circle along u2: centre c_2 + (1/k2) f_4, plane normals f_1 and f_3.
  rec.circle2 = circle_from_line(line_points(false), rec.b_rec, 3, 0, 2, tols.tol_family);

  const auto pts = grid_points(patch.domain, grid);
  const Real h = steps.h_frame;
  std::vector<Real> orth_rows(grid.n2, 0.0), ccc_rows(grid.n2, 0.0);
  parallel_for(grid.n2, [&](int row) {
    Real orth = 0, ccc = 0;
    for (int col = 0; col < grid.n1; ++col) {
      const ParamPoint p = pts[static_cast<std::size_t>(row) * grid.n1 + col];
      const Jet2 jet = eval_jet(patch, p);
      const AdaptedFrame fr = adapted_frame(jet);
      const auto f = f_frame_at(fr, mu1, mu2, rec.k1, rec.k2);
      orth = std::max({orth, std::abs(f[0].dot(f[1])), std::abs(f[0].dot(f[3])),
                       std::abs(f[2].dot(f[1])), std::abs(f[2].dot(f[3]))});

      // df_1 = k1 theta^1 f_3, df_2 = k2 theta^2 f_4,
      // df_3 = -k1 theta^1 f_1, df_4 = -k2 theta^2 f_2.
      const Vec2 th1(jet.x_u1.dot(fr.e1), jet.x_u2.dot(fr.e1));
      const Vec2 th2(jet.x_u1.dot(fr.e2), jet.x_u2.dot(fr.e2));
      const auto fp1 = rec.f_frame({p.u1 + h, p.u2});
      const auto fm1 = rec.f_frame({p.u1 - h, p.u2});
      const auto fp2 = rec.f_frame({p.u1, p.u2 + h});
      const auto fm2 = rec.f_frame({p.u1, p.u2 - h});
      for (int axis = 0; axis < 2; ++axis) {
        const auto& fp = axis == 0 ? fp1 : fp2;
        const auto& fm = axis == 0 ? fm1 : fm2;
        const Vec4 df1 = (fp[0] - fm[0]) / (2 * h);
        const Vec4 df2 = (fp[1] - fm[1]) / (2 * h);
        const Vec4 df3 = (fp[2] - fm[2]) / (2 * h);
        const Vec4 df4 = (fp[3] - fm[3]) / (2 * h);
        ccc = std::max({ccc, (df1 - rec.k1 * th1[axis] * f[2]).norm(),
                        (df2 - rec.k2 * th2[axis] * f[3]).norm(),
                        (df3 + rec.k1 * th1[axis] * f[0]).norm(),
                        (df4 + rec.k2 * th2[axis] * f[1]).norm()});
      }
    }
    orth_rows[row] = orth;
    ccc_rows[row] = ccc;
  });
  rec.plane_orthogonality_defect = *std::max_element(orth_rows.begin(), orth_rows.end());
  rec.ccc_residual = *std::max_element(ccc_rows.begin(), ccc_rows.end());
  return rec;
}

IsometryG homogeneity_witness(const FamilySpec& spec, const ParamPoint& p,
                              const ParamPoint& q) {
  if (const auto* torus = std::get_if<TorusAB>(&spec)) {
    return so4_block_rotation((q.u1 - p.u1) / torus->a, (q.u2 - p.u2) / torus->b);
  }
  if (std::holds_alternative<SphereCap>(spec)) {
    // Rotate the first three coordinates, carrying the latitude/longitude
    // direction of p onto that of q; x^4 = k stays fixed.
    auto dir = [](const ParamPoint& u) {
      return Eigen::Vector3d(std::cos(u.u1) * std::cos(u.u2),
                             std::sin(u.u1) * std::cos(u.u2), std::sin(u.u2));
    };
    const Eigen::Matrix3d r = rotation_between(dir(p), dir(q));
    Mat4 m = Mat4::Identity();
    m.topLeftCorner<3, 3>() = r;
    return IsometryG{m};
  }
  if (const auto* wrapped = std::get_if<Transformed>(&spec)) {
    const IsometryG inner = homogeneity_witness(*wrapped->inner, p, q);
    return IsometryG{wrapped->g.m * inner.m * wrapped->g.m.transpose()};
  }
  throw UnsupportedSpec("homogeneity_witness: perturbed families are not homogeneous");
}

std::vector<InvarianceRow> invariance_suite(const SurfacePatch& patch,
                                            const std::vector<std::uint64_t>& seeds,
                                            const GridSpec& grid, const Steps& steps) {
  const auto pts = grid_points(patch.domain, grid);
  std::vector<InvarianceRow> report;
  report.reserve(seeds.size());
  for (const std::uint64_t seed : seeds) {
    const SurfacePatch moved = apply_isometry(random_so4(seed), patch);
    std::vector<InvarianceRow> rows(grid.n2);
    parallel_for(grid.n2, [&](int row) {
      InvarianceRow acc{seed, 0, 0, 0};
      for (int col = 0; col < grid.n1; ++col) {
        const ParamPoint p = pts[static_cast<std::size_t>(row) * grid.n1 + col];
        const PrincipalData a = principal_curvatures(patch, p, steps.h_frame);
        const PrincipalData b = principal_curvatures(moved, p, steps.h_frame);
        acc.max_dlambda1 = std::max(acc.max_dlambda1, std::abs(a.lambda1 - b.lambda1));
        acc.max_dlambda2 = std::max(acc.max_dlambda2, std::abs(a.lambda2 - b.lambda2));
        acc.max_dK =
            std::max(acc.max_dK, std::abs(gaussian_extrinsic(a) - gaussian_extrinsic(b)));
      }
      rows[row] = acc;
    });
    InvarianceRow total{seed, 0, 0, 0};
    for (const auto& r : rows) {
      total.max_dK = std::max(total.max_dK, r.max_dK);
      total.max_dlambda1 = std::max(total.max_dlambda1, r.max_dlambda1);
      total.max_dlambda2 = std::max(total.max_dlambda2, r.max_dlambda2);
    }
    report.push_back(total);
  }
  return report;
}

}  // namespace frameforge
