#include "frameforge/report.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "frameforge/concurrency.hpp"

namespace frameforge {

namespace {

namespace fs = std::filesystem;

Real json_real(const ojson& j, const char* key, Real fallback) {
  return j.contains(key) ? j.at(key).get<Real>() : fallback;
}

void require_positive(Real v, const char* what) {
  if (!(v > 0)) throw BadParameter(std::string(what) + " must be positive");
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << std::setprecision(17);
  return out;
}

double elapsed_ms(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

ojson structural_to_json(const StructureResiduals& r) {
  ojson rows = ojson::array();
  auto add = [&rows](const std::string& name, Real max) {
    rows.push_back(ojson{{"name", name}, {"max", max}});
  };
  for (int i = 0; i < 3; ++i) add("first_surface_" + std::to_string(i + 1), r.first_surface[i]);
  for (int i = 0; i < 3; ++i) add("second_surface_" + std::to_string(i + 1), r.second_surface[i]);
  for (int i = 0; i < 3; ++i) add("first_sphere_" + std::to_string(i + 1), r.first_sphere[i]);
  for (int i = 0; i < 3; ++i) add("second_sphere_" + std::to_string(i + 1), r.second_sphere[i]);
  for (int i = 0; i < 3; ++i) add("omega4_theta_" + std::to_string(i + 1), r.omega4_theta[i]);
  add("extra_condition", r.extra_condition);
  add("antisymmetry_defect", r.antisymmetry);
  add("theta3", r.theta3);
  return rows;
}

ojson stats_to_json(const ConstancyStats& st) {
  return ojson{{"mean1", st.mean1}, {"mean2", st.mean2}, {"dev1", st.dev1},
               {"dev2", st.dev2},   {"umbilic_gap", st.umbilic_gap}};
}

ojson circle_to_json(const CircleData& c) {
  return ojson{{"center", vec4_to_json(c.center)},
               {"radius", c.radius},
               {"plane_normals", ojson::array({vec4_to_json(c.plane_normals[0]),
                                               vec4_to_json(c.plane_normals[1])})},
               {"plane_offsets", ojson::array({c.plane_offsets[0], c.plane_offsets[1]})},
               {"center_dev", c.center_dev}};
}

// Export sample positions: periodic axes step without the duplicate seam
// point, bounded axes sample cell centres (strictly inside open charts).
std::vector<Real> export_axis(Real lo, Real ext, int n, bool periodic) {
  std::vector<Real> out(n);
  for (int i = 0; i < n; ++i) {
    out[i] = periodic ? lo + ext * i / n : lo + ext * (i + 0.5) / n;
  }
  return out;
}

ojson base_report(const std::string& command, const RunConfig& config) {
  ojson j;
  j["schema"] = "v1";
  j["command"] = command;
  j["config"] = config_to_json(config);
  return j;
}

}  // namespace

Real RunConfig::resolved_residual_tol() const {
  if (residual_tol) return *residual_tol;
  return jet_kind == JetKind::analytic ? 1e-6 : 1e-4;
}

Real RunConfig::resolved_codazzi_tol() const {
  if (codazzi_tol) return *codazzi_tol;
  return jet_kind == JetKind::analytic ? 1e-4 : 1e-2;
}

Real RunConfig::resolved_gauss_tol() const {
  if (gauss_tol) return *gauss_tol;
  return jet_kind == JetKind::analytic ? 1e-5 : 1e-3;
}

RunConfig config_from_json(const ojson& j) {
  if (!j.is_object() || !j.contains("family")) {
    throw BadParameter("config: expected an object with a \"family\" section");
  }
  RunConfig config;
  config.family = family_from_json(j.at("family"));

  if (j.contains("grid")) {
    const ojson& g = j.at("grid");
    config.grid.n1 = g.contains("n1") ? g.at("n1").get<int>() : config.grid.n1;
    config.grid.n2 = g.contains("n2") ? g.at("n2").get<int>() : config.grid.n2;
    config.grid.margin_frac = json_real(g, "margin_frac", config.grid.margin_frac);
  }
  config.grid.validate();

  if (j.contains("jets")) {
    const std::string kind = j.at("jets").get<std::string>();
    if (kind == "analytic") {
      config.jet_kind = JetKind::analytic;
    } else if (kind == "finite-difference") {
      config.jet_kind = JetKind::finite_difference;
    } else {
      throw BadParameter("config: jets must be \"analytic\" or \"finite-difference\"");
    }
  }

  if (j.contains("steps")) {
    const ojson& s = j.at("steps");
    config.steps.h_fd = json_real(s, "h_fd", config.steps.h_fd);
    config.steps.h_frame = json_real(s, "h_frame", config.steps.h_frame);
    config.steps.h_form = json_real(s, "h_form", config.steps.h_form);
  }
  require_positive(config.steps.h_fd, "steps.h_fd");
  require_positive(config.steps.h_frame, "steps.h_frame");
  require_positive(config.steps.h_form, "steps.h_form");

  if (j.contains("tolerances")) {
    const ojson& t = j.at("tolerances");
    for (auto it = t.begin(); it != t.end(); ++it) {
      apply_tol_override(config, it.key(), it.value().get<Real>());
    }
  }

  if (j.contains("seeds")) {
    config.seeds.clear();
    for (const auto& s : j.at("seeds")) config.seeds.push_back(s.get<std::uint64_t>());
  }

  if (j.contains("outputs")) {
    const ojson& o = j.at("outputs");
    if (o.contains("dir")) config.out_dir = o.at("dir").get<std::string>();
    if (o.contains("csv")) config.export_csv = o.at("csv").get<bool>();
    if (o.contains("obj")) config.export_obj = o.at("obj").get<bool>();
    if (o.contains("curvature_csv")) {
      config.export_curvature_csv = o.at("curvature_csv").get<bool>();
    }
  }
  return config;
}

ojson config_to_json(const RunConfig& config) {
  ojson j;
  j["family"] = family_to_json(config.family);
  j["grid"] = ojson{{"n1", config.grid.n1},
                    {"n2", config.grid.n2},
                    {"margin_frac", config.grid.margin_frac}};
  j["jets"] =
      config.jet_kind == JetKind::analytic ? "analytic" : "finite-difference";
  j["steps"] = ojson{{"h_fd", config.steps.h_fd},
                     {"h_frame", config.steps.h_frame},
                     {"h_form", config.steps.h_form}};
  j["tolerances"] = ojson{{"const", config.ctols.tol_const},
                          {"umb", config.ctols.tol_umb},
                          {"geo", config.ctols.tol_geo},
                          {"family", config.ctols.tol_family},
                          {"residual", config.resolved_residual_tol()},
                          {"codazzi", config.resolved_codazzi_tol()},
                          {"gauss", config.resolved_gauss_tol()},
                          {"invariance", config.invariance_tol},
                          {"pullback", config.pullback_tol}};
  j["seeds"] = config.seeds;
  j["outputs"] = ojson{{"dir", config.out_dir},
                       {"csv", config.export_csv},
                       {"obj", config.export_obj},
                       {"curvature_csv", config.export_curvature_csv}};
  return j;
}

void apply_tol_override(RunConfig& config, const std::string& name, Real value) {
  if (name != "h_fd" && name != "h_frame" && name != "h_form") {
    require_positive(value, "tolerance");
  }
  if (name == "const") {
    config.ctols.tol_const = value;
  } else if (name == "umb") {
    config.ctols.tol_umb = value;
  } else if (name == "geo") {
    config.ctols.tol_geo = value;
  } else if (name == "family") {
    config.ctols.tol_family = value;
  } else if (name == "residual") {
    config.residual_tol = value;
  } else if (name == "codazzi") {
    config.codazzi_tol = value;
  } else if (name == "gauss") {
    config.gauss_tol = value;
  } else if (name == "invariance") {
    config.invariance_tol = value;
  } else if (name == "pullback") {
    config.pullback_tol = value;
  } else if (name == "h_fd") {
    require_positive(value, "h_fd");
    config.steps.h_fd = value;
  } else if (name == "h_frame") {
    require_positive(value, "h_frame");
    config.steps.h_frame = value;
  } else if (name == "h_form") {
    require_positive(value, "h_form");
    config.steps.h_form = value;
  } else {
    throw BadParameter("unknown tolerance \"" + name + "\"");
  }
}

ojson classification_to_json(const Classification& c) {
  ojson j;
  j["schema"] = "v1";
  if (const auto* great = std::get_if<GreatSphereData>(&c)) {
    j["variant"] = "great_sphere";
    j["hyperplane_normal"] = vec4_to_json(great->hyperplane_normal);
  } else if (const auto* sphere = std::get_if<RoundSphereData>(&c)) {
    j["variant"] = "round_sphere";
    j["lambda"] = sphere->lambda;
    j["center"] = vec4_to_json(sphere->center);
    j["radius"] = sphere->radius;
    j["center_dev"] = sphere->center_dev;
  } else if (const auto* torus = std::get_if<FlatTorusData>(&c)) {
    j["variant"] = "flat_torus";
    j["k1"] = torus->recon.k1;
    j["k2"] = torus->recon.k2;
    j["a_rec"] = torus->recon.a_rec;
    j["b_rec"] = torus->recon.b_rec;
    j["circle1"] = circle_to_json(torus->recon.circle1);
    j["circle2"] = circle_to_json(torus->recon.circle2);
    j["plane_orthogonality_defect"] = torus->recon.plane_orthogonality_defect;
    j["ccc_residual"] = torus->recon.ccc_residual;
  } else {
    j["variant"] = "non_constant";
    j["stats"] = stats_to_json(std::get<NonConstantData>(c).stats);
  }
  return j;
}

namespace {

SurfacePatch patch_for(const RunConfig& config) {
  SurfacePatch patch = make_patch(config.family);
  if (config.jet_kind == JetKind::finite_difference) {
    patch = with_fd_jets(patch, config.steps.h_fd);
  }
  return patch;
}

}  // namespace

CmdResult cmd_generate(const RunConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const SurfacePatch patch = make_patch(config.family);
  const Domain& dom = patch.domain;
  const auto u1s = export_axis(dom.lo1, dom.ext1(), config.grid.n1, dom.periodic1);
  const auto u2s = export_axis(dom.lo2, dom.ext2(), config.grid.n2, dom.periodic2);

  fs::create_directories(config.out_dir);
  ojson outputs;
  int pole_collisions = 0;

  std::vector<Vec4> samples;
  samples.reserve(u1s.size() * u2s.size());
  for (const Real u2 : u2s) {
    for (const Real u1 : u1s) samples.push_back(eval_jet(patch, {u1, u2}).x);
  }

  if (config.export_csv) {
    const fs::path path = fs::path(config.out_dir) / "grid.csv";
    auto out = open_output(path);
    out << "u1,u2,x1,x2,x3,x4\n";
    std::size_t idx = 0;
    for (const Real u2 : u2s) {
      for (const Real u1 : u1s) {
        const Vec4& x = samples[idx++];
        out << u1 << ',' << u2 << ',' << x[0] << ',' << x[1] << ',' << x[2] << ','
            << x[3] << '\n';
      }
    }
    outputs["csv"] = path.string();
    outputs["rows"] = samples.size();
  }

  if (config.export_obj) {
    const fs::path path = fs::path(config.out_dir) / "mesh.obj";
    auto out = open_output(path);
    out << "# stereographic projection from (0, 0, 0, -1)\n";
    for (const Vec4& x : samples) {
      Real denom = 1.0 + x[3];
      // distance to the pole is sqrt(2*(1+x4)); clamp the projection there
      if (2.0 * denom < 1e-6) {
        ++pole_collisions;
        denom = 5e-7;
      }
      out << "v " << x[0] / denom << ' ' << x[1] / denom << ' ' << x[2] / denom << '\n';
    }
    const int n1 = config.grid.n1, n2 = config.grid.n2;
    const int rows = dom.periodic2 ? n2 : n2 - 1;
    const int cols = dom.periodic1 ? n1 : n1 - 1;
    int faces = 0;
    for (int j = 0; j < rows; ++j) {
      for (int i = 0; i < cols; ++i) {
        const int i1 = (i + 1) % n1, j1 = (j + 1) % n2;
        out << "f " << j * n1 + i + 1 << ' ' << j * n1 + i1 + 1 << ' '
            << j1 * n1 + i1 + 1 << ' ' << j1 * n1 + i + 1 << '\n';
        ++faces;
      }
    }
    outputs["obj"] = path.string();
    outputs["vertices"] = samples.size();
    outputs["faces"] = faces;
    outputs["pole_collisions"] = pole_collisions;
  }

  ojson report = base_report("generate", config);
  report["outputs"] = outputs;
  report["timing_ms"] = elapsed_ms(t0);
  return {0, report};
}

CmdResult cmd_analyze(const RunConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const SurfacePatch patch = patch_for(config);

  const StructureResiduals structural =
      structural_residuals(patch, config.grid, config.steps);
  const CodazziResiduals codazzi =
      codazzi_residuals(patch, config.grid, config.steps, config.ctols.tol_umb);

  const auto pts = grid_points(patch.domain, config.grid);
  struct Row {
    Real l1, l2, K_ext, K_int, H, cross;
  };
  std::vector<Row> values(pts.size());
  parallel_for(config.grid.n2, [&](int row) {
    for (int col = 0; col < config.grid.n1; ++col) {
      const std::size_t idx = static_cast<std::size_t>(row) * config.grid.n1 + col;
      const CurvatureReport r = curvature_report(patch, pts[idx], config.steps);
      const PrincipalData pd = principal_curvatures(patch, pts[idx], config.steps.h_frame);
      values[idx] = {pd.lambda1, pd.lambda2, r.K_ext, r.K_int, r.H, r.cross_check};
    }
  });

  Real l1_mean = 0, l2_mean = 0, K_mean = 0, H_mean = 0, cross_max = 0;
  for (const Row& r : values) {
    l1_mean += r.l1;
    l2_mean += r.l2;
    K_mean += r.K_ext;
    H_mean += r.H;
    cross_max = std::max(cross_max, r.cross);
  }
  const Real n = static_cast<Real>(values.size());
  l1_mean /= n;
  l2_mean /= n;
  K_mean /= n;
  H_mean /= n;

  fs::create_directories(config.out_dir);
  ojson report = base_report("analyze", config);
  const std::string grid_label =
      std::to_string(config.grid.n1) + "x" + std::to_string(config.grid.n2);
  report["structural_residuals"] = ojson{{"grid", grid_label},
                                         {"table", structural_to_json(structural)},
                                         {"max", structural.max_residual()}};
  report["curvature"] = ojson{{"lambda1_mean", l1_mean},
                              {"lambda2_mean", l2_mean},
                              {"K_ext_mean", K_mean},
                              {"H_mean", H_mean},
                              {"gauss_cross_check_max", cross_max}};
  report["codazzi"] = ojson{{"r1", codazzi.r1}, {"r2", codazzi.r2}};
  report["classification"] = ojson{{"skipped", true}};
  report["invariance"] = ojson{{"skipped", true}};

  if (config.export_curvature_csv) {
    const fs::path path = fs::path(config.out_dir) / "curvature.csv";
    auto out = open_output(path);
    out << "u1,u2,lambda1,lambda2,K_ext,K_int,H\n";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      out << pts[i].u1 << ',' << pts[i].u2 << ',' << values[i].l1 << ',' << values[i].l2
          << ',' << values[i].K_ext << ',' << values[i].K_int << ',' << values[i].H
          << '\n';
    }
    report["curvature"]["csv"] = path.string();
  }

  const bool pass = structural.max_residual() < config.resolved_residual_tol() &&
                    std::max(codazzi.r1, codazzi.r2) < config.resolved_codazzi_tol() &&
                    cross_max < config.resolved_gauss_tol();
  report["pass"] = pass;
  report["timing_ms"] = elapsed_ms(t0);
  return {pass ? 0 : 2, report};
}

CmdResult cmd_classify(const RunConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const SurfacePatch patch = patch_for(config);
  const ConstancyStats stats = sample_constancy(patch, config.grid, config.steps);
  const Classification result =
      classify_from_stats(patch, config.grid, stats, config.ctols, config.steps);

  ojson report = base_report("classify", config);
  report["constancy"] = stats_to_json(stats);
  report["classification"] = classification_to_json(result);
  report["timing_ms"] = elapsed_ms(t0);
  const bool homogeneous = !std::holds_alternative<NonConstantData>(result);
  return {homogeneous ? 0 : 1, report};
}

CmdResult cmd_verify_isometry(const RunConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  if (config.seeds.empty()) {
    throw BadParameter("verify-isometry: seed list must not be empty");
  }
  const SurfacePatch patch = patch_for(config);
  const auto rows = invariance_suite(patch, config.seeds, config.grid, config.steps);

  bool pass = true;
  ojson table = ojson::array();
  for (const InvarianceRow& r : rows) {
    const Real pull =
        pullback_check(patch, random_so4(r.seed), config.grid, config.steps.h_frame);
    pass = pass && r.max_dK < config.invariance_tol &&
           r.max_dlambda1 < config.invariance_tol &&
           r.max_dlambda2 < config.invariance_tol && pull < config.pullback_tol;
    table.push_back(ojson{{"seed", r.seed},
                          {"max_dK", r.max_dK},
                          {"max_dlambda1", r.max_dlambda1},
                          {"max_dlambda2", r.max_dlambda2},
                          {"pullback", pull}});
  }

  ojson report = base_report("verify-isometry", config);
  report["invariance"] = table;
  report["pass"] = pass;
  report["timing_ms"] = elapsed_ms(t0);
  return {pass ? 0 : 2, report};
}

int run_command(const std::string& command, const std::string& config_path,
                const CliOverrides& overrides, std::ostream& log, std::ostream& err) {
  try {
    std::ifstream in(config_path);
    if (!in) throw BadParameter("cannot read config file " + config_path);
    ojson parsed;
    try {
      parsed = ojson::parse(in);
    } catch (const ojson::exception& e) {
      throw BadParameter(std::string("config: ") + e.what());
    }
    RunConfig config = config_from_json(parsed);

    if (overrides.out_dir) config.out_dir = *overrides.out_dir;
    if (overrides.grid) {
      const std::string& g = *overrides.grid;
      const auto x = g.find('x');
      if (x == std::string::npos) throw BadParameter("--grid expects N1xN2");
      try {
        config.grid.n1 = std::stoi(g.substr(0, x));
        config.grid.n2 = std::stoi(g.substr(x + 1));
      } catch (const std::exception&) {
        throw BadParameter("--grid expects N1xN2");
      }
      config.grid.validate();
    }
    for (const std::string& kv : overrides.tols) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw BadParameter("--tol expects name=value");
      Real value = 0;
      try {
        value = std::stod(kv.substr(eq + 1));
      } catch (const std::exception&) {
        throw BadParameter("--tol expects name=value");
      }
      apply_tol_override(config, kv.substr(0, eq), value);
    }
    if (!overrides.seeds.empty()) config.seeds = overrides.seeds;

    CmdResult result;
    if (command == "generate") {
      result = cmd_generate(config);
    } else if (command == "analyze") {
      result = cmd_analyze(config);
    } else if (command == "classify") {
      result = cmd_classify(config);
    } else if (command == "verify-isometry") {
      result = cmd_verify_isometry(config);
    } else {
      throw BadParameter("unknown command \"" + command + "\"");
    }

    fs::create_directories(config.out_dir);
    const fs::path report_path = fs::path(config.out_dir) / "report.json";
    auto out = open_output(report_path);
    out << result.report.dump(2) << '\n';
    log << command << ": exit " << result.exit_code << ", report " << report_path.string()
        << '\n';
    return result.exit_code;
  } catch (const BadParameter& e) {
    err << "invalid input: " << e.what() << '\n';
    return 3;
  } catch (const UnsupportedSpec& e) {
    err << "invalid input: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace frameforge
