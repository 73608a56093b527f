#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "frameforge/report.hpp"

using namespace frameforge;

namespace {

namespace fs = std::filesystem;

const Real kInvSqrt2 = 1.0 / std::sqrt(2.0);

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("frameforge_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int count_lines_starting_with(const fs::path& path, const std::string& prefix) {
  std::ifstream in(path);
  REQUIRE(in.good());
  int count = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(prefix, 0) == 0) ++count;
  }
  return count;
}

RunConfig torus_config(const std::string& out, int n = 12) {
  RunConfig config;
  config.family = TorusAB{0.6, 0.8};
  config.grid = {n, n};
  config.out_dir = out;
  return config;
}

// Plane rotation in span{u, v} carrying unit vector u onto unit vector v.
Mat4 plane_rotation(const Vec4& u, const Vec4& v) {
  const Vec4 w = (v - u.dot(v) * u).normalized();
  const Real c = u.dot(v), s = std::sqrt(std::max<Real>(0, 1 - c * c));
  return Mat4::Identity() + (c - 1) * (u * u.transpose() + w * w.transpose()) +
         s * (w * u.transpose() - u * w.transpose());
}

}  // namespace

TEST_CASE("config defaults and validation") {
  const RunConfig config = config_from_json(ojson{{"family", {{"type", "torus"}, {"a", 0.6}, {"b", 0.8}}}});
  CHECK(config.grid.n1 == 32);
  CHECK(config.jet_kind == JetKind::analytic);
  CHECK(config.resolved_residual_tol() == doctest::Approx(1e-6));
  CHECK(config.seeds.size() == 10);

  CHECK_THROWS_AS(config_from_json(ojson{{"grid", {{"n1", 8}}}}), BadParameter);
  CHECK_THROWS_AS(config_from_json(ojson{
                      {"family", {{"type", "torus"}, {"a", 0.6}, {"b", 0.8}}},
                      {"grid", {{"n1", 2}, {"n2", 2}}}}),
                  BadParameter);
  CHECK_THROWS_AS(config_from_json(ojson{
                      {"family", {{"type", "torus"}, {"a", 0.6}, {"b", 0.8}}},
                      {"jets", "symbolic"}}),
                  BadParameter);

  RunConfig override_target = torus_config("unused");
  apply_tol_override(override_target, "residual", 1e-5);
  CHECK(override_target.resolved_residual_tol() == doctest::Approx(1e-5));
  CHECK_THROWS_AS(apply_tol_override(override_target, "bogus", 1.0), BadParameter);
}

TEST_CASE("family specs round trip through JSON with identical jets") {
  std::vector<FamilySpec> specs = {
      SphereCap{0.6}, TorusAB{0.28, 0.96}, PerturbedTorus{0.6, 0.8, 0.05, 3},
      Transformed{random_so4(11),
                  std::make_shared<const FamilySpec>(FamilySpec{TorusAB{0.6, 0.8}})}};
  for (const FamilySpec& spec : specs) {
    const FamilySpec back = family_from_json(family_to_json(spec));
    const SurfacePatch a = make_patch(spec);
    const SurfacePatch b = make_patch(back);
    for (const ParamPoint& p : grid_points(a.domain, {5, 5})) {
      CHECK((eval_jet(a, p).x - eval_jet(b, p).x).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("reflections are rejected at family validation") {
  Mat4 reflect = Mat4::Identity();
  reflect(3, 3) = -1;
  ojson j;
  j["type"] = "transformed";
  j["g"] = mat4_to_json(reflect);
  j["inner"] = ojson{{"type", "torus"}, {"a", 0.6}, {"b", 0.8}};
  CHECK_THROWS_AS(family_from_json(j), BadParameter);
}

TEST_CASE("cmd_generate writes CSV samples on the sphere") {
  const fs::path dir = temp_dir("gen_sphere");
  RunConfig config;
  config.family = SphereCap{0.6};
  config.grid = {16, 16};
  config.out_dir = dir.string();
  const CmdResult result = cmd_generate(config);
  CHECK(result.exit_code == 0);
  CHECK(result.report.at("outputs").at("rows").get<int>() == 256);

  std::ifstream in(dir / "grid.csv");
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "u1,u2,x1,x2,x3,x4");
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    Real u1, u2, x1, x2, x3, x4;
    ss >> u1 >> u2 >> x1 >> x2 >> x3 >> x4;
    CHECK(std::abs(x1 * x1 + x2 * x2 + x3 * x3 + x4 * x4 - 1.0) < 1e-12);
    ++rows;
  }
  CHECK(rows == 256);
}

TEST_CASE("cmd_generate mesh topology") {
  SUBCASE("torus wraps both axes") {
    const fs::path dir = temp_dir("gen_torus");
    RunConfig config = torus_config(dir.string(), 16);
    config.family = TorusAB{kInvSqrt2, kInvSqrt2};
    config.export_obj = true;
    const CmdResult result = cmd_generate(config);
    CHECK(result.report.at("outputs").at("vertices").get<int>() == 256);
    CHECK(result.report.at("outputs").at("faces").get<int>() == 256);
    CHECK(count_lines_starting_with(dir / "mesh.obj", "v ") == 256);
    CHECK(count_lines_starting_with(dir / "mesh.obj", "f ") == 256);
  }

  SUBCASE("sphere chart wraps only the longitude") {
    const fs::path dir = temp_dir("gen_cap");
    RunConfig config;
    config.family = SphereCap{0.6};
    config.grid = {16, 16};
    config.out_dir = dir.string();
    config.export_obj = true;
    const CmdResult result = cmd_generate(config);
    CHECK(result.report.at("outputs").at("faces").get<int>() == 16 * 15);
    CHECK(result.report.at("outputs").at("pole_collisions").get<int>() == 0);
  }
}

TEST_CASE("cmd_generate clamps samples at the stereographic pole") {
  // Rotate the cap so the chart origin lands exactly on the projection pole.
  const SurfacePatch cap = make_sphere_family(0.6);
  const Vec4 hit = eval_jet(cap, {0, 0}).x;
  const IsometryG g = IsometryG::from_matrix(plane_rotation(hit, Vec4(0, 0, 0, -1)));

  const fs::path dir = temp_dir("gen_pole");
  RunConfig config;
  config.family =
      Transformed{g, std::make_shared<const FamilySpec>(FamilySpec{SphereCap{0.6}})};
  config.grid = {16, 15};  // odd row count puts a sample row at u2 = 0
  config.out_dir = dir.string();
  config.export_obj = true;
  const CmdResult result = cmd_generate(config);
  CHECK(result.report.at("outputs").at("pole_collisions").get<int>() >= 1);
}

TEST_CASE("cmd_analyze passes on generators and reports residuals") {
  const fs::path dir = temp_dir("analyze");
  RunConfig config = torus_config(dir.string());
  config.export_curvature_csv = true;
  const CmdResult result = cmd_analyze(config);
  CHECK(result.exit_code == 0);
  CHECK(result.report.at("pass").get<bool>());
  CHECK(result.report.at("structural_residuals").at("max").get<Real>() < 1e-6);
  CHECK(result.report.at("curvature").at("gauss_cross_check_max").get<Real>() < 1e-5);
  CHECK(count_lines_starting_with(dir / "curvature.csv", "") == 12 * 12 + 1);

  RunConfig pert = torus_config((dir / "pert").string());
  pert.family = PerturbedTorus{kInvSqrt2, kInvSqrt2, 0.05, 3};
  CHECK(cmd_analyze(pert).exit_code == 0);  // identities hold for any surface

  // Forcing an unreachable threshold flips the exit code to 2.
  RunConfig strict = torus_config((dir / "strict").string());
  apply_tol_override(strict, "residual", 1e-14);
  CHECK(cmd_analyze(strict).exit_code == 2);
}

TEST_CASE("cmd_classify exit codes per variant") {
  const fs::path dir = temp_dir("classify");
  RunConfig torus = torus_config((dir / "t").string());
  const CmdResult ok = cmd_classify(torus);
  CHECK(ok.exit_code == 0);
  CHECK(ok.report.at("classification").at("variant") == "flat_torus");
  CHECK(ok.report.at("classification").at("a_rec").get<Real>() ==
        doctest::Approx(0.6).epsilon(1e-6));

  RunConfig pert = torus_config((dir / "p").string());
  pert.family = PerturbedTorus{kInvSqrt2, kInvSqrt2, 0.05, 3};
  const CmdResult rejected = cmd_classify(pert);
  CHECK(rejected.exit_code == 1);
  CHECK(rejected.report.at("classification").at("variant") == "non_constant");

  RunConfig cap = torus_config((dir / "s").string());
  cap.family = SphereCap{0.6};
  const CmdResult sphere = cmd_classify(cap);
  CHECK(sphere.exit_code == 0);
  CHECK(sphere.report.at("classification").at("variant") == "round_sphere");
}

TEST_CASE("cmd_verify_isometry bounds the invariance maxima") {
  const fs::path dir = temp_dir("verify");
  RunConfig config = torus_config(dir.string(), 10);
  config.seeds = {1, 2};
  const CmdResult result = cmd_verify_isometry(config);
  CHECK(result.exit_code == 0);
  for (const auto& row : result.report.at("invariance")) {
    CHECK(row.at("max_dK").get<Real>() < 1e-8);
    CHECK(row.at("pullback").get<Real>() < 1e-9);
  }

  apply_tol_override(config, "pullback", 1e-16);
  CHECK(cmd_verify_isometry(config).exit_code == 2);

  config.seeds = {};
  CHECK_THROWS_AS(cmd_verify_isometry(config), BadParameter);
}

TEST_CASE("reports are deterministic up to the timing field") {
  const fs::path dir = temp_dir("determinism");
  RunConfig config = torus_config(dir.string(), 10);
  CmdResult a = cmd_classify(config);
  CmdResult b = cmd_classify(config);
  a.report.erase("timing_ms");
  b.report.erase("timing_ms");
  CHECK(a.report.dump() == b.report.dump());
}

TEST_CASE("run_command maps errors to exit codes") {
  const fs::path dir = temp_dir("run_cmd");
  std::ostringstream log, err;

  {
    std::ofstream cfg(dir / "torus.json");
    cfg << R"({"family": {"type": "torus", "a": 0.6, "b": 0.8}, "grid": {"n1": 10, "n2": 10}})";
  }
  CliOverrides overrides;
  overrides.out_dir = (dir / "out").string();
  CHECK(run_command("classify", (dir / "torus.json").string(), overrides, log, err) == 0);
  CHECK(fs::exists(dir / "out" / "report.json"));

  CHECK(run_command("classify", (dir / "missing.json").string(), overrides, log, err) == 3);

  {
    std::ofstream cfg(dir / "broken.json");
    cfg << "{not json";
  }
  CHECK(run_command("classify", (dir / "broken.json").string(), overrides, log, err) == 3);

  CliOverrides bad_grid = overrides;
  bad_grid.grid = "2x2";
  CHECK(run_command("classify", (dir / "torus.json").string(), bad_grid, log, err) == 3);

  CliOverrides bad_tol = overrides;
  bad_tol.tols = {"nope=1"};
  CHECK(run_command("classify", (dir / "torus.json").string(), bad_tol, log, err) == 3);

  CHECK(run_command("frobnicate", (dir / "torus.json").string(), overrides, log, err) == 3);

  CliOverrides seeds = overrides;
  seeds.seeds = {4, 5};
  CHECK(run_command("verify-isometry", (dir / "torus.json").string(), seeds, log, err) == 0);

  // A reflection smuggled in as an isometry dies at config validation.
  {
    ojson cfg;
    Mat4 reflect = Mat4::Identity();
    reflect(0, 0) = -1;
    cfg["family"] = ojson{{"type", "transformed"},
                          {"g", mat4_to_json(reflect)},
                          {"inner", {{"type", "torus"}, {"a", 0.6}, {"b", 0.8}}}};
    std::ofstream out(dir / "reflection.json");
    out << cfg.dump();
  }
  CHECK(run_command("verify-isometry", (dir / "reflection.json").string(), seeds, log, err) ==
        3);
}
