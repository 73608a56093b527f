#include "frameforge/serialize.hpp"

namespace frameforge {

ojson vec4_to_json(const Vec4& v) { return ojson::array({v[0], v[1], v[2], v[3]}); }

Vec4 vec4_from_json(const ojson& j) {
  if (!j.is_array() || j.size() != 4) throw BadParameter("expected a 4-vector");
  return Vec4(j[0].get<Real>(), j[1].get<Real>(), j[2].get<Real>(), j[3].get<Real>());
}

ojson mat4_to_json(const Mat4& m) {
  ojson rows = ojson::array();
  for (int i = 0; i < 4; ++i) {
    rows.push_back(ojson::array({m(i, 0), m(i, 1), m(i, 2), m(i, 3)}));
  }
  return rows;
}

Mat4 mat4_from_json(const ojson& j) {
  if (!j.is_array() || j.size() != 4) throw BadParameter("expected a 4x4 matrix");
  Mat4 m;
  for (int i = 0; i < 4; ++i) {
    if (!j[i].is_array() || j[i].size() != 4) throw BadParameter("expected a 4x4 matrix");
    for (int k = 0; k < 4; ++k) m(i, k) = j[i][k].get<Real>();
  }
  return m;
}

ojson family_to_json(const FamilySpec& spec) {
  ojson j;
  if (const auto* cap = std::get_if<SphereCap>(&spec)) {
    j["type"] = "sphere_cap";
    j["k"] = cap->k;
  } else if (const auto* torus = std::get_if<TorusAB>(&spec)) {
    j["type"] = "torus";
    j["a"] = torus->a;
    j["b"] = torus->b;
  } else if (const auto* pert = std::get_if<PerturbedTorus>(&spec)) {
    j["type"] = "perturbed_torus";
    j["a"] = pert->a;
    j["b"] = pert->b;
    j["eps"] = pert->eps;
    j["mode"] = pert->mode;
  } else {
    const auto& wrapped = std::get<Transformed>(spec);
    j["type"] = "transformed";
    j["g"] = mat4_to_json(wrapped.g.m);
    j["inner"] = family_to_json(*wrapped.inner);
  }
  return j;
}

FamilySpec family_from_json(const ojson& j) {
  if (!j.is_object() || !j.contains("type")) {
    throw BadParameter("family: expected an object with a \"type\" field");
  }
  const std::string type = j.at("type").get<std::string>();
  try {
    if (type == "sphere_cap") return SphereCap{j.at("k").get<Real>()};
    if (type == "torus") return TorusAB{j.at("a").get<Real>(), j.at("b").get<Real>()};
    if (type == "perturbed_torus") {
      return PerturbedTorus{j.at("a").get<Real>(), j.at("b").get<Real>(),
                            j.at("eps").get<Real>(), j.at("mode").get<int>()};
    }
    if (type == "transformed") {
      return Transformed{
          IsometryG::from_matrix(mat4_from_json(j.at("g"))),
          std::make_shared<const FamilySpec>(family_from_json(j.at("inner")))};
    }
  } catch (const ojson::exception& e) {
    throw BadParameter(std::string("family: ") + e.what());
  }
  throw BadParameter("family: unknown type \"" + type + "\"");
}

SurfacePatch make_patch(const FamilySpec& spec) {
  if (const auto* cap = std::get_if<SphereCap>(&spec)) {
    return make_sphere_family(cap->k);
  }
  if (const auto* torus = std::get_if<TorusAB>(&spec)) {
    return make_torus_family(torus->a, torus->b);
  }
  if (const auto* pert = std::get_if<PerturbedTorus>(&spec)) {
    return make_perturbed_torus(pert->a, pert->b, pert->eps, pert->mode);
  }
  const auto& wrapped = std::get<Transformed>(spec);
  return apply_isometry(wrapped.g, make_patch(*wrapped.inner));
}

}  // namespace frameforge
