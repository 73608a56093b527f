#pragma once

#include <json.hpp>

#include "frameforge/patch.hpp"

namespace frameforge {

using ojson = nlohmann::ordered_json;

ojson family_to_json(const FamilySpec& spec);
FamilySpec family_from_json(const ojson& j);

/// Builds the generator patch described by the family spec (Transformed
/// wrappers become apply_isometry compositions).
SurfacePatch make_patch(const FamilySpec& spec);

ojson vec4_to_json(const Vec4& v);
Vec4 vec4_from_json(const ojson& j);
ojson mat4_to_json(const Mat4& m);
Mat4 mat4_from_json(const ojson& j);

}  // namespace frameforge
