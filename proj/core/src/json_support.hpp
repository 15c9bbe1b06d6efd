#pragma once

#include "electroconvect/mesh.hpp"

#include <nlohmann/json.hpp>

namespace electroconvect::detail {

inline nlohmann::json mesh_params_json(const MeshParams& p) {
  if (p.kind == MeshKind::rectangle)
    return {{"kind", "rectangle"}, {"nx", p.n1}, {"ny", p.n2}, {"lx", p.a}, {"ly", p.b}};
  return {{"kind", "annulus"}, {"nr", p.n1}, {"ntheta", p.n2}, {"r_inner", p.a}, {"r_outer", p.b}};
}

}  // namespace electroconvect::detail
