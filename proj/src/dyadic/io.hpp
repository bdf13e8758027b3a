#pragma once

#include <json.hpp>

#include "dyadic/grid_function.hpp"

namespace dyadlab::dyadic {

nlohmann::json to_json(const GridFunction& f);
GridFunction grid_function_from_json(const nlohmann::json& j);

nlohmann::json cube_to_json(const Lattice& lat, const Cube& q);
Cube cube_from_json(const Lattice& lat, const nlohmann::json& j);

/// Complex numbers travel as [re, im].
nlohmann::json complex_to_json(cplx z);
cplx complex_from_json(const nlohmann::json& j);

}  // namespace dyadlab::dyadic
