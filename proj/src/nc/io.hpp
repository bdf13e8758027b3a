#pragma once

#include <json.hpp>

#include "nc/mixed.hpp"

namespace dyadlab::nc {

/// {N, values: row-major [re, im] pairs}.
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

/// {N, weights: [[...] per level], leaves: [[[re, im], ...] per leaf]}.
nlohmann::json nested_to_json(const NestedFunction& f, const MixedSpace& space);
std::pair<NestedFunction, MixedSpace> nested_from_json(const nlohmann::json& j);

}  // namespace dyadlab::nc
