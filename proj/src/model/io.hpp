#pragma once

#include <json.hpp>

#include "model/paraproduct.hpp"
#include "model/shift.hpp"

namespace dyadlab::model {

nlohmann::json lattice_to_json(const Lattice& lat);
/// Reads {dim, depth, shift?} from the top level of `j`.
Lattice lattice_from_json(const nlohmann::json& j);

/// {dim, depth, shift, n, complexity, cancellative (1-based), coeffs: [{K, Qs, re, im}]}
/// with cubes as {level, index} and Qs entries carrying an optional eta bitmask.
nlohmann::json to_json(const ShiftSpec& s);
ShiftSpec shift_from_json(const nlohmann::json& j, bool clamp = false);

/// {dim, depth, shift, n, j0 (1-based), coeffs: [{K, eta, re, im}]}.
nlohmann::json to_json(const ParaproductSpec& p);
ParaproductSpec paraproduct_from_json(const nlohmann::json& j);

}  // namespace dyadlab::model
