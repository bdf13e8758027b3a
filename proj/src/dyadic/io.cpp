#include "dyadic/io.hpp"

namespace dyadlab::dyadic {

using nlohmann::json;

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(),
          "complex value must be [re, im]", ErrorCode::Parse);
  return {j[0].get<double>(), j[1].get<double>()};
}

json to_json(const GridFunction& f) {
  const auto& lat = f.lattice();
  json values = json::array();
  for (const auto& v : f.data()) values.push_back(complex_to_json(v));
  return json{{"dim", lat.dim()},
              {"depth", lat.depth()},
              {"shift", lat.shift()},
              {"kind", f.kind() == ValueKind::Scalar ? "scalar" : "matrix"},
              {"N", f.n()},
              {"values", std::move(values)}};
}

GridFunction grid_function_from_json(const json& j) {
  try {
    const int dim = j.at("dim").get<int>();
    const int depth = j.at("depth").get<int>();
    std::vector<double> shift(static_cast<std::size_t>(dim), 0.0);
    if (j.contains("shift")) shift = j.at("shift").get<std::vector<double>>();
    const Lattice lat(dim, depth, shift);
    const auto kind_s = j.at("kind").get<std::string>();
    require(kind_s == "scalar" || kind_s == "matrix", "kind must be 'scalar' or 'matrix'", ErrorCode::Parse);
    const auto kind = kind_s == "scalar" ? ValueKind::Scalar : ValueKind::Matrix;
    const int n = kind == ValueKind::Scalar ? 1 : j.at("N").get<int>();
    GridFunction f(lat, kind, n);
    const auto& values = j.at("values");
    require(values.is_array() && values.size() == f.data().size(),
            "values: expected " + std::to_string(f.data().size()) + " entries", ErrorCode::Parse);
    for (std::size_t i = 0; i < values.size(); ++i) f.data()[i] = complex_from_json(values[i]);
    return f;
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, std::string("grid function: ") + e.what());
  }
}

json cube_to_json(const Lattice& lat, const Cube& q) {
  return json{{"level", q.level}, {"index", lat.coords(q)}};
}

Cube cube_from_json(const Lattice& lat, const json& j) {
  try {
    const auto idx = j.at("index").get<std::vector<std::uint64_t>>();
    return lat.cube(j.at("level").get<int>(), idx);
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, std::string("cube: ") + e.what());
  }
}

}  // namespace dyadlab::dyadic
