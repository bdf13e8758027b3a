#include "nc/io.hpp"

#include "dyadic/io.hpp"

namespace dyadlab::nc {

using nlohmann::json;

namespace {

json flat_values(const Matrix& m) {
  json values = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) values.push_back(dyadic::complex_to_json(m(r, c)));
  return values;
}

Matrix from_values(const json& values, int n) {
  require(values.is_array() && values.size() == static_cast<std::size_t>(n) * n,
          "values: expected N*N entries", ErrorCode::Parse);
  Matrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = dyadic::complex_from_json(values[static_cast<std::size_t>(r * n + c)]);
  return m;
}

}  // namespace

json matrix_to_json(const Matrix& m) { return {{"N", m.rows()}, {"values", flat_values(m)}}; }

Matrix matrix_from_json(const json& j) {
  try {
    return from_values(j.at("values"), j.at("N").get<int>());
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, std::string("matrix: ") + e.what());
  }
}

json nested_to_json(const NestedFunction& f, const MixedSpace& space) {
  json leaves = json::array();
  for (const auto& m : f.leaves) leaves.push_back(flat_values(m));
  return {{"N", space.N}, {"weights", space.weights}, {"leaves", std::move(leaves)}};
}

std::pair<NestedFunction, MixedSpace> nested_from_json(const json& j) {
  try {
    MixedSpace space;
    space.N = j.at("N").get<int>();
    space.weights = j.at("weights").get<std::vector<std::vector<double>>>();
    space.validate();
    NestedFunction f;
    const auto& leaves = j.at("leaves");
    require(leaves.is_array() && leaves.size() == space.leaves_below(space.levels()),
            "leaves: expected one entry per atom tuple", ErrorCode::Parse);
    for (const auto& l : leaves) f.leaves.push_back(from_values(l, space.N));
    return {std::move(f), std::move(space)};
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, std::string("nested function: ") + e.what());
  }
}

}  // namespace dyadlab::nc
