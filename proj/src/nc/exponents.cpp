#include "nc/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "common/types.hpp"

namespace dyadlab::nc {

namespace {
double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }
}  // namespace

ExponentTable::ExponentTable(std::vector<std::vector<double>> p) : p_(std::move(p)) {
  require(!p_.empty(), "exponent table needs at least one tuple entry");
  const std::size_t levels = p_.front().size();
  require(levels >= 1, "exponent table needs at least level 0");
  for (const auto& col : p_) {
    require(col.size() == levels, "every tuple entry needs the same number of levels");
    for (double v : col) require(v > 1.0, "exponents must lie in (1, ∞]");
  }
  for (std::size_t s = 0; s < levels; ++s) {
    double sum = 0.0;
    for (const auto& col : p_) sum += inv(col[s]);
    require(std::abs(sum - 1.0) <= 1e-12,
            "level " + std::to_string(s) + " is not a Hölder tuple: Σ 1/p = " + std::to_string(sum),
            ErrorCode::Domain);
  }
}

ExponentTable ExponentTable::tuple(const std::vector<double>& ps) {
  std::vector<std::vector<double>> p;
  for (double v : ps) p.push_back({v});
  return ExponentTable(std::move(p));
}

void ExponentTable::check_index_set(const std::vector<int>& J) const {
  require(!J.empty(), "index set J must be nonempty");
  std::vector<int> sorted = J;
  std::sort(sorted.begin(), sorted.end());
  require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), "index set J has duplicates");
  require(sorted.front() >= 0 && sorted.back() < m(), "index set J out of range");
}

double ExponentTable::q(const std::vector<int>& J, int s) const {
  check_index_set(J);
  double sum = 0.0;
  for (int j : J) sum += inv(p(j, s));
  return sum == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / sum;
}

double ExponentTable::p_dual(const std::vector<int>& J, int s) const {
  check_index_set(J);
  double sum = 0.0;
  for (int j : J) sum += inv(p(j, s));
  const double rest = 1.0 - sum;
  return rest <= 1e-14 ? std::numeric_limits<double>::infinity() : 1.0 / rest;
}

std::vector<double> ExponentTable::q_column(const std::vector<int>& J) const {
  std::vector<double> out;
  for (int s = 0; s <= depth(); ++s) out.push_back(q(J, s));
  return out;
}

nlohmann::json ExponentTable::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& col : p_) {
    nlohmann::json row = nlohmann::json::array();
    for (double v : col) row.push_back(std::isinf(v) ? nlohmann::json("inf") : nlohmann::json(v));
    rows.push_back(std::move(row));
  }
  return {{"m", m()}, {"S", depth()}, {"p", std::move(rows)}};
}

ExponentTable ExponentTable::from_json(const nlohmann::json& j) {
  try {
    std::vector<std::vector<double>> p;
    for (const auto& row : j.at("p")) {
      std::vector<double> col;
      for (const auto& v : row)
        col.push_back(v.is_string() && v.get<std::string>() == "inf" ? std::numeric_limits<double>::infinity()
                                                                       : v.get<double>());
      p.push_back(std::move(col));
    }
    ExponentTable t(std::move(p));
    if (j.contains("m")) require(j.at("m").get<int>() == t.m(), "m: does not match the number of rows in p", ErrorCode::Parse);
    if (j.contains("S")) require(j.at("S").get<int>() == t.depth(), "S: does not match the row length of p", ErrorCode::Parse);
    return t;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::Parse, std::string("exponent table: ") + e.what());
  }
}

}  // namespace dyadlab::nc
