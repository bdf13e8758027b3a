#pragma once

#include <vector>

#include <json.hpp>

namespace dyadlab::nc {

/// Hölder tuples p[j][s], j = 0..m−1, s = 0..S, with Σ_j 1/p[j][s] = 1 for every s.
/// Index sets J are 0-based lists of distinct tuple positions.
class ExponentTable {
 public:
  explicit ExponentTable(std::vector<std::vector<double>> p);
  /// Single-level tuple (S = 0).
  static ExponentTable tuple(const std::vector<double>& ps);

  int m() const noexcept { return static_cast<int>(p_.size()); }
  int depth() const noexcept { return static_cast<int>(p_.front().size()) - 1; }
  double p(int j, int s) const { return p_.at(static_cast<std::size_t>(j)).at(static_cast<std::size_t>(s)); }
  /// Exponent column p[j][0..S].
  std::vector<double> column(int j) const { return p_.at(static_cast<std::size_t>(j)); }
  const std::vector<std::vector<double>>& raw() const noexcept { return p_; }

  /// 1/q_J^s = Σ_{u∈J} 1/p_u^s.
  double q(const std::vector<int>& J, int s) const;
  /// 1/p_J^s = 1 − 1/q_J^s; ∞ when J is the full index set.
  double p_dual(const std::vector<int>& J, int s) const;
  std::vector<double> q_column(const std::vector<int>& J) const;
  void check_index_set(const std::vector<int>& J) const;

  nlohmann::json to_json() const;
  static ExponentTable from_json(const nlohmann::json& j);

 private:
  std::vector<std::vector<double>> p_;
};

}  // namespace dyadlab::nc
