#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

namespace dyadlab::runner {

/// Typed reads from one JSON object with defaults. Every value read (or defaulted) is
/// recorded in effective(), so reports can echo the complete configuration. Schema
/// violations throw Parse errors naming the field path, e.g. "config.leibniz-study.s".
class Block {
 public:
  Block(const nlohmann::json* j, std::string path);

  long long integer(const std::string& key, long long def, long long lo, long long hi);
  std::uint64_t u64(const std::string& key, std::uint64_t def);
  /// Accepts numbers and, when allow_inf, the string "inf".
  double number(const std::string& key, double def, double lo, double hi, bool allow_inf = false);
  bool boolean(const std::string& key, bool def);
  std::string string(const std::string& key, const std::string& def);
  std::vector<long long> int_list(const std::string& key, const std::vector<long long>& def, long long lo,
                                  long long hi);
  std::vector<double> number_list(const std::string& key, const std::vector<double>& def, double lo, double hi,
                                  bool allow_inf = false);
  bool has(const std::string& key) const;
  /// Raw sub-object or array for command-specific parsing; nullptr when absent.
  const nlohmann::json* raw(const std::string& key);
  Block child(const std::string& key);
  void set_effective(const std::string& key, nlohmann::json v) { eff_[key] = std::move(v); }

  /// Rejects keys that were never read.
  void finish() const;
  const nlohmann::json& effective() const noexcept { return eff_; }
  std::string field(const std::string& key) const { return path_ + "." + key; }

 private:
  const nlohmann::json* find(const std::string& key);

  const nlohmann::json* j_;
  std::string path_;
  std::set<std::string> seen_;
  nlohmann::json eff_ = nlohmann::json::object();
};

/// Parameters shared by every subcommand.
struct Globals {
  std::uint64_t seed = 0;
  int d = 1;
  int L = 4;
  int N = 2;
  int n = 2;
  std::vector<double> exponents;  // Hölder tuple of length n+1
  std::optional<int> trials;      // overrides each command's default trial count
  double band = 10.0;             // soft comparability band C: ratios in [1/C, C]
  std::string output;
};

/// Reads the global fields of `config`; the seed argument, when given, overrides the
/// configured seed.
Globals read_globals(Block& root, std::optional<std::uint64_t> seed);

/// Checks Σ 1/p_j = 1 with every p_j in [1, ∞].
void check_holder_tuple(const std::vector<double>& ps, const std::string& path);

}  // namespace dyadlab::runner
