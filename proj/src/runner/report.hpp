#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

namespace dyadlab::runner {

/// Hard records gate the exit code; soft records compare a statistic against a band and
/// only warn; info records carry measurements.
enum class Gate { Hard, Soft, Info };
enum class Verdict { Pass, Fail, Warn, Info };

const char* to_string(Gate g);
const char* to_string(Verdict v);

constexpr double kNone = std::numeric_limits<double>::quiet_NaN();

struct Record {
  std::string check;
  std::string instance;
  double value = kNone;
  double stderr_value = kNone;
  double lo = kNone;  // band, either end may be absent
  double hi = kNone;
  Gate gate = Gate::Info;
  Verdict verdict = Verdict::Info;
  std::string ref;  // what the record tests, in words
};

/// Rows of a command-specific data table (e.g. the refinement study), emitted as CSV.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<nlohmann::json>> rows;
};

class Report {
 public:
  Report(std::string command, std::uint64_t seed, nlohmann::json config)
      : command_(std::move(command)), seed_(seed), config_(std::move(config)) {}

  /// value ≤ hi passes, anything else (NaN included) fails.
  void hard(std::string check, std::string instance, double value, double hi, std::string ref);
  /// Soft band [lo, hi]; NaN ends are open.
  void soft(std::string check, std::string instance, double value, double lo, double hi, std::string ref,
            double stderr_value = kNone);
  void info(std::string check, std::string instance, double value, std::string ref, double stderr_value = kNone);

  void summary(std::string line) { summary_.push_back(std::move(line)); }
  void note(std::string line) { notes_.push_back(std::move(line)); }
  Table& table() { return table_; }

  const std::string& command() const noexcept { return command_; }
  const std::vector<Record>& records() const noexcept { return records_; }
  const std::vector<std::string>& summary_lines() const noexcept { return summary_; }
  int hard_failures() const;
  int warnings() const;

  nlohmann::json to_json() const;
  /// One row per record.
  std::string records_csv() const;
  /// The data table, or an empty string when the command has none.
  std::string table_csv() const;

 private:
  std::string command_;
  std::uint64_t seed_;
  nlohmann::json config_;
  std::vector<Record> records_;
  std::vector<std::string> summary_;
  std::vector<std::string> notes_;
  Table table_;
};

/// Finite numbers as numbers, ±∞ as "inf"/"-inf", NaN as null.
nlohmann::json number(double x);

}  // namespace dyadlab::runner
