#include "runner/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace dyadlab::runner {

namespace {

std::string format_number(double x) {
  if (std::isnan(x)) return "";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_cell(const nlohmann::json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return csv_field(v.get<std::string>());
  if (v.is_number_float()) return format_number(v.get<double>());
  return csv_field(v.dump());
}

}  // namespace

const char* to_string(Gate g) {
  switch (g) {
    case Gate::Hard:
      return "hard";
    case Gate::Soft:
      return "soft";
    case Gate::Info:
      break;
  }
  return "info";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "PASS";
    case Verdict::Fail:
      return "FAIL";
    case Verdict::Warn:
      return "WARN";
    case Verdict::Info:
      break;
  }
  return "INFO";
}

nlohmann::json number(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

void Report::hard(std::string check, std::string instance, double value, double hi, std::string ref) {
  const bool ok = value <= hi;
  records_.push_back(
      {std::move(check), std::move(instance), value, kNone, kNone, hi, Gate::Hard, ok ? Verdict::Pass : Verdict::Fail,
       std::move(ref)});
}

void Report::soft(std::string check, std::string instance, double value, double lo, double hi, std::string ref,
                  double stderr_value) {
  const bool ok = !std::isnan(value) && (std::isnan(lo) || value >= lo) && (std::isnan(hi) || value <= hi);
  records_.push_back({std::move(check), std::move(instance), value, stderr_value, lo, hi, Gate::Soft,
                      ok ? Verdict::Pass : Verdict::Warn, std::move(ref)});
}

void Report::info(std::string check, std::string instance, double value, std::string ref, double stderr_value) {
  records_.push_back(
      {std::move(check), std::move(instance), value, stderr_value, kNone, kNone, Gate::Info, Verdict::Info,
       std::move(ref)});
}

int Report::hard_failures() const {
  int n = 0;
  for (const auto& r : records_) n += r.verdict == Verdict::Fail;
  return n;
}

int Report::warnings() const {
  int n = 0;
  for (const auto& r : records_) n += r.verdict == Verdict::Warn;
  return n;
}

nlohmann::json Report::to_json() const {
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& r : records_) {
    recs.push_back({{"check", r.check},
                    {"instance", r.instance},
                    {"value", number(r.value)},
                    {"stderr", number(r.stderr_value)},
                    {"band", {number(r.lo), number(r.hi)}},
                    {"gate", to_string(r.gate)},
                    {"verdict", to_string(r.verdict)},
                    {"ref", r.ref}});
  }
  nlohmann::json out{{"command", command_},
                     {"seed", seed_},
                     {"config", config_},
                     {"records", recs},
                     {"summary", summary_},
                     {"notes", notes_},
                     {"hard_failures", hard_failures()},
                     {"warnings", warnings()}};
  if (!table_.header.empty()) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table_.rows) {
      nlohmann::json obj;
      for (std::size_t i = 0; i < table_.header.size() && i < row.size(); ++i) obj[table_.header[i]] = row[i];
      rows.push_back(obj);
    }
    out["table"] = rows;
  }
  return out;
}

std::string Report::records_csv() const {
  std::ostringstream os;
  os << "check,instance,value,stderr,band_lo,band_hi,gate,verdict,ref\n";
  for (const auto& r : records_) {
    os << csv_field(r.check) << ',' << csv_field(r.instance) << ',' << format_number(r.value) << ','
       << format_number(r.stderr_value) << ',' << format_number(r.lo) << ',' << format_number(r.hi) << ','
       << to_string(r.gate) << ',' << to_string(r.verdict) << ',' << csv_field(r.ref) << '\n';
  }
  return os.str();
}

std::string Report::table_csv() const {
  if (table_.header.empty()) return {};
  std::ostringstream os;
  for (std::size_t i = 0; i < table_.header.size(); ++i) os << (i ? "," : "") << csv_field(table_.header[i]);
  os << '\n';
  for (const auto& row : table_.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << '\n';
  }
  return os.str();
}

}  // namespace dyadlab::runner
