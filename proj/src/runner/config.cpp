#include "runner/config.hpp"

#include <cmath>
#include <limits>

#include "common/types.hpp"
#include "runner/report.hpp"

namespace dyadlab::runner {

namespace {

[[noreturn]] void schema_error(const std::string& field, const std::string& msg) {
  fail(ErrorCode::Parse, field + ": " + msg);
}

std::string range_text(double lo, double hi) {
  auto f = [](double x) {
    if (std::isinf(x)) return std::string(x > 0 ? "inf" : "-inf");
    nlohmann::json j = x;
    return j.dump();
  };
  return "[" + f(lo) + ", " + f(hi) + "]";
}

double as_number(const nlohmann::json& v, const std::string& field, bool allow_inf) {
  if (v.is_number()) return v.get<double>();
  if (allow_inf && v.is_string() && v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
  schema_error(field, allow_inf ? "expected a number or \"inf\"" : "expected a number");
}

}  // namespace

Block::Block(const nlohmann::json* j, std::string path) : j_(j), path_(std::move(path)) {
  if (j_ && !j_->is_null() && !j_->is_object()) schema_error(path_, "expected an object");
  if (j_ && j_->is_null()) j_ = nullptr;
}

const nlohmann::json* Block::find(const std::string& key) {
  seen_.insert(key);
  if (!j_) return nullptr;
  auto it = j_->find(key);
  return it == j_->end() || it->is_null() ? nullptr : &*it;
}

bool Block::has(const std::string& key) const { return j_ && j_->contains(key) && !(*j_)[key].is_null(); }

long long Block::integer(const std::string& key, long long def, long long lo, long long hi) {
  long long v = def;
  if (const auto* x = find(key)) {
    if (!x->is_number_integer()) schema_error(field(key), "expected an integer");
    v = x->get<long long>();
    if (v < lo || v > hi)
      schema_error(field(key), "expected an integer in " + range_text(static_cast<double>(lo), static_cast<double>(hi)));
  }
  eff_[key] = v;
  return v;
}

std::uint64_t Block::u64(const std::string& key, std::uint64_t def) {
  std::uint64_t v = def;
  if (const auto* x = find(key)) {
    if (x->is_number_unsigned())
      v = x->get<std::uint64_t>();
    else if (x->is_number_integer() && x->get<long long>() >= 0)
      v = static_cast<std::uint64_t>(x->get<long long>());
    else
      schema_error(field(key), "expected a non-negative integer");
  }
  eff_[key] = v;
  return v;
}

double Block::number(const std::string& key, double def, double lo, double hi, bool allow_inf) {
  double v = def;
  if (const auto* x = find(key)) {
    v = as_number(*x, field(key), allow_inf);
    if (!(v >= lo && v <= hi)) schema_error(field(key), "expected a number in " + range_text(lo, hi));
  }
  eff_[key] = runner::number(v);
  return v;
}

bool Block::boolean(const std::string& key, bool def) {
  bool v = def;
  if (const auto* x = find(key)) {
    if (!x->is_boolean()) schema_error(field(key), "expected true or false");
    v = x->get<bool>();
  }
  eff_[key] = v;
  return v;
}

std::string Block::string(const std::string& key, const std::string& def) {
  std::string v = def;
  if (const auto* x = find(key)) {
    if (!x->is_string()) schema_error(field(key), "expected a string");
    v = x->get<std::string>();
  }
  eff_[key] = v;
  return v;
}

std::vector<long long> Block::int_list(const std::string& key, const std::vector<long long>& def, long long lo,
                                       long long hi) {
  std::vector<long long> v = def;
  if (const auto* x = find(key)) {
    if (!x->is_array()) schema_error(field(key), "expected an array of integers");
    v.clear();
    for (std::size_t i = 0; i < x->size(); ++i) {
      const auto& e = (*x)[i];
      const std::string f = field(key) + "[" + std::to_string(i) + "]";
      if (!e.is_number_integer()) schema_error(f, "expected an integer");
      const auto y = e.get<long long>();
      if (y < lo || y > hi)
        schema_error(f, "expected an integer in " + range_text(static_cast<double>(lo), static_cast<double>(hi)));
      v.push_back(y);
    }
  }
  eff_[key] = v;
  return v;
}

std::vector<double> Block::number_list(const std::string& key, const std::vector<double>& def, double lo,
                                       double hi, bool allow_inf) {
  std::vector<double> v = def;
  if (const auto* x = find(key)) {
    if (!x->is_array()) schema_error(field(key), "expected an array of numbers");
    v.clear();
    for (std::size_t i = 0; i < x->size(); ++i) {
      const std::string f = field(key) + "[" + std::to_string(i) + "]";
      const double y = as_number((*x)[i], f, allow_inf);
      if (!(y >= lo && y <= hi)) schema_error(f, "expected a number in " + range_text(lo, hi));
      v.push_back(y);
    }
  }
  nlohmann::json arr = nlohmann::json::array();
  for (double y : v) arr.push_back(runner::number(y));
  eff_[key] = arr;
  return v;
}

const nlohmann::json* Block::raw(const std::string& key) { return find(key); }

Block Block::child(const std::string& key) { return Block(find(key), field(key)); }

void Block::finish() const {
  if (!j_) return;
  for (const auto& [k, v] : j_->items())
    if (!seen_.count(k)) schema_error(field(k), "unknown field");
}

void check_holder_tuple(const std::vector<double>& ps, const std::string& path) {
  if (ps.size() < 2) schema_error(path, "a Hölder tuple needs at least two exponents");
  double s = 0.0;
  for (double p : ps) {
    if (!(p >= 1.0)) schema_error(path, "exponents must lie in [1, inf]");
    s += 1.0 / p;
  }
  if (std::abs(s - 1.0) > 1e-9) schema_error(path, "reciprocals must sum to 1");
}

Globals read_globals(Block& root, std::optional<std::uint64_t> seed) {
  Globals g;
  g.seed = root.u64("seed", 0);
  if (seed) {
    g.seed = *seed;
    root.set_effective("seed", g.seed);
  }
  g.d = static_cast<int>(root.integer("d", 1, 1, 3));
  g.L = static_cast<int>(root.integer("L", 4, 1, 20));
  g.N = static_cast<int>(root.integer("N", 2, 1, 8));
  g.n = static_cast<int>(root.integer("n", 2, 1, 6));
  g.exponents = root.number_list("exponents", std::vector<double>(static_cast<std::size_t>(g.n + 1), g.n + 1.0), 1.0,
                                 std::numeric_limits<double>::infinity(), true);
  if (g.exponents.size() != static_cast<std::size_t>(g.n + 1))
    schema_error(root.field("exponents"), "expected n+1 = " + std::to_string(g.n + 1) + " exponents");
  check_holder_tuple(g.exponents, root.field("exponents"));
  if (root.has("trials")) g.trials = static_cast<int>(root.integer("trials", 1, 1, 1000000));
  auto bands = root.child("bands");
  g.band = bands.number("C", 10.0, 1.0, 1e12);
  bands.finish();
  root.set_effective("bands", bands.effective());
  g.output = root.string("output", "");
  return g;
}

}  // namespace dyadlab::runner
