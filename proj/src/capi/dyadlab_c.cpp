#include "dyadlab/dyadlab.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "common/random.hpp"
#include "dyadic/grid_function.hpp"
#include "model/io.hpp"
#include "model/shift.hpp"
#include "nc/schatten.hpp"
#include "runner/runner.hpp"

struct dl_lattice {
  dyadlab::dyadic::Lattice lat;
};
struct dl_gridfn {
  dyadlab::dyadic::GridFunction f;
};
struct dl_shift {
  dyadlab::model::ShiftSpec s;
};

namespace {

thread_local std::string last_error;

dl_status record(dl_status st, const char* msg) {
  last_error = msg;
  return st;
}

// Runs `body`, mapping exceptions onto status codes.
template <class Fn>
dl_status guarded(Fn&& body) {
  try {
    body();
    last_error.clear();
    return DL_OK;
  } catch (const dyadlab::Error& e) {
    return record(static_cast<dl_status>(static_cast<int>(e.code())), e.what());
  } catch (const nlohmann::json::exception& e) {
    return record(DL_PARSE, e.what());
  } catch (const std::bad_alloc&) {
    return record(DL_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(DL_INTERNAL, e.what());
  } catch (...) {
    return record(DL_INTERNAL, "unknown failure");
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void need(const void* p, const char* what) {
  dyadlab::require(p != nullptr, std::string(what) + " must not be NULL");
}

}  // namespace

extern "C" {

const char* dl_version(void) { return "0.1.0"; }

const char* dl_last_error(void) { return last_error.c_str(); }

void dl_string_free(char* s) { std::free(s); }

dl_status dl_lattice_new(int dim, int depth, int64_t shift_seed, dl_lattice** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    dyadlab::require(dim >= 1 && dim <= 3 && depth >= 0 && depth * dim <= 24, "lattice dimension or depth out of range");
    auto lat = shift_seed < 0 ? dyadlab::dyadic::Lattice(dim, depth)
                              : dyadlab::dyadic::Lattice::random(dim, depth, static_cast<std::uint64_t>(shift_seed));
    *out = new dl_lattice{std::move(lat)};
  });
}

void dl_lattice_free(dl_lattice* lat) { delete lat; }

dl_status dl_lattice_cells(const dl_lattice* lat, uint64_t* out) {
  return guarded([&] {
    need(lat, "lattice");
    need(out, "out");
    *out = lat->lat.cell_count();
  });
}

dl_status dl_gridfn_random(const dl_lattice* lat, int n, uint64_t seed, dl_gridfn** out) {
  return guarded([&] {
    need(lat, "lattice");
    need(out, "out");
    *out = nullptr;
    dyadlab::require(n >= 1 && n <= 64, "matrix size out of range");
    dyadlab::Rng rng(seed);
    *out = new dl_gridfn{dyadlab::dyadic::GridFunction::random_matrix(lat->lat, n, rng)};
  });
}

dl_status dl_gridfn_from_values(const dl_lattice* lat, int n, const double* values, size_t count, dl_gridfn** out) {
  return guarded([&] {
    need(lat, "lattice");
    need(values, "values");
    need(out, "out");
    *out = nullptr;
    dyadlab::require(n >= 1 && n <= 64, "matrix size out of range");
    dyadlab::dyadic::GridFunction f(lat->lat, dyadlab::dyadic::ValueKind::Matrix, n);
    auto& data = f.data();
    dyadlab::require(count == 2 * data.size(), "expected 2 n^2 cells doubles");
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = {values[2 * i], values[2 * i + 1]};
    *out = new dl_gridfn{std::move(f)};
  });
}

void dl_gridfn_free(dl_gridfn* f) { delete f; }

dl_status dl_gridfn_lp_norm(const dl_gridfn* f, double p, double r, double* out) {
  return guarded([&] {
    need(f, "function");
    need(out, "out");
    *out = dyadlab::dyadic::lp_norm(f->f, p, r);
  });
}

dl_status dl_shift_from_json(const char* json, int clamp, dl_shift** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    *out = nullptr;
    const auto j = nlohmann::json::parse(json);
    *out = new dl_shift{dyadlab::model::shift_from_json(j, clamp != 0)};
  });
}

void dl_shift_free(dl_shift* s) { delete s; }

dl_status dl_shift_to_json(const dl_shift* s, char** json) {
  return guarded([&] {
    need(s, "shift");
    need(json, "json");
    *json = dup(dyadlab::model::to_json(s->s).dump());
  });
}

dl_status dl_shift_eval(const dl_shift* s, const dl_gridfn* const* fs, size_t count, double* re, double* im) {
  return guarded([&] {
    need(s, "shift");
    need(fs, "functions");
    need(re, "re");
    need(im, "im");
    std::vector<dyadlab::dyadic::GridFunction> v;
    for (std::size_t i = 0; i < count; ++i) {
      need(fs[i], "function");
      v.push_back(fs[i]->f);
    }
    const auto z = dyadlab::model::eval_shift_form(s->s, v);
    *re = z.real();
    *im = z.imag();
  });
}

dl_status dl_schatten_norm(const double* values, int n, double p, double* out) {
  return guarded([&] {
    need(values, "values");
    need(out, "out");
    dyadlab::require(n >= 1, "matrix size must be positive");
    dyadlab::Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const std::size_t k = 2 * (static_cast<std::size_t>(i) * n + j);
        m(i, j) = {values[k], values[k + 1]};
      }
    *out = dyadlab::nc::schatten_norm(m, p);
  });
}

dl_status dl_run(const char* subcommand, const char* config_json, uint64_t seed, int has_seed, char** report_json,
                 char** records_csv, char** table_csv, int* hard_failures) {
  for (char** p : {report_json, records_csv, table_csv})
    if (p) *p = nullptr;
  char* a = nullptr;
  char* b = nullptr;
  char* c = nullptr;
  const dl_status st = guarded([&] {
    need(subcommand, "subcommand");
    const auto cfg = config_json ? nlohmann::json::parse(config_json) : nlohmann::json::object();
    std::optional<std::uint64_t> s;
    if (has_seed) s = seed;
    const auto rep = dyadlab::runner::run(subcommand, cfg, s);
    if (report_json) a = dup(rep.to_json().dump(2));
    if (records_csv) b = dup(rep.records_csv());
    if (table_csv) c = dup(rep.table_csv());
    if (hard_failures) *hard_failures = rep.hard_failures();
  });
  if (st != DL_OK) {
    std::free(a);
    std::free(b);
    std::free(c);
    return st;
  }
  if (report_json) *report_json = a;
  if (records_csv) *records_csv = b;
  if (table_csv) *table_csv = c;
  return st;
}

const char* dl_subcommands(void) {
  static const std::string names = [] {
    std::string s;
    for (const auto& n : dyadlab::runner::commands()) s += n + "\n";
    return s;
  }();
  return names.c_str();
}

}  // extern "C"
