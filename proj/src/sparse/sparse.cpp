#include "sparse/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dyadlab::sparse {

std::vector<Cube> SparseCollection::cubes() const {
  std::vector<Cube> out;
  for (const auto& [q, e] : exceptional) out.push_back(q);
  return out;
}

namespace {

// Averages of |f| over every cube, indexed by global cube index.
std::vector<double> abs_averages(const GridFunction& f) {
  require(f.n() == 1, "sparse operations expect scalar functions (pass pointwise norms)");
  GridFunction a(f.lattice(), dyadic::ValueKind::Scalar, 1);
  for (std::uint64_t c = 0; c < f.cells(); ++c) a.data()[c] = std::abs(f.scalar_at(c));
  const dyadic::PairingTable t(a);
  const auto& lat = f.lattice();
  std::vector<double> out(lat.total_cubes());
  for (std::uint64_t g = 0; g < out.size(); ++g) out[g] = t.average(lat.from_global(g))(0, 0).real();
  return out;
}

const Lattice& common_lattice(const std::vector<GridFunction>& fs) {
  require(!fs.empty(), "need at least one function");
  for (const auto& f : fs) require(f.lattice() == fs.front().lattice(), "functions live on different lattices");
  return fs.front().lattice();
}

std::vector<double> products(const Lattice& lat, const std::vector<std::vector<double>>& avgs) {
  std::vector<double> prod(lat.total_cubes(), 1.0);
  for (const auto& a : avgs)
    for (std::size_t g = 0; g < prod.size(); ++g) prod[g] *= a[g];
  return prod;
}

}  // namespace

GridFunction multilinear_maximal(const std::vector<GridFunction>& fs) {
  const auto& lat = common_lattice(fs);
  std::vector<std::vector<double>> avgs;
  for (const auto& f : fs) avgs.push_back(abs_averages(f));
  const auto prod = products(lat, avgs);
  std::vector<double> best(prod.size());
  best[0] = prod[0];
  for (int l = 1; l <= lat.depth(); ++l)
    for (std::uint64_t code = 0; code < lat.cube_count(l); ++code) {
      const Cube q{l, code};
      const auto g = lat.global_index(q);
      best[g] = std::max(prod[g], best[lat.global_index(lat.parent(q))]);
    }
  GridFunction out(lat, dyadic::ValueKind::Scalar, 1);
  const auto fine = lat.level_offset(lat.depth());
  for (std::uint64_t r = 0; r < lat.cell_count(); ++r) out.data()[lat.physical_cell(r)] = best[fine + r];
  return out;
}

bool is_sparse(const Lattice& lat, const SparseCollection& s, double eta) {
  std::vector<char> used(lat.cell_count(), 0);
  for (const auto& [q, cells] : s.exceptional) {
    if (!lat.valid(q)) return false;
    for (auto c : cells) {
      if (c >= lat.cell_count() || !lat.contains_cell(q, c) || used[c]) return false;
      used[c] = 1;
    }
    const double cube_cells = static_cast<double>(lat.cube_count(lat.depth() - q.level));
    if (!(static_cast<double>(cells.size()) > eta * cube_cells)) return false;
  }
  return true;
}

double stopping_eta(std::size_t m, double theta) { return 1.0 - static_cast<double>(m) / theta; }

SparseCollection build_sparse_stopping(const std::vector<GridFunction>& fs, double theta) {
  const auto& lat = common_lattice(fs);
  require(theta > static_cast<double>(fs.size()), "stopping threshold must exceed the number of functions");
  std::vector<std::vector<double>> avgs;
  for (const auto& f : fs) avgs.push_back(abs_averages(f));

  SparseCollection out;
  std::vector<Cube> pending{lat.top()};
  while (!pending.empty()) {
    const Cube q = pending.back();
    pending.pop_back();
    const auto gq = lat.global_index(q);
    std::vector<Cube> stops;
    std::vector<Cube> stack;
    if (q.level < lat.depth()) stack = lat.children(q);
    while (!stack.empty()) {
      const Cube r = stack.back();
      stack.pop_back();
      const auto gr = lat.global_index(r);
      bool stop = false;
      for (const auto& a : avgs)
        if (a[gr] > theta * a[gq]) stop = true;
      if (stop) {
        stops.push_back(r);
      } else if (r.level < lat.depth()) {
        for (const auto& c : lat.children(r)) stack.push_back(c);
      }
    }
    std::vector<char> removed(lat.cell_count(), 0);
    for (const auto& s : stops)
      for (auto c : lat.cells(s)) removed[c] = 1;
    std::vector<std::uint64_t> e;
    for (auto c : lat.cells(q))
      if (!removed[c]) e.push_back(c);
    std::sort(e.begin(), e.end());
    out.exceptional.emplace(q, std::move(e));
    for (const auto& s : stops) pending.push_back(s);
  }
  return out;
}

double sparse_form(const SparseCollection& s, const std::vector<GridFunction>& fs) {
  if (s.exceptional.empty()) return 0.0;
  const auto& lat = common_lattice(fs);
  std::vector<std::vector<double>> avgs;
  for (const auto& f : fs) avgs.push_back(abs_averages(f));
  double total = 0.0;
  for (const auto& [q, e] : s.exceptional) {
    double p = lat.measure(q.level);
    for (const auto& a : avgs) p *= a[lat.global_index(q)];
    total += p;
  }
  return total;
}

std::vector<Lattice> universal_grids(int dim, int depth) {
  std::vector<Lattice> out;
  const std::uint64_t cells = 1ULL << depth;
  std::size_t count = 1;
  for (int i = 0; i < dim; ++i) count *= 3;
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::vector<std::uint64_t> shift(static_cast<std::size_t>(dim));
    std::size_t rest = idx;
    for (int i = dim - 1; i >= 0; --i) {
      const auto digit = rest % 3;
      rest /= 3;
      shift[static_cast<std::size_t>(i)] =
          static_cast<std::uint64_t>(std::llround(static_cast<double>(digit) / 3.0 * static_cast<double>(cells))) % cells;
    }
    out.push_back(Lattice::with_cell_shift(dim, depth, std::move(shift)));
  }
  return out;
}

UniversalSearch universal_search(const SparseCollection& s, const std::vector<GridFunction>& fs) {
  UniversalSearch res;
  res.target = sparse_form(s, fs);
  const auto& lat = common_lattice(fs);
  const double theta = 2.0 * static_cast<double>(fs.size());
  const auto grids = universal_grids(lat.dim(), lat.depth());
  for (std::size_t i = 0; i < grids.size(); ++i) {
    std::vector<GridFunction> moved;
    for (const auto& f : fs) moved.push_back(f.on_lattice(grids[i]));
    const auto u = build_sparse_stopping(moved, theta);
    const double v = sparse_form(u, moved);
    if (v > res.best) {
      res.best = v;
      res.best_grid = i;
      res.best_is_sparse = is_sparse(grids[i], u, 0.5);
    }
  }
  res.constant = res.best > 0.0 ? res.target / res.best : (res.target > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  return res;
}

DominationReport verify_sparse_domination(const model::HaarForm& form, const std::vector<GridFunction>& fs,
                                          double eta, const std::vector<double>& ps) {
  require(eta > 0.0 && eta < 1.0, "sparsity parameter must lie in (0,1)");
  model::check_inputs(form, fs);
  const std::size_t m = fs.size();
  std::vector<double> exps = ps;
  if (exps.empty()) exps.assign(m, static_cast<double>(m));
  require(exps.size() == m, "need one exponent per function");
  DominationReport rep;
  rep.eta = eta;
  rep.theta = static_cast<double>(m) / (1.0 - eta);
  rep.lhs = std::abs(model::eval_form(form, fs));
  std::vector<GridFunction> norms;
  for (std::size_t j = 0; j < m; ++j) norms.push_back(dyadic::pointwise_norm(fs[j], exps[j]));
  const auto s = build_sparse_stopping(norms, rep.theta);
  rep.cubes = s.size();
  rep.rhs = sparse_form(s, norms);
  if (rep.rhs > 0.0) {
    rep.constant = rep.lhs / rep.rhs;
  } else if (rep.lhs > 0.0) {
    rep.constant = std::numeric_limits<double>::infinity();
    rep.violation = true;
  }
  return rep;
}

}  // namespace dyadlab::sparse
