#include "nc/mixed.hpp"

#include <cmath>

#include "nc/schatten.hpp"

namespace dyadlab::nc {

std::size_t MixedSpace::leaves_below(int s) const {
  std::size_t n = 1;
  for (int l = 0; l < s; ++l) n *= weights[static_cast<std::size_t>(l)].size();
  return n;
}

void MixedSpace::validate() const {
  require(N >= 1, "matrix dimension must be >= 1");
  for (const auto& w : weights) {
    require(!w.empty(), "every level needs at least one atom");
    for (double v : w) require(v > 0.0, "atom weights must be positive");
  }
}

namespace {

void check_shape(const NestedFunction& f, const MixedSpace& space) {
  space.validate();
  require(f.leaves.size() == space.leaves_below(space.levels()), "nested function: wrong number of leaves");
  for (const auto& m : f.leaves)
    require(m.rows() == space.N && m.cols() == space.N, "nested function: leaf dimension mismatch");
}

double weighted_lp(const std::vector<double>& vals, const std::vector<double>& w, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : vals) m = std::max(m, v);
    return m;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i) acc += w[i] * std::pow(vals[i], p);
  return std::pow(acc, 1.0 / p);
}

// Norm of the level-s slice starting at leaf `offset`.
double slice_norm(const NestedFunction& f, const MixedSpace& space, const std::vector<double>& exps, int s,
                  std::size_t offset) {
  if (s == 0) return schatten_norm(f.leaves[offset], exps[0]);
  const auto& w = space.weights[static_cast<std::size_t>(s - 1)];
  const std::size_t stride = space.leaves_below(s - 1);
  std::vector<double> vals(w.size());
  for (std::size_t t = 0; t < w.size(); ++t) vals[t] = slice_norm(f, space, exps, s - 1, offset + t * stride);
  return weighted_lp(vals, w, exps[static_cast<std::size_t>(s)]);
}

// Fills out[u] on the level-s slice at `offset` with B_u^s applied to that slice,
// which must have unit norm in the q_J exponents.
void factor_slice(const NestedFunction& f, const MixedSpace& space, const std::vector<double>& qs,
                  const std::vector<std::vector<double>>& ps, int s, std::size_t offset, double scale,
                  std::vector<NestedFunction>& out) {
  const std::size_t k = out.size();
  if (s == 0) {
    const Matrix a = f.leaves[offset] * scale;
    std::vector<double> level0(k);
    for (std::size_t u = 0; u < k; ++u) level0[u] = ps[u][0];
    const auto b = factorize_positive(a, qs[0], level0);
    for (std::size_t u = 0; u < k; ++u) out[u].leaves[offset] = b[u];
    return;
  }
  const auto& w = space.weights[static_cast<std::size_t>(s - 1)];
  const std::size_t stride = space.leaves_below(s - 1);
  for (std::size_t t = 0; t < w.size(); ++t) {
    const std::size_t off = offset + t * stride;
    const double norm = scale * slice_norm(f, space, qs, s - 1, off);
    if (norm == 0.0) {
      for (std::size_t u = 0; u < k; ++u)
        for (std::size_t i = 0; i < stride; ++i) out[u].leaves[off + i] = Matrix::Zero(space.N, space.N);
      continue;
    }
    factor_slice(f, space, qs, ps, s - 1, off, scale / norm, out);
    for (std::size_t u = 0; u < k; ++u) {
      const double lift = std::pow(norm, qs[static_cast<std::size_t>(s)] / ps[u][static_cast<std::size_t>(s)]);
      for (std::size_t i = 0; i < stride; ++i) out[u].leaves[off + i] *= lift;
    }
  }
}

}  // namespace

double nested_norm(const NestedFunction& f, const MixedSpace& space, const std::vector<double>& exps) {
  check_shape(f, space);
  require(exps.size() == static_cast<std::size_t>(space.levels()) + 1, "nested norm: need one exponent per level");
  for (double p : exps) require(p >= 1.0, "exponents must be >= 1");
  return slice_norm(f, space, exps, space.levels(), 0);
}

double nested_norm(const NestedFunction& f, const MixedSpace& space, const ExponentTable& tab, int j) {
  require(tab.depth() == space.levels(), "exponent table depth does not match the mixed space");
  return nested_norm(f, space, tab.column(j));
}

double flat_norm(const NestedFunction& f, const MixedSpace& space, double p) {
  check_shape(f, space);
  double acc = 0.0;
  double sup = 0.0;
  for (std::size_t i = 0; i < f.leaves.size(); ++i) {
    double w = 1.0;
    std::size_t rest = i;
    for (const auto& level : space.weights) {
      w *= level[rest % level.size()];
      rest /= level.size();
    }
    const double v = schatten_norm(f.leaves[i], p);
    if (std::isinf(p))
      sup = std::max(sup, v);
    else
      acc += w * std::pow(v, p);
  }
  return std::isinf(p) ? sup : std::pow(acc, 1.0 / p);
}

std::vector<NestedFunction> factorize_mixed(const NestedFunction& f, const MixedSpace& space,
                                            const std::vector<int>& J, const ExponentTable& tab) {
  check_shape(f, space);
  require(tab.depth() == space.levels(), "exponent table depth does not match the mixed space");
  tab.check_index_set(J);
  for (const auto& m : f.leaves)
    require(is_positive(m), "factorize_mixed requires positive semidefinite leaves", ErrorCode::Domain);
  const auto qs = tab.q_column(J);
  const double norm = nested_norm(f, space, qs);
  require(std::abs(norm - 1.0) <= 1e-8, "input must have unit nested norm", ErrorCode::Domain);
  std::vector<std::vector<double>> ps;
  for (int j : J) ps.push_back(tab.column(j));
  std::vector<NestedFunction> out(J.size());
  for (auto& o : out) o.leaves.assign(f.leaves.size(), Matrix::Zero(space.N, space.N));
  // Renormalize exactly so the level-0 unit-norm precondition holds at S = 0.
  factor_slice(f, space, qs, ps, space.levels(), 0, 1.0 / norm, out);
  if (norm != 1.0) {
    for (std::size_t u = 0; u < out.size(); ++u) {
      const double lift = std::pow(norm, qs.back() / ps[u].back());
      for (auto& m : out[u].leaves) m *= lift;
    }
  }
  return out;
}

NestedFunction pointwise_product(const std::vector<NestedFunction>& fs) {
  require(!fs.empty(), "pointwise product of an empty list");
  NestedFunction out = fs.front();
  for (std::size_t u = 1; u < fs.size(); ++u) {
    require(fs[u].leaves.size() == out.leaves.size(), "nested functions have different shapes");
    for (std::size_t i = 0; i < out.leaves.size(); ++i) out.leaves[i] = out.leaves[i] * fs[u].leaves[i];
  }
  return out;
}

}  // namespace dyadlab::nc
