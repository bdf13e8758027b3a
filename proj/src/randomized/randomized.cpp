#include "randomized/randomized.hpp"

#include <numeric>

#include "nc/ynorm.hpp"

namespace dyadlab::randomized {

using dyadic::GridFunction;

Comparison stein_check(const std::vector<CubeFunction>& fqs, double p, double r, const SignEnsemble& ens) {
  require(!fqs.empty(), "stein_check needs at least one cube function");
  require(ens.size() == fqs.size(), "sign ensemble size must match the number of cubes");
  require(p >= 1.0, "L^p exponent must be >= 1");
  const auto& lat = fqs.front().f.lattice();
  std::vector<GridFunction> averaged;
  for (const auto& fq : fqs) {
    require(fq.f.lattice() == lat && fq.f.n() == fqs.front().f.n(), "cube functions must share lattice and N");
    require(lat.valid(fq.cube), "cube not in lattice");
    for (std::uint64_t c = 0; c < fq.f.cells(); ++c)
      if (!lat.contains_cell(fq.cube, c))
        for (std::size_t e = 0; e < fq.f.block(); ++e)
          require(fq.f.data()[c * fq.f.block() + e] == cplx{}, "f_Q must be supported in Q", ErrorCode::Domain);
    averaged.push_back(dyadic::expect(fq.f, fq.cube));
  }
  Comparison out;
  ens.for_each([&](const std::vector<int>& eps, double w) {
    GridFunction s1 = GridFunction::zeros_like(fqs.front().f);
    GridFunction s2 = s1;
    for (std::size_t i = 0; i < fqs.size(); ++i) {
      const double e = eps[i];
      for (std::size_t t = 0; t < s1.data().size(); ++t) {
        s1.data()[t] += e * averaged[i].data()[t];
        s2.data()[t] += e * fqs[i].f.data()[t];
      }
    }
    out.lhs += w * dyadic::lp_norm(s1, p, r);
    out.rhs += w * dyadic::lp_norm(s2, p, r);
  });
  return out;
}

std::uint64_t DecouplingSampler::sample(const dyadic::Cube& q) {
  const int k = lat_.depth() - q.level;
  const std::uint64_t count = lat_.cube_count(k);
  std::uniform_int_distribution<std::uint64_t> pick(0, count - 1);
  const std::uint64_t offset = pick(rng_);
  // Map the offset to a finest-level descendant: per coordinate, k low bits.
  const auto base = lat_.coords(q);
  std::vector<std::uint64_t> fine(base.size());
  const std::uint64_t mask = (1ULL << k) - 1;
  for (std::size_t i = 0; i < base.size(); ++i) {
    const std::uint64_t sub = (offset >> (k * (base.size() - 1 - i))) & mask;
    fine[i] = (base[i] << k) | sub;
  }
  return lat_.physical_cell(lat_.cube(lat_.depth(), fine).code);
}

ChiSquare sampler_chi_square(const dyadic::Lattice& lat, const dyadic::Cube& q, std::size_t samples,
                             std::uint64_t seed) {
  DecouplingSampler s(lat, seed);
  const auto cells = lat.cells(q);
  std::vector<std::size_t> counts(lat.cell_count(), 0);
  for (std::size_t i = 0; i < samples; ++i) {
    const auto c = s.sample(q);
    require(lat.contains_cell(q, c), "sampler left its cube", ErrorCode::Internal);
    ++counts[c];
  }
  const double expected = static_cast<double>(samples) / static_cast<double>(cells.size());
  ChiSquare out;
  for (auto c : cells) {
    const double d = static_cast<double>(counts[c]) - expected;
    out.statistic += d * d / expected;
  }
  out.dof = static_cast<double>(cells.size()) - 1.0;
  return out;
}

DecouplingResult decoupling_ratio(const GridFunction& f, int j, int k, int l, double p, double r,
                                  std::size_t samples, std::uint64_t seed) {
  require(0 <= l && l <= k, "decoupling requires 0 <= l <= k");
  require(p >= 1.0, "L^p exponent must be >= 1");
  require(samples >= 2, "decoupling needs at least two samples");
  const auto& lat = f.lattice();
  std::vector<dyadic::Cube> cubes;
  for (const auto& q : dyadic::sublattice(lat, j, k))
    if (q.level + l < lat.depth()) cubes.push_back(q);
  DecouplingResult res;
  res.cubes = cubes.size();
  res.samples = samples;
  std::vector<GridFunction> g;
  std::vector<std::vector<std::uint64_t>> cells;
  GridFunction total = GridFunction::zeros_like(f);
  for (const auto& q : cubes) {
    g.push_back(dyadic::martingale_diff_k(f, q, l));
    cells.push_back(lat.cells(q));
    total += g.back();
  }
  res.lhs = std::pow(dyadic::lp_norm(total, p, r), p);

  DecouplingSampler sampler(lat, derive_seed(seed, 1));
  Rng sign_rng(derive_seed(seed, 2));
  std::bernoulli_distribution coin(0.5);
  const double w = lat.cell_measure();
  double sum = 0.0, sum_sq = 0.0;
  GridFunction acc = GridFunction::zeros_like(f);
  for (std::size_t s = 0; s < samples; ++s) {
    std::fill(acc.data().begin(), acc.data().end(), cplx{});
    for (std::size_t i = 0; i < cubes.size(); ++i) {
      const double eps = coin(sign_rng) ? 1.0 : -1.0;
      const auto y = sampler.sample(cubes[i]);
      const Matrix v = eps * g[i].at(y);
      for (auto c : cells[i]) acc.add(c, v);
    }
    double val = 0.0;
    for (std::uint64_t c = 0; c < acc.cells(); ++c) {
      const double nv = acc.n() == 1 ? std::abs(acc.scalar_at(c)) : nc::schatten_norm(acc.at(c), r);
      val += w * std::pow(nv, p);
    }
    sum += val;
    sum_sq += val * val;
  }
  const double n = static_cast<double>(samples);
  res.rhs = sum / n;
  const double var = std::max(0.0, (sum_sq - n * res.rhs * res.rhs) / (n - 1.0));
  res.stderr_rhs = std::sqrt(var / n);
  if (res.rhs == 0.0) {
    res.ratio = res.lhs == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    res.stderr_ratio = 0.0;
  } else {
    res.ratio = res.lhs / res.rhs;
    res.stderr_ratio = res.ratio * res.stderr_rhs / res.rhs;
  }
  return res;
}

Comparison rscalar_check(const std::vector<std::vector<Matrix>>& e, const std::vector<cplx>& a,
                         const nc::ExponentTable& tab, const SignEnsemble& ens) {
  const int n = static_cast<int>(e.size());
  require(n >= 2, "the randomized product bound needs n >= 2");
  require(tab.m() == n + 1 && tab.depth() == 0, "exponent table must be a matrix (n+1)-tuple");
  const std::size_t K = a.size();
  for (const auto& row : e) require(row.size() == K, "every e_j needs one entry per coefficient");
  for (const auto& v : a) require(std::abs(v) <= 1.0 + 1e-12, "coefficients must lie in the unit disc");
  if (K == 0) return {};
  const auto dim = e.front().front().rows();
  Matrix x = Matrix::Zero(dim, dim);
  for (std::size_t k = 0; k < K; ++k) {
    Matrix prod = Matrix::Identity(dim, dim);
    for (int j = 0; j < n; ++j) prod = prod * e[static_cast<std::size_t>(j)][k];
    x += a[k] * prod;
  }
  Comparison out;
  out.lhs = nc::y_norm_analytic(x, {n}, tab);
  out.rhs = 1.0;
  for (int j = 0; j < n; ++j) out.rhs *= rad_norm(e[static_cast<std::size_t>(j)], schatten(tab.p(j, 0)), ens);
  return out;
}

Comparison key_inequality_check(const std::vector<std::vector<Matrix>>& e, const Matrix& en,
                                const nc::ExponentTable& tab) {
  const int n = static_cast<int>(e.size()) + 1;
  require(n >= 2, "the key inequality needs n >= 2");
  require(tab.m() == n + 1 && tab.depth() == 0, "exponent table must be a matrix (n+1)-tuple");
  const std::size_t K = e.front().size();
  for (const auto& row : e) require(row.size() == K, "every e_j needs the same number of entries");
  const auto dim = en.rows();
  Matrix s = Matrix::Zero(dim, dim);
  for (std::size_t k = 0; k < K; ++k) {
    Matrix prod = Matrix::Identity(dim, dim);
    for (const auto& row : e) prod = prod * row[k];
    s += prod;
  }
  std::vector<int> head(static_cast<std::size_t>(n - 1));
  std::iota(head.begin(), head.end(), 0);
  Comparison out;
  out.lhs = nc::y_norm_analytic(s * en, {n}, tab);
  out.rhs = nc::schatten_norm(s, tab.q(head, 0)) * nc::schatten_norm(en, tab.p(n - 1, 0));
  return out;
}

TransformRatio martingale_transform_ratio(const GridFunction& f, double p, double r) {
  const auto& lat = f.lattice();
  std::vector<GridFunction> d;
  d.push_back(dyadic::expect(f, lat.top()));
  for (int lv = 0; lv < lat.depth(); ++lv) {
    GridFunction dl = GridFunction::zeros_like(f);
    for (const auto& q : lat.cubes_at(lv)) dl += dyadic::martingale_diff(f, q);
    d.push_back(std::move(dl));
  }
  const double base = dyadic::lp_norm(f, p, r);
  TransformRatio out;
  if (base == 0.0) return out;
  const auto ens = SignEnsemble::exhaustive(d.size());
  ens.for_each([&](const std::vector<int>& eps, double w) {
    GridFunction s = GridFunction::zeros_like(f);
    for (std::size_t i = 0; i < d.size(); ++i)
      for (std::size_t t = 0; t < s.data().size(); ++t) s.data()[t] += static_cast<double>(eps[i]) * d[i].data()[t];
    const double ratio = dyadic::lp_norm(s, p, r) / base;
    out.max_ratio = std::max(out.max_ratio, ratio);
    out.mean_ratio += w * ratio;
  });
  out.patterns = ens.patterns();
  return out;
}

}  // namespace dyadlab::randomized
