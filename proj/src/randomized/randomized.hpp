#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "dyadic/haar.hpp"
#include "nc/exponents.hpp"
#include "nc/mixed.hpp"
#include "nc/schatten.hpp"
#include "randomized/signs.hpp"

namespace dyadlab::randomized {

template <class V>
using NormFn = std::function<double(const V&)>;

inline NormFn<Matrix> schatten(double p) {
  return [p](const Matrix& m) { return nc::schatten_norm(m, p); };
}

inline NormFn<nc::NestedFunction> nested(nc::MixedSpace space, std::vector<double> exps) {
  return [space = std::move(space), exps = std::move(exps)](const nc::NestedFunction& f) {
    return nc::nested_norm(f, space, exps);
  };
}

inline Matrix scaled_sum(const std::vector<Matrix>& xs, const std::vector<cplx>& c) {
  Matrix acc = Matrix::Zero(xs.front().rows(), xs.front().cols());
  for (std::size_t i = 0; i < xs.size(); ++i) acc += c[i] * xs[i];
  return acc;
}

inline nc::NestedFunction scaled_sum(const std::vector<nc::NestedFunction>& xs, const std::vector<cplx>& c) {
  nc::NestedFunction acc = xs.front();
  for (auto& m : acc.leaves) m.setZero();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    require(xs[i].leaves.size() == acc.leaves.size(), "nested values have different shapes");
    for (std::size_t t = 0; t < acc.leaves.size(); ++t) acc.leaves[t] += c[i] * xs[i].leaves[t];
  }
  return acc;
}

/// (𝔼 ‖Σ ε_m a_m x_m‖^p)^{1/p}; p = ∞ gives the maximum over patterns.
template <class V>
double sign_moment(const std::vector<V>& xs, const std::vector<cplx>& a, const NormFn<V>& norm, double p,
                   const SignEnsemble& ens) {
  require(p > 0.0, "moment exponent must be > 0");
  if (xs.empty()) return 0.0;
  require(ens.size() == xs.size(), "sign ensemble size must match the number of vectors");
  require(a.size() == xs.size(), "need one coefficient per vector");
  double acc = 0.0;
  std::vector<cplx> c(xs.size());
  ens.for_each([&](const std::vector<int>& eps, double w) {
    for (std::size_t i = 0; i < xs.size(); ++i) c[i] = static_cast<double>(eps[i]) * a[i];
    const double v = norm(scaled_sum(xs, c));
    if (std::isinf(p))
      acc = std::max(acc, v);
    else
      acc += w * std::pow(v, p);
  });
  return std::isinf(p) ? acc : std::pow(acc, 1.0 / p);
}

template <class V>
double sign_moment(const std::vector<V>& xs, const NormFn<V>& norm, double p, const SignEnsemble& ens) {
  return sign_moment(xs, std::vector<cplx>(xs.size(), cplx{1.0, 0.0}), norm, p, ens);
}

/// ‖(x_m)‖_{Rad(X)} = (𝔼 ‖Σ ε_m x_m‖²)^{1/2}.
template <class V>
double rad_norm(const std::vector<V>& xs, const NormFn<V>& norm, const SignEnsemble& ens) {
  return sign_moment(xs, norm, 2.0, ens);
}

/// Ratio of the p-th to the q-th sign moment.
template <class V>
double kk_ratio(const std::vector<V>& xs, const NormFn<V>& norm, double p, double q, const SignEnsemble& ens) {
  const double mq = sign_moment(xs, norm, q, ens);
  const double mp = sign_moment(xs, norm, p, ens);
  if (mq == 0.0) return mp == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return mp / mq;
}

struct Comparison {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio() const { return rhs == 0.0 ? (lhs == 0.0 ? 1.0 : std::numeric_limits<double>::infinity()) : lhs / rhs; }
};

/// lhs = p-th moment with coefficients a_m, rhs = max|a_m| times the moment without.
template <class V>
Comparison contraction_check(const std::vector<V>& xs, const std::vector<cplx>& a, const NormFn<V>& norm, double p,
                             const SignEnsemble& ens) {
  require(p >= 1.0, "contraction check needs p >= 1");
  double amax = 0.0;
  for (const auto& v : a) amax = std::max(amax, std::abs(v));
  return {sign_moment(xs, a, norm, p, ens), amax * sign_moment(xs, norm, p, ens)};
}

/// One f_Q per cube, each supported in its cube.
struct CubeFunction {
  dyadic::Cube cube;
  dyadic::GridFunction f;
};

/// lhs = 𝔼‖Σ ε_Q ⟨f_Q⟩_Q 1_Q‖_{L^p(S^r)}, rhs = 𝔼‖Σ ε_Q f_Q‖_{L^p(S^r)}.
Comparison stein_check(const std::vector<CubeFunction>& fqs, double p, double r, const SignEnsemble& ens);

/// Draws y_Q uniformly among the finest cells of Q.
class DecouplingSampler {
 public:
  DecouplingSampler(dyadic::Lattice lat, std::uint64_t seed) : lat_(std::move(lat)), rng_(seed) {}
  std::uint64_t sample(const dyadic::Cube& q);
  const dyadic::Lattice& lattice() const noexcept { return lat_; }

 private:
  dyadic::Lattice lat_;
  Rng rng_;
};

/// Pearson χ² statistic of `samples` draws of y_Q against the uniform law on Q's cells,
/// with degrees of freedom (cells − 1).
struct ChiSquare {
  double statistic = 0.0;
  double dof = 0.0;
};
ChiSquare sampler_chi_square(const dyadic::Lattice& lat, const dyadic::Cube& q, std::size_t samples,
                             std::uint64_t seed);

struct DecouplingResult {
  double lhs = 0.0;     // ∫‖Σ_Q Δ_Q^l f‖^p
  double rhs = 0.0;     // Monte-Carlo mean of ∫‖Σ_Q ε_Q 1_Q Δ_Q^l f(y_Q)‖^p
  double stderr_rhs = 0.0;
  double ratio = 1.0;
  double stderr_ratio = 0.0;
  std::size_t cubes = 0;
  std::size_t samples = 0;
};

/// Two sides of the decoupling comparison over the sublattice D_{j,k} with Δ^l.
DecouplingResult decoupling_ratio(const dyadic::GridFunction& f, int j, int k, int l, double p, double r,
                                  std::size_t samples, std::uint64_t seed);

/// lhs = ‖Σ_k a_k ∏_j e_{j,k}‖ in the dual of the last tuple space, rhs = ∏_j Rad norms of
/// (e_{j,k})_k in S^{p_j}. `e[j][k]` for j = 0..n−1; `tab` is the (n+1)-tuple.
Comparison rscalar_check(const std::vector<std::vector<Matrix>>& e, const std::vector<cplx>& a,
                         const nc::ExponentTable& tab, const SignEnsemble& ens);

/// lhs = ‖Σ_k ∏_{j<n} e_{j,k} e_n‖ in the dual of X_{n+1}; rhs = ‖Σ_k ∏_{j<n} e_{j,k}‖ in
/// the bidual of (X_1..X_{n−1}) times ‖e_n‖_{X_n}. `e[j][k]` for j = 0..n−2.
Comparison key_inequality_check(const std::vector<std::vector<Matrix>>& e, const Matrix& en,
                                const nc::ExponentTable& tab);

struct TransformRatio {
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
  std::size_t patterns = 0;
};

/// ‖Σ ε_i d_i‖_{L^p(S^r)} / ‖Σ d_i‖_{L^p(S^r)} over all sign patterns, with d_0 = ⟨f⟩ and
/// d_i the level-(i−1) martingale differences.
TransformRatio martingale_transform_ratio(const dyadic::GridFunction& f, double p, double r);

}  // namespace dyadlab::randomized
