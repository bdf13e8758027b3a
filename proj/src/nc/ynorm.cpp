#include "nc/ynorm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "common/random.hpp"
#include "nc/schatten.hpp"

namespace dyadlab::nc {

namespace {

void check_level0(const ExponentTable& tab) {
  require(tab.depth() == 0, "y_norm is defined for matrix-valued tuples (S = 0)");
}

Matrix normalized(const Matrix& m, double p) {
  const double n = schatten_norm(m, p);
  return n == 0.0 ? m : Matrix(m / n);
}

std::vector<std::vector<int>> orderings(const std::vector<int>& J) {
  std::vector<int> perm(J.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> out;
  do out.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

}  // namespace

double product_pairing(const Matrix& e, const std::vector<Matrix>& factors) {
  Matrix acc = e;
  for (const auto& f : factors) {
    require(acc.cols() == f.rows(), "dimension mismatch in matrix product");
    acc = acc * f;
  }
  return std::abs(trace(acc));
}

double y_norm_analytic(const Matrix& e, const std::vector<int>& J, const ExponentTable& tab) {
  check_level0(tab);
  return schatten_norm(e, tab.p_dual(J, 0));
}

std::vector<Matrix> svd_aligned_tuple(const Matrix& e, const std::vector<int>& order, const ExponentTable& tab) {
  check_level0(tab);
  tab.check_index_set(order);
  const auto n = e.rows();
  const double pj = tab.p_dual(order, 0);
  const double qj = tab.q(order, 0);
  Eigen::JacobiSVD<Matrix> svd(e, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd s = svd.singularValues();
  // Diagonal d ≥ 0 with ‖d‖_{q_J} = 1 maximizing Σ σ_i d_i.
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
  const double norm = schatten_norm(e, pj);
  if (norm == 0.0 || std::isinf(pj)) {
    d[0] = 1.0;
  } else if (std::isinf(qj)) {
    d.setOnes();
  } else {
    for (Eigen::Index i = 0; i < n; ++i) d[i] = std::pow(s[i] / norm, pj - 1.0);
  }
  auto power = [&](double a) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = d[i] == 0.0 ? 0.0 : std::pow(d[i], a);
    return Matrix(v.cast<cplx>().asDiagonal());
  };
  const std::size_t k = order.size();
  std::vector<Matrix> out;
  out.reserve(k);
  for (std::size_t u = 0; u < k; ++u) {
    const double pu = tab.p(order[u], 0);
    const double a = std::isinf(qj) ? 0.0 : (std::isinf(pu) ? 0.0 : qj / pu);
    Matrix f = std::isinf(pu) ? Matrix(Matrix::Identity(n, n)) : power(a);
    if (u == 0) f = svd.matrixV() * f;
    if (u + 1 == k) f = f * svd.matrixU().adjoint();
    out.push_back(std::move(f));
  }
  return out;
}

YNormResult y_norm(const Matrix& e, const std::vector<int>& J, const ExponentTable& tab, const YNormOptions& opts) {
  check_level0(tab);
  tab.check_index_set(J);
  require(e.rows() == e.cols(), "y_norm needs a square matrix");
  YNormResult res;
  res.analytic = y_norm_analytic(e, J, tab);
  const int n = static_cast<int>(e.rows());
  const std::size_t k = J.size();
  const auto perms = orderings(J);

  auto evaluate = [&](const std::vector<Matrix>& tuple) {
    double best = 0.0;
    std::vector<Matrix> ordered(k);
    for (const auto& perm : perms) {
      for (std::size_t u = 0; u < k; ++u) ordered[u] = tuple[static_cast<std::size_t>(perm[u])];
      best = std::max(best, product_pairing(e, ordered));
    }
    ++res.proposals;
    return best;
  };

  if (opts.svd_candidates) {
    for (const auto& perm : perms) {
      std::vector<int> order(k);
      for (std::size_t u = 0; u < k; ++u) order[u] = J[static_cast<std::size_t>(perm[u])];
      const auto cand = svd_aligned_tuple(e, order, tab);
      std::vector<Matrix> tuple(k);
      for (std::size_t u = 0; u < k; ++u) tuple[static_cast<std::size_t>(perm[u])] = cand[u];
      res.empirical = std::max(res.empirical, evaluate(tuple));
    }
  }

  Rng rng(opts.seed);
  std::vector<Matrix> best(k);
  double best_val = -1.0;
  const std::size_t explore = std::max<std::size_t>(1, opts.budget / 10);
  double step = 0.5;
  while (res.proposals < opts.budget) {
    std::vector<Matrix> tuple(k);
    const bool perturb = best_val >= 0.0 && res.proposals >= explore;
    for (std::size_t u = 0; u < k; ++u) {
      const double pu = tab.p(J[u], 0);
      Matrix g = gaussian_matrix(n, rng);
      if (perturb) g = best[u] + step * normalized(g, pu);
      tuple[u] = normalized(g, pu);
    }
    const double v = evaluate(tuple);
    if (v > best_val) {
      best_val = v;
      best = tuple;
      if (perturb) step = std::min(1.0, step * 1.3);
    } else if (perturb) {
      step = std::max(1e-4, step * 0.97);
    }
  }
  res.empirical = std::max(res.empirical, best_val);
  return res;
}

}  // namespace dyadlab::nc
