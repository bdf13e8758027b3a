#pragma once

#include <cstdint>
#include <vector>

#include "common/types.hpp"
#include "nc/exponents.hpp"

namespace dyadlab::nc {

struct YNormOptions {
  std::size_t budget = 10000;
  std::uint64_t seed = 0;
  bool svd_candidates = true;
};

struct YNormResult {
  double analytic = 0.0;   // ‖e‖_{S^{p_J}}
  double empirical = 0.0;  // best |τ(e ∏ e_σ)| found over unit tuples and orderings
  std::size_t proposals = 0;
};

/// ‖e‖ in the dual of the product of the spaces indexed by J (level 0 of `tab`).
double y_norm_analytic(const Matrix& e, const std::vector<int>& J, const ExponentTable& tab);

/// Analytic value plus a random-search lower bound over unit tuples (e_j)_{j∈J}
/// with e_j in S^{p_j}, maximizing over all product orderings.
YNormResult y_norm(const Matrix& e, const std::vector<int>& J, const ExponentTable& tab,
                   const YNormOptions& opts = {});

/// Unit factors, listed in product order `order` (a permutation of J), with
/// τ(e F_1 ⋯ F_k) = ‖e‖_{S^{p_J}}.
std::vector<Matrix> svd_aligned_tuple(const Matrix& e, const std::vector<int>& order, const ExponentTable& tab);

/// |τ(e F_1 ⋯ F_k)|.
double product_pairing(const Matrix& e, const std::vector<Matrix>& factors);

}  // namespace dyadlab::nc
