#pragma once

#include <vector>

#include "common/types.hpp"
#include "nc/exponents.hpp"

namespace dyadlab::nc {

/// Finite weighted atom sets M_1..M_S and the leaf matrix size N.
struct MixedSpace {
  int N = 1;
  std::vector<std::vector<double>> weights;  // weights[s-1] for level s

  int levels() const noexcept { return static_cast<int>(weights.size()); }
  /// Number of leaves of a function on M_s × ⋯ × M_1.
  std::size_t leaves_below(int s) const;
  void validate() const;
};

/// Simple function on M_S × ⋯ × M_1 with N x N leaves; leaf index is
/// t_1 + |M_1| (t_2 + |M_2| (⋯)), so t_1 varies fastest.
struct NestedFunction {
  std::vector<Matrix> leaves;
};

/// Nested norm with exponents p^0..p^S: Schatten p^0 at the leaves, then weighted
/// ℓ^{p^s} over level s for s = 1..S.
double nested_norm(const NestedFunction& f, const MixedSpace& space, const std::vector<double>& exps);

/// Norm in the j-th space of the tuple: exponents taken from column j of `tab`.
double nested_norm(const NestedFunction& f, const MixedSpace& space, const ExponentTable& tab, int j);

/// Flat L^p over the product measure with S^p leaves.
double flat_norm(const NestedFunction& f, const MixedSpace& space, double p);

/// Factors f = ∏_{u} f_u (product in the order of J) with unit nested norms in the
/// spaces j ∈ J, for positive f of unit norm in the space with exponents q_J^s.
std::vector<NestedFunction> factorize_mixed(const NestedFunction& f, const MixedSpace& space,
                                            const std::vector<int>& J, const ExponentTable& tab);

/// Pointwise product of nested functions in list order.
NestedFunction pointwise_product(const std::vector<NestedFunction>& fs);

}  // namespace dyadlab::nc
