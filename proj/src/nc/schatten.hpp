#pragma once

#include <vector>

#include "common/types.hpp"

namespace dyadlab::nc {

/// Hölder conjugate p' with 1/p + 1/p' = 1 (1 ↔ ∞).
double conjugate(double p);

cplx trace(const Matrix& a);
/// τ(AB), rejecting incompatible shapes.
cplx trace_product(const Matrix& a, const Matrix& b);

Eigen::VectorXd singular_values(const Matrix& a);
/// ℓ^p norm of the singular values; p = ∞ gives the operator norm.
double schatten_norm(const Matrix& a, double p);

struct HolderCheck {
  double lhs = 0.0;  // ‖AB‖_{S^p}
  double rhs = 0.0;  // ‖A‖_{S^{p1}} ‖B‖_{S^{p2}}
};
HolderCheck holder_product_check(const Matrix& a, const Matrix& b, double p1, double p2);

bool is_hermitian(const Matrix& a, double tol = 1e-10);
bool is_positive(const Matrix& a, double tol = 1e-10);
/// A^θ for positive semidefinite A; eigenvalues above −1e-10 are clipped to 0.
Matrix power_pos(const Matrix& a, double theta);

/// B with ‖B‖_{S^{p'}} = 1 and τ(AB) = ‖A‖_{S^p}, built from the SVD of A.
Matrix dual_maximizer(const Matrix& a, double p);

/// B_u = A^{q/p_u}; requires Σ 1/p_u = 1/q and ‖A‖_{S^q} = 1.
std::vector<Matrix> factorize_positive(const Matrix& a, double q, const std::vector<double>& ps);

}  // namespace dyadlab::nc
