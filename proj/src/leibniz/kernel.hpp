#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace dyadlab::leibniz {

/// A point configuration (x_1, …, x_{n+1}), each x_m ∈ R^d, stored flat.
using Config = std::vector<double>;
using KernelFn = std::function<double(const Config&)>;

struct KernelSample {
  KernelFn kernel;
  int dim = 1;
  int arity = 2;  // n: the kernel takes n+1 points
  double alpha = 1.0;
  std::size_t budget = 1000;
  std::uint64_t seed = 0;
  /// Configurations have Σ_m |x_1 − x_m| = 2^u with u stratified over [lo, hi].
  double log2_radius_lo = -3.0;
  double log2_radius_hi = 3.0;
  std::size_t strata = 16;
  /// Compass search on the Hölder quotient: number of step halvings (0 disables it),
  /// applied to starts reaching refine_fraction of the running maximum.
  int refine_levels = 0;
  double refine_fraction = 0.2;
  /// Budgets at which to record the running estimates (must not exceed budget).
  std::vector<std::size_t> checkpoints;
};

struct KernelCheckpoint {
  std::size_t budget = 0;
  double size = 0.0;
  double holder = 0.0;
};

struct KernelConstants {
  double size = 0.0;    // sup |K(x)| (Σ|x_1 − x_m|)^{dn}
  double holder = 0.0;  // sup of the Hölder quotient
  std::size_t samples = 0;
  std::size_t evaluations = 0;  // configurations evaluated, refinement included
  std::size_t rejected = 0;     // diagonal configurations
  std::vector<KernelCheckpoint> trace;  // one entry per requested checkpoint, in budget order
};

/// Running sups over sampled configurations, hence lower bounds for the true
/// constants. Sample i (its start and any refinement) depends only on (seed, i), so a
/// larger budget extends a smaller one and the estimates are nondecreasing in it.
KernelConstants cz_kernel_constant(const KernelSample& ks);

/// Configuration-level pieces, exposed for tests.
double config_radius(const Config& x, int dim, int arity);

/// The high-high bilinear kernel on R:
///   K(x, y_1, y_2) = Σ_m 2^{2m} G(2^m(y_1 − x), 2^m(y_2 − x)),
///   G(a, b) = ∫ φ_s(v) ψ(v − a) ψ(v − b) dv,
/// with ψ̂ = annulus(|ξ|) and φ̂_s = |2πξ|^s bump(|ξ|). Profiles are tabulated by FFT
/// and φ_s switches to its |v|^{-(1+s)} asymptote far out.
class HighHighKernel {
 public:
  explicit HighHighKernel(double s);

  double s() const noexcept { return s_; }
  double phi(double v) const;
  double psi(double v) const;
  double g(double a, double b) const;
  double operator()(double x, double y1, double y2) const;
  /// Hölder exponent (s − 1)/2 of the kernel class.
  double alpha() const noexcept { return (s_ - 1.0) / 2.0; }

 private:
  double interp(const std::vector<double>& table, double v) const;

  double s_;
  double step_;       // table spacing
  double half_span_;  // tables cover |v| ≤ half_span_
  double psi_window_;
  double tail_coeff_;
  double g00_;
  std::vector<double> phi_;
  std::vector<double> psi_;
  double moment_step_;
  std::vector<std::vector<double>> moments_;  // M_k(t) = ∫ y^k ψ(y − t/2) ψ(y + t/2) dy, k = 0, 2, 4, 6, from t = −2 steps
};

}  // namespace dyadlab::leibniz
