#pragma once

#include "leibniz/torus.hpp"

namespace dyadlab::leibniz {

/// Smooth radial cutoff: 1 on r ≤ 1, 0 on r ≥ 2, with an exp(−1/t) bridge in between.
double bump(double r);
/// Annulus profile Ψ(r) = bump(r) − bump(2r), supported in 1/2 ≤ r ≤ 2.
double annulus(double r);

/// Littlewood–Paley pieces of f: index 0 is the zero frequency, index m+1 is the
/// annulus multiplier Ψ(2^{-m}|k|) for m = 0..M with 2^M ≥ max|k|.
std::vector<TorusFunction> littlewood_paley(const TorusFunction& f);
/// max_k |Σ_m Ψ_m(k) − 1| over the grid frequencies.
double partition_defect(int dim, int resolution);

struct ParaproductSplit {
  TorusFunction pi1;  // f at higher frequency than g
  TorusFunction pi2;  // g at higher frequency than f
  TorusFunction pi3;  // comparable frequencies
  TorusFunction full;  // D^s(fg)
  double partition_defect = 0.0;
  double reconstruction_defect = 0.0;  // ‖Π₁+Π₂+Π₃ − D^s(fg)‖₂ / ‖D^s(fg)‖₂
};

/// Splits D^s(fg) by the annulus indices a (of f) and b (of g): Π₁ takes a ≥ b + 2,
/// Π₂ takes b ≥ a + 2, Π₃ takes |a − b| ≤ 1. The zero frequency ranks below every
/// annulus, so a constant factor always counts as the low part.
ParaproductSplit paraproduct_split(const TorusFunction& f, const TorusFunction& g, double s);

struct LeibnizExponents {
  double p1 = 4, p2 = 4, q3 = 2, r1 = 4, r2 = 4;
  /// Rejects tuples outside 1 < p_i, r_i ≤ ∞, 1/2 < q3 < ∞, 1/q3 = 1/p1 + 1/p2 = 1/r1 + 1/r2.
  void validate() const;
};

struct LeibnizRatio {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

/// ‖D^s(fg)‖_{L^{q3}(S^{q3'})} against ‖D^s f‖_{L^{p1}(S^{p1'})}‖g‖_{L^{p2}(S^{p2'})} +
/// ‖f‖_{L^{r1}(S^{p1'})}‖D^s g‖_{L^{r2}(S^{p2'})}. Scalar inputs use |·| pointwise.
LeibnizRatio leibniz_ratio(const TorusFunction& f, const TorusFunction& g, double s, const LeibnizExponents& e);

}  // namespace dyadlab::leibniz
