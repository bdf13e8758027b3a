#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "common/random.hpp"
#include "common/types.hpp"

namespace dyadlab::leibniz {

/// Matrix-valued samples on the periodic grid (Z/R)^d, points row-major with coordinate 0
/// most significant, N×N entries row-major per point. Fourier coefficients use
/// f(x) = Σ_k ĉ_k e^{2πi k·x} with k ∈ [−R/2, R/2)^d.
class TorusFunction {
 public:
  TorusFunction(int dim, int resolution, int n);

  static TorusFunction from_fourier(int dim, int resolution, int n, std::vector<cplx> coeffs);
  /// amplitude · e^{2πi k·x}.
  static TorusFunction plane_wave(int dim, int resolution, const std::vector<int>& k, const Matrix& amplitude);
  /// Gaussian matrix coefficients on max_i |k_i| ≤ band, damped by (1+|k|)^{-1}.
  static TorusFunction random_band_limited(int dim, int resolution, int n, int band, Rng& rng);
  static TorusFunction constant(int dim, int resolution, const Matrix& value);

  int dim() const noexcept { return dim_; }
  int resolution() const noexcept { return res_; }
  int n() const noexcept { return n_; }
  std::size_t points() const noexcept { return points_; }
  std::size_t block() const noexcept { return static_cast<std::size_t>(n_) * n_; }

  const std::vector<cplx>& data() const noexcept { return data_; }
  std::vector<cplx>& mutable_data() {
    cache_.reset();
    return data_;
  }
  Matrix at(std::size_t p) const;
  void set(std::size_t p, const Matrix& v);

  /// Grid coordinates of point p, each in [0, R).
  std::vector<int> coords(std::size_t p) const;
  /// Signed wavenumber of coefficient slot p.
  std::vector<int> wavenumber(std::size_t p) const;
  /// Euclidean length of wavenumber(p).
  double frequency(std::size_t p) const;

  /// Coefficients in the grid layout, computed once and cached.
  const std::vector<cplx>& fourier() const;

  /// Multiplies every coefficient by m(|k|) and transforms back.
  TorusFunction multiplier(const std::function<double(double)>& m) const;
  /// g(x) = f(x − shift·R^{-1}) cyclically.
  TorusFunction translate(const std::vector<int>& shift) const;

  TorusFunction& operator+=(const TorusFunction& o);
  TorusFunction& operator-=(const TorusFunction& o);
  TorusFunction& operator*=(cplx c);

  bool compatible(const TorusFunction& o) const noexcept {
    return dim_ == o.dim_ && res_ == o.res_ && n_ == o.n_;
  }

 private:
  int dim_;
  int res_;
  int n_;
  std::size_t points_;
  std::vector<cplx> data_;
  mutable std::optional<std::vector<cplx>> cache_;
};

TorusFunction operator+(TorusFunction a, const TorusFunction& b);
TorusFunction operator-(TorusFunction a, const TorusFunction& b);
TorusFunction operator*(cplx c, TorusFunction a);

/// Pointwise matrix product f(x)g(x).
TorusFunction product(const TorusFunction& f, const TorusFunction& g);

/// Multiplier |2πk|^s; the zero frequency is annihilated.
TorusFunction fractional_derivative(const TorusFunction& f, double s);

/// (R^{-d} Σ_x ‖f(x)‖_F²)^{1/2}.
double l2_norm(const TorusFunction& f);
/// (Σ_k ‖ĉ_k‖_F²)^{1/2}.
double coefficient_l2_norm(const TorusFunction& f);
/// (R^{-d} Σ_x ‖f(x)‖_{S^r}^p)^{1/p}, p = ∞ gives the max; p may be below 1.
double mixed_norm(const TorusFunction& f, double p, double r);
double max_abs_diff(const TorusFunction& a, const TorusFunction& b);

}  // namespace dyadlab::leibniz
