#pragma once

#include <cstdint>
#include <vector>

#include "common/random.hpp"
#include "common/types.hpp"
#include "dyadic/lattice.hpp"

namespace dyadlab::dyadic {

enum class ValueKind { Scalar, Matrix };

/// Piecewise-constant function on the finest cells of a lattice. Scalar values are
/// stored as 1x1 blocks so every operation can treat values as matrices.
class GridFunction {
 public:
  GridFunction(Lattice lat, ValueKind kind, int n);

  static GridFunction zeros_like(const GridFunction& f);
  static GridFunction scalar(Lattice lat, std::vector<cplx> values);
  static GridFunction constant(Lattice lat, const Matrix& value);
  static GridFunction random_matrix(Lattice lat, int n, Rng& rng);
  static GridFunction random_scalar(Lattice lat, Rng& rng);
  /// Applies `value` on every finest cell of q and zero elsewhere.
  static GridFunction indicator(Lattice lat, const Cube& q, const Matrix& value);

  const Lattice& lattice() const noexcept { return lat_; }
  ValueKind kind() const noexcept { return kind_; }
  int n() const noexcept { return n_; }
  std::uint64_t cells() const noexcept { return lat_.cell_count(); }
  std::size_t block() const noexcept { return static_cast<std::size_t>(n_) * n_; }

  /// Value on a physical finest cell (row-major N x N).
  Matrix at(std::uint64_t cell) const;
  void set(std::uint64_t cell, const Matrix& value);
  void add(std::uint64_t cell, const Matrix& value);
  cplx scalar_at(std::uint64_t cell) const { return data_[cell * block()]; }

  const std::vector<cplx>& data() const noexcept { return data_; }
  std::vector<cplx>& data() noexcept { return data_; }

  /// ∫ f over [0,1)^d.
  Matrix integral() const;
  double max_abs() const;
  double max_abs_diff(const GridFunction& other) const;
  bool compatible(const GridFunction& other) const;
  /// Same values viewed on another lattice of the same shape.
  GridFunction on_lattice(Lattice lat) const;

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(cplx c);
  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(cplx c, GridFunction a) { return a *= c; }

 private:
  Lattice lat_;
  ValueKind kind_;
  int n_;
  std::vector<cplx> data_;
};

/// ∫ f g with the pointwise matrix product, no conjugation.
Matrix integral_product(const GridFunction& f, const GridFunction& g);

/// Pointwise Schatten-p norm, as a scalar function.
GridFunction pointwise_norm(const GridFunction& f, double p);

/// Discrete L^p(S^r) norm: (∫ ‖f(x)‖_{S^r}^p dx)^{1/p}.
double lp_norm(const GridFunction& f, double p, double r);

}  // namespace dyadlab::dyadic
