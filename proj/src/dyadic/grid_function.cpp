#include "dyadic/grid_function.hpp"

#include <algorithm>
#include <cmath>

#include "nc/schatten.hpp"

namespace dyadlab::dyadic {

GridFunction::GridFunction(Lattice lat, ValueKind kind, int n)
    : lat_(std::move(lat)), kind_(kind), n_(kind == ValueKind::Scalar ? 1 : n) {
  require(n_ >= 1, "matrix dimension must be >= 1");
  data_.assign(lat_.cell_count() * block(), cplx{0.0, 0.0});
}

GridFunction GridFunction::zeros_like(const GridFunction& f) {
  return GridFunction(f.lat_, f.kind_, f.n_);
}

GridFunction GridFunction::scalar(Lattice lat, std::vector<cplx> values) {
  GridFunction f(std::move(lat), ValueKind::Scalar, 1);
  require(values.size() == f.data_.size(), "scalar values must have one entry per finest cell");
  f.data_ = std::move(values);
  return f;
}

GridFunction GridFunction::constant(Lattice lat, const Matrix& value) {
  require(value.rows() == value.cols(), "matrix values must be square");
  const bool is_scalar = value.rows() == 1;
  GridFunction f(std::move(lat), is_scalar ? ValueKind::Scalar : ValueKind::Matrix,
                 static_cast<int>(value.rows()));
  for (std::uint64_t c = 0; c < f.cells(); ++c) f.set(c, value);
  return f;
}

GridFunction GridFunction::random_matrix(Lattice lat, int n, Rng& rng) {
  GridFunction f(std::move(lat), ValueKind::Matrix, n);
  for (auto& v : f.data_) v = complex_gaussian(rng);
  return f;
}

GridFunction GridFunction::random_scalar(Lattice lat, Rng& rng) {
  GridFunction f(std::move(lat), ValueKind::Scalar, 1);
  for (auto& v : f.data_) v = complex_gaussian(rng);
  return f;
}

GridFunction GridFunction::indicator(Lattice lat, const Cube& q, const Matrix& value) {
  require(value.rows() == value.cols(), "matrix values must be square");
  GridFunction f(std::move(lat), value.rows() == 1 ? ValueKind::Scalar : ValueKind::Matrix,
                 static_cast<int>(value.rows()));
  for (auto c : f.lat_.cells(q)) f.set(c, value);
  return f;
}

Matrix GridFunction::at(std::uint64_t cell) const {
  Matrix m(n_, n_);
  const cplx* p = data_.data() + cell * block();
  for (int r = 0; r < n_; ++r)
    for (int c = 0; c < n_; ++c) m(r, c) = p[r * n_ + c];
  return m;
}

void GridFunction::set(std::uint64_t cell, const Matrix& value) {
  require(value.rows() == n_ && value.cols() == n_, "value dimension mismatch");
  cplx* p = data_.data() + cell * block();
  for (int r = 0; r < n_; ++r)
    for (int c = 0; c < n_; ++c) p[r * n_ + c] = value(r, c);
}

void GridFunction::add(std::uint64_t cell, const Matrix& value) {
  require(value.rows() == n_ && value.cols() == n_, "value dimension mismatch");
  cplx* p = data_.data() + cell * block();
  for (int r = 0; r < n_; ++r)
    for (int c = 0; c < n_; ++c) p[r * n_ + c] += value(r, c);
}

Matrix GridFunction::integral() const {
  Matrix acc = Matrix::Zero(n_, n_);
  for (std::uint64_t c = 0; c < cells(); ++c) acc += at(c);
  return acc * lat_.cell_measure();
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

double GridFunction::max_abs_diff(const GridFunction& other) const {
  require(compatible(other), "grid functions are not compatible");
  double m = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i) m = std::max(m, std::abs(data_[i] - other.data_[i]));
  return m;
}

bool GridFunction::compatible(const GridFunction& other) const {
  return lat_.dim() == other.lat_.dim() && lat_.depth() == other.lat_.depth() && n_ == other.n_;
}

GridFunction GridFunction::on_lattice(Lattice lat) const {
  require(lat.dim() == lat_.dim() && lat.depth() == lat_.depth(), "lattice shape mismatch");
  GridFunction f = *this;
  f.lat_ = std::move(lat);
  return f;
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  require(compatible(other), "grid functions are not compatible");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
  require(compatible(other), "grid functions are not compatible");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(cplx c) {
  for (auto& v : data_) v *= c;
  return *this;
}

Matrix integral_product(const GridFunction& f, const GridFunction& g) {
  require(f.compatible(g), "grid functions are not compatible");
  Matrix acc = Matrix::Zero(f.n(), f.n());
  for (std::uint64_t c = 0; c < f.cells(); ++c) acc += f.at(c) * g.at(c);
  return acc * f.lattice().cell_measure();
}

GridFunction pointwise_norm(const GridFunction& f, double p) {
  GridFunction out(f.lattice(), ValueKind::Scalar, 1);
  for (std::uint64_t c = 0; c < f.cells(); ++c)
    out.data()[c] = f.n() == 1 ? std::abs(f.scalar_at(c)) : nc::schatten_norm(f.at(c), p);
  return out;
}

double lp_norm(const GridFunction& f, double p, double r) {
  require(p >= 1.0, "L^p exponent must be >= 1");
  const double w = f.lattice().cell_measure();
  double acc = 0.0;
  double sup = 0.0;
  for (std::uint64_t c = 0; c < f.cells(); ++c) {
    const double v = f.n() == 1 ? std::abs(f.scalar_at(c)) : nc::schatten_norm(f.at(c), r);
    if (std::isinf(p))
      sup = std::max(sup, v);
    else
      acc += w * std::pow(v, p);
  }
  return std::isinf(p) ? sup : std::pow(acc, 1.0 / p);
}

}  // namespace dyadlab::dyadic
