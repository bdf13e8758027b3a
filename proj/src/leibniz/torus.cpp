#include "leibniz/torus.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nc/schatten.hpp"

namespace dyadlab::leibniz {

namespace {

// One batched d-dimensional transform over all N² entry channels.
void transform(std::vector<cplx>& buf, int dim, int res, int channels, int sign) {
  std::vector<int> dims(static_cast<std::size_t>(dim), res);
  auto* ptr = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_plan plan = fftw_plan_many_dft(dim, dims.data(), channels, ptr, nullptr, channels, 1, ptr, nullptr, channels, 1,
                                      sign, FFTW_ESTIMATE);
  require(plan != nullptr, "FFT plan creation failed", ErrorCode::Internal);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
}

std::size_t ipow(int base, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

}  // namespace

TorusFunction::TorusFunction(int dim, int resolution, int n) : dim_(dim), res_(resolution), n_(n) {
  require(dim >= 1 && dim <= 3, "torus dimension must be 1, 2 or 3");
  require(resolution >= 2 && resolution % 2 == 0, "resolution must be even and >= 2");
  require(n >= 1, "matrix size must be >= 1");
  points_ = ipow(resolution, dim);
  require(points_ * block() <= (std::size_t{1} << 28), "torus grid too large");
  data_.assign(points_ * block(), cplx{});
}

TorusFunction TorusFunction::from_fourier(int dim, int resolution, int n, std::vector<cplx> coeffs) {
  TorusFunction f(dim, resolution, n);
  require(coeffs.size() == f.data_.size(), "coefficient array has the wrong size");
  f.cache_ = coeffs;
  transform(coeffs, dim, resolution, n * n, FFTW_BACKWARD);
  f.data_ = std::move(coeffs);
  return f;
}

TorusFunction TorusFunction::plane_wave(int dim, int resolution, const std::vector<int>& k, const Matrix& amplitude) {
  require(static_cast<int>(k.size()) == dim, "wavenumber has the wrong dimension");
  require(amplitude.rows() == amplitude.cols(), "amplitude must be square");
  TorusFunction f(dim, resolution, static_cast<int>(amplitude.rows()));
  for (std::size_t p = 0; p < f.points_; ++p) {
    const auto c = f.coords(p);
    double phase = 0.0;
    for (int i = 0; i < dim; ++i)
      phase += static_cast<double>(k[static_cast<std::size_t>(i)]) * c[static_cast<std::size_t>(i)] / resolution;
    f.set(p, std::polar(1.0, 2.0 * std::numbers::pi * phase) * amplitude);
  }
  return f;
}

TorusFunction TorusFunction::random_band_limited(int dim, int resolution, int n, int band, Rng& rng) {
  require(band >= 0 && 2 * band < resolution, "band must satisfy 0 <= band < R/2");
  TorusFunction probe(dim, resolution, n);
  std::vector<cplx> coeffs(probe.data_.size());
  for (std::size_t p = 0; p < probe.points_; ++p) {
    const auto k = probe.wavenumber(p);
    bool inside = true;
    for (int ki : k) inside = inside && std::abs(ki) <= band;
    if (!inside) continue;
    const double damp = 1.0 / (1.0 + probe.frequency(p));
    const Matrix g = gaussian_matrix(n, rng);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) coeffs[p * probe.block() + static_cast<std::size_t>(i * n + j)] = damp * g(i, j);
  }
  return from_fourier(dim, resolution, n, std::move(coeffs));
}

TorusFunction TorusFunction::constant(int dim, int resolution, const Matrix& value) {
  require(value.rows() == value.cols(), "value must be square");
  TorusFunction f(dim, resolution, static_cast<int>(value.rows()));
  for (std::size_t p = 0; p < f.points_; ++p) f.set(p, value);
  return f;
}

Matrix TorusFunction::at(std::size_t p) const {
  require(p < points_, "grid point out of range");
  Matrix m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m(i, j) = data_[p * block() + static_cast<std::size_t>(i * n_ + j)];
  return m;
}

void TorusFunction::set(std::size_t p, const Matrix& v) {
  require(p < points_, "grid point out of range");
  require(v.rows() == n_ && v.cols() == n_, "value has the wrong shape");
  cache_.reset();
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) data_[p * block() + static_cast<std::size_t>(i * n_ + j)] = v(i, j);
}

std::vector<int> TorusFunction::coords(std::size_t p) const {
  std::vector<int> c(static_cast<std::size_t>(dim_));
  for (int i = dim_ - 1; i >= 0; --i) {
    c[static_cast<std::size_t>(i)] = static_cast<int>(p % static_cast<std::size_t>(res_));
    p /= static_cast<std::size_t>(res_);
  }
  return c;
}

std::vector<int> TorusFunction::wavenumber(std::size_t p) const {
  auto c = coords(p);
  for (auto& v : c)
    if (v >= res_ / 2) v -= res_;
  return c;
}

double TorusFunction::frequency(std::size_t p) const {
  double s = 0.0;
  for (int v : wavenumber(p)) s += static_cast<double>(v) * v;
  return std::sqrt(s);
}

const std::vector<cplx>& TorusFunction::fourier() const {
  if (!cache_) {
    std::vector<cplx> buf = data_;
    transform(buf, dim_, res_, n_ * n_, FFTW_FORWARD);
    const double scale = 1.0 / static_cast<double>(points_);
    for (auto& v : buf) v *= scale;
    cache_ = std::move(buf);
  }
  return *cache_;
}

TorusFunction TorusFunction::multiplier(const std::function<double(double)>& m) const {
  std::vector<cplx> c = fourier();
  for (std::size_t p = 0; p < points_; ++p) {
    const double w = m(frequency(p));
    for (std::size_t e = 0; e < block(); ++e) c[p * block() + e] *= w;
  }
  return from_fourier(dim_, res_, n_, std::move(c));
}

TorusFunction TorusFunction::translate(const std::vector<int>& shift) const {
  require(static_cast<int>(shift.size()) == dim_, "shift has the wrong dimension");
  TorusFunction g(dim_, res_, n_);
  for (std::size_t p = 0; p < points_; ++p) {
    const auto c = coords(p);
    std::size_t src = 0;
    for (int i = 0; i < dim_; ++i) {
      const int v = ((c[static_cast<std::size_t>(i)] - shift[static_cast<std::size_t>(i)]) % res_ + res_) % res_;
      src = src * static_cast<std::size_t>(res_) + static_cast<std::size_t>(v);
    }
    std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(src * block()), block(),
                g.data_.begin() + static_cast<std::ptrdiff_t>(p * block()));
  }
  return g;
}

TorusFunction& TorusFunction::operator+=(const TorusFunction& o) {
  require(compatible(o), "torus functions have different shapes");
  cache_.reset();
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

TorusFunction& TorusFunction::operator-=(const TorusFunction& o) {
  require(compatible(o), "torus functions have different shapes");
  cache_.reset();
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

TorusFunction& TorusFunction::operator*=(cplx c) {
  cache_.reset();
  for (auto& v : data_) v *= c;
  return *this;
}

TorusFunction operator+(TorusFunction a, const TorusFunction& b) { return a += b; }
TorusFunction operator-(TorusFunction a, const TorusFunction& b) { return a -= b; }
TorusFunction operator*(cplx c, TorusFunction a) { return a *= c; }

TorusFunction product(const TorusFunction& f, const TorusFunction& g) {
  require(f.compatible(g), "torus functions have different shapes");
  TorusFunction out(f.dim(), f.resolution(), f.n());
  if (f.n() == 1) {
    auto& d = out.mutable_data();
    for (std::size_t p = 0; p < f.points(); ++p) d[p] = f.data()[p] * g.data()[p];
    return out;
  }
  for (std::size_t p = 0; p < f.points(); ++p) out.set(p, f.at(p) * g.at(p));
  return out;
}

TorusFunction fractional_derivative(const TorusFunction& f, double s) {
  require(s >= 0.0, "derivative order must be >= 0", ErrorCode::Domain);
  return f.multiplier([s](double k) { return k == 0.0 ? 0.0 : std::pow(2.0 * std::numbers::pi * k, s); });
}

double l2_norm(const TorusFunction& f) {
  double s = 0.0;
  for (const auto& v : f.data()) s += std::norm(v);
  return std::sqrt(s / static_cast<double>(f.points()));
}

double coefficient_l2_norm(const TorusFunction& f) {
  double s = 0.0;
  for (const auto& v : f.fourier()) s += std::norm(v);
  return std::sqrt(s);
}

double mixed_norm(const TorusFunction& f, double p, double r) {
  require(p > 0.0, "outer exponent must be > 0");
  double acc = 0.0;
  for (std::size_t x = 0; x < f.points(); ++x) {
    const double v = f.n() == 1 ? std::abs(f.data()[x]) : nc::schatten_norm(f.at(x), r);
    if (std::isinf(p))
      acc = std::max(acc, v);
    else
      acc += std::pow(v, p);
  }
  if (std::isinf(p)) return acc;
  return std::pow(acc / static_cast<double>(f.points()), 1.0 / p);
}

double max_abs_diff(const TorusFunction& a, const TorusFunction& b) {
  require(a.compatible(b), "torus functions have different shapes");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace dyadlab::leibniz
