#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "leibniz/kernel.hpp"
#include "leibniz/leibniz.hpp"
#include "oracles.hpp"

using namespace dyadlab;
using namespace dyadlab::leibniz;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInfinity = std::numeric_limits<double>::infinity();

TorusFunction scalar_torus(int R, const std::function<cplx(double)>& f) {
  TorusFunction t(1, R, 1);
  for (int x = 0; x < R; ++x) t.set(static_cast<std::size_t>(x), Matrix::Constant(1, 1, f(static_cast<double>(x) / R)));
  return t;
}

// 2∫_0^2 m(ξ) cos(2πξv) dξ by composite Simpson; the transforms are even and supported in |ξ| ≤ 2.
double cosine_transform(const std::function<double(double)>& m, double v, int intervals = 4000) {
  const double h = 2.0 / intervals;
  double acc = 0.0;
  for (int i = 0; i <= intervals; ++i) {
    const double xi = i * h;
    const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * m(xi) * std::cos(2.0 * kPi * xi * v);
  }
  return 2.0 * acc * h / 3.0;
}

double psi_ref(double v) { return cosine_transform(annulus, v); }
double phi_ref(double s, double v) {
  return cosine_transform([s](double xi) { return std::pow(2.0 * kPi * xi, s) * bump(xi); }, v);
}

}  // namespace

TEST_CASE("fractional derivatives on the torus") {
  const int R = 64;
  const auto c = scalar_torus(R, [](double x) { return std::cos(2.0 * kPi * x); });
  const auto d = fractional_derivative(c, 1.0);
  for (int x = 0; x < R; ++x)
    CHECK(std::abs(d.at(static_cast<std::size_t>(x))(0, 0) - 2.0 * kPi * std::cos(2.0 * kPi * x / R)) < 1e-11);

  CHECK(mixed_norm(fractional_derivative(TorusFunction::constant(1, R, Matrix::Constant(1, 1, 3.0)), 1.3), 2.0, 2.0) <
        1e-13);

  Rng rng(1);
  const auto f = TorusFunction::random_band_limited(1, R, 1, 20, rng);
  const auto twice = fractional_derivative(fractional_derivative(f, 0.7), 1.3);
  const auto once = fractional_derivative(f, 2.0);
  CHECK(max_abs_diff(twice, once) < 1e-9 * mixed_norm(once, kInfinity, 2.0));
  std::vector<cplx> vals(R);
  for (int x = 0; x < R; ++x) vals[static_cast<std::size_t>(x)] = f.at(static_cast<std::size_t>(x))(0, 0);
  const auto want = oracle::dft_derivative(vals, 1.5);
  const auto got = fractional_derivative(f, 1.5);
  for (int x = 0; x < R; ++x) CHECK(std::abs(got.at(static_cast<std::size_t>(x))(0, 0) - want[static_cast<std::size_t>(x)]) < 1e-9);

  // Translation commutes with the multiplier, and f(x − 5/R) is a shift of samples.
  const auto tr = f.translate({5});
  for (int x = 0; x < R; ++x)
    CHECK(std::abs(tr.at(static_cast<std::size_t>(x))(0, 0) - f.at(static_cast<std::size_t>((x + R - 5) % R))(0, 0)) <
          1e-12);
  CHECK(max_abs_diff(fractional_derivative(tr, 1.5), fractional_derivative(f, 1.5).translate({5})) < 1e-9);
  CHECK(l2_norm(f) == doctest::Approx(coefficient_l2_norm(f)).epsilon(1e-12));
}

TEST_CASE("Littlewood-Paley decomposition") {
  CHECK(partition_defect(1, 256) < 1e-12);
  CHECK(partition_defect(2, 32) < 1e-12);
  CHECK(annulus(0.4) == 0.0);
  CHECK(annulus(1.0) == doctest::Approx(1.0));
  CHECK(bump(0.5) == 1.0);
  CHECK(bump(2.5) == 0.0);

  Rng rng(2);
  const auto f = TorusFunction::random_band_limited(1, 128, 2, 30, rng);
  const auto pieces = littlewood_paley(f);
  TorusFunction sum(1, 128, 2);
  for (const auto& p : pieces) sum += p;
  CHECK(max_abs_diff(sum, f) < 1e-12);
}

TEST_CASE("paraproduct split") {
  Rng rng(3);
  const auto f = TorusFunction::random_band_limited(1, 256, 2, 16, rng);
  const auto g = TorusFunction::random_band_limited(1, 256, 2, 16, rng);
  const auto sp = paraproduct_split(f, g, 1.5);
  CHECK(sp.reconstruction_defect < 1e-6);
  CHECK(max_abs_diff(sp.pi1 + sp.pi2 + sp.pi3, sp.full) < 1e-6 * mixed_norm(sp.full, kInfinity, 2.0));
  CHECK(max_abs_diff(sp.full, fractional_derivative(product(f, g), 1.5)) < 1e-9 * mixed_norm(sp.full, kInfinity, 2.0));

  // A constant factor is always the low-frequency side.
  const auto one = TorusFunction::constant(1, 256, Matrix::Identity(2, 2));
  const auto c = paraproduct_split(f, one, 1.5);
  CHECK(mixed_norm(c.pi2, 2.0, 2.0) < 1e-12);
  CHECK(mixed_norm(c.pi3, 2.0, 2.0) < 1e-12);
  CHECK(max_abs_diff(c.pi1, fractional_derivative(f, 1.5)) < 1e-9 * mixed_norm(c.pi1, kInfinity, 2.0));
}

TEST_CASE("Leibniz ratios") {
  LeibnizExponents e;
  CHECK_NOTHROW(e.validate());
  CHECK_THROWS_AS((LeibnizExponents{4, 4, 3, 4, 4}.validate()), Error);
  CHECK_THROWS_AS((LeibnizExponents{1, 4, 0.8, 4, 4}.validate()), Error);
  CHECK_NOTHROW((LeibnizExponents{3, 6, 2, 2.4, 12}.validate()));

  for (double s : {1.2, 1.5, 2.5}) {
    const auto w = TorusFunction::plane_wave(1, 64, {3}, Matrix::Identity(1, 1));
    const auto r = leibniz_ratio(w, w, s, e);
    CHECK(r.ratio == doctest::Approx(std::pow(2.0, s - 1.0)).epsilon(1e-9));
  }
  Rng rng(4);
  const auto f = TorusFunction::random_band_limited(1, 128, 2, 8, rng);
  const auto g = TorusFunction::random_band_limited(1, 128, 2, 8, rng);
  const auto base = leibniz_ratio(f, g, 1.5, e);
  CHECK(std::isfinite(base.ratio));
  CHECK(leibniz_ratio(cplx{3.0, 0.0} * f, cplx{0.0, 0.5} * g, 1.5, e).ratio ==
        doctest::Approx(base.ratio).epsilon(1e-10));
  const auto one = TorusFunction::constant(1, 128, Matrix::Identity(2, 2));
  CHECK(leibniz_ratio(f, one, 1.5, e).ratio <= 1.0 + 1e-12);
}

TEST_CASE("high-high kernel profiles and pairing") {
  const HighHighKernel K(1.5);
  for (double v : {0.0, 0.37, -1.25, 2.0, 4.5, -7.75}) {
    CHECK(K.psi(v) == doctest::Approx(psi_ref(v)).epsilon(1e-6).scale(1.0));
    CHECK(K.phi(v) == doctest::Approx(phi_ref(1.5, v)).epsilon(1e-6).scale(10.0));
  }

  // G(a, b) by a plain Riemann sum against independently computed profiles.
  const double h = 1.0 / 64.0, W = 16.0;
  for (auto [a, b] : {std::pair{0.0, 0.0}, std::pair{0.3, 1.07}, std::pair{-1.7, -0.2}, std::pair{2.5, -0.5}}) {
    double q = 0.0;
    for (double v = std::max(a, b) - W; v <= std::min(a, b) + W; v += h)
      q += phi_ref(1.5, v) * psi_ref(v - a) * psi_ref(v - b) * h;
    CHECK(K.g(a, b) == doctest::Approx(q).epsilon(2e-5).scale(1e-3));
    // The quadrature nodes sit on the grid of the first argument, so swapping agrees to interpolation accuracy.
    CHECK(K.g(a, b) == doctest::Approx(K.g(b, a)).epsilon(1e-5));
  }

  for (auto [a, b] : {std::pair{0.2, 0.9}, std::pair{-0.6, 1.4}, std::pair{3.0, -0.1}}) {
    const double k0 = K(0.0, a, b);
    CHECK(std::isfinite(k0));
    CHECK(K(0.0, 2 * a, 2 * b) == doctest::Approx(k0 / 4.0).epsilon(1e-10));
    CHECK(K(1.3, 1.3 + a, 1.3 + b) == doctest::Approx(k0).epsilon(1e-12));
    CHECK(K(0.0, b, a) == doctest::Approx(k0).epsilon(1e-5));
  }
  CHECK_THROWS_AS(K(0.5, 0.5, 0.5), Error);
  CHECK(K.alpha() == doctest::Approx(0.25));
}

TEST_CASE("kernel constant sampling") {
  Config x{0.0, 1.0, -2.0};
  CHECK(config_radius(x, 1, 2) == 3.0);

  // |K| (Σ|x_1 − x_m|)^2 is identically 1 for this kernel.
  KernelSample ks;
  ks.kernel = [](const Config& c) {
    const double r = std::abs(c[0] - c[1]) + std::abs(c[0] - c[2]);
    return 1.0 / (r * r);
  };
  ks.budget = 400;
  ks.refine_levels = 3;
  ks.checkpoints = {100, 200, 400};
  const auto full = cz_kernel_constant(ks);
  CHECK(full.size == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::isfinite(full.holder));
  CHECK(full.holder > 0.0);
  REQUIRE(full.trace.size() == 3);
  for (std::size_t i = 1; i < 3; ++i) CHECK(full.trace[i].holder >= full.trace[i - 1].holder);
  CHECK(full.trace.back().holder == full.holder);

  auto small = ks;
  small.budget = 200;
  small.checkpoints = {100, 200};
  const auto part = cz_kernel_constant(small);
  CHECK(part.holder == full.trace[1].holder);
  CHECK(part.size == full.trace[1].size);
  CHECK(cz_kernel_constant(small).holder == part.holder);

  small.checkpoints = {500};
  CHECK_THROWS_AS(cz_kernel_constant(small), Error);
}
