#include <doctest.h>

#include <cmath>
#include <limits>

#include "common/random.hpp"
#include "oracles.hpp"
#include "randomized/randomized.hpp"

using namespace dyadlab;
using namespace dyadlab::randomized;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Matrix> random_mats(std::size_t m, int n, Rng& rng) {
  std::vector<Matrix> xs;
  for (std::size_t i = 0; i < m; ++i) xs.push_back(gaussian_matrix(n, rng));
  return xs;
}

}  // namespace

TEST_CASE("sign moments") {
  const auto ens2 = SignEnsemble::exhaustive(2);
  const std::vector<Matrix> ones{Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, 1.0)};
  // |1+1|², |1−1|², each twice: mean 2.
  CHECK(rad_norm(ones, schatten(2.0), ens2) == doctest::Approx(std::sqrt(2.0)));

  Matrix e11 = Matrix::Zero(2, 2), e22 = Matrix::Zero(2, 2);
  e11(0, 0) = 1.0;
  e22(1, 1) = 1.0;
  CHECK(sign_moment<Matrix>({e11, e22}, schatten(kInf), 3.0, ens2) == doctest::Approx(1.0));
  CHECK(sign_moment<Matrix>({e11, e22}, schatten(kInf), kInf, ens2) == doctest::Approx(1.0));

  Rng rng(1);
  const auto ens = SignEnsemble::exhaustive(6);
  for (double p : {1.0, 2.0, 4.0})
    for (double r : {1.0, 2.0, kInf}) {
      const auto xs = random_mats(6, 3, rng);
      std::vector<cplx> a;
      for (int i = 0; i < 6; ++i) a.push_back(unit_phase(rng) * uniform01(rng));
      CHECK(sign_moment(xs, a, schatten(r), p, ens) ==
            doctest::Approx(oracle::sign_moment(xs, a, p, r)).epsilon(1e-12));
    }

  const auto xs = random_mats(10, 2, rng);
  const double exact = rad_norm(xs, schatten(2.0), SignEnsemble::exhaustive(10));
  const double mc = rad_norm(xs, schatten(2.0), SignEnsemble::monte_carlo(10, 20000, 5));
  CHECK(std::abs(mc / exact - 1.0) < 0.01);
  CHECK_FALSE(SignEnsemble::automatic(30, 10, 1).is_exhaustive());
  CHECK_THROWS_AS(SignEnsemble::exhaustive(21), Error);
}

TEST_CASE("moment comparisons") {
  Rng rng(2);
  const auto ens = SignEnsemble::exhaustive(8);
  const std::vector<Matrix> single{gaussian_matrix(3, rng)};
  CHECK(kk_ratio(single, schatten(2.0), 4.0, 1.0, SignEnsemble::exhaustive(1)) == doctest::Approx(1.0));
  for (int t = 0; t < 10; ++t) {
    const auto xs = random_mats(8, 2, rng);
    CHECK(kk_ratio(xs, schatten(4.0), 2.0, 2.0, ens) == doctest::Approx(1.0));
    // Scalar first moment against the second: the sharp constant is 1/√2.
    std::vector<Matrix> sc;
    for (int i = 0; i < 8; ++i) sc.push_back(Matrix::Constant(1, 1, complex_gaussian(rng)));
    const double k = kk_ratio(sc, schatten(2.0), 1.0, 2.0, ens);
    CHECK(k >= 1.0 / std::sqrt(2.0) - 1e-12);
    CHECK(k <= 1.0 + 1e-12);
  }
}

TEST_CASE("contraction") {
  Rng rng(3);
  const auto ens = SignEnsemble::exhaustive(6);
  const auto xs = random_mats(6, 2, rng);
  const auto same = contraction_check(xs, std::vector<cplx>(6, cplx{1.0, 0.0}), schatten(1.0), 2.0, ens);
  CHECK(same.lhs == doctest::Approx(same.rhs).epsilon(1e-14));
  CHECK(contraction_check(xs, std::vector<cplx>(6, cplx{}), schatten(1.0), 2.0, ens).lhs == 0.0);
  for (int t = 0; t < 50; ++t) {
    const auto ys = random_mats(6, 2, rng);
    std::vector<cplx> a;
    for (int i = 0; i < 6; ++i) a.push_back(2.0 * uniform01(rng) - 1.0);
    const double p = 1.0 + t % 4;
    const double r = t % 3 == 0 ? kInf : 1.0 + t % 3;
    const auto c = contraction_check(ys, a, schatten(r), p, ens);
    CHECK(c.lhs <= c.rhs * (1 + 1e-12));
    CHECK(c.lhs == doctest::Approx(oracle::sign_moment(ys, a, p, r)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(contraction_check(xs, std::vector<cplx>(6, cplx{1.0, 0.0}), schatten(1.0), 0.5, ens), Error);
}

TEST_CASE("conditional expectations on random sums") {
  Rng rng(4);
  const dyadic::Lattice lat(1, 4);
  std::vector<CubeFunction> fqs;
  for (const auto& q : {dyadic::Cube{0, 0}, dyadic::Cube{1, 1}, dyadic::Cube{2, 0}, dyadic::Cube{3, 5}}) {
    auto f = dyadic::GridFunction::random_matrix(lat, 2, rng);
    fqs.push_back({q, dyadic::expect(f, q)});
  }
  // Functions constant on their cubes are fixed by the averaging.
  const auto ens = SignEnsemble::exhaustive(4);
  const auto fixed = stein_check(fqs, 2.0, 2.0, ens);
  CHECK(fixed.lhs == doctest::Approx(fixed.rhs).epsilon(1e-13));

  for (auto& fq : fqs) {
    auto g = dyadic::GridFunction::random_matrix(lat, 2, rng);
    auto ind = dyadic::GridFunction::indicator(lat, fq.cube, Matrix::Identity(2, 2));
    for (std::uint64_t x = 0; x < lat.cell_count(); ++x) g.set(x, ind.at(x) * g.at(x));
    fq.f = g;
  }
  // L²(S²) is a Hilbert space: first moments differ from second ones by at most √2.
  const auto s = stein_check(fqs, 2.0, 2.0, ens);
  CHECK(s.ratio() <= std::sqrt(2.0) + 1e-12);

  fqs[1].f = dyadic::GridFunction::random_matrix(lat, 2, rng);
  CHECK_THROWS_AS(stein_check(fqs, 2.0, 2.0, ens), Error);
}

TEST_CASE("decoupling") {
  Rng rng(5);
  SUBCASE("sampler is uniform on the cube") {
    const dyadic::Lattice lat = dyadic::Lattice::random(2, 3, 4);
    DecouplingSampler s(lat, 1);
    for (int i = 0; i < 200; ++i) CHECK(lat.contains_cell(dyadic::Cube{1, 2}, s.sample(dyadic::Cube{1, 2})));
    const auto cs = sampler_chi_square(lat, lat.top(), 20000, 7);
    CHECK(cs.dof == 63.0);
    CHECK(std::abs(cs.statistic - cs.dof) / std::sqrt(2.0 * cs.dof) < 4.0);
  }
  SUBCASE("scalar p = 2 ratio is 1 up to sampling error") {
    const dyadic::Lattice lat(1, 6);
    for (int t = 0; t < 3; ++t) {
      const auto f = dyadic::GridFunction::random_scalar(lat, rng);
      const auto r = decoupling_ratio(f, t % 2, 1, t % 2, 2.0, 2.0, 10000, static_cast<std::uint64_t>(t));
      CHECK(r.cubes > 0);
      CHECK(std::abs(r.ratio - 1.0) <= 3.0 * r.stderr_ratio);
    }
  }
  SUBCASE("matrix values at p = 4 stay comparable") {
    const auto f = dyadic::GridFunction::random_matrix(dyadic::Lattice(1, 5), 2, rng);
    const auto r = decoupling_ratio(f, 0, 1, 1, 4.0, 2.0, 2000, 3);
    CHECK(r.ratio > 0.1);
    CHECK(r.ratio < 10.0);
  }
  CHECK_THROWS_AS(decoupling_ratio(dyadic::GridFunction::random_scalar(dyadic::Lattice(1, 3), rng), 0, 1, 2, 2.0,
                                   2.0, 10, 1),
                  Error);
}

TEST_CASE("randomized products") {
  Rng rng(6);
  const auto tab = nc::ExponentTable::tuple({3.0, 3.0, 3.0});
  const auto ens = SignEnsemble::exhaustive(1);
  // Scalars with one term: both sides are |a x y|.
  const auto one = rscalar_check({{Matrix::Constant(1, 1, 2.0)}, {Matrix::Constant(1, 1, -1.5)}}, {cplx{0.5, 0.0}},
                                 tab, ens);
  CHECK(one.lhs == doctest::Approx(1.5));
  CHECK(one.rhs == doctest::Approx(3.0));
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + t % 2;
    std::vector<double> ps(static_cast<std::size_t>(n + 1));
    for (auto& p : ps) p = (n + 1.0) * (0.8 + 0.4 * uniform01(rng));
    double inv = 0.0;
    for (int j = 0; j < n; ++j) inv += 1.0 / ps[static_cast<std::size_t>(j)];
    ps.back() = 1.0 / (1.0 - inv);
    if (!(ps.back() > 1.0)) continue;
    const auto tb = nc::ExponentTable::tuple(ps);
    std::vector<std::vector<Matrix>> e(static_cast<std::size_t>(n));
    for (auto& row : e) row = random_mats(4, 2, rng);
    std::vector<cplx> a;
    for (int k = 0; k < 4; ++k) a.push_back(unit_phase(rng) * uniform01(rng));
    const auto rs = rscalar_check(e, a, tb, SignEnsemble::exhaustive(4));
    CHECK(rs.lhs <= rs.rhs * (1 + 1e-9));

    std::vector<std::vector<Matrix>> head(e.begin(), e.end() - 1);
    const auto ki = key_inequality_check(head, gaussian_matrix(2, rng), tb);
    CHECK(ki.lhs <= ki.rhs * (1 + 1e-9));
  }
  // Identity factors make the product estimate an equality.
  const auto tb = nc::ExponentTable::tuple({4.0, 2.0, 4.0});
  const std::vector<std::vector<Matrix>> ids{{Matrix::Identity(3, 3), Matrix::Identity(3, 3)}};
  const auto ki = key_inequality_check(ids, Matrix::Identity(3, 3), tb);
  CHECK(ki.lhs == doctest::Approx(ki.rhs).epsilon(1e-12));
  CHECK(ki.lhs == doctest::Approx(2.0 * std::pow(3.0, 0.75)).epsilon(1e-12));
  CHECK_THROWS_AS(rscalar_check({{Matrix::Identity(1, 1)}, {Matrix::Identity(1, 1)}}, {cplx{2.0, 0.0}}, tab, ens),
                  Error);
}

TEST_CASE("martingale sign transforms") {
  Rng rng(7);
  // Orthogonal differences in a Hilbert space: every sign pattern preserves the norm.
  const auto f = dyadic::GridFunction::random_matrix(dyadic::Lattice(2, 2), 2, rng);
  const auto t = martingale_transform_ratio(f, 2.0, 2.0);
  CHECK(t.patterns == 8);
  CHECK(t.max_ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(t.mean_ratio == doctest::Approx(1.0).epsilon(1e-12));
  const auto g = martingale_transform_ratio(f, 4.0, 1.0);
  CHECK(g.max_ratio >= 1.0 - 1e-12);
  CHECK(g.max_ratio < 10.0);
}
