#include <doctest.h>

#include <cmath>

#include "common/random.hpp"
#include "model/paraproduct.hpp"
#include "model/shift.hpp"
#include "oracles.hpp"
#include "sparse/sparse.hpp"

using namespace dyadlab;
using namespace dyadlab::sparse;

namespace {

GridFunction scalar_fn(const Lattice& lat, const std::function<double(std::uint64_t)>& v) {
  std::vector<cplx> vals(lat.cell_count());
  for (std::uint64_t x = 0; x < vals.size(); ++x) vals[x] = v(x);
  return GridFunction::scalar(lat, vals);
}

GridFunction random_positive(const Lattice& lat, Rng& rng) {
  // Heavy-tailed values so that stopping cubes actually occur.
  return scalar_fn(lat, [&](std::uint64_t) { return std::exp(3.0 * (uniform01(rng) - 0.5)) * (uniform01(rng) < 0.1 ? 20.0 : 1.0); });
}

}  // namespace

TEST_CASE("multilinear maximal function") {
  const Lattice lat(1, 3);
  const auto one = scalar_fn(lat, [](std::uint64_t) { return 1.0; });
  CHECK(multilinear_maximal({one, one}).max_abs_diff(one) < 1e-15);

  const auto left = scalar_fn(lat, [](std::uint64_t x) { return x < 4 ? 1.0 : 0.0; });
  const auto right = scalar_fn(lat, [](std::uint64_t x) { return x < 4 ? 0.0 : 1.0; });
  const auto m = multilinear_maximal({left, right});
  for (std::uint64_t x = 0; x < 8; ++x) CHECK(m.scalar_at(x).real() == doctest::Approx(0.25));

  Rng rng(1);
  for (const auto& l : {Lattice(2, 3), Lattice::random(1, 6, 4)}) {
    const auto f = random_positive(l, rng), g = random_positive(l, rng);
    const auto mf = multilinear_maximal({f, g});
    for (std::uint64_t x = 0; x < l.cell_count(); ++x) {
      double best = 0.0;
      for (const auto& q : oracle::boxes_containing(l.dim(), l.depth(), l.cell_shift(), x)) {
        auto avg = [&](const GridFunction& h) {
          return oracle::box_average(l.dim(), l.depth(), l.cell_shift(), q,
                                     [&](std::uint64_t y) { return Matrix::Constant(1, 1, std::abs(h.scalar_at(y))); })(0, 0).real();
        };
        best = std::max(best, avg(f) * avg(g));
      }
      CHECK(mf.scalar_at(x).real() == doctest::Approx(best).epsilon(1e-12));
    }
    const auto mono = multilinear_maximal({f});
    for (std::uint64_t x = 0; x < l.cell_count(); ++x) CHECK(mono.scalar_at(x).real() >= std::abs(f.scalar_at(x)) * (1 - 1e-14));
  }
  CHECK_THROWS_AS(multilinear_maximal({GridFunction::random_matrix(lat, 2, rng)}), Error);
}

TEST_CASE("sparseness check") {
  const Lattice lat(1, 3);
  SparseCollection top;
  top.exceptional[lat.top()] = lat.cells(lat.top());
  CHECK(is_sparse(lat, top, 0.99));
  // Every ancestor of cell 0 claiming its whole cube: exceptional sets overlap.
  SparseCollection chain;
  for (int l = 0; l <= 3; ++l) chain.exceptional[Cube{l, 0}] = lat.cells(Cube{l, 0});
  CHECK_FALSE(is_sparse(lat, chain, 0.5));
  CHECK_FALSE(is_sparse(lat, chain, 0.75));
  SparseCollection outside;
  outside.exceptional[Cube{1, 0}] = {4};
  CHECK_FALSE(is_sparse(lat, outside, 0.0));
}

TEST_CASE("stopping collections") {
  SUBCASE("constant inputs stop nowhere") {
    const Lattice lat(2, 3);
    const auto a = scalar_fn(lat, [](std::uint64_t) { return 2.0; });
    const auto b = scalar_fn(lat, [](std::uint64_t) { return 3.0; });
    const auto s = build_sparse_stopping({a, b}, 4.0);
    REQUIRE(s.size() == 1);
    CHECK(s.exceptional.begin()->first == lat.top());
    CHECK(sparse_form(s, {a, b}) == doctest::Approx(6.0));
    CHECK(sparse_form(SparseCollection{}, {a, b}) == 0.0);
  }
  SUBCASE("a spike pulls the chain down to its cell") {
    const Lattice lat(1, 5);
    const std::uint64_t spike = 13;
    const auto f = scalar_fn(lat, [&](std::uint64_t x) { return x == spike ? 32.0 : 0.0; });
    const auto s = build_sparse_stopping({f}, 1.5);
    // Averages double at each step towards the spike cell, so every ancestor of the cell stops.
    CHECK(s.size() == 6);
    for (int l = 0; l <= 5; ++l) CHECK(s.exceptional.count(lat.cube_of_cell(spike, l)) == 1);
  }
  SUBCASE("the default threshold gives 1/2-sparse collections") {
    Rng rng(2);
    for (int t = 0; t < 100; ++t) {
      const int m = 2 + t % 3;
      const Lattice lat = t % 2 ? Lattice(1, 7) : Lattice::random(2, 4, static_cast<std::uint64_t>(t));
      std::vector<GridFunction> fs;
      for (int j = 0; j < m; ++j) fs.push_back(random_positive(lat, rng));
      const double theta = 2.0 * m;
      CHECK(stopping_eta(static_cast<std::size_t>(m), theta) == 0.5);
      const auto s = build_sparse_stopping(fs, theta);
      REQUIRE(is_sparse(lat, s, 0.5));
      const double ml1 = multilinear_maximal(fs).integral()(0, 0).real();
      CHECK(sparse_form(s, fs) <= 2.0 * ml1 * (1 + 1e-12));
    }
  }
  CHECK_THROWS_AS(build_sparse_stopping({scalar_fn(Lattice(1, 2), [](std::uint64_t) { return 1.0; })}, 1.0), Error);
}

TEST_CASE("shifted grids") {
  CHECK(universal_grids(1, 4).size() == 3);
  CHECK(universal_grids(2, 3).size() == 9);
  CHECK(universal_grids(1, 4)[0].is_standard());
  CHECK(universal_grids(1, 6)[1].cell_shift()[0] == 21);

  Rng rng(3);
  const Lattice lat(1, 6);
  const std::vector<GridFunction> fs{random_positive(lat, rng), random_positive(lat, rng)};
  const auto s = build_sparse_stopping(fs, 4.0);
  const auto u = universal_search(s, fs);
  CHECK(u.best_is_sparse);
  CHECK(u.target == doctest::Approx(sparse_form(s, fs)));
  CHECK(u.constant <= 10.0);
}

TEST_CASE("sparse domination of shifts and paraproducts") {
  const Lattice lat(1, 5);
  Rng rng(4);
  const auto zero = model::make_random_shift(lat, 1, {1, 1}, {0, 1}, 1, {0.0, 0});
  std::vector<GridFunction> fs{GridFunction::random_matrix(lat, 2, rng), GridFunction::random_matrix(lat, 2, rng)};
  const auto z = verify_sparse_domination(zero.form(), fs, 0.5);
  CHECK(z.constant == 0.0);
  CHECK(z.theta == doctest::Approx(4.0));

  const auto h = GridFunction::random_scalar(lat, rng);
  model::ParaproductSpec p{lat, 1, 0, model::make_bmo_coeffs(h)};
  const auto c = GridFunction::constant(lat, Matrix::Identity(2, 2));
  const auto pc = verify_sparse_domination(p.form(), {c, c}, 0.5);
  CHECK(pc.lhs < 1e-12);

  for (int t = 0; t < 20; ++t) {
    const auto s = model::make_random_shift(lat, 2, {t % 3, 1, 0}, {0, 1}, static_cast<std::uint64_t>(t));
    std::vector<GridFunction> in;
    for (int j = 0; j < 3; ++j) in.push_back(GridFunction::random_matrix(lat, 2, rng));
    const auto r = verify_sparse_domination(s.form(), in, 0.5);
    CHECK(std::isfinite(r.constant));
    CHECK_FALSE(r.violation);
    // Homogeneous of degree zero in each input.
    in[0] *= cplx{3.0, 0.0};
    in[2] *= cplx{0.25, 0.0};
    CHECK(verify_sparse_domination(s.form(), in, 0.5).constant == doctest::Approx(r.constant).epsilon(1e-10));
  }
}
