#include <doctest.h>

#include <cmath>

#include "common/random.hpp"
#include "dyadic/haar.hpp"
#include "dyadic/io.hpp"
#include "oracles.hpp"

using namespace dyadlab;
using namespace dyadlab::dyadic;

namespace {

oracle::Box box_of(const Lattice& lat, const Cube& q) { return {q.level, lat.coords(q)}; }

std::vector<Lattice> test_lattices() {
  return {Lattice(1, 3), Lattice(1, 5), Lattice(2, 3), Lattice::random(1, 5, 11), Lattice::random(2, 3, 5),
          Lattice::random(3, 2, 9)};
}

}  // namespace

TEST_CASE("standard lattice cubes are the dyadic intervals") {
  const Lattice lat(1, 3);
  for (int l = 0; l <= 3; ++l)
    for (const auto& q : lat.cubes_at(l)) {
      const auto cells = lat.cells(q);
      REQUIRE(cells.size() == (1U << (3 - l)));
      CHECK(cells.front() == q.code << (3 - l));
      CHECK(cells.back() == ((q.code + 1) << (3 - l)) - 1);
    }
}

TEST_CASE("a shift by a whole number of finest cells permutes the finest cells") {
  const std::vector<double> half{0.5};
  const Lattice lat(1, 3, half);
  std::vector<std::uint64_t> seen;
  for (const auto& q : lat.cubes_at(3)) {
    const auto cells = lat.cells(q);
    REQUIRE(cells.size() == 1);
    seen.push_back(cells.front());
  }
  std::sort(seen.begin(), seen.end());
  for (std::uint64_t i = 0; i < 8; ++i) CHECK(seen[i] == i);
  // The level-1 cube [0, 1/2) moves to [1/2, 1).
  CHECK(lat.cells(Cube{1, 0}).front() == 4);
  CHECK_THROWS_AS(Lattice(1, 3, std::vector<double>{0.3}), Error);
}

TEST_CASE("random lattices are deterministic in the seed") {
  CHECK(Lattice::random(2, 2, 7) == Lattice::random(2, 2, 7));
  bool differs = false;
  for (std::uint64_t s = 0; s < 8; ++s) differs |= !(Lattice::random(2, 4, s) == Lattice::random(2, 4, 7));
  CHECK(differs);
}

TEST_CASE("lattice navigation is consistent") {
  for (const auto& lat : test_lattices())
    for (int l = 0; l < lat.depth(); ++l)
      for (const auto& q : lat.cubes_at(l)) {
        const auto ch = lat.children(q);
        for (unsigned b = 0; b < ch.size(); ++b) {
          CHECK(lat.parent(ch[b]) == q);
          CHECK(lat.child_position(ch[b]) == b);
          CHECK(lat.contains(q, ch[b]));
        }
        CHECK(lat.from_global(lat.global_index(q)) == q);
      }
}

TEST_CASE("Haar functions match the tensor-product definition") {
  SUBCASE("one-dimensional cases") {
    const Lattice lat(1, 3);
    const auto h = haar(lat, {Cube{0, 0}, 1});
    for (std::uint64_t x = 0; x < 8; ++x) CHECK(h.scalar_at(x).real() == (x < 4 ? 1.0 : -1.0));
    const auto h0 = haar(lat, {Cube{1, 0}, 0});
    for (std::uint64_t x = 0; x < 8; ++x) CHECK(h0.scalar_at(x).real() == doctest::Approx(x < 4 ? std::sqrt(2.0) : 0.0));
  }
  SUBCASE("two-dimensional top cube, split in the first coordinate") {
    const Lattice lat(2, 1);
    const auto h = haar(lat, {lat.top(), 2});
    // Cells are coded (x0, x1) with x0 the high bit: x0 = 0 is the left half.
    CHECK(h.scalar_at(0).real() == 1.0);
    CHECK(h.scalar_at(1).real() == 1.0);
    CHECK(h.scalar_at(2).real() == -1.0);
    CHECK(h.scalar_at(3).real() == -1.0);
  }
  SUBCASE("every Haar function on shifted lattices") {
    for (const auto& lat : test_lattices())
      for (int l = 0; l < lat.depth(); ++l)
        for (const auto& q : lat.cubes_at(l))
          for (unsigned eta = 0; eta < lat.num_children(); ++eta) {
            const auto h = haar(lat, {q, eta});
            double err = 0.0;
            for (std::uint64_t x = 0; x < lat.cell_count(); ++x)
              err = std::max(err, std::abs(h.scalar_at(x).real() -
                                           oracle::haar_value(lat.dim(), lat.depth(), lat.cell_shift(),
                                                              box_of(lat, q), eta, x)));
            REQUIRE(err < 1e-14);
          }
  }
}

TEST_CASE("averages agree with entrywise brute force") {
  Rng rng(3);
  for (const auto& lat : test_lattices()) {
    const auto f = GridFunction::random_matrix(lat, 2, rng);
    for (int l = 0; l <= lat.depth(); ++l)
      for (const auto& q : lat.cubes_at(l)) {
        const Matrix want =
            oracle::box_average(lat.dim(), lat.depth(), lat.cell_shift(), box_of(lat, q), [&](std::uint64_t x) { return f.at(x); });
        CHECK((average(f, q) - want).cwiseAbs().maxCoeff() < 1e-13);
      }
  }
  const Lattice lat(1, 3);
  CHECK(average(GridFunction::indicator(lat, Cube{1, 0}, Matrix::Identity(1, 1)), lat.top())(0, 0).real() ==
        doctest::Approx(0.5));
  CHECK(average(GridFunction::constant(lat, Matrix::Constant(1, 1, 2.5)), Cube{2, 3})(0, 0).real() ==
        doctest::Approx(2.5));
}

TEST_CASE("martingale differences") {
  Rng rng(4);
  for (const auto& lat : test_lattices()) {
    const auto f = GridFunction::random_matrix(lat, 2, rng);
    for (int l = 0; l < lat.depth(); ++l)
      for (const auto& q : lat.cubes_at(l)) {
        // Δ_Q f = Σ_{η≠0} ⟨f, h⟩ h.
        auto want = GridFunction::zeros_like(f);
        for (unsigned eta = 1; eta < lat.num_children(); ++eta) {
          Matrix coeff = Matrix::Zero(2, 2);
          std::vector<double> hv(lat.cell_count());
          for (std::uint64_t x = 0; x < lat.cell_count(); ++x) {
            hv[x] = oracle::haar_value(lat.dim(), lat.depth(), lat.cell_shift(), box_of(lat, q), eta, x);
            coeff += hv[x] * lat.cell_measure() * f.at(x);
          }
          for (std::uint64_t x = 0; x < lat.cell_count(); ++x)
            if (hv[x] != 0.0) want.add(x, hv[x] * coeff);
        }
        CHECK(martingale_diff(f, q).max_abs_diff(want) < 1e-12);
      }
  }
  const Lattice lat(1, 4);
  CHECK(martingale_diff(GridFunction::constant(lat, Matrix::Identity(2, 2)), Cube{1, 1}).max_abs() < 1e-15);
  const auto h = haar(lat, {Cube{2, 1}, 1});
  CHECK(martingale_diff(h, Cube{2, 1}).max_abs_diff(h) < 1e-14);
}

TEST_CASE("k-th generation differences equal sums over descendant chains") {
  Rng rng(5);
  const Lattice lat(1, 5);
  const auto f = GridFunction::random_matrix(lat, 2, rng);
  for (const auto& q : lat.cubes_at(1)) {
    CHECK(martingale_diff_k(f, q, 0).max_abs_diff(martingale_diff(f, q)) == 0.0);
    CHECK(expect_k(f, q, 0).max_abs_diff(expect(f, q)) == 0.0);
    // k = 2: the four grandchildren of q, each difference built from its own children.
    auto want = GridFunction::zeros_like(f);
    for (const auto& c : lat.children(q))
      for (const auto& g : lat.children(c))
        for (const auto& gc : lat.children(g)) {
          const Matrix jump = average(f, gc) - average(f, g);
          for (auto x : lat.cells(gc)) want.add(x, jump);
        }
    CHECK(martingale_diff_k(f, q, 2).max_abs_diff(want) < 1e-13);
  }
}

TEST_CASE("sublattice levels are residue classes") {
  const Lattice lat(1, 5);
  CHECK(sublattice_levels(lat, 1, 2) == std::vector<int>{2, 5});
  CHECK(sublattice_levels(lat, 0, 0) == std::vector<int>{0, 1, 2, 3, 4, 5});
  for (int k = 0; k < 4; ++k) {
    std::vector<int> all;
    for (int j = 0; j <= k; ++j) {
      const auto lv = sublattice_levels(lat, j, k);
      all.insert(all.end(), lv.begin(), lv.end());
    }
    std::sort(all.begin(), all.end());
    CHECK(all == std::vector<int>{0, 1, 2, 3, 4, 5});
  }
}

TEST_CASE("pairing table equals direct sums, shift equivariance") {
  Rng rng(6);
  const Lattice shifted = Lattice::with_cell_shift(2, 3, {3, 6});
  const Lattice standard(2, 3);
  const auto f = GridFunction::random_matrix(shifted, 2, rng);
  const PairingTable tab(f);
  // The same function read on the standard grid after undoing the translation.
  GridFunction g(standard, ValueKind::Matrix, 2);
  for (std::uint64_t rel = 0; rel < standard.cell_count(); ++rel) g.set(rel, f.at(shifted.physical_cell(rel)));
  for (int l = 0; l < 3; ++l)
    for (const auto& q : shifted.cubes_at(l)) {
      CHECK((tab.average(q) - average(g, q)).cwiseAbs().maxCoeff() < 1e-13);
      for (unsigned eta = 0; eta < 4; ++eta)
        CHECK((tab.pairing({q, eta}) - haar_pairing(g, {q, eta})).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("grid function JSON round trip is bit exact") {
  Rng rng(8);
  for (const auto& lat : test_lattices()) {
    const auto f = GridFunction::random_matrix(lat, 3, rng);
    const auto j = to_json(f);
    const auto back = grid_function_from_json(nlohmann::json::parse(j.dump()));
    CHECK(back.lattice() == lat);
    CHECK(back.data() == f.data());
  }
  CHECK_THROWS_AS(grid_function_from_json(nlohmann::json::parse(R"({"dim":1})")), Error);
}

TEST_CASE("mixed norms") {
  Rng rng(9);
  const Lattice lat(2, 2);
  const auto f = GridFunction::random_matrix(lat, 3, rng);
  double acc = 0.0;
  for (std::uint64_t x = 0; x < lat.cell_count(); ++x) acc += std::pow(oracle::schatten(f.at(x), 4.0), 3.0);
  CHECK(lp_norm(f, 3.0, 4.0) == doctest::Approx(std::pow(acc / 16.0, 1.0 / 3.0)).epsilon(1e-12));
}
