#include <doctest.h>

#include <cmath>

#include "common/random.hpp"
#include "dyadic/haar.hpp"
#include "model/io.hpp"
#include "model/paraproduct.hpp"
#include "model/reduce.hpp"
#include "model/shift.hpp"
#include "nc/schatten.hpp"
#include "oracles.hpp"

using namespace dyadlab;
using namespace dyadlab::model;

namespace {

// ⟨f, h⟩ with h evaluated from geometry.
Matrix oracle_pairing(const GridFunction& f, const HaarIndex& h) {
  const auto& lat = f.lattice();
  Matrix acc = Matrix::Zero(f.n(), f.n());
  const oracle::Box q{h.cube.level, lat.coords(h.cube)};
  for (std::uint64_t x = 0; x < lat.cell_count(); ++x) {
    const double v = oracle::haar_value(lat.dim(), lat.depth(), lat.cell_shift(), q, h.eta, x);
    if (v != 0.0) acc += v * lat.cell_measure() * f.at(x);
  }
  return acc;
}

cplx oracle_form(const HaarForm& form, const std::vector<GridFunction>& fs) {
  cplx total{};
  for (const auto& e : form.entries) {
    Matrix prod = Matrix::Identity(fs[0].n(), fs[0].n());
    for (std::size_t j = 0; j < fs.size(); ++j) prod = prod * oracle_pairing(fs[j], e.slots[j]);
    total += e.coeff * prod.trace();
  }
  return total;
}

std::vector<GridFunction> random_inputs(const Lattice& lat, int m, int N, Rng& rng) {
  std::vector<GridFunction> fs;
  for (int j = 0; j < m; ++j) fs.push_back(GridFunction::random_matrix(lat, N, rng));
  return fs;
}

ShiftSpec single_coefficient_shift() {
  const Lattice lat(1, 2);
  ShiftSpec s(lat, 1, {0, 0}, {0, 1});
  s.add({lat.top(), {{lat.top(), 1}, {lat.top(), 1}}, cplx{1.0, 0.0}});
  return s;
}

}  // namespace

TEST_CASE("random shifts") {
  const Lattice lat(1, 4);
  SUBCASE("scale zero is the zero operator") {
    const auto s = make_random_shift(lat, 2, {1, 0, 1}, {0, 2}, 3, {0.0, 8});
    for (const auto& e : s.coeffs()) CHECK(e.coeff == cplx{});
  }
  SUBCASE("single block with complexity zero sits on the bound 1") {
    const auto s = make_random_shift(Lattice(1, 1), 1, {0, 0}, {0, 1}, 4, {1.0, 0});
    REQUIRE(!s.coeffs().empty());
    for (const auto& e : s.coeffs())
      if (e.K == Cube{0, 0}) CHECK(std::abs(e.coeff) == doctest::Approx(1.0));
  }
  SUBCASE("deterministic in the seed, bounded, keyed by descendants") {
    const auto a = make_random_shift(lat, 2, {2, 0, 1}, {0, 1}, 5);
    const auto b = make_random_shift(lat, 2, {2, 0, 1}, {0, 1}, 5);
    REQUIRE(a.coeffs().size() == b.coeffs().size());
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
      const auto& e = a.coeffs()[i];
      CHECK(e.coeff == b.coeffs()[i].coeff);
      double bound = std::pow(lat.measure(e.K.level), -2.0);
      for (const auto& h : e.slots) bound *= std::sqrt(lat.measure(h.cube.level));
      CHECK(std::abs(e.coeff) <= bound * (1 + 1e-12));
      CHECK(e.slots[0].cube.level == e.K.level + 2);
      CHECK(lat.contains(e.K, e.slots[0].cube));
    }
    CHECK(a.kappa() == 2);
  }
  CHECK_THROWS_AS(ShiftSpec(lat, 2, {1, 1, 1}, {0}), Error);
}

TEST_CASE("shift JSON and clamping") {
  const auto s = make_random_shift(Lattice::random(2, 3, 1), 1, {1, 0}, {0, 1}, 2);
  const auto back = shift_from_json(nlohmann::json::parse(to_json(s).dump()));
  REQUIRE(back.coeffs().size() == s.coeffs().size());
  for (std::size_t i = 0; i < s.coeffs().size(); ++i) CHECK(back.coeffs()[i].coeff == s.coeffs()[i].coeff);
  CHECK(back.lattice() == s.lattice());

  auto j = to_json(single_coefficient_shift());
  j["coeffs"][0]["re"] = 3.0;
  CHECK_THROWS_AS(shift_from_json(j), Error);
  const auto clamped = shift_from_json(j, true);
  CHECK(clamped.clamped() == 1);
  CHECK(std::abs(clamped.coeffs()[0].coeff) == doctest::Approx(1.0));
  j["coeffs"][0]["Qs"][0]["eta"] = 0;
  CHECK_THROWS_AS(shift_from_json(j, true), Error);
}

TEST_CASE("form evaluation") {
  SUBCASE("single coefficient against the Haar function itself") {
    const auto s = single_coefficient_shift();
    const auto h = dyadic::haar(s.lattice(), {s.lattice().top(), 1});
    CHECK(std::abs(eval_shift_form(s, {h, h}) - cplx{1.0, 0.0}) < 1e-14);
    const auto one = GridFunction::constant(s.lattice(), Matrix::Identity(1, 1));
    CHECK(std::abs(eval_shift_form(s, {one, h})) < 1e-15);
  }
  SUBCASE("tree evaluation equals direct enumeration") {
    Rng rng(11);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const Lattice lat = seed % 2 ? Lattice::random(1, 3, seed) : Lattice(1, 3);
      const auto s = make_random_shift(lat, 2, {1, 0, 1}, {0, 2}, seed, {1.0, 0});
      const auto fs = random_inputs(lat, 3, 2, rng);
      const cplx want = oracle_form(s.form(), fs);
      CHECK(std::abs(eval_shift_form(s, fs) - want) < 1e-12 * std::max(1.0, std::abs(want)));
    }
    const Lattice lat2(2, 3);
    const auto s = make_random_shift(lat2, 1, {1, 1}, {0, 1}, 9, {1.0, 4});
    const auto fs = random_inputs(lat2, 2, 3, rng);
    CHECK(std::abs(eval_shift_form(s, fs) - oracle_form(s.form(), fs)) < 1e-12 * std::abs(oracle_form(s.form(), fs)));
  }
  SUBCASE("inputs must share the lattice and matrix size") {
    const auto s = single_coefficient_shift();
    Rng rng(1);
    const auto a = GridFunction::random_matrix(s.lattice(), 2, rng);
    const auto b = GridFunction::random_matrix(s.lattice(), 3, rng);
    CHECK_THROWS_AS(eval_shift_form(s, {a, b}), Error);
    CHECK_THROWS_AS(eval_shift_form(s, {a}), Error);
  }
}

TEST_CASE("adjoint duality") {
  const auto triv = single_coefficient_shift();
  const auto h = dyadic::haar(triv.lattice(), {triv.lattice().top(), 1});
  CHECK(adjoint_eval(triv.form(), 1, {h}).max_abs_diff(h) < 1e-14);
  const auto zero = make_random_shift(Lattice(1, 3), 1, {0, 1}, {0, 1}, 1, {0.0, 0});
  CHECK(adjoint_eval(zero.form(), 0, {GridFunction::constant(Lattice(1, 3), Matrix::Identity(1, 1))}).max_abs() == 0.0);

  Rng rng(12);
  const Lattice lat(1, 4);
  const auto s = make_random_shift(lat, 2, {1, 2, 0}, {0, 1}, 7);
  const auto fs = random_inputs(lat, 3, 2, rng);
  const cplx val = oracle_form(s.form(), fs);
  for (int j0 = 0; j0 < 3; ++j0) {
    std::vector<GridFunction> others;
    for (int j = 0; j < 3; ++j)
      if (j != j0) others.push_back(fs[static_cast<std::size_t>(j)]);
    const auto g = adjoint_eval(s.form(), j0, others);
    Matrix acc = Matrix::Zero(2, 2);
    for (std::uint64_t x = 0; x < lat.cell_count(); ++x) acc += lat.cell_measure() * g.at(x) * fs[static_cast<std::size_t>(j0)].at(x);
    CHECK(std::abs(acc.trace() - val) < 1e-12 * std::abs(val));
  }
}

TEST_CASE("paraproducts") {
  Rng rng(13);
  const Lattice lat(1, 4);
  SUBCASE("averages and one Haar pairing in cyclic order") {
    const auto hfun = GridFunction::random_scalar(lat, rng);
    ParaproductSpec p{lat, 2, 1, make_bmo_coeffs(hfun)};
    const auto fs = random_inputs(lat, 3, 2, rng);
    cplx want{};
    for (const auto& [h, a] : p.coeffs) {
      const oracle::Box q{h.cube.level, lat.coords(h.cube)};
      auto avg = [&](int j) {
        return oracle::box_average(1, 4, lat.cell_shift(), q, [&](std::uint64_t x) { return fs[static_cast<std::size_t>(j)].at(x); });
      };
      want += a * (avg(2) * avg(0) * oracle_pairing(fs[1], h)).trace();
    }
    CHECK(std::abs(eval_paraproduct_form(p, fs) - want) < 1e-12 * std::abs(want));
    CHECK(std::abs(eval_form(p.form(), fs) - eval_paraproduct_form(p, fs)) < 1e-12 * std::abs(want));
  }
  SUBCASE("a single coefficient") {
    const HaarIndex k{Cube{1, 1}, 1};
    ParaproductSpec p{lat, 1, 1, {{k, cplx{0.5, 0.25}}}};
    const auto one = GridFunction::constant(lat, Matrix::Identity(1, 1));
    const auto h = dyadic::haar(lat, k);
    CHECK(std::abs(eval_paraproduct_form(p, {one, h}) - cplx{0.5, 0.25}) < 1e-14);
    CHECK(std::abs(eval_paraproduct_form(p, {h, one})) < 1e-14);
  }
  SUBCASE("BMO-normalized coefficients") {
    const auto h0 = dyadic::haar(lat, {lat.top(), 1});
    const auto c0 = make_bmo_coeffs(h0);
    for (const auto& [h, a] : c0) CHECK(std::abs(a - (h == HaarIndex{lat.top(), 1} ? cplx{1.0, 0.0} : cplx{})) < 1e-12);

    const auto hfun = GridFunction::random_scalar(lat, rng);
    const auto c = make_bmo_coeffs(hfun);
    const auto c5 = make_bmo_coeffs(cplx{5.0, 0.0} * hfun);
    for (const auto& [h, a] : c) CHECK(std::abs(a - c5.at(h)) < 1e-12);
    // Carleson supremum by brute force over all K0 and all K inside.
    double best = 0.0;
    for (int l0 = 0; l0 <= lat.depth(); ++l0)
      for (const auto& k0 : lat.cubes_at(l0)) {
        double s = 0.0;
        for (const auto& [h, a] : c)
          if (lat.contains(k0, h.cube)) s += std::norm(a);
        best = std::max(best, s / lat.measure(l0));
      }
    CHECK(std::sqrt(best) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(make_bmo_coeffs(GridFunction::constant(lat, Matrix::Identity(1, 1))), Error);
  }
}

TEST_CASE("reduction of non-cancellative slots") {
  Rng rng(14);
  SUBCASE("all cancellative: a single unchanged term") {
    const auto s = make_random_shift(Lattice(1, 4), 2, {1, 1, 1}, {0, 1, 2}, 1);
    const auto terms = reduce_shift(s);
    REQUIRE(terms.size() == 1);
    REQUIRE(terms[0].form.entries.size() == s.coeffs().size());
    for (std::size_t i = 0; i < s.coeffs().size(); ++i) CHECK(terms[0].form.entries[i].coeff == s.coeffs()[i].coeff);
  }
  SUBCASE("one expanded slot with k = 1 gives a difference term and an average term") {
    const auto s = make_random_shift(Lattice(1, 4), 2, {1, 1, 1}, {1, 2}, 2);
    const auto terms = reduce_shift(s);
    REQUIRE(terms.size() == 2);
    CHECK(terms[0].ops[0].kind != terms[1].ops[0].kind);
  }
  SUBCASE("form preservation and projected inputs") {
    const Lattice lat(1, 5);
    const auto s = make_random_shift(lat, 2, {2, 0, 1}, {1, 2}, 3, {1.0, 0});
    // Slot 1 expands into Δ^0, Δ^1, E; the other slots are cancellative or k = 0.
    const auto terms = reduce_shift(s);
    CHECK(terms.size() == 3);
    const auto fs = random_inputs(lat, 3, 2, rng);
    cplx sum{};
    for (const auto& t : terms) {
      const cplx v = eval_form(t.form, fs);
      sum += v;
      CHECK(std::abs(v - eval_projected_form(s, t.ops, fs)) < 1e-10 * std::max(1.0, std::abs(v)));
      CHECK(t.normalization_ratio <= 1.0 + 1e-12);
    }
    const cplx orig = oracle_form(s.form(), fs);
    CHECK(std::abs(sum - orig) < 1e-10 * std::abs(orig));
  }
}
