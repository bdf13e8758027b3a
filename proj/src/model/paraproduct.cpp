#include "model/paraproduct.hpp"

#include <algorithm>
#include <cmath>

namespace dyadlab::model {

void ParaproductSpec::validate() const {
  require(n >= 1, "paraproduct linearity n must be >= 1");
  require(j0 >= 0 && j0 <= n, "paraproduct Haar slot out of range");
  for (const auto& [h, a] : coeffs) {
    require(lattice.valid(h.cube), "paraproduct coefficient cube not in lattice");
    require(h.eta != 0 && h.eta < lattice.num_children(), "paraproduct coefficients need a cancellative eta");
    require(h.cube.level < lattice.depth(), "cancellative Haar function needs children at grid resolution");
  }
}

HaarForm ParaproductSpec::form() const {
  validate();
  HaarForm f{lattice, n + 1, {}};
  for (const auto& [h, a] : coeffs) {
    FormEntry e{h.cube, std::vector<HaarIndex>(static_cast<std::size_t>(n + 1), HaarIndex{h.cube, 0}), {}};
    e.slots[static_cast<std::size_t>(j0)] = h;
    e.coeff = a * std::pow(lattice.measure(h.cube.level), -0.5 * n);
    f.entries.push_back(std::move(e));
  }
  return f;
}

cplx eval_paraproduct_form(const ParaproductSpec& p, const std::vector<GridFunction>& fs) {
  p.validate();
  const HaarForm shape{p.lattice, p.n + 1, {}};
  check_inputs(shape, fs);
  std::vector<dyadic::PairingTable> tables;
  for (const auto& f : fs) tables.emplace_back(f);
  const int m = p.n + 1;
  const int nn = fs.front().n();
  cplx total{};
  for (const auto& [h, a] : p.coeffs) {
    if (a == cplx{}) continue;
    Matrix w = Matrix::Identity(nn, nn);
    for (int step = 1; step < m; ++step) w = w * tables[static_cast<std::size_t>((p.j0 + step) % m)].average(h.cube);
    w = w * tables[static_cast<std::size_t>(p.j0)].pairing(h);
    total += a * w.trace();
  }
  return total;
}

double carleson_constant(const Lattice& lat, const std::map<HaarIndex, cplx>& coeffs) {
  // Bottom-up sums of |a|² over each subtree.
  std::vector<double> mass(lat.total_cubes(), 0.0);
  for (const auto& [h, a] : coeffs) mass[lat.global_index(h.cube)] += std::norm(a);
  double best = 0.0;
  for (int l = lat.depth(); l >= 0; --l) {
    for (std::uint64_t code = 0; code < lat.cube_count(l); ++code) {
      const dyadic::Cube q{l, code};
      const auto g = lat.global_index(q);
      if (l > 0) mass[lat.global_index(lat.parent(q))] += mass[g];
      best = std::max(best, mass[g] / lat.measure(l));
    }
  }
  return std::sqrt(best);
}

double dyadic_bmo_norm(const GridFunction& h) {
  require(h.n() == 1, "BMO norm expects a scalar function");
  const dyadic::PairingTable t(h);
  const auto& lat = h.lattice();
  std::map<HaarIndex, cplx> c;
  for (int l = 0; l < lat.depth(); ++l)
    for (const auto& q : lat.cubes_at(l))
      for (unsigned e = 1; e < lat.num_children(); ++e) c[HaarIndex{q, e}] = t.pairing(HaarIndex{q, e})(0, 0);
  return carleson_constant(lat, c);
}

std::map<HaarIndex, cplx> make_bmo_coeffs(const GridFunction& h) {
  require(h.n() == 1, "BMO coefficients need a scalar function");
  const double bmo = dyadic_bmo_norm(h);
  require(bmo > 1e-14 * std::max(1.0, h.max_abs()), "BMO coefficients need a nonconstant function",
          ErrorCode::Domain);
  const dyadic::PairingTable t(h);
  const auto& lat = h.lattice();
  std::map<HaarIndex, cplx> out;
  for (int l = 0; l < lat.depth(); ++l)
    for (const auto& q : lat.cubes_at(l))
      for (unsigned e = 1; e < lat.num_children(); ++e) {
        const HaarIndex hi{q, e};
        out[hi] = t.pairing(hi)(0, 0) / bmo;
      }
  return out;
}

}  // namespace dyadlab::model
