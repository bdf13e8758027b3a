#include "dyadic/haar.hpp"

#include <cmath>

namespace dyadlab::dyadic {

GridFunction haar(const Lattice& lat, const HaarIndex& h) {
  require(lat.valid(h.cube), "cube not in lattice");
  require(h.eta < lat.num_children(), "eta out of range");
  require(h.eta == 0 || h.cube.level < lat.depth(),
          "cancellative Haar function needs children at grid resolution");
  GridFunction out(lat, ValueKind::Scalar, 1);
  const double amp = 1.0 / std::sqrt(lat.measure(h.cube.level));
  if (h.eta == 0) {
    for (auto c : lat.cells(h.cube)) out.data()[c] = amp;
    return out;
  }
  for (unsigned b = 0; b < lat.num_children(); ++b) {
    const double v = amp * haar_sign(b, h.eta);
    for (auto c : lat.cells(lat.child(h.cube, b))) out.data()[c] = v;
  }
  return out;
}

Matrix average(const GridFunction& f, const Cube& q) {
  const auto& lat = f.lattice();
  require(lat.valid(q), "cube not in lattice");
  const auto cells = lat.cells(q);
  Matrix acc = Matrix::Zero(f.n(), f.n());
  for (auto c : cells) acc += f.at(c);
  return acc / static_cast<double>(cells.size());
}

Matrix haar_pairing(const GridFunction& f, const HaarIndex& h) {
  const auto& lat = f.lattice();
  const GridFunction hf = haar(lat, h);
  Matrix acc = Matrix::Zero(f.n(), f.n());
  for (auto c : lat.cells(h.cube)) acc += f.at(c) * hf.data()[c];
  return acc * lat.cell_measure();
}

GridFunction expect(const GridFunction& f, const Cube& q) {
  GridFunction out = GridFunction::zeros_like(f);
  const Matrix avg = average(f, q);
  for (auto c : f.lattice().cells(q)) out.set(c, avg);
  return out;
}

GridFunction martingale_diff(const GridFunction& f, const Cube& q) {
  const auto& lat = f.lattice();
  require(q.level < lat.depth(), "martingale difference needs children at grid resolution");
  GridFunction out = GridFunction::zeros_like(f);
  const Matrix avg = average(f, q);
  for (const auto& ch : lat.children(q)) {
    const Matrix v = average(f, ch) - avg;
    for (auto c : lat.cells(ch)) out.set(c, v);
  }
  return out;
}

GridFunction martingale_diff_k(const GridFunction& f, const Cube& q, int k) {
  const auto& lat = f.lattice();
  require(k >= 0 && q.level + k < lat.depth(), "martingale difference depth exceeds lattice");
  GridFunction out = GridFunction::zeros_like(f);
  for (const auto& r : lat.descendants(q, k)) out += martingale_diff(f, r);
  return out;
}

GridFunction expect_k(const GridFunction& f, const Cube& q, int k) {
  const auto& lat = f.lattice();
  require(k >= 0 && q.level + k <= lat.depth(), "conditional expectation depth exceeds lattice");
  GridFunction out = GridFunction::zeros_like(f);
  for (const auto& r : lat.descendants(q, k)) out += expect(f, r);
  return out;
}

std::vector<int> sublattice_levels(const Lattice& lat, int j, int k) {
  require(0 <= j && j <= k, "sublattice requires 0 <= j <= k");
  std::vector<int> out;
  const int period = k + 1;
  for (int l = 0; l <= lat.depth(); ++l)
    if (((l + j) % period) == 0) out.push_back(l);
  return out;
}

std::vector<Cube> sublattice(const Lattice& lat, int j, int k) {
  std::vector<Cube> out;
  for (int l : sublattice_levels(lat, j, k))
    for (const auto& q : lat.cubes_at(l)) out.push_back(q);
  return out;
}

PairingTable::PairingTable(const GridFunction& f)
    : lat_(f.lattice()), n_(f.n()), block_(f.block()) {
  const std::size_t total = lat_.total_cubes();
  const unsigned nch = lat_.num_children();
  avg_.assign(total * block_, cplx{});
  pair_.assign(total * nch * block_, cplx{});

  const int depth = lat_.depth();
  const auto fine_off = lat_.level_offset(depth);
  for (std::uint64_t r = 0; r < lat_.cell_count(); ++r) {
    const cplx* src = f.data().data() + lat_.physical_cell(r) * block_;
    std::copy(src, src + block_, avg_.begin() + static_cast<std::ptrdiff_t>((fine_off + r) * block_));
  }
  const double inv = 1.0 / nch;
  for (int l = depth - 1; l >= 0; --l) {
    const double scale = std::sqrt(lat_.measure(l)) * inv;
    for (std::uint64_t code = 0; code < lat_.cube_count(l); ++code) {
      const Cube q{l, code};
      cplx* dst = avg_.data() + lat_.global_index(q) * block_;
      cplx* pq = pair_.data() + lat_.global_index(q) * nch * block_;
      for (unsigned b = 0; b < nch; ++b) {
        const cplx* src = avg_.data() + lat_.global_index(lat_.child(q, b)) * block_;
        for (std::size_t e = 0; e < block_; ++e) dst[e] += src[e] * inv;
        for (unsigned eta = 1; eta < nch; ++eta) {
          const double s = scale * haar_sign(b, eta);
          for (std::size_t e = 0; e < block_; ++e) pq[eta * block_ + e] += s * src[e];
        }
      }
    }
  }
  for (int l = 0; l <= depth; ++l) {
    const double root = std::sqrt(lat_.measure(l));
    for (std::uint64_t code = 0; code < lat_.cube_count(l); ++code) {
      const auto g = lat_.global_index(Cube{l, code});
      for (std::size_t e = 0; e < block_; ++e) pair_[g * nch * block_ + e] = root * avg_[g * block_ + e];
    }
  }
}

std::size_t PairingTable::slot(const Cube& q, unsigned eta) const {
  require(lat_.valid(q), "cube not in lattice");
  require(eta < lat_.num_children(), "eta out of range");
  require(eta == 0 || q.level < lat_.depth(), "cancellative pairing needs children at grid resolution");
  return (lat_.global_index(q) * lat_.num_children() + eta) * block_;
}

Matrix PairingTable::average(const Cube& q) const {
  require(lat_.valid(q), "cube not in lattice");
  const cplx* p = avg_.data() + lat_.global_index(q) * block_;
  Matrix m(n_, n_);
  for (int r = 0; r < n_; ++r)
    for (int c = 0; c < n_; ++c) m(r, c) = p[r * n_ + c];
  return m;
}

Matrix PairingTable::pairing(const HaarIndex& h) const {
  const cplx* p = pairing_data(h);
  Matrix m(n_, n_);
  for (int r = 0; r < n_; ++r)
    for (int c = 0; c < n_; ++c) m(r, c) = p[r * n_ + c];
  return m;
}

const cplx* PairingTable::pairing_data(const HaarIndex& h) const { return pair_.data() + slot(h.cube, h.eta); }

}  // namespace dyadlab::dyadic
