#pragma once

#include <bit>
#include <vector>

#include "dyadic/grid_function.hpp"

namespace dyadlab::dyadic {

/// Haar function index. `eta` is a bitmask over coordinates with the same bit
/// convention as child offsets; eta == 0 is the normalized indicator |Q|^{-1/2} 1_Q.
struct HaarIndex {
  Cube cube;
  unsigned eta = 0;
  auto operator<=>(const HaarIndex&) const = default;
};

/// Sign of h^eta on the child with offset b: left halves are +, right halves are -.
inline int haar_sign(unsigned child_offset, unsigned eta) {
  return (std::popcount(child_offset & eta) & 1) ? -1 : 1;
}

/// Haar function as a scalar grid function.
GridFunction haar(const Lattice& lat, const HaarIndex& h);

/// ⟨f⟩_Q by direct summation over the cells of Q.
Matrix average(const GridFunction& f, const Cube& q);

/// ⟨f, h⟩ = ∫ f h by direct summation.
Matrix haar_pairing(const GridFunction& f, const HaarIndex& h);

/// E_Q f = 1_Q ⟨f⟩_Q.
GridFunction expect(const GridFunction& f, const Cube& q);

/// Δ_Q f = Σ_{Q' child of Q} E_{Q'} f − E_Q f.
GridFunction martingale_diff(const GridFunction& f, const Cube& q);

/// Σ over R with R^{(k)} = Q of Δ_R f.
GridFunction martingale_diff_k(const GridFunction& f, const Cube& q, int k);

/// Σ over R with R^{(k)} = Q of E_R f.
GridFunction expect_k(const GridFunction& f, const Cube& q, int k);

/// Levels ℓ in 0..L with side 2^{-ℓ} = 2^{m(k+1)+j}, i.e. ℓ ≡ −j (mod k+1).
std::vector<int> sublattice_levels(const Lattice& lat, int j, int k);
std::vector<Cube> sublattice(const Lattice& lat, int j, int k);

/// Averages of f over every cube, computed bottom-up in one sweep, with Haar
/// pairings derived from child averages.
class PairingTable {
 public:
  explicit PairingTable(const GridFunction& f);

  const Lattice& lattice() const noexcept { return lat_; }
  int n() const noexcept { return n_; }
  Matrix average(const Cube& q) const;
  Matrix pairing(const HaarIndex& h) const;
  /// Read-only pointer to the stored pairing block (row-major N x N).
  const cplx* pairing_data(const HaarIndex& h) const;

 private:
  std::size_t slot(const Cube& q, unsigned eta) const;

  Lattice lat_;
  int n_;
  std::size_t block_;
  std::vector<cplx> avg_;
  // Per cube: 2^d pairing blocks, eta = 0 .. 2^d − 1. Finest cubes only have eta = 0 filled.
  std::vector<cplx> pair_;
};

}  // namespace dyadlab::dyadic
