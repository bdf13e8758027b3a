#pragma once

#include <cstdint>
#include <vector>

#include "model/haar_form.hpp"

namespace dyadlab::model {

/// n-linear dyadic shift: complexity (k_1..k_{n+1}), a cancellative slot set of size
/// at least 2, and sparse coefficients a_{K,(Q_j)} with Q_j^{(k_j)} = K.
/// Cancellative slots carry h_{Q_j}^η with η ≠ 0, the others h_{Q_j}^0.
class ShiftSpec {
 public:
  ShiftSpec(Lattice lat, int n, std::vector<int> complexity, std::vector<int> cancellative);

  const Lattice& lattice() const noexcept { return lat_; }
  int n() const noexcept { return n_; }
  const std::vector<int>& complexity() const noexcept { return complexity_; }
  int kappa() const;
  /// 0-based slot indices.
  const std::vector<int>& cancellative() const noexcept { return cancellative_; }
  bool is_cancellative(int slot) const;
  const std::vector<FormEntry>& coeffs() const noexcept { return coeffs_; }
  /// Number of coefficients whose magnitude was projected onto the bound.
  std::size_t clamped() const noexcept { return clamped_; }

  /// ∏|Q_j|^{1/2} / |K|^n.
  double bound(const FormEntry& e) const;
  /// Validates the key structure and the normalization; with `clamp` an out-of-bound
  /// coefficient is scaled onto the bound instead of being rejected.
  void add(FormEntry e, bool clamp = false);
  /// Checks that block K fits the lattice for this complexity.
  bool admissible_block(const Cube& K) const;

  HaarForm form() const;

 private:
  Lattice lat_;
  int n_;
  std::vector<int> complexity_;
  std::vector<int> cancellative_;
  std::vector<FormEntry> coeffs_;
  std::size_t clamped_ = 0;
};

struct RandomShiftOptions {
  double scale = 1.0;
  /// Cap on the number of K blocks filled (0 = all admissible blocks).
  std::size_t max_blocks = 8;
};

/// Coefficients a = scale · e^{iθ} · bound with θ uniform; one coefficient per
/// admissible (K, Q_1..Q_{n+1}, η) key in the selected blocks.
ShiftSpec make_random_shift(const Lattice& lat, int n, const std::vector<int>& complexity,
                            const std::vector<int>& cancellative, std::uint64_t seed,
                            const RandomShiftOptions& opts = {});

cplx eval_shift_form(const ShiftSpec& s, const std::vector<GridFunction>& fs);

/// Enumerates all slot tuples (Q_j, η_j) for block K.
std::vector<std::vector<HaarIndex>> shift_keys(const ShiftSpec& s, const Cube& K);

}  // namespace dyadlab::model
