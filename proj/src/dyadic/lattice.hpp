#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace dyadlab::dyadic {

/// A cube of a truncated dyadic lattice: `level` in 0..L and a row-major code of
/// its d-dimensional index (coordinate 0 most significant, `level` bits each).
struct Cube {
  int level = 0;
  std::uint64_t code = 0;
  auto operator<=>(const Cube&) const = default;
};

struct CubeHash {
  std::size_t operator()(const Cube& q) const noexcept {
    return std::hash<std::uint64_t>{}(q.code * 64 + static_cast<std::uint64_t>(q.level));
  }
};

/// Dyadic lattice on the torus [0,1)^d truncated at depth L, optionally shifted by a
/// multiple of 2^{-L} per coordinate. Cube indices are relative to the shifted origin;
/// finest cells are addressed by their physical (unshifted) row-major index.
class Lattice {
 public:
  Lattice(int dim, int depth);
  /// Shift components in [0,1), each an exact multiple of 2^{-depth}.
  Lattice(int dim, int depth, std::span<const double> shift);
  static Lattice with_cell_shift(int dim, int depth, std::vector<std::uint64_t> cell_shift);
  /// Draws every binary digit of the shift uniformly from `seed`.
  static Lattice random(int dim, int depth, std::uint64_t seed);

  int dim() const noexcept { return dim_; }
  int depth() const noexcept { return depth_; }
  const std::vector<std::uint64_t>& cell_shift() const noexcept { return shift_; }
  std::vector<double> shift() const;
  bool is_standard() const;

  std::uint64_t cube_count(int level) const { return 1ULL << (level * dim_); }
  std::uint64_t cell_count() const { return cube_count(depth_); }
  std::uint64_t total_cubes() const;
  /// |Q| for a cube at `level`.
  double measure(int level) const;
  double cell_measure() const { return measure(depth_); }
  unsigned num_children() const { return 1U << dim_; }

  /// Dense index over all cubes, levels ordered coarse to fine.
  std::uint64_t global_index(const Cube& q) const { return level_offset(q.level) + q.code; }
  std::uint64_t level_offset(int level) const;
  Cube from_global(std::uint64_t index) const;

  std::vector<std::uint64_t> coords(const Cube& q) const;
  Cube cube(int level, std::span<const std::uint64_t> coords) const;
  Cube top() const { return Cube{0, 0}; }
  bool valid(const Cube& q) const;

  Cube parent(const Cube& q) const;
  /// Q^{(k)}; requires k <= level(Q).
  Cube ancestor(const Cube& q, int k) const;
  Cube child(const Cube& q, unsigned offset) const;
  std::vector<Cube> children(const Cube& q) const;
  /// Offset bits of `q` inside its parent (bit d-1-i encodes coordinate i).
  unsigned child_position(const Cube& q) const;
  bool contains(const Cube& outer, const Cube& inner) const;
  /// All R with R^{(k)} = q.
  std::vector<Cube> descendants(const Cube& q, int k) const;
  std::vector<Cube> cubes_at(int level) const;

  std::uint64_t physical_cell(std::uint64_t relative) const;
  std::uint64_t relative_cell(std::uint64_t physical) const;
  Cube cube_of_cell(std::uint64_t physical, int level) const;
  bool contains_cell(const Cube& q, std::uint64_t physical) const;
  /// Physical indices of the finest cells inside q.
  std::vector<std::uint64_t> cells(const Cube& q) const;

  friend bool operator==(const Lattice&, const Lattice&) = default;

 private:
  int dim_;
  int depth_;
  std::vector<std::uint64_t> shift_;
};

}  // namespace dyadlab::dyadic
