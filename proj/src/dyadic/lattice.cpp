#include "dyadic/lattice.hpp"

#include <cmath>

#include "common/random.hpp"
#include "common/types.hpp"

namespace dyadlab::dyadic {

namespace {

void check_shape(int dim, int depth) {
  require(dim >= 1, "lattice dimension must be >= 1");
  require(depth >= 1, "lattice depth must be >= 1");
  require(static_cast<long>(dim) * depth <= 30, "lattice too large: dim*depth must be <= 30");
}

}  // namespace

Lattice::Lattice(int dim, int depth) : dim_(dim), depth_(depth), shift_(static_cast<std::size_t>(dim), 0) {
  check_shape(dim, depth);
}

Lattice::Lattice(int dim, int depth, std::span<const double> shift) : Lattice(dim, depth) {
  require(shift.size() == static_cast<std::size_t>(dim), "shift length must equal dimension");
  const double cells = std::ldexp(1.0, depth);
  for (int i = 0; i < dim; ++i) {
    const double s = shift[static_cast<std::size_t>(i)];
    require(s >= 0.0 && s < 1.0, "shift components must lie in [0,1)");
    const double scaled = s * cells;
    require(scaled == std::floor(scaled), "shift component is not a multiple of 2^-depth",
            ErrorCode::Domain);
    shift_[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(scaled);
  }
}

Lattice Lattice::with_cell_shift(int dim, int depth, std::vector<std::uint64_t> cell_shift) {
  Lattice lat(dim, depth);
  require(cell_shift.size() == static_cast<std::size_t>(dim), "shift length must equal dimension");
  for (auto s : cell_shift) require(s < (1ULL << depth), "cell shift out of range");
  lat.shift_ = std::move(cell_shift);
  return lat;
}

Lattice Lattice::random(int dim, int depth, std::uint64_t seed) {
  Lattice lat(dim, depth);
  Rng rng(seed);
  std::bernoulli_distribution bit(0.5);
  for (auto& s : lat.shift_) {
    // Digit b of the shift (weight 2^{-b}, b = 1..depth) is an independent fair bit.
    std::uint64_t v = 0;
    for (int b = 1; b <= depth; ++b) v = (v << 1) | (bit(rng) ? 1U : 0U);
    s = v;
  }
  return lat;
}

std::vector<double> Lattice::shift() const {
  std::vector<double> out;
  out.reserve(shift_.size());
  for (auto s : shift_) out.push_back(std::ldexp(static_cast<double>(s), -depth_));
  return out;
}

bool Lattice::is_standard() const {
  for (auto s : shift_)
    if (s != 0) return false;
  return true;
}

std::uint64_t Lattice::total_cubes() const { return level_offset(depth_ + 1); }

double Lattice::measure(int level) const { return std::ldexp(1.0, -level * dim_); }

std::uint64_t Lattice::level_offset(int level) const {
  std::uint64_t off = 0;
  for (int l = 0; l < level; ++l) off += cube_count(l);
  return off;
}

Cube Lattice::from_global(std::uint64_t index) const {
  for (int l = 0; l <= depth_; ++l) {
    const auto c = cube_count(l);
    if (index < c) return Cube{l, index};
    index -= c;
  }
  fail(ErrorCode::InvalidArgument, "global cube index out of range");
}

std::vector<std::uint64_t> Lattice::coords(const Cube& q) const {
  std::vector<std::uint64_t> c(static_cast<std::size_t>(dim_));
  const std::uint64_t mask = (1ULL << q.level) - 1;
  for (int i = 0; i < dim_; ++i)
    c[static_cast<std::size_t>(i)] = (q.code >> (q.level * (dim_ - 1 - i))) & mask;
  return c;
}

Cube Lattice::cube(int level, std::span<const std::uint64_t> c) const {
  require(level >= 0 && level <= depth_, "cube level out of range");
  require(c.size() == static_cast<std::size_t>(dim_), "cube index length must equal dimension");
  std::uint64_t code = 0;
  for (int i = 0; i < dim_; ++i) {
    require(c[static_cast<std::size_t>(i)] < (1ULL << level), "cube index out of range");
    code = (code << level) | c[static_cast<std::size_t>(i)];
  }
  return Cube{level, code};
}

bool Lattice::valid(const Cube& q) const {
  return q.level >= 0 && q.level <= depth_ && q.code < cube_count(q.level);
}

Cube Lattice::parent(const Cube& q) const {
  require(q.level > 0, "top cube has no parent");
  return ancestor(q, 1);
}

Cube Lattice::ancestor(const Cube& q, int k) const {
  require(k >= 0 && k <= q.level, "ancestor generation exceeds cube level");
  if (k == 0) return q;
  const int lv = q.level - k;
  const std::uint64_t mask = (1ULL << q.level) - 1;
  std::uint64_t code = 0;
  for (int i = 0; i < dim_; ++i) {
    const std::uint64_t ci = (q.code >> (q.level * (dim_ - 1 - i))) & mask;
    code = (code << lv) | (ci >> k);
  }
  return Cube{lv, code};
}

Cube Lattice::child(const Cube& q, unsigned offset) const {
  require(q.level < depth_, "finest cubes have no children");
  require(offset < num_children(), "child offset out of range");
  const int lv = q.level + 1;
  const std::uint64_t mask = (1ULL << q.level) - 1;
  std::uint64_t code = 0;
  for (int i = 0; i < dim_; ++i) {
    const std::uint64_t ci = q.level == 0 ? 0 : (q.code >> (q.level * (dim_ - 1 - i))) & mask;
    const std::uint64_t bit = (offset >> (dim_ - 1 - i)) & 1U;
    code = (code << lv) | (ci << 1) | bit;
  }
  return Cube{lv, code};
}

std::vector<Cube> Lattice::children(const Cube& q) const {
  std::vector<Cube> out;
  out.reserve(num_children());
  for (unsigned b = 0; b < num_children(); ++b) out.push_back(child(q, b));
  return out;
}

unsigned Lattice::child_position(const Cube& q) const {
  require(q.level > 0, "top cube has no parent");
  unsigned pos = 0;
  for (int i = 0; i < dim_; ++i) {
    const unsigned bit = static_cast<unsigned>((q.code >> (q.level * (dim_ - 1 - i))) & 1U);
    pos = (pos << 1) | bit;
  }
  return pos;
}

bool Lattice::contains(const Cube& outer, const Cube& inner) const {
  if (inner.level < outer.level) return false;
  return ancestor(inner, inner.level - outer.level) == outer;
}

std::vector<Cube> Lattice::descendants(const Cube& q, int k) const {
  require(k >= 0 && q.level + k <= depth_, "descendant generation exceeds lattice depth");
  std::vector<Cube> cur{q};
  for (int g = 0; g < k; ++g) {
    std::vector<Cube> next;
    next.reserve(cur.size() * num_children());
    for (const auto& c : cur)
      for (unsigned b = 0; b < num_children(); ++b) next.push_back(child(c, b));
    cur.swap(next);
  }
  return cur;
}

std::vector<Cube> Lattice::cubes_at(int level) const {
  require(level >= 0 && level <= depth_, "level out of range");
  std::vector<Cube> out;
  out.reserve(cube_count(level));
  for (std::uint64_t c = 0; c < cube_count(level); ++c) out.push_back(Cube{level, c});
  return out;
}

std::uint64_t Lattice::physical_cell(std::uint64_t relative) const {
  const std::uint64_t mask = (1ULL << depth_) - 1;
  std::uint64_t code = 0;
  for (int i = 0; i < dim_; ++i) {
    const std::uint64_t r = (relative >> (depth_ * (dim_ - 1 - i))) & mask;
    code = (code << depth_) | ((r + shift_[static_cast<std::size_t>(i)]) & mask);
  }
  return code;
}

std::uint64_t Lattice::relative_cell(std::uint64_t physical) const {
  const std::uint64_t mask = (1ULL << depth_) - 1;
  std::uint64_t code = 0;
  for (int i = 0; i < dim_; ++i) {
    const std::uint64_t p = (physical >> (depth_ * (dim_ - 1 - i))) & mask;
    code = (code << depth_) | ((p - shift_[static_cast<std::size_t>(i)]) & mask);
  }
  return code;
}

Cube Lattice::cube_of_cell(std::uint64_t physical, int level) const {
  return ancestor(Cube{depth_, relative_cell(physical)}, depth_ - level);
}

bool Lattice::contains_cell(const Cube& q, std::uint64_t physical) const {
  return cube_of_cell(physical, q.level) == q;
}

std::vector<std::uint64_t> Lattice::cells(const Cube& q) const {
  const auto fine = descendants(q, depth_ - q.level);
  std::vector<std::uint64_t> out;
  out.reserve(fine.size());
  for (const auto& c : fine) out.push_back(physical_cell(c.code));
  return out;
}

}  // namespace dyadlab::dyadic
