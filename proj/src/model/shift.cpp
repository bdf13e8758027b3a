#include "model/shift.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "common/random.hpp"

namespace dyadlab::model {

ShiftSpec::ShiftSpec(Lattice lat, int n, std::vector<int> complexity, std::vector<int> cancellative)
    : lat_(std::move(lat)), n_(n), complexity_(std::move(complexity)), cancellative_(std::move(cancellative)) {
  require(n_ >= 1, "shift linearity n must be >= 1");
  require(complexity_.size() == static_cast<std::size_t>(n_ + 1), "complexity needs n+1 entries");
  for (int k : complexity_) require(k >= 0, "complexity entries must be >= 0");
  std::sort(cancellative_.begin(), cancellative_.end());
  cancellative_.erase(std::unique(cancellative_.begin(), cancellative_.end()), cancellative_.end());
  require(cancellative_.size() >= 2, "a shift needs at least two cancellative slots");
  require(cancellative_.front() >= 0 && cancellative_.back() <= n_, "cancellative slot out of range");
  for (int j : cancellative_)
    require(complexity_[static_cast<std::size_t>(j)] < lat_.depth(),
            "complexity of a cancellative slot must be below the lattice depth");
  require(kappa() <= lat_.depth(), "complexity exceeds lattice depth");
}

int ShiftSpec::kappa() const { return *std::max_element(complexity_.begin(), complexity_.end()); }

bool ShiftSpec::is_cancellative(int slot) const {
  return std::binary_search(cancellative_.begin(), cancellative_.end(), slot);
}

bool ShiftSpec::admissible_block(const Cube& K) const {
  if (!lat_.valid(K)) return false;
  for (int j = 0; j <= n_; ++j) {
    const int lv = K.level + complexity_[static_cast<std::size_t>(j)];
    if (lv > lat_.depth() || (is_cancellative(j) && lv >= lat_.depth())) return false;
  }
  return true;
}

double ShiftSpec::bound(const FormEntry& e) const {
  double b = std::pow(lat_.measure(e.K.level), -static_cast<double>(n_));
  for (const auto& h : e.slots) b *= std::sqrt(lat_.measure(h.cube.level));
  return b;
}

void ShiftSpec::add(FormEntry e, bool clamp) {
  require(e.slots.size() == static_cast<std::size_t>(n_ + 1), "coefficient key needs n+1 cubes");
  require(admissible_block(e.K), "block cube K does not fit the lattice for this complexity");
  for (int j = 0; j <= n_; ++j) {
    const auto& h = e.slots[static_cast<std::size_t>(j)];
    require(lat_.valid(h.cube), "coefficient cube not in lattice");
    const int k = complexity_[static_cast<std::size_t>(j)];
    require(h.cube.level == e.K.level + k && lat_.ancestor(h.cube, k) == e.K,
            "coefficient key violates Q_j^(k_j) = K at slot " + std::to_string(j + 1));
    require(h.eta < lat_.num_children(), "eta out of range");
    require((h.eta != 0) == is_cancellative(j),
            "eta must be nonzero exactly on cancellative slots (slot " + std::to_string(j + 1) + ")");
  }
  const double b = bound(e);
  const double mag = std::abs(e.coeff);
  if (mag > b * (1.0 + 1e-12)) {
    require(clamp, "coefficient exceeds the normalization bound", ErrorCode::Domain);
    e.coeff *= b / mag;
    ++clamped_;
  }
  coeffs_.push_back(std::move(e));
}

HaarForm ShiftSpec::form() const { return HaarForm{lat_, n_ + 1, coeffs_}; }

std::vector<std::vector<HaarIndex>> shift_keys(const ShiftSpec& s, const Cube& K) {
  const auto& lat = s.lattice();
  std::vector<std::vector<HaarIndex>> keys{{}};
  for (int j = 0; j <= s.n(); ++j) {
    std::vector<unsigned> etas;
    if (s.is_cancellative(j))
      for (unsigned e = 1; e < lat.num_children(); ++e) etas.push_back(e);
    else
      etas.push_back(0);
    const auto cubes = lat.descendants(K, s.complexity()[static_cast<std::size_t>(j)]);
    std::vector<std::vector<HaarIndex>> next;
    next.reserve(keys.size() * cubes.size() * etas.size());
    for (const auto& prefix : keys)
      for (const auto& q : cubes)
        for (unsigned e : etas) {
          auto k = prefix;
          k.push_back(HaarIndex{q, e});
          next.push_back(std::move(k));
        }
    keys.swap(next);
  }
  return keys;
}

ShiftSpec make_random_shift(const Lattice& lat, int n, const std::vector<int>& complexity,
                            const std::vector<int>& cancellative, std::uint64_t seed,
                            const RandomShiftOptions& opts) {
  require(opts.scale >= 0.0 && opts.scale <= 1.0, "scale must lie in [0,1]");
  ShiftSpec spec(lat, n, complexity, cancellative);
  std::vector<Cube> blocks;
  for (int l = 0; l <= lat.depth(); ++l)
    for (const auto& K : lat.cubes_at(l))
      if (spec.admissible_block(K)) blocks.push_back(K);
  require(!blocks.empty(), "complexity is not compatible with the lattice depth");
  Rng rng(seed);
  if (opts.max_blocks > 0 && blocks.size() > opts.max_blocks) {
    std::shuffle(blocks.begin(), blocks.end(), rng);
    blocks.resize(opts.max_blocks);
    std::sort(blocks.begin(), blocks.end());
  }
  for (const auto& K : blocks) {
    for (auto& key : shift_keys(spec, K)) {
      FormEntry e{K, std::move(key), cplx{}};
      e.coeff = opts.scale * unit_phase(rng) * spec.bound(e);
      spec.add(std::move(e));
    }
  }
  return spec;
}

cplx eval_shift_form(const ShiftSpec& s, const std::vector<GridFunction>& fs) { return eval_form(s.form(), fs); }

}  // namespace dyadlab::model
