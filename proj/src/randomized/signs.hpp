#pragma once

#include <cstdint>
#include <vector>

#include "common/random.hpp"
#include "common/types.hpp"

namespace dyadlab::randomized {

/// Independent random signs ε_1..ε_M, either enumerated over all 2^M patterns with
/// equal weight or sampled.
class SignEnsemble {
 public:
  static constexpr std::size_t kMaxExhaustive = 20;

  static SignEnsemble exhaustive(std::size_t m);
  static SignEnsemble monte_carlo(std::size_t m, std::size_t samples, std::uint64_t seed);
  /// Exhaustive when m ≤ `threshold`, otherwise Monte Carlo.
  static SignEnsemble automatic(std::size_t m, std::size_t samples, std::uint64_t seed, std::size_t threshold = 12);

  std::size_t size() const noexcept { return m_; }
  bool is_exhaustive() const noexcept { return exhaustive_; }
  std::size_t patterns() const noexcept { return exhaustive_ ? (std::size_t{1} << m_) : samples_; }

  /// Calls fn(signs, weight) for every pattern; weights sum to 1.
  template <class Fn>
  void for_each(Fn&& fn) const {
    std::vector<int> eps(m_);
    const std::size_t total = patterns();
    const double w = 1.0 / static_cast<double>(total);
    if (exhaustive_) {
      for (std::size_t mask = 0; mask < total; ++mask) {
        for (std::size_t i = 0; i < m_; ++i) eps[i] = ((mask >> i) & 1U) ? -1 : 1;
        fn(eps, w);
      }
      return;
    }
    Rng rng(seed_);
    for (std::size_t s = 0; s < total; ++s) {
      std::uint64_t bits = 0;
      for (std::size_t i = 0; i < m_; ++i) {
        if (i % 64 == 0) bits = rng();
        eps[i] = ((bits >> (i % 64)) & 1U) ? -1 : 1;
      }
      fn(eps, w);
    }
  }

 private:
  SignEnsemble(std::size_t m, bool exhaustive, std::size_t samples, std::uint64_t seed)
      : m_(m), exhaustive_(exhaustive), samples_(samples), seed_(seed) {}

  std::size_t m_;
  bool exhaustive_;
  std::size_t samples_;
  std::uint64_t seed_;
};

inline SignEnsemble SignEnsemble::exhaustive(std::size_t m) {
  require(m <= kMaxExhaustive, "exhaustive sign enumeration is limited to M <= 20");
  return SignEnsemble(m, true, 0, 0);
}

inline SignEnsemble SignEnsemble::monte_carlo(std::size_t m, std::size_t samples, std::uint64_t seed) {
  require(samples > 0, "Monte Carlo ensemble needs at least one sample");
  return SignEnsemble(m, false, samples, seed);
}

inline SignEnsemble SignEnsemble::automatic(std::size_t m, std::size_t samples, std::uint64_t seed,
                                            std::size_t threshold) {
  return m <= threshold ? exhaustive(m) : monte_carlo(m, samples, seed);
}

}  // namespace dyadlab::randomized
