#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "common/types.hpp"

namespace dyadlab {

using Rng = std::mt19937_64;

/// Derive an independent stream from a base seed and a stream index (splitmix64 step).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline cplx complex_gaussian(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double re = g(rng);
  const double im = g(rng);
  return {re, im};
}

inline cplx unit_phase(Rng& rng) {
  return std::polar(1.0, 2.0 * std::numbers::pi * uniform01(rng));
}

inline Matrix gaussian_matrix(int n, Rng& rng) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = complex_gaussian(rng);
  return m;
}

/// Random positive semidefinite matrix G G^*.
inline Matrix positive_matrix(int n, Rng& rng) {
  const Matrix g = gaussian_matrix(n, rng);
  return g * g.adjoint();
}

}  // namespace dyadlab
