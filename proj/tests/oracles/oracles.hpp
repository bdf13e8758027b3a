#pragma once

// Brute-force reference implementations for the unit tests. They work from geometry
// (per-axis cell coordinates) and textbook formulas, and share no code with src/ beyond
// the plain containers, so an indexing or algebra slip in the library shows up as a
// mismatch instead of being reproduced here.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

/// Dyadic cube on the cyclically shifted grid of depth L in [0,1)^d, by per-axis index.
struct Box {
  int level;
  std::vector<std::uint64_t> idx;
};

/// Per-axis physical coordinates of cell `code` (axis 0 in the most significant bits).
inline std::vector<std::uint64_t> cell_coords(int d, int L, std::uint64_t code) {
  std::vector<std::uint64_t> c(static_cast<std::size_t>(d));
  for (int i = d - 1; i >= 0; --i) {
    c[static_cast<std::size_t>(i)] = code & ((1ULL << L) - 1);
    code >>= L;
  }
  return c;
}

/// Is the cell inside the box? The lattice is translated by `shift` cells per axis,
/// cyclically, so cube [m 2^-l, (m+1) 2^-l) + shift covers cells whose unshifted index
/// has top l bits equal to m.
inline bool inside(int d, int L, const std::vector<std::uint64_t>& shift, const Box& q, std::uint64_t cell) {
  const auto c = cell_coords(d, L, cell);
  const std::uint64_t n = 1ULL << L;
  for (int i = 0; i < d; ++i) {
    const std::uint64_t r = (c[static_cast<std::size_t>(i)] + n - shift[static_cast<std::size_t>(i)]) % n;
    if ((r >> (L - q.level)) != q.idx[static_cast<std::size_t>(i)]) return false;
  }
  return true;
}

/// h_Q^η at a cell: |Q|^{-1/2} times, for each axis i with bit i of η set (axis 0 the
/// most significant bit), +1 on the left half of Q along axis i and −1 on the right half.
inline double haar_value(int d, int L, const std::vector<std::uint64_t>& shift, const Box& q, unsigned eta,
                         std::uint64_t cell) {
  if (!inside(d, L, shift, q, cell)) return 0.0;
  const auto c = cell_coords(d, L, cell);
  const std::uint64_t n = 1ULL << L;
  double v = std::pow(2.0, 0.5 * d * q.level);
  for (int i = 0; i < d; ++i) {
    if (!((eta >> (d - 1 - i)) & 1U)) continue;
    const std::uint64_t r = (c[static_cast<std::size_t>(i)] + n - shift[static_cast<std::size_t>(i)]) % n;
    const bool right = (r >> (L - q.level - 1)) & 1U;
    v *= right ? -1.0 : 1.0;
  }
  return v;
}

/// Mean over the cells in the box of the given cell values.
inline Mat box_average(int d, int L, const std::vector<std::uint64_t>& shift, const Box& q,
                       const std::function<Mat(std::uint64_t)>& value) {
  Mat acc;
  std::size_t count = 0;
  for (std::uint64_t x = 0; x < (1ULL << (d * L)); ++x)
    if (inside(d, L, shift, q, x)) {
      const Mat v = value(x);
      acc = count == 0 ? v : Mat(acc + v);
      ++count;
    }
  return acc / static_cast<double>(count);
}

/// All boxes of the lattice containing the cell, one per level.
inline std::vector<Box> boxes_containing(int d, int L, const std::vector<std::uint64_t>& shift, std::uint64_t cell) {
  const auto c = cell_coords(d, L, cell);
  const std::uint64_t n = 1ULL << L;
  std::vector<Box> out;
  for (int l = 0; l <= L; ++l) {
    Box q{l, std::vector<std::uint64_t>(static_cast<std::size_t>(d))};
    for (int i = 0; i < d; ++i)
      q.idx[static_cast<std::size_t>(i)] =
          ((c[static_cast<std::size_t>(i)] + n - shift[static_cast<std::size_t>(i)]) % n) >> (L - l);
    out.push_back(q);
  }
  return out;
}

/// Schatten p-norm from the eigenvalues of A*A.
inline double schatten(const Mat& a, double p) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a.adjoint() * a, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = es.eigenvalues();
  double acc = 0.0, mx = 0.0;
  for (int i = 0; i < ev.size(); ++i) {
    const double s = std::sqrt(std::max(ev(i), 0.0));
    mx = std::max(mx, s);
    if (!std::isinf(p)) acc += std::pow(s, p);
  }
  return std::isinf(p) ? mx : std::pow(acc, 1.0 / p);
}

/// Σ_k |2πk|^s c_k e^{2πikx} on R equispaced points, with c_k from an O(R^2) DFT (d = 1).
inline std::vector<cplx> dft_derivative(const std::vector<cplx>& f, double s) {
  const int R = static_cast<int>(f.size());
  std::vector<cplx> out(f.size());
  for (int k = -R / 2; k < R / 2; ++k) {
    cplx ck{};
    for (int x = 0; x < R; ++x) ck += f[static_cast<std::size_t>(x)] * std::polar(1.0, -2.0 * std::numbers::pi * k * x / R);
    ck /= static_cast<double>(R);
    const double m = k == 0 ? 0.0 : std::pow(2.0 * std::numbers::pi * std::abs(k), s);
    for (int x = 0; x < R; ++x)
      out[static_cast<std::size_t>(x)] += m * ck * std::polar(1.0, 2.0 * std::numbers::pi * k * x / R);
  }
  return out;
}

/// (E_ε ‖Σ_i ε_i a_i x_i‖^p)^{1/p} by enumerating all 2^M sign patterns.
inline double sign_moment(const std::vector<Mat>& xs, const std::vector<cplx>& a, double p, double r) {
  const std::size_t M = xs.size();
  double acc = 0.0;
  for (std::uint64_t mask = 0; mask < (1ULL << M); ++mask) {
    Mat s = Mat::Zero(xs[0].rows(), xs[0].cols());
    for (std::size_t i = 0; i < M; ++i) s += (((mask >> i) & 1U) ? -1.0 : 1.0) * a[i] * xs[i];
    acc += std::pow(schatten(s, r), p);
  }
  return std::pow(acc / static_cast<double>(1ULL << M), 1.0 / p);
}

}  // namespace oracle
