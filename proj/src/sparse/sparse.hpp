#pragma once

#include <map>
#include <vector>

#include "model/haar_form.hpp"

namespace dyadlab::sparse {

using dyadic::Cube;
using dyadic::GridFunction;
using dyadic::Lattice;

/// Cubes with their exceptional sets E_Q, given as physical finest-cell indices.
struct SparseCollection {
  std::map<Cube, std::vector<std::uint64_t>> exceptional;

  std::size_t size() const noexcept { return exceptional.size(); }
  std::vector<Cube> cubes() const;
};

/// M(x) = max over cubes Q ∋ x of ∏_j ⟨|f_j|⟩_Q.
GridFunction multilinear_maximal(const std::vector<GridFunction>& fs);

/// E_Q ⊆ Q, pairwise disjoint, and |E_Q| > η|Q| for every Q.
bool is_sparse(const Lattice& lat, const SparseCollection& s, double eta);

/// Stopping-time collection from the top cube: the stopping cubes below Q are the
/// maximal S with ⟨|f_j|⟩_S > θ⟨|f_j|⟩_Q for some j; E_Q is Q minus them.
SparseCollection build_sparse_stopping(const std::vector<GridFunction>& fs, double theta);

/// Sparsity parameter guaranteed by the stopping construction: 1 − m/θ.
double stopping_eta(std::size_t m, double theta);

/// Σ_{Q∈S} |Q| ∏_j ⟨|f_j|⟩_Q.
double sparse_form(const SparseCollection& s, const std::vector<GridFunction>& fs);

/// The 3^d lattices shifted by round(i/3 · 2^L) cells per coordinate, i ∈ {0,1,2}^d.
std::vector<Lattice> universal_grids(int dim, int depth);

struct UniversalSearch {
  double target = 0.0;        // sparse form of the given collection
  double best = 0.0;          // best stopping-collection sparse form over the grids
  std::size_t best_grid = 0;  // index into universal_grids
  double constant = 0.0;      // target / best
  bool best_is_sparse = false;
};

/// Searches the shifted grids for a 1/2-sparse stopping collection whose sparse form
/// dominates that of `s` (built on the functions' own lattice).
UniversalSearch universal_search(const SparseCollection& s, const std::vector<GridFunction>& fs);

struct DominationReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double constant = 0.0;
  double eta = 0.0;
  double theta = 0.0;
  std::size_t cubes = 0;
  bool violation = false;  // rhs == 0 < lhs
};

/// |Λ(f)| against the sparse form of pointwise norms |f_j(x)|_{S^{p_j}} on the
/// stopping collection with threshold θ = m/(1−η).
DominationReport verify_sparse_domination(const model::HaarForm& form, const std::vector<GridFunction>& fs,
                                          double eta, const std::vector<double>& ps = {});

}  // namespace dyadlab::sparse
