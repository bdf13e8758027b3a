#pragma once

#include <vector>

#include "dyadic/haar.hpp"

namespace dyadlab::model {

using dyadic::Cube;
using dyadic::GridFunction;
using dyadic::HaarIndex;
using dyadic::Lattice;

/// One coefficient of a multilinear Haar form: the block cube K, one Haar index per
/// slot, and the scalar weight.
struct FormEntry {
  Cube K;
  std::vector<HaarIndex> slots;
  cplx coeff;
};

/// Λ(f_1..f_m) = Σ_entries coeff · τ(⟨f_1,h_1⟩ ⋯ ⟨f_m,h_m⟩), products in slot order.
struct HaarForm {
  Lattice lattice;
  int arity = 0;
  std::vector<FormEntry> entries;
};

/// Evaluates via per-function pairing tables built in one lattice sweep each.
cplx eval_form(const HaarForm& form, const std::vector<GridFunction>& fs);

/// Same as eval_form with precomputed pairing tables.
cplx eval_form(const HaarForm& form, const std::vector<const dyadic::PairingTable*>& tables);

/// g with ∫ τ(g f_{j0}) = Λ(f) for every f_{j0}; `others` lists the remaining
/// arity−1 functions in slot order with slot j0 (0-based) omitted.
GridFunction adjoint_eval(const HaarForm& form, int j0, const std::vector<GridFunction>& others);

/// Checks that all functions live on the form's lattice shape with a shared N.
void check_inputs(const HaarForm& form, const std::vector<GridFunction>& fs);

}  // namespace dyadlab::model
