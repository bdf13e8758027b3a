#pragma once

#include <map>
#include <vector>

#include "model/haar_form.hpp"

namespace dyadlab::model {

/// n-linear paraproduct: slot j0 (0-based) is paired with the cancellative h_K^η,
/// every other slot contributes its average over K.
struct ParaproductSpec {
  Lattice lattice;
  int n = 1;
  int j0 = 0;
  std::map<HaarIndex, cplx> coeffs;

  void validate() const;
  /// Same form written in slot order with |K|^{-n/2} h_K^0 pairings in place of averages.
  HaarForm form() const;
};

/// Σ_K a_K τ(⟨f_{σ(1)}⟩_K ⋯ ⟨f_{σ(n)}⟩_K ⟨f_{j0}, h_K⟩) with σ the cyclic order
/// ending at j0.
cplx eval_paraproduct_form(const ParaproductSpec& p, const std::vector<GridFunction>& fs);

/// sup_{K0} (|K0|^{-1} Σ_{K ⊆ K0} Σ_η |a_{K,η}|²)^{1/2}, exhaustive over the lattice.
double carleson_constant(const Lattice& lat, const std::map<HaarIndex, cplx>& coeffs);

/// Dyadic BMO norm of a scalar function: the Carleson constant of its Haar coefficients.
double dyadic_bmo_norm(const GridFunction& h);

/// a_{K,η} = ⟨h, h_K^η⟩ / ‖h‖_BMO for every cancellative index.
std::map<HaarIndex, cplx> make_bmo_coeffs(const GridFunction& h);

}  // namespace dyadlab::model
