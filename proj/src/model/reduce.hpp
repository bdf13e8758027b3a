#pragma once

#include <string>
#include <vector>

#include "model/shift.hpp"

namespace dyadlab::model {

/// What a reduced term applies to f_j before pairing with the original h̃_{Q_j}.
struct SlotOp {
  enum class Kind { Identity, Delta, Expect };
  Kind kind = Kind::Identity;
  int level = 0;  // l for Delta: Δ_K^l

  std::string label() const;
  friend bool operator==(const SlotOp&, const SlotOp&) = default;
};

/// One term of the rewrite: coefficients b_{K,(L_j)} paired against h'_{L_j}, where
/// L_j^{(l_j)} = K. `cancellative` lists slots whose h' is cancellative.
struct ReducedShiftTerm {
  std::vector<SlotOp> ops;
  std::vector<int> levels;
  std::vector<int> cancellative;
  HaarForm form;
  /// max |b| / (∏|L_j|^{1/2} |K|^{-n}) over the coefficients.
  double normalization_ratio = 0.0;
};

/// Expands every non-cancellative slot with k_j > 0 into Δ_K^l (l < k_j) and E_K
/// parts and collects the coefficients of each resulting term.
std::vector<ReducedShiftTerm> reduce_shift(const ShiftSpec& s);

/// Value of the original coefficient table with f_j replaced by P_{K,j} f_j per block,
/// computed from explicit martingale projections. Independent check of one term.
cplx eval_projected_form(const ShiftSpec& s, const std::vector<SlotOp>& ops, const std::vector<GridFunction>& fs);

}  // namespace dyadlab::model
