#include "model/reduce.hpp"

#include <cmath>
#include <map>

namespace dyadlab::model {

std::string SlotOp::label() const {
  switch (kind) {
    case Kind::Identity:
      return "id";
    case Kind::Delta:
      return "delta^" + std::to_string(level);
    case Kind::Expect:
      return "expect";
  }
  return "?";
}

namespace {

using Key = std::pair<Cube, std::vector<HaarIndex>>;

std::vector<std::vector<SlotOp>> op_choices(const ShiftSpec& s) {
  std::vector<std::vector<SlotOp>> combos{{}};
  for (int j = 0; j <= s.n(); ++j) {
    const int k = s.complexity()[static_cast<std::size_t>(j)];
    std::vector<SlotOp> options;
    if (s.is_cancellative(j) || k == 0) {
      options.push_back({SlotOp::Kind::Identity, 0});
    } else {
      for (int l = 0; l < k; ++l) options.push_back({SlotOp::Kind::Delta, l});
      options.push_back({SlotOp::Kind::Expect, 0});
    }
    std::vector<std::vector<SlotOp>> next;
    for (const auto& c : combos)
      for (const auto& o : options) {
        auto v = c;
        v.push_back(o);
        next.push_back(std::move(v));
      }
    combos.swap(next);
  }
  return combos;
}

}  // namespace

std::vector<ReducedShiftTerm> reduce_shift(const ShiftSpec& s) {
  const auto& lat = s.lattice();
  const int m = s.n() + 1;
  std::vector<ReducedShiftTerm> out;
  for (const auto& ops : op_choices(s)) {
    ReducedShiftTerm term{ops, {}, {}, HaarForm{lat, m, {}}};
    for (int j = 0; j < m; ++j) {
      const auto& op = ops[static_cast<std::size_t>(j)];
      const int k = s.complexity()[static_cast<std::size_t>(j)];
      int l = 0;
      bool canc = false;
      switch (op.kind) {
        case SlotOp::Kind::Identity:
          l = s.is_cancellative(j) ? k : 0;
          canc = s.is_cancellative(j);
          break;
        case SlotOp::Kind::Delta:
          l = op.level;
          canc = true;
          break;
        case SlotOp::Kind::Expect:
          l = 0;
          break;
      }
      term.levels.push_back(l);
      if (canc) term.cancellative.push_back(j);
    }

    std::map<Key, cplx> b;
    for (const auto& e : s.coeffs()) {
      // Each slot expands into a list of (h'_{L_j}, γ) pairs.
      std::vector<std::vector<std::pair<HaarIndex, double>>> slot_terms(static_cast<std::size_t>(m));
      for (int j = 0; j < m; ++j) {
        const auto& op = ops[static_cast<std::size_t>(j)];
        const auto& q = e.slots[static_cast<std::size_t>(j)];
        auto& st = slot_terms[static_cast<std::size_t>(j)];
        switch (op.kind) {
          case SlotOp::Kind::Identity:
            st.push_back({q, 1.0});
            break;
          case SlotOp::Kind::Expect:
            st.push_back({HaarIndex{e.K, 0},
                          std::sqrt(lat.measure(q.cube.level) / lat.measure(e.K.level))});
            break;
          case SlotOp::Kind::Delta: {
            const int lv = e.K.level + op.level;
            const Cube L = lat.ancestor(q.cube, q.cube.level - lv);
            // Child of L that contains Q fixes the sign of h_L^η on Q.
            const unsigned pos = lat.child_position(lat.ancestor(q.cube, q.cube.level - lv - 1));
            const double g = std::sqrt(lat.measure(q.cube.level) / lat.measure(lv));
            for (unsigned eta = 1; eta < lat.num_children(); ++eta)
              st.push_back({HaarIndex{L, eta}, g * dyadic::haar_sign(pos, eta)});
            break;
          }
        }
      }
      std::vector<HaarIndex> slots(static_cast<std::size_t>(m));
      auto expand = [&](auto&& self, int j, double gamma) -> void {
        if (j == m) {
          b[Key{e.K, slots}] += e.coeff * gamma;
          return;
        }
        for (const auto& [h, g] : slot_terms[static_cast<std::size_t>(j)]) {
          slots[static_cast<std::size_t>(j)] = h;
          self(self, j + 1, gamma * g);
        }
      };
      expand(expand, 0, 1.0);
    }

    for (auto& [key, coeff] : b) {
      double bound = std::pow(lat.measure(key.first.level), -static_cast<double>(s.n()));
      for (const auto& h : key.second) bound *= std::sqrt(lat.measure(h.cube.level));
      term.normalization_ratio = std::max(term.normalization_ratio, std::abs(coeff) / bound);
      term.form.entries.push_back(FormEntry{key.first, key.second, coeff});
    }
    out.push_back(std::move(term));
  }
  return out;
}

cplx eval_projected_form(const ShiftSpec& s, const std::vector<SlotOp>& ops, const std::vector<GridFunction>& fs) {
  const int m = s.n() + 1;
  require(static_cast<int>(ops.size()) == m, "need one slot operator per slot");
  check_inputs(s.form(), fs);
  std::map<Cube, std::vector<const FormEntry*>> grouped;
  for (const auto& e : s.coeffs()) grouped[e.K].push_back(&e);
  cplx total{};
  for (const auto& [K, entries] : grouped) {
    std::vector<dyadic::PairingTable> tables;
    for (int j = 0; j < m; ++j) {
      const auto& op = ops[static_cast<std::size_t>(j)];
      const auto& f = fs[static_cast<std::size_t>(j)];
      switch (op.kind) {
        case SlotOp::Kind::Identity:
          tables.emplace_back(f);
          break;
        case SlotOp::Kind::Delta:
          tables.emplace_back(dyadic::martingale_diff_k(f, K, op.level));
          break;
        case SlotOp::Kind::Expect:
          tables.emplace_back(dyadic::expect(f, K));
          break;
      }
    }
    std::vector<const dyadic::PairingTable*> ptrs;
    for (const auto& t : tables) ptrs.push_back(&t);
    HaarForm block{s.lattice(), m, {}};
    for (const auto* e : entries) block.entries.push_back(*e);
    total += eval_form(block, ptrs);
  }
  return total;
}

}  // namespace dyadlab::model
