#include "model/haar_form.hpp"

#include <cmath>
#include <map>

namespace dyadlab::model {

namespace {

// out = a * b for row-major n x n blocks.
void mul_block(const cplx* a, const cplx* b, cplx* out, int n) {
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      cplx acc{};
      for (int k = 0; k < n; ++k) acc += a[r * n + k] * b[k * n + c];
      out[r * n + c] = acc;
    }
}

cplx trace_block(const cplx* a, int n) {
  cplx acc{};
  for (int i = 0; i < n; ++i) acc += a[i * n + i];
  return acc;
}

}  // namespace

void check_inputs(const HaarForm& form, const std::vector<GridFunction>& fs) {
  require(static_cast<int>(fs.size()) == form.arity,
          "form expects " + std::to_string(form.arity) + " functions, got " + std::to_string(fs.size()));
  for (const auto& f : fs) {
    require(f.lattice() == form.lattice, "function lattice does not match the form's lattice");
    require(f.n() == fs.front().n(), "all functions must share the matrix dimension N");
  }
}

cplx eval_form(const HaarForm& form, const std::vector<GridFunction>& fs) {
  check_inputs(form, fs);
  std::vector<dyadic::PairingTable> tables;
  tables.reserve(fs.size());
  for (const auto& f : fs) tables.emplace_back(f);
  std::vector<const dyadic::PairingTable*> ptrs;
  for (const auto& t : tables) ptrs.push_back(&t);
  return eval_form(form, ptrs);
}

cplx eval_form(const HaarForm& form, const std::vector<const dyadic::PairingTable*>& tables) {
  require(static_cast<int>(tables.size()) == form.arity, "wrong number of pairing tables");
  const int n = tables.front()->n();
  const std::size_t block = static_cast<std::size_t>(n) * n;
  std::vector<cplx> acc(block), tmp(block);
  cplx total{};
  for (const auto& e : form.entries) {
    if (e.coeff == cplx{}) continue;
    const cplx* first = tables[0]->pairing_data(e.slots[0]);
    std::copy(first, first + block, acc.begin());
    for (int j = 1; j < form.arity; ++j) {
      mul_block(acc.data(), tables[static_cast<std::size_t>(j)]->pairing_data(e.slots[static_cast<std::size_t>(j)]),
                tmp.data(), n);
      acc.swap(tmp);
    }
    total += e.coeff * trace_block(acc.data(), n);
  }
  return total;
}

GridFunction adjoint_eval(const HaarForm& form, int j0, const std::vector<GridFunction>& others) {
  require(j0 >= 0 && j0 < form.arity, "adjoint slot out of range");
  require(static_cast<int>(others.size()) == form.arity - 1, "adjoint expects arity-1 functions");
  for (const auto& f : others) {
    require(f.lattice() == form.lattice, "function lattice does not match the form's lattice");
    require(f.n() == others.front().n(), "all functions must share the matrix dimension N");
  }
  const int n = others.empty() ? 1 : others.front().n();
  std::vector<dyadic::PairingTable> tables;
  for (const auto& f : others) tables.emplace_back(f);
  // Slot j maps to tables[j] for j < j0 and tables[j-1] for j > j0.
  auto table_for = [&](int j) -> const dyadic::PairingTable& {
    return tables[static_cast<std::size_t>(j < j0 ? j : j - 1)];
  };
  std::map<dyadic::HaarIndex, Matrix> weights;
  for (const auto& e : form.entries) {
    if (e.coeff == cplx{}) continue;
    Matrix w = Matrix::Identity(n, n);
    for (int step = 1; step < form.arity; ++step) {
      const int j = (j0 + step) % form.arity;
      w = w * table_for(j).pairing(e.slots[static_cast<std::size_t>(j)]);
    }
    auto it = weights.find(e.slots[static_cast<std::size_t>(j0)]);
    if (it == weights.end())
      weights.emplace(e.slots[static_cast<std::size_t>(j0)], e.coeff * w);
    else
      it->second += e.coeff * w;
  }
  GridFunction g(form.lattice, n == 1 ? dyadic::ValueKind::Scalar : dyadic::ValueKind::Matrix, n);
  const auto& lat = form.lattice;
  for (const auto& [h, w] : weights) {
    const double amp = 1.0 / std::sqrt(lat.measure(h.cube.level));
    if (h.eta == 0) {
      const Matrix v = amp * w;
      for (auto c : lat.cells(h.cube)) g.add(c, v);
      continue;
    }
    for (unsigned b = 0; b < lat.num_children(); ++b) {
      const Matrix v = (amp * dyadic::haar_sign(b, h.eta)) * w;
      for (auto c : lat.cells(lat.child(h.cube, b))) g.add(c, v);
    }
  }
  return g;
}

}  // namespace dyadlab::model
