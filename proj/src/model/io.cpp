#include "model/io.hpp"

#include "dyadic/io.hpp"

namespace dyadlab::model {

using nlohmann::json;

json lattice_to_json(const Lattice& lat) {
  return {{"dim", lat.dim()}, {"depth", lat.depth()}, {"shift", lat.shift()}};
}

Lattice lattice_from_json(const json& j) {
  try {
    const int dim = j.at("dim").get<int>();
    const int depth = j.at("depth").get<int>();
    std::vector<double> shift(static_cast<std::size_t>(std::max(dim, 0)), 0.0);
    if (j.contains("shift")) shift = j.at("shift").get<std::vector<double>>();
    return Lattice(dim, depth, shift);
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, std::string("lattice: ") + e.what());
  }
}

json to_json(const ShiftSpec& s) {
  json j = lattice_to_json(s.lattice());
  j["n"] = s.n();
  j["complexity"] = s.complexity();
  json canc = json::array();
  for (int c : s.cancellative()) canc.push_back(c + 1);
  j["cancellative"] = canc;
  json coeffs = json::array();
  for (const auto& e : s.coeffs()) {
    json qs = json::array();
    for (const auto& h : e.slots) {
      json q = dyadic::cube_to_json(s.lattice(), h.cube);
      q["eta"] = h.eta;
      qs.push_back(std::move(q));
    }
    coeffs.push_back({{"K", dyadic::cube_to_json(s.lattice(), e.K)},
                      {"Qs", std::move(qs)},
                      {"re", e.coeff.real()},
                      {"im", e.coeff.imag()}});
  }
  j["coeffs"] = std::move(coeffs);
  return j;
}

ShiftSpec shift_from_json(const json& j, bool clamp) {
  const Lattice lat = lattice_from_json(j);
  try {
    std::vector<int> canc;
    for (int c : j.at("cancellative").get<std::vector<int>>()) canc.push_back(c - 1);
    ShiftSpec s(lat, j.at("n").get<int>(), j.at("complexity").get<std::vector<int>>(), canc);
    const auto& coeffs = j.at("coeffs");
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      const auto& c = coeffs[i];
      const std::string path = "coeffs[" + std::to_string(i) + "]";
      FormEntry e;
      e.K = dyadic::cube_from_json(lat, c.at("K"));
      const auto& qs = c.at("Qs");
      for (std::size_t u = 0; u < qs.size(); ++u) {
        const int slot = static_cast<int>(u);
        const unsigned def = s.is_cancellative(slot) ? 1U : 0U;
        const unsigned eta = qs[u].contains("eta") ? qs[u].at("eta").get<unsigned>() : def;
        e.slots.push_back(HaarIndex{dyadic::cube_from_json(lat, qs[u]), eta});
      }
      e.coeff = {c.value("re", 0.0), c.value("im", 0.0)};
      try {
        s.add(std::move(e), clamp);
      } catch (const Error& err) {
        fail(err.code(), path + ": " + err.what());
      }
    }
    return s;
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, std::string("shift: ") + e.what());
  }
}

json to_json(const ParaproductSpec& p) {
  json j = lattice_to_json(p.lattice);
  j["n"] = p.n;
  j["j0"] = p.j0 + 1;
  json coeffs = json::array();
  for (const auto& [h, a] : p.coeffs)
    coeffs.push_back(
        {{"K", dyadic::cube_to_json(p.lattice, h.cube)}, {"eta", h.eta}, {"re", a.real()}, {"im", a.imag()}});
  j["coeffs"] = std::move(coeffs);
  return j;
}

ParaproductSpec paraproduct_from_json(const json& j) {
  ParaproductSpec p{lattice_from_json(j), 1, 0, {}};
  try {
    p.n = j.at("n").get<int>();
    p.j0 = j.at("j0").get<int>() - 1;
    for (const auto& c : j.at("coeffs")) {
      const HaarIndex h{dyadic::cube_from_json(p.lattice, c.at("K")), c.value("eta", 1U)};
      p.coeffs[h] += cplx{c.value("re", 0.0), c.value("im", 0.0)};
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::Parse, std::string("paraproduct: ") + e.what());
  }
  p.validate();
  return p;
}

}  // namespace dyadlab::model
