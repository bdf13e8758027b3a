#include "runner/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numeric>

#include "common/random.hpp"
#include "dyadic/haar.hpp"
#include "leibniz/kernel.hpp"
#include "leibniz/leibniz.hpp"
#include "model/io.hpp"
#include "model/reduce.hpp"
#include "model/shift.hpp"
#include "nc/mixed.hpp"
#include "nc/schatten.hpp"
#include "nc/ynorm.hpp"
#include "randomized/randomized.hpp"
#include "runner/config.hpp"
#include "sparse/sparse.hpp"

namespace dyadlab::runner {

namespace {

using dyadic::Cube;
using dyadic::GridFunction;
using dyadic::HaarIndex;
using dyadic::Lattice;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string trial_name(std::size_t t) { return "trial=" + std::to_string(t); }

double rel(double diff, double scale) { return diff / std::max(1.0, std::abs(scale)); }

struct Context {
  Globals g;
  Block& block;
  Report& report;
  int trials(int def) const { return g.trials.value_or(def); }
};

std::vector<GridFunction> random_matrix_functions(const Lattice& lat, int count, int n, Rng& rng) {
  std::vector<GridFunction> fs;
  for (int j = 0; j < count; ++j) fs.push_back(GridFunction::random_matrix(lat, n, rng));
  return fs;
}

// Λ(f) with every pairing computed by direct summation over the cells of its cube.
cplx naive_form_value(const model::HaarForm& form, const std::vector<GridFunction>& fs) {
  const int n = fs.front().n();
  cplx total{};
  for (const auto& e : form.entries) {
    Matrix prod = Matrix::Identity(n, n);
    for (std::size_t j = 0; j < e.slots.size(); ++j) prod = prod * dyadic::haar_pairing(fs[j], e.slots[j]);
    total += e.coeff * nc::trace(prod);
  }
  return total;
}

// Least-squares slope of log y against log x over positive y.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (y[i] > 0.0 && std::isfinite(y[i])) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  if (lx.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(lx.size());
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(ly.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

// Shift from an inline shift object or from random generation parameters in the block.
model::ShiftSpec shift_from_block(Context& c, std::uint64_t seed, const std::vector<long long>& def_cancellative) {
  auto& b = c.block;
  const bool clamp = b.boolean("clamp", false);
  if (const auto* spec = b.raw("shift")) {
    b.set_effective("shift", *spec);
    try {
      return model::shift_from_json(*spec, clamp);
    } catch (const Error& e) {
      fail(e.code() == ErrorCode::InvalidArgument ? ErrorCode::Parse : e.code(), b.field("shift") + ": " + e.what());
    }
  }
  const int m = c.g.n + 1;
  const auto complexity = b.int_list("complexity", std::vector<long long>(static_cast<std::size_t>(m), 1), 0, 16);
  if (complexity.size() != static_cast<std::size_t>(m))
    fail(ErrorCode::Parse, b.field("complexity") + ": expected n+1 = " + std::to_string(m) + " entries");
  const auto canc1 = b.int_list("cancellative", def_cancellative, 1, m);
  const double scale = b.number("scale", 1.0, 0.0, 1.0);
  const auto blocks = b.integer("max_blocks", 8, 0, 1 << 20);
  const bool random_lattice = b.boolean("random_lattice", false);
  const Lattice lat = random_lattice ? Lattice::random(c.g.d, c.g.L, derive_seed(seed, 7)) : Lattice(c.g.d, c.g.L);
  std::vector<int> comp(complexity.begin(), complexity.end());
  std::vector<int> canc;
  for (auto s : canc1) canc.push_back(static_cast<int>(s) - 1);
  try {
    return model::make_random_shift(lat, c.g.n, comp, canc, seed,
                                    {scale, static_cast<std::size_t>(blocks)});
  } catch (const Error& e) {
    fail(ErrorCode::Parse, b.field("complexity") + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------------------

void haar_suite(Context& c) {
  auto& b = c.block;
  auto& r = c.report;
  const int shifted = static_cast<int>(b.integer("shifted_lattices", 1, 0, 16));
  const int trials = static_cast<int>(b.integer("trials", c.trials(2), 1, 1000));
  const std::uint64_t max_cells = b.u64("orthonormality_max_cells", 4096);

  std::vector<Lattice> lats{Lattice(c.g.d, c.g.L)};
  for (int i = 0; i < shifted; ++i) lats.push_back(Lattice::random(c.g.d, c.g.L, derive_seed(c.g.seed, 100 + i)));

  for (std::size_t li = 0; li < lats.size(); ++li) {
    const Lattice& lat = lats[li];
    const std::string lname = "lattice=" + std::to_string(li);
    std::vector<HaarIndex> system{{lat.top(), 0}};
    for (int level = 0; level < lat.depth(); ++level)
      for (const auto& q : lat.cubes_at(level))
        for (unsigned eta = 1; eta < lat.num_children(); ++eta) system.push_back({q, eta});

    if (lat.cell_count() <= max_cells) {
      std::vector<std::vector<double>> hs;
      for (const auto& h : system) {
        const auto f = dyadic::haar(lat, h);
        std::vector<double> v(f.cells());
        for (std::uint64_t x = 0; x < f.cells(); ++x) v[x] = f.scalar_at(x).real();
        hs.push_back(std::move(v));
      }
      double worst = 0.0;
      const double w = lat.cell_measure();
      for (std::size_t i = 0; i < hs.size(); ++i)
        for (std::size_t j = i; j < hs.size(); ++j) {
          double s = 0.0;
          for (std::size_t x = 0; x < hs[i].size(); ++x) s += hs[i][x] * hs[j][x];
          worst = std::max(worst, std::abs(s * w - (i == j ? 1.0 : 0.0)));
        }
      r.hard("haar_orthonormality", lname + " functions=" + std::to_string(system.size()), worst, 1e-12,
             "Haar system is orthonormal in L2");
    } else {
      r.info("haar_orthonormality_skipped", lname, static_cast<double>(lat.cell_count()),
             "lattice above orthonormality_max_cells");
    }

    Rng rng(derive_seed(c.g.seed, li));
    for (int t = 0; t < trials; ++t) {
      const std::string inst = lname + " " + trial_name(static_cast<std::size_t>(t));
      const auto f = GridFunction::random_matrix(lat, c.g.N, rng);
      const double scale = f.max_abs();
      const dyadic::PairingTable tab(f);

      // Table pairings against direct summation.
      double pair_err = 0.0;
      for (const auto& h : system)
        pair_err = std::max(pair_err, (tab.pairing(h) - dyadic::haar_pairing(f, h)).cwiseAbs().maxCoeff());
      for (int level = 0; level <= lat.depth(); ++level)
        for (const auto& q : lat.cubes_at(level))
          pair_err = std::max(pair_err, (tab.average(q) - dyadic::average(f, q)).cwiseAbs().maxCoeff());
      r.hard("pairing_table_vs_direct", inst, rel(pair_err, scale), 1e-12,
             "one-sweep pairings equal direct summation");

      // f = Σ ⟨f, h⟩ h over the full system.
      auto rec = GridFunction::zeros_like(f);
      for (const auto& h : system) {
        const Matrix coeff = tab.pairing(h);
        const auto hf = dyadic::haar(lat, h);
        for (std::uint64_t x = 0; x < f.cells(); ++x)
          if (hf.scalar_at(x) != 0.0) rec.add(x, hf.scalar_at(x) * coeff);
      }
      r.hard("haar_expansion", inst, rel(rec.max_abs_diff(f), scale), 1e-12, "Haar expansion reconstructs f");

      // f = E_top f + Σ_{level < L} Δ_Q f.
      auto tele = dyadic::expect(f, lat.top());
      for (int level = 0; level < lat.depth(); ++level)
        for (const auto& q : lat.cubes_at(level)) tele += dyadic::martingale_diff(f, q);
      r.hard("martingale_telescoping", inst, rel(tele.max_abs_diff(f), scale), 1e-12,
             "martingale differences telescope to f");

      // Projection algebra on every cube above the finest level.
      double alg = 0.0;
      for (int level = 0; level < lat.depth(); ++level)
        for (const auto& q : lat.cubes_at(level)) {
          const auto eq = dyadic::expect(f, q);
          const auto dq = dyadic::martingale_diff(f, q);
          alg = std::max(alg, dyadic::expect(eq, q).max_abs_diff(eq));
          alg = std::max(alg, dyadic::martingale_diff(dq, q).max_abs_diff(dq));
          alg = std::max(alg, dyadic::expect(dq, q).max_abs());
          alg = std::max(alg, dyadic::martingale_diff(eq, q).max_abs());
          for (const auto& ch : lat.children(q))
            if (ch.level < lat.depth()) alg = std::max(alg, dyadic::martingale_diff(dq, ch).max_abs());
        }
      r.hard("projection_algebra", inst, rel(alg, scale), 1e-12,
             "E_Q and Δ_Q are commuting projections with E_Q Δ_Q = 0");

      // Σ_{R^{(k)}=K} E_R f = E_K f + Σ_{l<k} Δ_K^l f for every admissible (K, k).
      double expansion = 0.0;
      for (int level = 0; level <= lat.depth(); ++level)
        for (const auto& q : lat.cubes_at(level)) {
          auto acc = dyadic::expect(f, q);
          for (int k = 0; level + k <= lat.depth(); ++k) {
            if (k > 0) acc += dyadic::martingale_diff_k(f, q, k - 1);
            expansion = std::max(expansion, dyadic::expect_k(f, q, k).max_abs_diff(acc));
          }
        }
      r.hard("noncancellative_expansion", inst, rel(expansion, scale), 1e-12,
             "averages over k-th descendants expand into martingale differences");
    }
  }
  r.summary("haar functions checked on " + std::to_string(lats.size()) + " lattices");
}

// ---------------------------------------------------------------------------------------

void shift_eval(Context& c) {
  auto& b = c.block;
  auto& r = c.report;
  const int m = c.g.n + 1;
  const auto s = shift_from_block(c, derive_seed(c.g.seed, 1), {1, 2});
  const int trials = static_cast<int>(b.integer("trials", c.trials(3), 1, 10000));
  check_holder_tuple(c.g.exponents, "config.exponents");
  if (s.n() != c.g.n) fail(ErrorCode::Parse, b.field("shift") + ": n must match config.n");
  const auto form = s.form();
  r.info("coefficients", "", static_cast<double>(form.entries.size()), "stored shift coefficients");
  r.info("clamped", "", static_cast<double>(s.clamped()), "coefficients projected onto the bound");

  Rng rng(derive_seed(c.g.seed, 2));
  for (int t = 0; t < trials; ++t) {
    const std::string inst = trial_name(static_cast<std::size_t>(t));
    auto fs = random_matrix_functions(s.lattice(), m, c.g.N, rng);
    const cplx val = model::eval_shift_form(s, fs);
    const double mag = std::abs(val);
    r.info("lhs", inst, mag, "|form value|");
    if (t == 0) r.summary("lhs: " + fmt(mag));

    const cplx naive = naive_form_value(form, fs);
    r.hard("tree_vs_naive", inst, rel(std::abs(val - naive), std::abs(naive)), 1e-12,
           "tree-contracted evaluation equals full enumeration");

    for (int j0 = 0; j0 < m; ++j0) {
      std::vector<GridFunction> others;
      for (int j = 0; j < m; ++j)
        if (j != j0) others.push_back(fs[static_cast<std::size_t>(j)]);
      const auto g = model::adjoint_eval(form, j0, others);
      const cplx dual = nc::trace(dyadic::integral_product(g, fs[static_cast<std::size_t>(j0)]));
      r.hard("adjoint_duality", inst + " slot=" + std::to_string(j0 + 1), rel(std::abs(dual - val), mag), 1e-10,
             "adjoint pairs back to the form value");
    }

    // Linearity in slot t mod m.
    const auto slot = static_cast<std::size_t>(t % m);
    const auto h = GridFunction::random_matrix(s.lattice(), c.g.N, rng);
    const cplx alpha{0.7, -0.3}, beta{-1.1, 0.4};
    auto mixed = fs;
    mixed[slot] = alpha * fs[slot] + beta * h;
    auto hs = fs;
    hs[slot] = h;
    const cplx lin = model::eval_shift_form(s, mixed) - alpha * val - beta * model::eval_shift_form(s, hs);
    r.hard("multilinearity", inst + " slot=" + std::to_string(slot + 1), rel(std::abs(lin), mag), 1e-12,
           "form is linear in each slot");

    double denom = 1.0;
    for (int j = 0; j < m; ++j) {
      const double p = c.g.exponents[static_cast<std::size_t>(j)];
      denom *= dyadic::lp_norm(fs[static_cast<std::size_t>(j)], p, nc::conjugate(p));
    }
    r.soft("boundedness_ratio", inst, denom > 0.0 ? mag / denom : 0.0, kNone, c.g.band,
           "|form| against the product of L^{p_j}(S^{p_j'}) norms");
  }
}

// ---------------------------------------------------------------------------------------

void reduce_verify(Context& c) {
  auto& b = c.block;
  auto& r = c.report;
  const int m = c.g.n + 1;
  std::vector<long long> all(static_cast<std::size_t>(m));
  std::iota(all.begin(), all.end(), 1);
  const auto s = shift_from_block(c, derive_seed(c.g.seed, 1), all);
  const int trials = static_cast<int>(b.integer("trials", c.trials(2), 1, 10000));
  if (s.n() != c.g.n) fail(ErrorCode::Parse, b.field("shift") + ": n must match config.n");

  const auto terms = model::reduce_shift(s);
  std::size_t expected = 1;
  for (int j = 0; j < m; ++j) {
    const int k = s.complexity()[static_cast<std::size_t>(j)];
    if (!s.is_cancellative(j) && k > 0) expected *= static_cast<std::size_t>(k + 1);
  }
  r.hard("term_count", "", std::abs(static_cast<double>(terms.size()) - static_cast<double>(expected)), 0.0,
         "one term per Δ^l / E choice on each expanded slot");
  double worst_norm = 0.0;
  for (const auto& t : terms) worst_norm = std::max(worst_norm, t.normalization_ratio);
  r.hard("normalization_closure", "", worst_norm - 1.0, 1e-12, "reduced coefficients keep the shift normalization");

  Rng rng(derive_seed(c.g.seed, 2));
  double defect0 = 0.0;
  for (int t = 0; t < trials; ++t) {
    const std::string inst = trial_name(static_cast<std::size_t>(t));
    const auto fs = random_matrix_functions(s.lattice(), m, c.g.N, rng);
    const cplx orig = model::eval_shift_form(s, fs);
    cplx sum{};
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const cplx v = model::eval_form(terms[i].form, fs);
      sum += v;
      const cplx proj = model::eval_projected_form(s, terms[i].ops, fs);
      std::string label;
      for (const auto& op : terms[i].ops) label += (label.empty() ? "" : ",") + op.label();
      r.hard("term_vs_projection", inst + " term=" + label, rel(std::abs(v - proj), std::abs(proj)), 1e-10,
             "each reduced term equals the form on projected inputs");
    }
    const double defect = rel(std::abs(sum - orig), std::abs(orig));
    if (t == 0) defect0 = defect;
    r.hard("form_preservation", inst, defect, 1e-10, "reduced terms sum to the original form");
  }
  char line[96];
  std::snprintf(line, sizeof line, "terms: %zu, defect: %.3g", terms.size(), defect0);
  r.summary(line);
}

// ---------------------------------------------------------------------------------------

void sparse_verify(Context& c) {
  auto& b = c.block;
  auto& r = c.report;
  const int trials = static_cast<int>(b.integer("trials", c.trials(500), 1, 1000000));
  const int n_max = static_cast<int>(b.integer("n_max", 3, 1, 4));
  const int kappa_max = static_cast<int>(b.integer("kappa_max", 3, 0, 6));
  const int depth = static_cast<int>(b.integer("L", std::max(c.g.L, kappa_max + 2), kappa_max + 1, 14));
  const double eta = b.number("eta", 0.5, 1e-6, 1.0 - 1e-6);
  const auto blocks = static_cast<std::size_t>(b.integer("max_blocks", 4, 1, 1 << 20));
  const int scaling_every = static_cast<int>(b.integer("scaling_check_every", 10, 1, 1000000));
  const Lattice lat(c.g.d, depth);

  auto& table = r.table();
  table.header = {"trial", "seed", "n", "N", "L", "kappa", "eta", "theta", "lhs", "rhs", "constant", "cubes"};
  // max constant per (n, kappa)
  std::map<std::pair<int, int>, double> maxc;
  int not_sparse = 0, violations = 0;
  double mf_excess = -kInf, scale_err = 0.0;

  for (int t = 0; t < trials; ++t) {
    const std::uint64_t ts = derive_seed(c.g.seed, static_cast<std::uint64_t>(t));
    Rng rng(ts);
    const int n = 1 + t % n_max;
    const int kappa = (t / n_max) % (kappa_max + 1);
    const int m = n + 1;
    std::vector<int> comp(static_cast<std::size_t>(m));
    comp[0] = kappa;
    for (int j = 1; j < m; ++j) comp[static_cast<std::size_t>(j)] = static_cast<int>(rng() % (kappa + 1));
    std::shuffle(comp.begin(), comp.end(), rng);
    std::vector<int> slots(static_cast<std::size_t>(m));
    std::iota(slots.begin(), slots.end(), 0);
    std::shuffle(slots.begin(), slots.end(), rng);
    slots.resize(static_cast<std::size_t>(2 + rng() % static_cast<std::uint64_t>(m - 1)));
    std::sort(slots.begin(), slots.end());
    const auto s = model::make_random_shift(lat, n, comp, slots, rng(), {1.0, blocks});
    const auto fs = random_matrix_functions(lat, m, c.g.N, rng);
    const auto form = s.form();

    const auto rep = sparse::verify_sparse_domination(form, fs, eta);
    violations += rep.violation || !std::isfinite(rep.constant);
    auto& mc = maxc[{n, kappa}];
    mc = std::max(mc, rep.constant);
    table.rows.push_back({t, ts, n, c.g.N, depth, kappa, rep.eta, rep.theta, number(rep.lhs), number(rep.rhs),
                          number(rep.constant), rep.cubes});

    // The stopping collection on the pointwise norms, checked independently.
    std::vector<GridFunction> norms;
    for (const auto& f : fs) norms.push_back(dyadic::pointwise_norm(f, static_cast<double>(m)));
    const auto coll = sparse::build_sparse_stopping(norms, rep.theta);
    not_sparse += !sparse::is_sparse(lat, coll, sparse::stopping_eta(static_cast<std::size_t>(m), rep.theta));
    const double sf = sparse::sparse_form(coll, norms);
    const double ml1 = sparse::multilinear_maximal(norms).integral()(0, 0).real();
    mf_excess = std::max(mf_excess, rel(sf - ml1 / rep.eta, ml1 / rep.eta));

    if (t % scaling_every == 0) {
      auto scaled = fs;
      const double lambdas[] = {2.0, 0.5, 3.0, 0.25, 5.0};
      for (std::size_t j = 0; j < scaled.size(); ++j) scaled[j] *= lambdas[j % 5];
      const auto rep2 = sparse::verify_sparse_domination(form, scaled, eta);
      scale_err = std::max(scale_err, rel(std::abs(rep2.constant - rep.constant), rep.constant));
    }
  }
  r.hard("stopping_collection_sparse", "", static_cast<double>(not_sparse), 0.0,
         "stopping collections are sparse at the guaranteed parameter");
  r.hard("sparse_form_vs_maximal", "", mf_excess, 1e-12, "sparse form is at most eta^{-1} times the L1 norm of M");
  r.hard("finite_constants", "", static_cast<double>(violations), 0.0, "sparse form dominates every sampled form");
  r.hard("scaling_invariance", "", scale_err, 1e-10, "domination constant is invariant under f_j -> lambda_j f_j");

  for (int n = 1; n <= n_max; ++n) {
    std::vector<double> xs, ys;
    double overall = 0.0;
    for (int kappa = 0; kappa <= kappa_max; ++kappa) {
      auto it = maxc.find({n, kappa});
      if (it == maxc.end()) continue;
      xs.push_back(1.0 + kappa);
      ys.push_back(it->second);
      overall = std::max(overall, it->second);
      r.info("max_constant", "n=" + std::to_string(n) + " kappa=" + std::to_string(kappa), it->second,
             "largest sampled domination constant");
    }
    const double beta = loglog_slope(xs, ys);
    if (!std::isnan(beta))
      r.soft("kappa_growth_exponent", "n=" + std::to_string(n), beta, kNone, n + 1.0,
             "max constant grows polynomially in complexity");
    r.summary("n=" + std::to_string(n) + ": max constant " + fmt(overall) + ", growth exponent " + fmt(beta));
  }
}

// ---------------------------------------------------------------------------------------

void rad_suite(Context& c) {
  auto& b = c.block;
  auto& r = c.report;
  const int M = static_cast<int>(b.integer("M", 6, 1, 10));
  const int trials = static_cast<int>(b.integer("trials", c.trials(3), 1, 10000));
  const auto schatten = b.number_list("schatten", {1.0, 2.0, 4.0, kInf}, 1.0, kInf, true);
  const auto moments = b.number_list("moments", {1.0, 2.0, 4.0}, 1.0, 64.0);
  const int K = static_cast<int>(b.integer("K", 4, 1, 10));
  const auto rs_n = b.int_list("rscalar_n", {2, 3}, 2, 5);
  const int mt_depth = static_cast<int>(b.integer("transform_L", std::min(c.g.L, 4), 1, 10));
  const double C = c.g.band;
  const auto ens = randomized::SignEnsemble::exhaustive(static_cast<std::size_t>(M));

  for (int t = 0; t < trials; ++t) {
    const std::string tn = trial_name(static_cast<std::size_t>(t));
    Rng rng(derive_seed(c.g.seed, static_cast<std::uint64_t>(t)));
    std::vector<Matrix> xs;
    for (int i = 0; i < M; ++i) xs.push_back((0.2 + 2.0 * uniform01(rng)) * gaussian_matrix(c.g.N, rng));
    std::vector<cplx> a;
    for (int i = 0; i < M; ++i) a.emplace_back(2.0 * uniform01(rng) - 1.0, 0.0);

    for (double rr : schatten) {
      const auto norm = randomized::schatten(rr);
      for (std::size_t i = 0; i < moments.size(); ++i) {
        const double p = moments[i];
        const auto cc = randomized::contraction_check(xs, a, norm, p, ens);
        r.hard("contraction", tn + " S=" + fmt(rr) + " p=" + fmt(p), rel(cc.lhs - cc.rhs, cc.rhs), 1e-12,
               "contraction principle with real coefficients");
        for (std::size_t k = 0; k < i; ++k) {
          const double q = moments[k];
          r.soft("kahane_khintchine", tn + " S=" + fmt(rr) + " p=" + fmt(p) + " q=" + fmt(q),
                 randomized::kk_ratio(xs, norm, p, q, ens), 1.0 / C, C, "comparability of sign moments");
        }
      }
    }

    // Stein inequality on M cubes of a small lattice.
    {
      const Lattice lat(c.g.d, std::min(c.g.L, 4));
      std::vector<randomized::CubeFunction> fqs;
      for (int i = 0; i < M; ++i) {
        const int level = static_cast<int>(rng() % static_cast<std::uint64_t>(lat.depth() + 1));
        const Cube q{level, rng() % lat.cube_count(level)};
        auto f = GridFunction::random_matrix(lat, c.g.N, rng);
        for (std::uint64_t x = 0; x < f.cells(); ++x)
          if (!lat.contains_cell(q, x)) f.set(x, Matrix::Zero(c.g.N, c.g.N));
        fqs.push_back({q, std::move(f)});
      }
      const auto sc = randomized::stein_check(fqs, 2.0, 2.0, ens);
      r.soft("stein", tn, sc.ratio(), kNone, C, "conditional expectations are bounded on Rad(L^p)");
    }

    for (auto nn : rs_n) {
      const int n = static_cast<int>(nn);
      const auto tab = nc::ExponentTable::tuple(
          static_cast<int>(c.g.exponents.size()) == n + 1 ? c.g.exponents
                                                          : std::vector<double>(static_cast<std::size_t>(n + 1), n + 1.0));
      std::vector<std::vector<Matrix>> e(static_cast<std::size_t>(n));
      for (auto& row : e)
        for (int k = 0; k < K; ++k) row.push_back(gaussian_matrix(c.g.N, rng));
      std::vector<cplx> ak;
      for (int k = 0; k < K; ++k) ak.push_back(std::sqrt(uniform01(rng)) * unit_phase(rng));
      const auto ensk = randomized::SignEnsemble::exhaustive(static_cast<std::size_t>(K));
      const auto rs = randomized::rscalar_check(e, ak, tab, ensk);
      r.hard("rscalar", tn + " n=" + std::to_string(n), rel(rs.lhs - rs.rhs, rs.rhs), 1e-9,
             "randomized product bound for a Hölder tuple");

      std::vector<std::vector<Matrix>> ek(e.begin(), e.end() - 1);
      const Matrix en = gaussian_matrix(c.g.N, rng);
      const auto ki = randomized::key_inequality_check(ek, en, tab);
      r.hard("key_inequality", tn + " n=" + std::to_string(n), rel(ki.lhs - ki.rhs, ki.rhs), 1e-9,
             "product estimate in the nested dual space");
    }

    const Lattice mlat(c.g.d, mt_depth);
    const auto f = GridFunction::random_matrix(mlat, c.g.N, rng);
    const auto mt = randomized::martingale_transform_ratio(f, 2.0, 2.0);
    r.soft("martingale_transform", tn, mt.max_ratio, kNone, C, "martingale sign transforms are bounded");
  }
}

// ---------------------------------------------------------------------------------------

void decouple(Context& c) {
  auto& b = c.block;
  auto& r = c.report;
  const int j = static_cast<int>(b.integer("j", 0, 0, 64));
  const int k = static_cast<int>(b.integer("k", 1, 0, 16));
  const int l = static_cast<int>(b.integer("l", 0, 0, 16));
  const double p = b.number("p", 2.0, 1.0, 64.0);
  const double rr = b.number("r", 2.0, 1.0, kInf, true);
  const auto samples = static_cast<std::size_t>(b.integer("samples", 10000, 1, 100000000));
  const bool scalar = b.boolean("scalar", true);
  const int trials = static_cast<int>(b.integer("trials", c.trials(3), 1, 10000));
  const auto chi = static_cast<std::size_t>(b.integer("chi_samples", 20000, 0, 100000000));
  if (l > k) fail(ErrorCode::Parse, b.field("l") + ": expected l <= k");
  const Lattice lat(c.g.d, c.g.L);

  for (int t = 0; t < trials; ++t) {
    const std::string tn = trial_name(static_cast<std::size_t>(t));
    const std::uint64_t ts = derive_seed(c.g.seed, static_cast<std::uint64_t>(t));
    Rng rng(ts);
    const auto f = scalar ? GridFunction::random_scalar(lat, rng) : GridFunction::random_matrix(lat, c.g.N, rng);
    const auto res = randomized::decoupling_ratio(f, j, k, l, p, rr, samples, derive_seed(ts, 1));
    r.info("decoupling_lhs", tn, res.lhs, "integral of the martingale sum");
    r.info("decoupling_rhs", tn, res.rhs, "decoupled sum sampled at random points", res.stderr_rhs);
    if (scalar && p == 2.0) {
      const double z = res.stderr_ratio > 0.0 ? (res.ratio - 1.0) / res.stderr_ratio : (res.ratio == 1.0 ? 0.0 : kInf);
      r.soft("decoupling_scalar_p2", tn, z, -3.0, 3.0, "scalar p=2 decoupling ratio is 1 (standard errors)");
    } else {
      r.soft("decoupling_ratio", tn, res.ratio, 1.0 / c.g.band, c.g.band, "decoupled sum is comparable",
             res.stderr_ratio);
    }
  }
  if (chi > 0) {
    const auto cs = randomized::sampler_chi_square(lat, lat.top(), chi, derive_seed(c.g.seed, 99));
    const double z = cs.dof > 0.0 ? (cs.statistic - cs.dof) / std::sqrt(2.0 * cs.dof) : 0.0;
    r.soft("sampler_uniformity", "cube=top", z, -4.0, 4.0, "sampled points are uniform on the cube (chi-square z)");
  }
}

// ---------------------------------------------------------------------------------------

void factorize(Context& c) {
  auto& b = c.block;
  auto& r = c.report;
  const int trials = static_cast<int>(b.integer("trials", c.trials(200), 1, 1000000));
  const int atoms = static_cast<int>(b.integer("atoms", 3, 1, 16));
  const int y_trials = static_cast<int>(b.integer("ynorm_trials", 3, 0, 1000));
  const auto budget = static_cast<std::size_t>(b.integer("budget", 10000, 1, 100000000));
  const auto& ps = c.g.exponents;
  const int m = static_cast<int>(ps.size());

  std::vector<double> rotated(ps.begin() + 1, ps.end());
  rotated.push_back(ps.front());
  std::vector<std::vector<double>> cols;
  for (int j = 0; j < m; ++j) cols.push_back({ps[static_cast<std::size_t>(j)], rotated[static_cast<std::size_t>(j)]});
  const nc::ExponentTable tab0 = nc::ExponentTable::tuple(ps);
  const nc::ExponentTable tab1(cols);
  std::vector<int> J0, J1;
  for (int j = 0; j < m; ++j) {
    if (std::isfinite(ps[static_cast<std::size_t>(j)])) J0.push_back(j);
    if (std::isfinite(ps[static_cast<std::size_t>(j)]) && std::isfinite(rotated[static_cast<std::size_t>(j)]))
      J1.push_back(j);
  }

  double pos_prod = 0.0, pos_unit = 0.0, mix_prod = 0.0, mix_unit = 0.0, fubini = 0.0, holder = -kInf;
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(c.g.seed, static_cast<std::uint64_t>(t)));
    // Single matrix.
    {
      std::vector<double> sub;
      double inv = 0.0;
      for (int j : J0) {
        sub.push_back(ps[static_cast<std::size_t>(j)]);
        inv += 1.0 / ps[static_cast<std::size_t>(j)];
      }
      const double q = 1.0 / inv;
      Matrix a = positive_matrix(c.g.N, rng);
      a /= nc::schatten_norm(a, q);
      const auto bs = nc::factorize_positive(a, q, sub);
      Matrix prod = Matrix::Identity(c.g.N, c.g.N);
      for (std::size_t u = 0; u < bs.size(); ++u) {
        prod = prod * bs[u];
        pos_unit = std::max(pos_unit, std::abs(nc::schatten_norm(bs[u], sub[u]) - 1.0));
      }
      pos_prod = std::max(pos_prod, (prod - a).norm() / a.norm());

      const Matrix x = gaussian_matrix(c.g.N, rng), y = gaussian_matrix(c.g.N, rng);
      const auto hc = nc::holder_product_check(x, y, ps[0], 1.0 / (1.0 - 1.0 / ps[0]));
      holder = std::max(holder, rel(hc.lhs - hc.rhs, hc.rhs));
    }
    // One nested level.
    if (!J1.empty()) {
      nc::MixedSpace space{c.g.N, {{}}};
      for (int i = 0; i < atoms; ++i) space.weights[0].push_back(0.2 + uniform01(rng));
      nc::NestedFunction f;
      for (int i = 0; i < atoms; ++i) f.leaves.push_back(positive_matrix(c.g.N, rng));
      const double nrm = nc::nested_norm(f, space, tab1.q_column(J1));
      for (auto& leaf : f.leaves) leaf /= nrm;
      const auto fac = nc::factorize_mixed(f, space, J1, tab1);
      const auto back = nc::pointwise_product(fac);
      for (std::size_t i = 0; i < f.leaves.size(); ++i)
        mix_prod = std::max(mix_prod, (back.leaves[i] - f.leaves[i]).norm() / f.leaves[i].norm());
      for (std::size_t u = 0; u < fac.size(); ++u)
        mix_unit = std::max(mix_unit, std::abs(nc::nested_norm(fac[u], space, tab1, J1[u]) - 1.0));

      const double pc = 1.0 + 3.0 * uniform01(rng);
      nc::NestedFunction g;
      for (int i = 0; i < atoms; ++i) g.leaves.push_back(gaussian_matrix(c.g.N, rng));
      const double nested = nc::nested_norm(g, space, std::vector<double>{pc, pc});
      fubini = std::max(fubini, rel(std::abs(nested - nc::flat_norm(g, space, pc)), nested));
    }
  }
  r.hard("factorize_positive_product", "", pos_prod, 1e-8, "factors multiply back to A");
  r.hard("factorize_positive_unit", "", pos_unit, 1e-9, "each factor has unit Schatten norm");
  r.hard("holder_product", "", holder, 1e-10, "Hölder inequality for Schatten norms");
  if (!J1.empty()) {
    r.hard("factorize_mixed_product", "", mix_prod, 1e-8, "nested factors multiply back to f");
    r.hard("factorize_mixed_unit", "", mix_unit, 1e-9, "each nested factor has unit norm in its space");
    r.hard("fubini", "", fubini, 1e-10, "nested norm with constant exponents equals the flat norm");
  }

  std::vector<int> J(static_cast<std::size_t>(m - 1));
  std::iota(J.begin(), J.end(), 0);
  for (int t = 0; t < y_trials; ++t) {
    const std::string tn = trial_name(static_cast<std::size_t>(t));
    Rng rng(derive_seed(c.g.seed, 1000 + static_cast<std::uint64_t>(t)));
    const Matrix e = gaussian_matrix(c.g.N, rng);
    const auto y = nc::y_norm(e, J, tab0, {budget, derive_seed(c.g.seed, 2000 + static_cast<std::uint64_t>(t)), false});
    r.hard("ynorm_upper", tn, rel(y.empirical - y.analytic, y.analytic), 1e-9,
           "no unit tuple beats the dual Schatten norm");
    r.soft("ynorm_search", tn, y.empirical / y.analytic, 0.95, kNone, "random search approaches the dual norm");
    const double att = nc::product_pairing(e, nc::svd_aligned_tuple(e, J, tab0));
    r.hard("ynorm_svd_aligned", tn, rel(std::abs(att - y.analytic), y.analytic), 1e-9,
           "SVD-aligned tuple attains the dual norm");
  }
}

// ---------------------------------------------------------------------------------------

void leibniz_study(Context& c) {
  auto& b = c.block;
  auto& r = c.report;
  const double s = b.number("s", 1.5, 0.0, 16.0);
  const int dim = static_cast<int>(b.integer("dim", 1, 1, 3));
  const int band = static_cast<int>(b.integer("band", 8, 0, 1 << 12));
  const int pairs = static_cast<int>(b.integer("pairs", 100, 1, 100000));
  const auto res = b.int_list("resolutions", {256, 512}, 4, 1 << 14);
  const int N = static_cast<int>(b.integer("N", c.g.N, 1, 8));
  const int k1 = static_cast<int>(b.integer("frequency", 3, 1, 1 << 12));
  leibniz::LeibnizExponents e;
  e.p1 = b.number("p1", 4.0, 1.0, kInf, true);
  e.p2 = b.number("p2", 4.0, 1.0, kInf, true);
  e.q3 = b.number("q3", 2.0, 0.5, kInf);
  e.r1 = b.number("r1", 4.0, 1.0, kInf, true);
  e.r2 = b.number("r2", 4.0, 1.0, kInf, true);
  try {
    e.validate();
  } catch (const Error& err) {
    fail(ErrorCode::Parse, b.field("q3") + ": " + err.what());
  }
  for (auto R : res)
    if (R % 2 != 0 || 2 * band >= R) fail(ErrorCode::Parse, b.field("resolutions") + ": need even R > 2*band");
  r.note("Leibniz quantities are computed on the torus; ratios are studied, not constants.");

  const int R0 = static_cast<int>(res.front());
  const Matrix one = Matrix::Identity(1, 1);
  // Single frequency: D^s(f^2) = |4πk|^s f^2 against 2 |2πk|^s, so the ratio is 2^{s-1}.
  {
    std::vector<int> kv(static_cast<std::size_t>(dim), 0);
    kv[0] = k1;
    const auto f = leibniz::TorusFunction::plane_wave(dim, R0, kv, one);
    const auto lr = leibniz::leibniz_ratio(f, f, s, e);
    r.hard("single_frequency", "k=" + std::to_string(k1), std::abs(lr.ratio - std::pow(2.0, s - 1.0)), 1e-9,
           "closed form 2^{s-1} for f = g = e^{2 pi i k x}");
  }

  Rng rng(derive_seed(c.g.seed, 1));
  const auto f = leibniz::TorusFunction::random_band_limited(dim, R0, N, band, rng);
  const auto g = leibniz::TorusFunction::random_band_limited(dim, R0, N, band, rng);
  const auto split = leibniz::paraproduct_split(f, g, s);
  r.hard("paraproduct_reconstruction", "R=" + std::to_string(R0), split.reconstruction_defect, 1e-6,
         "the three paraproducts sum to D^s(fg)");
  r.hard("partition_of_unity", "R=" + std::to_string(R0), split.partition_defect, 1e-12,
         "Littlewood-Paley pieces sum to one");
  r.hard("plancherel", "R=" + std::to_string(R0),
         rel(std::abs(leibniz::l2_norm(f) - leibniz::coefficient_l2_norm(f)), leibniz::l2_norm(f)), 1e-10,
         "grid L2 norm equals coefficient l2 norm");
  std::vector<int> shift(static_cast<std::size_t>(dim), 5);
  const auto d1 = leibniz::fractional_derivative(f.translate(shift), s);
  const auto d2 = leibniz::fractional_derivative(f, s).translate(shift);
  r.hard("derivative_translation", "R=" + std::to_string(R0), leibniz::max_abs_diff(d1, d2), 1e-9,
         "D^s commutes with grid translations");
  const auto base = leibniz::leibniz_ratio(f, g, s, e).ratio;
  r.hard("ratio_homogeneity", "R=" + std::to_string(R0),
         std::abs(leibniz::leibniz_ratio(cplx{2.5, -1.0} * f, g, s, e).ratio - base) / base, 1e-10,
         "ratio is invariant under f -> lambda f");
  const auto id = leibniz::TorusFunction::constant(dim, R0, Matrix::Identity(N, N));
  r.hard("identity_factor", "R=" + std::to_string(R0), leibniz::leibniz_ratio(f, id, s, e).ratio - 1.0, 1e-12,
         "g = I reduces the ratio to a norm comparison bounded by 1");

  auto& table = r.table();
  table.header = {"R", "max_ratio", "mean_ratio"};
  std::vector<double> maxima;
  for (auto R : res) {
    Rng pr(derive_seed(c.g.seed, 2));
    double mx = 0.0, mean = 0.0;
    for (int t = 0; t < pairs; ++t) {
      const auto x = leibniz::TorusFunction::random_band_limited(dim, static_cast<int>(R), N, band, pr);
      const auto y = leibniz::TorusFunction::random_band_limited(dim, static_cast<int>(R), N, band, pr);
      const double q = leibniz::leibniz_ratio(x, y, s, e).ratio;
      mx = std::max(mx, q);
      mean += q / pairs;
    }
    maxima.push_back(mx);
    table.rows.push_back({R, mx, mean});
    r.info("max_ratio", "R=" + std::to_string(R), mx, "largest Leibniz ratio over random pairs");
  }
  for (std::size_t i = 1; i < maxima.size(); ++i)
    r.soft("refinement_change", "R=" + std::to_string(res[i - 1]) + "->" + std::to_string(res[i]),
           std::abs(maxima[i] / maxima[i - 1] - 1.0), kNone, 0.1, "max ratio is stable under grid refinement");
  r.summary("max ratio at R=" + std::to_string(res.back()) + ": " + fmt(maxima.back()));
}

// ---------------------------------------------------------------------------------------

void kernel_const(Context& c) {
  auto& b = c.block;
  auto& r = c.report;
  const double s = b.number("s", 1.5, 1.0 + 1e-9, 3.0 - 1e-9);
  leibniz::KernelSample ks;
  ks.budget = static_cast<std::size_t>(b.integer("budget", 16000, 4, 100000000));
  const auto checkpoint = static_cast<std::size_t>(b.integer("checkpoint", static_cast<long long>(ks.budget / 4), 1,
                                                             static_cast<long long>(ks.budget)));
  ks.refine_levels = static_cast<int>(b.integer("refine_levels", 10, 0, 40));
  ks.refine_fraction = b.number("refine_fraction", 0.2, 0.0, 1.0);
  ks.strata = static_cast<std::size_t>(b.integer("strata", 16, 1, 4096));
  ks.log2_radius_lo = b.number("log2_radius_lo", -3.0, -40.0, 40.0);
  ks.log2_radius_hi = b.number("log2_radius_hi", 3.0, ks.log2_radius_lo, 40.0);
  ks.seed = derive_seed(c.g.seed, 1);
  ks.checkpoints = {checkpoint, ks.budget};

  const leibniz::HighHighKernel kernel(s);
  ks.kernel = [&kernel](const leibniz::Config& x) { return kernel(x[0], x[1], x[2]); };
  ks.dim = 1;
  ks.arity = 2;
  ks.alpha = kernel.alpha();
  const auto kc = leibniz::cz_kernel_constant(ks);
  r.note("The kernel lives on the real line; it is an analogue of, not the same object as, the torus Leibniz study.");

  const auto& lo = kc.trace.front();
  const auto& hi = kc.trace.back();
  const std::string inst = "budget=" + std::to_string(hi.budget);
  r.hard("size_constant_finite", inst, std::isfinite(hi.size) && hi.size > 0.0 ? 0.0 : 1.0, 0.0,
         "kernel size estimate is finite and positive");
  r.hard("holder_constant_finite", inst, std::isfinite(hi.holder) && hi.holder > 0.0 ? 0.0 : 1.0, 0.0,
         "kernel smoothness estimate is finite and positive");
  r.info("size_constant", inst, hi.size, "sup |K| times radius^{dn}");
  r.info("holder_constant", inst, hi.holder, "sup of the Hölder quotient");
  r.info("alpha", "", ks.alpha, "Hölder exponent (s-1)/2");
  r.info("evaluations", "", static_cast<double>(kc.evaluations), "configurations evaluated");
  const std::string step = std::to_string(lo.budget) + "->" + std::to_string(hi.budget);
  r.soft("size_stability", step, std::abs(hi.size / lo.size - 1.0), kNone, 0.05,
         "size estimate stable as the budget grows");
  r.soft("holder_stability", step, std::abs(hi.holder / lo.holder - 1.0), kNone, 0.05,
         "smoothness estimate stable as the budget grows");
  r.summary("size " + fmt(hi.size) + ", holder " + fmt(hi.holder) + " (alpha " + fmt(ks.alpha) + ")");
}

using CommandFn = void (*)(Context&);

const std::vector<std::pair<std::string, CommandFn>>& registry() {
  static const std::vector<std::pair<std::string, CommandFn>> r{
      {"haar-suite", haar_suite},       {"shift-eval", shift_eval},   {"reduce-verify", reduce_verify},
      {"sparse-verify", sparse_verify}, {"rad-suite", rad_suite},     {"decouple", decouple},
      {"factorize", factorize},         {"leibniz-study", leibniz_study}, {"kernel-const", kernel_const}};
  return r;
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : registry()) v.push_back(name);
    return v;
  }();
  return names;
}

Report run(const std::string& command, const nlohmann::json& config, std::optional<std::uint64_t> seed) {
  const auto& reg = registry();
  auto it = std::find_if(reg.begin(), reg.end(), [&](const auto& e) { return e.first == command; });
  require(it != reg.end(), "unknown subcommand: " + command);

  Block root(&config, "config");
  Globals g = read_globals(root, seed);
  Block block = root.child(command);
  for (const auto& name : commands())
    if (name != command) root.raw(name);

  Report report(command, g.seed, nlohmann::json::object());
  Context ctx{g, block, report};
  it->second(ctx);
  block.finish();
  root.finish();

  nlohmann::json effective = root.effective();
  effective[command] = block.effective();
  Report out(command, g.seed, effective);
  for (const auto& rec : report.records()) {
    switch (rec.gate) {
      case Gate::Hard:
        out.hard(rec.check, rec.instance, rec.value, rec.hi, rec.ref);
        break;
      case Gate::Soft:
        out.soft(rec.check, rec.instance, rec.value, rec.lo, rec.hi, rec.ref, rec.stderr_value);
        break;
      case Gate::Info:
        out.info(rec.check, rec.instance, rec.value, rec.ref, rec.stderr_value);
        break;
    }
  }
  for (const auto& line : report.summary_lines()) out.summary(line);
  out.table() = report.table();
  return out;
}

}  // namespace dyadlab::runner
