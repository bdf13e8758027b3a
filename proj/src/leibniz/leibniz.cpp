#include "leibniz/leibniz.hpp"

#include <cmath>

#include "nc/schatten.hpp"

namespace dyadlab::leibniz {

namespace {

double bridge(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

int top_annulus(int dim, int resolution) {
  const double kmax = std::sqrt(static_cast<double>(dim)) * resolution / 2.0;
  return static_cast<int>(std::ceil(std::log2(kmax)));
}

double piece_weight(std::size_t idx, double k) {
  if (idx == 0) return k == 0.0 ? 1.0 : 0.0;
  return annulus(std::ldexp(k, -static_cast<int>(idx - 1)));
}

// Schatten index dual to p, or 2 for scalars where every index agrees.
double dual_index(double p, int n) {
  if (n == 1) return 2.0;
  require(p >= 1.0, "matrix-valued norms need outer exponent >= 1", ErrorCode::Domain);
  return nc::conjugate(p);
}

}  // namespace

double bump(double r) {
  r = std::abs(r);
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double a = bridge(2.0 - r);
  return a / (a + bridge(r - 1.0));
}

double annulus(double r) { return bump(r) - bump(2.0 * r); }

std::vector<TorusFunction> littlewood_paley(const TorusFunction& f) {
  const int top = top_annulus(f.dim(), f.resolution());
  std::vector<TorusFunction> out;
  for (std::size_t idx = 0; idx <= static_cast<std::size_t>(top) + 1; ++idx)
    out.push_back(f.multiplier([idx](double k) { return piece_weight(idx, k); }));
  return out;
}

double partition_defect(int dim, int resolution) {
  const TorusFunction probe(dim, resolution, 1);
  const int top = top_annulus(dim, resolution);
  double worst = 0.0;
  for (std::size_t p = 0; p < probe.points(); ++p) {
    const double k = probe.frequency(p);
    double s = 0.0;
    for (std::size_t idx = 0; idx <= static_cast<std::size_t>(top) + 1; ++idx) s += piece_weight(idx, k);
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

ParaproductSplit paraproduct_split(const TorusFunction& f, const TorusFunction& g, double s) {
  require(f.compatible(g), "torus functions have different shapes");
  const auto fp = littlewood_paley(f);
  const auto gp = littlewood_paley(g);
  const std::size_t count = fp.size();
  const TorusFunction zero(f.dim(), f.resolution(), f.n());

  // low[a] = zero-frequency piece plus annuli at least two steps below annulus a.
  auto lows = [&](const std::vector<TorusFunction>& pieces) {
    std::vector<TorusFunction> low(count, zero);
    TorusFunction acc = pieces[0];
    for (std::size_t a = 1; a < count; ++a) {
      if (a >= 3) acc += pieces[a - 2];
      low[a] = acc;
    }
    return low;
  };
  const auto flow = lows(fp);
  const auto glow = lows(gp);

  TorusFunction p1 = zero, p2 = zero, p3 = product(fp[0], gp[0]);
  for (std::size_t a = 1; a < count; ++a) {
    p1 += product(fp[a], glow[a]);
    p2 += product(flow[a], gp[a]);
    for (std::size_t b = std::max<std::size_t>(1, a - 1); b <= std::min(count - 1, a + 1); ++b)
      p3 += product(fp[a], gp[b]);
  }
  ParaproductSplit out{fractional_derivative(p1, s), fractional_derivative(p2, s), fractional_derivative(p3, s),
                       fractional_derivative(product(f, g), s)};
  out.partition_defect = partition_defect(f.dim(), f.resolution());
  const TorusFunction diff = out.pi1 + out.pi2 + out.pi3 - out.full;
  const double denom = l2_norm(out.full);
  out.reconstruction_defect = denom > 0.0 ? l2_norm(diff) / denom : l2_norm(diff);
  return out;
}

void LeibnizExponents::validate() const {
  for (double p : {p1, p2, r1, r2}) require(p > 1.0, "p1, p2, r1, r2 must exceed 1", ErrorCode::Domain);
  require(q3 > 0.5 && std::isfinite(q3), "q3 must lie in (1/2, inf)", ErrorCode::Domain);
  const double inv = 1.0 / q3;
  require(std::abs(1.0 / p1 + 1.0 / p2 - inv) < 1e-12, "1/q3 must equal 1/p1 + 1/p2", ErrorCode::Domain);
  require(std::abs(1.0 / r1 + 1.0 / r2 - inv) < 1e-12, "1/q3 must equal 1/r1 + 1/r2", ErrorCode::Domain);
}

LeibnizRatio leibniz_ratio(const TorusFunction& f, const TorusFunction& g, double s, const LeibnizExponents& e) {
  e.validate();
  require(f.compatible(g), "torus functions have different shapes");
  require(s > static_cast<double>(f.dim()), "derivative order must exceed the dimension", ErrorCode::Domain);
  const int n = f.n();
  const double x1 = dual_index(e.p1, n);
  const double x2 = dual_index(e.p2, n);
  const double y3 = dual_index(e.q3, n);
  const auto df = fractional_derivative(f, s);
  const auto dg = fractional_derivative(g, s);
  LeibnizRatio out;
  out.lhs = mixed_norm(fractional_derivative(product(f, g), s), e.q3, y3);
  out.rhs = mixed_norm(df, e.p1, x1) * mixed_norm(g, e.p2, x2) + mixed_norm(f, e.r1, x1) * mixed_norm(dg, e.r2, x2);
  require(out.rhs > 0.0, "denominator vanishes", ErrorCode::Domain);
  out.ratio = out.lhs / out.rhs;
  return out;
}

}  // namespace dyadlab::leibniz
