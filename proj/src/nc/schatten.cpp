#include "nc/schatten.hpp"

#include <cmath>
#include <limits>

namespace dyadlab::nc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }
}  // namespace

double conjugate(double p) {
  require(p >= 1.0, "exponent must be >= 1");
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

cplx trace(const Matrix& a) {
  require(a.rows() == a.cols(), "trace of a non-square matrix");
  return a.trace();
}

cplx trace_product(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.rows() && a.rows() == b.cols(), "dimension mismatch in matrix product");
  cplx acc{};
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, i);
  return acc;
}

Eigen::VectorXd singular_values(const Matrix& a) {
  if (a.size() == 0) return {};
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues();
}

double schatten_norm(const Matrix& a, double p) {
  require(p >= 1.0, "Schatten exponent must be >= 1");
  if (a.rows() == 1 && a.cols() == 1) return std::abs(a(0, 0));
  const Eigen::VectorXd s = singular_values(a);
  if (s.size() == 0) return 0.0;
  if (std::isinf(p)) return s.maxCoeff();
  if (p == 2.0) return s.norm();
  const double top = s.maxCoeff();
  if (top == 0.0) return 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) acc += std::pow(s[i] / top, p);
  return top * std::pow(acc, 1.0 / p);
}

HolderCheck holder_product_check(const Matrix& a, const Matrix& b, double p1, double p2) {
  require(p1 >= 1.0 && p2 >= 1.0, "exponents must be >= 1");
  const double ip = inv(p1) + inv(p2);
  require(ip <= 1.0 + 1e-12, "Hölder exponent mismatch: 1/p1 + 1/p2 must be <= 1");
  const double p = ip == 0.0 ? kInf : 1.0 / ip;
  require(a.cols() == b.rows(), "dimension mismatch in matrix product");
  return {schatten_norm(a * b, p), schatten_norm(a, p1) * schatten_norm(b, p2)};
}

bool is_hermitian(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

bool is_positive(const Matrix& a, double tol) {
  if (!is_hermitian(a, tol)) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol * std::max(1.0, a.cwiseAbs().maxCoeff());
}

Matrix power_pos(const Matrix& a, double theta) {
  require(theta > 0.0, "power exponent must be > 0");
  require(is_hermitian(a), "power_pos requires a Hermitian matrix", ErrorCode::Domain);
  const Matrix h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Eigen::VectorXd lam = es.eigenvalues();
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    require(lam[i] >= -1e-10, "power_pos requires a positive semidefinite matrix", ErrorCode::Domain);
    lam[i] = lam[i] <= 0.0 ? 0.0 : std::pow(lam[i], theta);
  }
  const Matrix& v = es.eigenvectors();
  return v * lam.cast<cplx>().asDiagonal() * v.adjoint();
}

Matrix dual_maximizer(const Matrix& a, double p) {
  require(p >= 1.0, "Schatten exponent must be >= 1");
  const auto n = a.rows();
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd s = svd.singularValues();
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
  const double norm = schatten_norm(a, p);
  if (norm == 0.0) {
    d[0] = 1.0;
  } else if (std::isinf(p)) {
    d[0] = 1.0;  // singular values are sorted descending
  } else if (p == 1.0) {
    d.setOnes();
  } else {
    for (Eigen::Index i = 0; i < n; ++i) d[i] = std::pow(s[i] / norm, p - 1.0);
  }
  return svd.matrixV() * d.cast<cplx>().asDiagonal() * svd.matrixU().adjoint();
}

std::vector<Matrix> factorize_positive(const Matrix& a, double q, const std::vector<double>& ps) {
  require(!ps.empty(), "factor exponent list is empty");
  double sum = 0.0;
  for (double p : ps) {
    require(p >= 1.0 && std::isfinite(p), "factor exponents must be finite and >= 1");
    sum += 1.0 / p;
  }
  require(std::abs(sum - 1.0 / q) <= 1e-12, "factor exponents must satisfy Σ 1/p_u = 1/q");
  require(is_positive(a), "factorize_positive requires a positive semidefinite matrix", ErrorCode::Domain);
  require(std::abs(schatten_norm(a, q) - 1.0) <= 1e-8, "input must have unit S^q norm", ErrorCode::Domain);
  std::vector<Matrix> out;
  out.reserve(ps.size());
  for (double p : ps) out.push_back(power_pos(a, q / p));
  return out;
}

}  // namespace dyadlab::nc
