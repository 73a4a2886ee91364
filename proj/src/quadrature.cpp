#include "gnsphere/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <string>

#include "gnsphere/error.hpp"

namespace gnsphere {

namespace {

// Orthonormal p_0..p_{n-1} at z for the normalized Gegenbauer weight.
void orthonormal_values(double lambda, int n, double z, double* out, double* dout) {
  if (n <= 0) return;
  out[0] = 1.0;
  if (dout) dout[0] = 0.0;
  if (n == 1) return;
  double b1 = gegenbauer_recurrence(lambda, 1);
  out[1] = z / b1;
  if (dout) dout[1] = 1.0 / b1;
  for (int k = 1; k + 1 < n; ++k) {
    const double bk = gegenbauer_recurrence(lambda, k);
    const double bk1 = gegenbauer_recurrence(lambda, k + 1);
    out[k + 1] = (z * out[k] - bk * out[k - 1]) / bk1;
    if (dout) dout[k + 1] = (out[k] + z * dout[k] - bk * dout[k - 1]) / bk1;
  }
}

}  // namespace

double gegenbauer_recurrence(double lambda, int k) {
  if (k == 1) return std::sqrt(0.5 / (1.0 + lambda));
  const double kk = k;
  return std::sqrt(kk * (kk + 2.0 * lambda - 1.0) / (4.0 * (kk + lambda) * (kk + lambda - 1.0)));
}

QuadratureNodes gauss_gegenbauer(double lambda, int n) {
  if (n < 1) throw DomainError("quadrature needs at least one node");
  QuadratureNodes q;
  q.nodes.resize(n);
  q.weights.resize(n);
  if (n == 1) {
    q.nodes[0] = 0.0;
    q.weights[0] = 1.0;
    return q;
  }

  // Golub-Welsch for the nodes, then Newton polishing on p_n.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1);
  for (int k = 1; k < n; ++k) sub[k - 1] = gegenbauer_recurrence(lambda, k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();

  std::vector<double> p(n + 1), dp(n + 1);
  for (int j = 0; j < n; ++j) {
    double z = ev[j];
    for (int it = 0; it < 3; ++it) {
      orthonormal_values(lambda, n + 1, z, p.data(), dp.data());
      if (dp[n] == 0.0) break;
      const double step = p[n] / dp[n];
      z -= step;
      if (std::abs(step) < 1e-17) break;
    }
    orthonormal_values(lambda, n, z, p.data(), nullptr);
    double sum = 0.0;
    for (int k = 0; k < n; ++k) sum += p[k] * p[k];
    q.nodes[j] = z;
    q.weights[j] = 1.0 / sum;  // Christoffel number for a unit-mass measure
  }

  // Exact antisymmetry of the node set.
  for (int j = 0; j < n / 2; ++j) {
    const double z = 0.5 * (q.nodes[n - 1 - j] - q.nodes[j]);
    const double w = 0.5 * (q.weights[n - 1 - j] + q.weights[j]);
    q.nodes[j] = -z;
    q.nodes[n - 1 - j] = z;
    q.weights[j] = w;
    q.weights[n - 1 - j] = w;
  }
  if (n % 2 == 1) q.nodes[n / 2] = 0.0;

  const double total = std::accumulate(q.weights.begin(), q.weights.end(), 0.0);
  for (double& w : q.weights) w /= total;
  return q;
}

const QuadratureNodes& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, QuadratureNodes> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) {
    QuadratureNodes q = gauss_gegenbauer(0.5, n);
    for (double& w : q.weights) w *= 2.0;
    it = cache.emplace(n, std::move(q)).first;
  }
  return it->second;
}

double ultraspherical_mass(int d) {
  // int (1-z^2)^{d/2-1} dz = B(1/2, d/2)
  const double a = 0.5, b = 0.5 * d;
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

UltrasphericalRule::UltrasphericalRule(int d, int n) : d_(d), n_(n) {
  if (d < 1) throw DomainError("dimension d must be >= 1");
  const double lambda = 0.5 * (d - 1);
  QuadratureNodes q = gauss_gegenbauer(lambda, n);
  nodes_ = std::move(q.nodes);
  weights_ = std::move(q.weights);
  basis_.resize(static_cast<size_t>(n) * n);
  basis_deriv_.resize(static_cast<size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    orthonormal_values(lambda, n, nodes_[j], basis_.data() + static_cast<size_t>(j) * n,
                       basis_deriv_.data() + static_cast<size_t>(j) * n);
  }
}

double UltrasphericalRule::recurrence(int k) const {
  return gegenbauer_recurrence(0.5 * (d_ - 1), k);
}

void UltrasphericalRule::evaluate_basis(double z, std::span<double> values,
                                        std::span<double> derivs) const {
  const int count = static_cast<int>(values.size());
  orthonormal_values(0.5 * (d_ - 1), count, z, values.data(),
                     derivs.empty() ? nullptr : derivs.data());
}

RulePtr make_rule(int d, int n) {
  if (n < 4) throw DomainError("ultraspherical rule needs n >= 4, got " + std::to_string(n));
  return std::make_shared<const UltrasphericalRule>(d, n);
}

}  // namespace gnsphere
