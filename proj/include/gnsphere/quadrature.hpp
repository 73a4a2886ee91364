#pragma once

#include <memory>
#include <span>
#include <vector>

namespace gnsphere {

/// Nodes and weights of a one-dimensional quadrature.
struct QuadratureNodes {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss rule for the symmetric Jacobi weight (1 - z^2)^{lambda - 1/2} on (-1, 1),
/// normalized to total mass 1. Any n >= 1.
QuadratureNodes gauss_gegenbauer(double lambda, int n);

/// Gauss-Legendre nodes and weights on [-1, 1] (weights sum to 2). Cached per n.
const QuadratureNodes& gauss_legendre(int n);

/// Normalization constant Z_d = int_{-1}^{1} (1 - z^2)^{d/2 - 1} dz, from the Beta function.
double ultraspherical_mass(int d);

/// Probability measure d nu_d = Z_d^{-1} (1 - z^2)^{d/2-1} dz, the image of the
/// uniform measure on S^d under x -> x_{d+1}.
///
/// Besides nodes and weights the rule carries the orthonormal Gegenbauer basis
/// and its derivative tabulated at the nodes: row-major n x n, entry (j, k) is
/// p_k(z_j). The basis diagonalizes L f = (1 - z^2) f'' - d z f' with
/// L p_k = -k (k + d - 1) p_k.
class UltrasphericalRule {
 public:
  UltrasphericalRule(int d, int n);

  int d() const { return d_; }
  int size() const { return n_; }
  int exactness_degree() const { return 2 * n_ - 1; }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  std::span<const double> basis() const { return basis_; }
  std::span<const double> basis_derivative() const { return basis_deriv_; }

  double eigenvalue(int k) const { return static_cast<double>(k) * (k + d_ - 1); }

  /// Recurrence coefficients b_k of z p_k = b_{k+1} p_{k+1} + b_k p_{k-1}.
  double recurrence(int k) const;

  /// p_0..p_{count-1} (and derivatives) at an arbitrary z.
  void evaluate_basis(double z, std::span<double> values, std::span<double> derivs) const;

 private:
  int d_;
  int n_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> basis_;
  std::vector<double> basis_deriv_;
};

using RulePtr = std::shared_ptr<const UltrasphericalRule>;

/// Requires n >= 4; throws DomainError otherwise.
RulePtr make_rule(int d, int n);

/// Gegenbauer recurrence coefficient b_k for lambda = (d-1)/2 (k >= 1).
double gegenbauer_recurrence(double lambda, int k);

}  // namespace gnsphere
