#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gnsphere/quadrature.hpp"

namespace gnsphere {

/// Axisymmetric profile u(z) on S^d, stored both as values at the rule's nodes
/// and as coefficients in the orthonormal Gegenbauer basis. Both views are
/// computed at construction; instances are immutable.
class AxiFunction {
 public:
  static AxiFunction from_values(RulePtr rule, std::vector<double> values);
  static AxiFunction from_coefficients(RulePtr rule, std::vector<double> coeffs);
  static AxiFunction sample(RulePtr rule, const std::function<double(double)>& f);
  static AxiFunction constant(RulePtr rule, double c);

  const UltrasphericalRule& rule() const { return *rule_; }
  const RulePtr& rule_ptr() const { return rule_; }
  int d() const { return rule_->d(); }
  int size() const { return rule_->size(); }

  std::span<const double> values() const { return values_; }
  std::span<const double> coefficients() const { return coeffs_; }

  /// Interpolant value and derivative at an arbitrary z in [-1, 1].
  double operator()(double z) const;
  double derivative(double z) const;

  /// u'(z_j) at the nodes.
  std::vector<double> derivative_values() const;

  /// Values of L u at the nodes (spectral).
  std::vector<double> laplacian_values() const;

  bool strictly_positive() const;
  bool all_finite() const;

  /// Pointwise image f(u(z_j)), re-expanded on the same rule.
  AxiFunction map(const std::function<double(double)>& f) const;

  /// Same profile sampled on another rule through the interpolant.
  AxiFunction resample(RulePtr rule) const;

  /// Keeps only even-degree coefficients (u(-z) = u(z)).
  AxiFunction even_part() const;

  nlohmann::json to_json() const;
  /// Accepts {d, n, nodes?, values, coefficients?}; nodes are regenerated.
  static AxiFunction from_json(const nlohmann::json& j);

 private:
  AxiFunction(RulePtr rule, std::vector<double> values, std::vector<double> coeffs);

  RulePtr rule_;
  std::vector<double> values_;
  std::vector<double> coeffs_;
};

}  // namespace gnsphere
