#pragma once

#include <optional>
#include <utility>

namespace gnsphere {

/// Validated (d, p) pair with every exponent and constant that depends on it.
///
/// `two_sharp` and `two_star` use +infinity as the sentinel for the
/// dimensions where they are not finite (d = 1 and d <= 2 respectively).
struct ParameterPoint {
  int d = 0;
  double p = 0.0;

  double two_sharp = 0.0;      // Bakry-Emery exponent (2d^2+1)/(d-1)^2
  double two_star = 0.0;       // critical Sobolev exponent 2d/(d-2)
  double p_star = 0.0;         // root of gamma = 2 - p in (1, 2)
  double gamma = 0.0;          // heat-flow constant
  double delta = 0.0;          // 2d - p(d-2)
  double kappa_p = 0.0;        // 2^{delta/p-2} |S^d|^{1-2/p}
  double sphere_volume = 0.0;  // |S^d|

  bool bakry_emery_range = false;  // p != 2, 1 <= p <= 2# (d >= 2)
  bool nonlinear_range = false;    // p != 2, 1 <= p <= 2* (d >= 3)
  bool log_case = false;           // p == 2
  bool at_p_star = false;          // |gamma - (2 - p)| < 1e-9
};

/// Builds a ParameterPoint. Throws DomainError for d < 1, p < 1, non-finite p,
/// or p > 2* when d >= 3.
ParameterPoint make_parameter_point(int d, double p);

double bakry_emery_exponent(int d);
double critical_exponent(int d);
double p_star(int d);
double heat_gamma(int d, double p);
double delta_exponent(int d, double p);
double sphere_volume(int d);

/// (d, p, beta) with the nonlinear-flow exponents.
struct FlowSetting {
  ParameterPoint base;
  double beta = 1.0;
  double kappa = 0.0;       // beta(p-2) + 1
  double m = 1.0;           // porous-medium exponent
  double zeta = 0.0;        // (2 - (4-p) beta) / (2 beta (p-2))
  double gamma_beta = 0.0;  // gamma(beta)
  bool admissible = false;  // gamma(beta) >= 0
};

/// Throws DomainError for beta == 0 or p == 2.
FlowSetting make_flow_setting(const ParameterPoint& pp, double beta);

/// gamma(beta) for the nonlinear flow; reduces to heat_gamma at beta = 1.
double gamma_of_beta(int d, double p, double beta);

/// Porous-medium exponent m with 1/beta + p/2 = 1 + m p/2.
double porous_medium_exponent(double p, double beta);

enum class BetaRangeKind {
  Interval,        // [lower, upper]
  UnionHalfLines,  // (-inf, lower] u [upper, +inf)
  LeftHalfLine,    // (-inf, upper]
  RightHalfLine,   // [lower, +inf)
  Empty,
};

const char* to_string(BetaRangeKind kind);

/// Admissible set {beta : gamma(beta) >= 0}.
struct BetaRange {
  BetaRangeKind kind = BetaRangeKind::Empty;
  // Roots labelled as in the closed form; NaN on the degenerate branch.
  double beta_minus = 0.0;
  double beta_plus = 0.0;
  // Ordered endpoints; unused slots hold +-infinity.
  double lower = 0.0;
  double upper = 0.0;
  bool degenerate = false;
  // d = 2, p > 9 + 4 sqrt(3): the explicit admissible choice 4(5-p)/(p^2-18p+33).
  std::optional<double> witness;

  bool contains(double beta) const;
};

/// Closed-form root denominator d^2(p^2-3p+3) - 2d(p^2-3) + (p-3)^2.
double beta_root_denominator(int d, double p);

/// Requires p in the nonlinear range and p != 2.
BetaRange beta_roots(const ParameterPoint& pp);

/// Closure of {m(beta) : beta admissible} as (m_minus, m_plus).
/// Throws DomainError when the admissible set is empty.
std::pair<double, double> m_range(const ParameterPoint& pp);

}  // namespace gnsphere
