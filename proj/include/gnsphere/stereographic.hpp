#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gnsphere/axi_function.hpp"
#include "gnsphere/exponents.hpp"
#include "gnsphere/sphere_calculus.hpp"

namespace gnsphere {

/// Radial function v on R^d paired with its sphere profile u through
/// u(z) = (<x>^2/2)^{(d-2)/2} v(x), z = (r^2-1)/(r^2+1), <x>^2 = 1 + r^2 = 2/(1-z).
class RadialEuclideanFunction {
 public:
  RadialEuclideanFunction(AxiFunction u, std::vector<double> r, std::vector<double> v);

  int d() const { return u_.d(); }
  const AxiFunction& sphere() const { return u_; }
  /// Radii and values on the image of the rule's nodes.
  const std::vector<double>& radii() const { return r_; }
  const std::vector<double>& values() const { return v_; }

  /// v and dv/dr at an arbitrary radius, through the sphere interpolant.
  double operator()(double r) const;
  double radial_derivative(double r) const;

  std::string to_csv() const;  // header r,v
  nlohmann::json to_json() const;

 private:
  AxiFunction u_;
  std::vector<double> r_;
  std::vector<double> v_;
};

double radius_of(double z);
double z_of(double r);
/// (<x>^2/2)^{-(d-2)/2} = (1-z)^{(d-2)/2}.
double conformal_factor(int d, double z);

/// Requires d >= 2.
RadialEuclideanFunction push_forward(const AxiFunction& u);
AxiFunction pull_back(const RadialEuclideanFunction& v);
/// Builds v from its values on the node radii.
RadialEuclideanFunction from_radial_values(const RulePtr& rule, const std::vector<double>& v);

/// v_*(x) = <x>^{2-d}.
RadialEuclideanFunction optimal_profile(const RulePtr& rule);

struct EuclideanNorms {
  double weighted_p = 0.0;  // int |v|^p <x>^{-delta(p)} dx
  double weighted_2 = 0.0;  // int |v|^2 <x>^{-4} dx
  double dirichlet = 0.0;   // int |grad v|^2 dx
};

/// Evaluated on the sphere through the change of variables.
EuclideanNorms euclidean_norms(const RadialEuclideanFunction& v, double p);

/// Direct adaptive integration in r on (0, infinity); a test oracle.
EuclideanNorms euclidean_norms_radial(const RadialEuclideanFunction& v, double p, double tol = 1e-13);

/// int |x|^2 <x>^{-4} |v|^2 dx, via the sphere.
double second_moment(const RadialEuclideanFunction& v);

enum class EuclideanInequalityId {
  Weighted,    // base weighted interpolation inequality with C_{d,p}
  Stability,   // quadratic remainder, 2 < p < 2#
  Sharper,     // remainder from the heat-flow phi, closed-form and log branches
  Afst,        // remainder proportional to the entropy under the moment constraints
  AfstLog,     // p = 2 counterpart with the explicit lambda
};

const char* to_string(EuclideanInequalityId id);
std::optional<EuclideanInequalityId> parse_euclidean_inequality(const std::string& name);

struct EuclideanDeficitParams {
  double p = 3.0;
  std::optional<double> lambda_star;  // Afst
  double constraint_tol = 1e-10;
};

/// lhs is the gradient side. Afst forms check the displayed constraints and the
/// sphere orthogonality int z |u|^p = 0; violations raise PreconditionError.
Deficit euclidean_deficit(const RadialEuclideanFunction& v, EuclideanInequalityId id,
                          const EuclideanDeficitParams& params);

}  // namespace gnsphere
