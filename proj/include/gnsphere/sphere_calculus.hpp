#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include <nlohmann/json.hpp>

#include "gnsphere/axi_function.hpp"
#include "gnsphere/exponents.hpp"
#include "gnsphere/phi.hpp"

namespace gnsphere {

/// int |u|^q d nu (probability measure).
double power_integral(const AxiFunction& u, double q);

/// (int |u|^q)^{1/q}. Requires q >= 1 and finite values.
double lp_norm(const AxiFunction& u, double q);

/// int (1-z^2) u'^2 d nu = sum_k k(k+d-1) c_k^2.
double dirichlet(const AxiFunction& u);

/// The same quantity by quadrature of the differentiated interpolant.
double dirichlet_from_values(const AxiFunction& u);

/// int u^2 log(u^2 / ||u||_2^2) d nu.
double log_entropy(const AxiFunction& u);

/// int z |u|^q d nu.
double z_moment(const AxiFunction& u, double q);

/// Euclidean norm of the odd-degree coefficients relative to all of them.
double odd_fraction(const AxiFunction& u);

struct EntropyFisher {
  double e = 0.0;
  double i = 0.0;
};

/// e = (||u||_p^2 - ||u||_2^2)/(p-2), or (1/2) int u^2 log(u^2/||u||_2^2) at p = 2;
/// i = ||grad u||_2^2.
EntropyFisher entropy_fisher(const AxiFunction& u, double p);

enum class InequalityId {
  Gns,                 // i >= d/(p-2) (||u||_p^2 - ||u||_2^2)
  LogSobolev,          // i >= d/2 int u^2 log(u^2/||u||_2^2)
  ImprovedHeat,        // heat-flow phi, closed-form or log branch
  ImprovedPhi,         // i >= d phi(s) ||u||_p^2 for a supplied phi
  Orthogonal,          // constant enlarged by lambda_star under int z |u|^p = 0
  Antipodal,           // enlarged constant for even u (d >= 3)
  StabilityQuadratic,  // quadratic remainder gamma d/(2(p-2)^2) (M-N)^2/M
  Ckp,                 // distance-to-constants lower bound on the entropy gap
};

const char* to_string(InequalityId id);
std::optional<InequalityId> parse_inequality(const std::string& name);

struct DeficitParams {
  double p = 3.0;
  std::optional<double> lambda_star;  // Orthogonal
  std::optional<PhiSpec> phi;         // ImprovedPhi
  double symmetry_tol = 1e-10;
};

/// lhs - rhs of one inequality; lhs is the gradient side.
struct Deficit {
  std::string inequality;
  double lhs = 0.0;
  double rhs = 0.0;
  double deficit = 0.0;
  nlohmann::json inputs;
};

/// Throws DomainError for parameters outside the inequality's range and
/// PreconditionError when a symmetry or orthogonality condition fails.
Deficit deficit(const AxiFunction& u, InequalityId id, const DeficitParams& params);

/// 1e-8 (1 + |lhs|): the quadrature budget for deficit checks.
double deficit_tolerance(double lhs);

struct CkpDistance {
  double lower_bound = 0.0;
  double entropy_gap = 0.0;
};

/// For p < 2: entropy_gap = ||u||_2^2 - ||u||_p^2 bounded below by the
/// Csiszar-Kullback-Pinsker distance. For p > 2: entropy_gap = ||u||_p^2 - ||u||_2^2
/// bounded below through c_{p/2} and nu_{p/2}.
CkpDistance ckp_distance(const AxiFunction& u, double p);

/// nu_q(s) = s^2 for |s| <= 1, s^q for s > 1.
double nu_q(double q, double s);

/// inf over t > 0, t != 1 of (t^q - 1 - q(t-1)) / nu_q(t-1). Requires q > 1.
double c_q(double q, int scan_points = 2048);

/// exp(g) with g = sum_{k <= degree} a_k p_k(z) / p_k(1), a_k uniform in [-scale, scale].
/// `even` keeps only even k.
AxiFunction random_positive_function(const RulePtr& rule, std::mt19937_64& rng, int degree = 8,
                                     double scale = 0.5, bool even = false);

}  // namespace gnsphere
