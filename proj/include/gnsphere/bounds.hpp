#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gnsphere/exponents.hpp"
#include "gnsphere/phi.hpp"

namespace gnsphere {

/// Lower bound on mu(lambda) obtained from the heat-flow phi, 2 < p < 2#, lam >= 1:
/// (lam + (p-2)/gamma (lam-1))^{gamma/(gamma+p-2)}.
double mu_lower_thm2(const ParameterPoint& pp, double lam);

/// Lower bound on lambda(mu) for 1 <= p < 2, mu >= 1. Returns 1 at p = p_*(d).
double lambda_lower_thm2(const ParameterPoint& pp, double mu);

/// Hoelder-interpolation bound (p-2)/d (d(d-2)/4)^theta (lam d/(p-2))^{1-theta},
/// theta = d(p-2)/(2p). Requires d >= 3 and 2 < p < 2*.
double mu_lower_prop34(const ParameterPoint& pp, double lam);

struct EnvelopeMinimum {
  double value = 0.0;
  double s = 0.0;  // minimizing s in [0, 1/(p-2))
  double t = 1.0;  // the same point as t = 1 / (1 - (p-2) s)
};

/// min over s in [0, 1/(p-2)) of (p-2) phi(s) + lam (1 - (p-2) s).
/// A 256-point scan in log t brackets the minimum, Brent's method refines it.
EnvelopeMinimum minimize_envelope_objective(const PhiSpec& phi, double lam);

/// The bound above with the envelope phi (2 < p < 2*, lam >= 1).
double mu_lower_envelope(const ParameterPoint& pp, double lam, const EnvelopeOptions& opt = {});
double mu_lower_envelope(const PhiSpec& phi, double lam);

/// Inverse of lam -> mu_lower_thm2(lam), explicit (2 < p < 2#); mu for mu <= 1.
double klt_lambda_bar_schrodinger(const ParameterPoint& pp, double mu);

/// Inverse of lam -> mu_lower_envelope(phi, lam) by root finding; mu for mu <= 1.
double klt_lambda_bar_envelope(const PhiSpec& phi, double mu);

/// mu for mu <= 1, lambda_lower_thm2 otherwise (1 <= p < 2, p != p_*(d)).
double klt_lambda_bar_reverse(const ParameterPoint& pp, double mu);

/// Constant for functions with u(-x) = u(x), d >= 3. The p = 2 value is the
/// log-Sobolev constant (d/2)(d+3)^2/(d+1)^2.
double antipodal_constant(const ParameterPoint& pp);

struct AfstConstants {
  double gns_constant = 0.0;
  double log_lambda = 0.0;
};

/// lambda_star is the orthogonality-constrained spectral constant and must exceed d.
AfstConstants afst_constants(const ParameterPoint& pp, double lambda_star);
double afst_log_lambda(int d);

/// Default for lambda_star when the caller has none: d (1 + 1e-6).
double default_lambda_star(int d);

/// 2^{delta/p} d |S^d|^{1-2/p} / (p-2).
double c_dp(const ParameterPoint& pp);

/// Sampled bound with provenance. The CSV form has header abscissa,value,name,theorem.
struct BoundCurve {
  std::string name;
  std::string theorem;
  ParameterPoint pp;
  double abscissa_min = 0.0;
  double abscissa_max = 0.0;
  std::vector<std::pair<double, double>> samples;

  std::string to_csv() const;
  nlohmann::json to_json() const;
};

BoundCurve sample_bound(const std::string& name, const std::string& theorem, const ParameterPoint& pp,
                        const std::vector<double>& grid, const std::function<double(double)>& f);

}  // namespace gnsphere
