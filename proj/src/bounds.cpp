#include "gnsphere/bounds.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "gnsphere/error.hpp"
#include "gnsphere/io.hpp"

namespace gnsphere {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kScanPoints = 256;
constexpr double kLogTMax = 27.631021115928547;  // log(1e12)

void require_lambda(double lam) {
  if (!(lam >= 1.0) || !std::isfinite(lam)) throw DomainError("bound requires lambda >= 1");
}

void require_mu(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("bound requires mu > 0");
}

}  // namespace

double mu_lower_thm2(const ParameterPoint& pp, double lam) {
  if (!(pp.p > 2.0 && pp.p < pp.two_sharp)) throw DomainError("mu_lower_thm2 requires 2 < p < 2#");
  require_lambda(lam);
  const double g = pp.gamma;
  const double pm2 = pp.p - 2.0;
  return std::pow(lam + pm2 / g * (lam - 1.0), g / (g + pm2));
}

double lambda_lower_thm2(const ParameterPoint& pp, double mu) {
  if (!(pp.p >= 1.0 && pp.p < 2.0)) throw DomainError("lambda_lower_thm2 requires 1 <= p < 2");
  if (!(mu >= 1.0)) throw DomainError("lambda_lower_thm2 requires mu >= 1");
  if (pp.at_p_star) return 1.0;
  const double g = pp.gamma;
  const double tmp = 2.0 - pp.p;
  return (tmp - g * std::pow(mu, 1.0 - tmp / g)) / (tmp - g);
}

double mu_lower_prop34(const ParameterPoint& pp, double lam) {
  if (pp.d < 3) throw DomainError("mu_lower_prop34 requires d >= 3");
  if (!(pp.p > 2.0 && pp.p < pp.two_star)) throw DomainError("mu_lower_prop34 requires 2 < p < 2*");
  require_lambda(lam);
  const double d = pp.d;
  const double pm2 = pp.p - 2.0;
  const double theta = d * pm2 / (2.0 * pp.p);
  return pm2 / d * std::pow(0.25 * d * (d - 2.0), theta) * std::pow(lam * d / pm2, 1.0 - theta);
}

EnvelopeMinimum minimize_envelope_objective(const PhiSpec& phi, double lam) {
  require_lambda(lam);
  const double pm2 = phi.pp.p - 2.0;
  if (!(pm2 > 0.0)) throw DomainError("envelope bound requires p > 2");

  auto objective = [&](double log_t) {
    const double t = std::exp(log_t);
    const double s = -std::expm1(-log_t) / pm2;
    if (s >= phi.admissible_s_sup) return kInf;
    const double f = phi(s);
    if (!std::isfinite(f)) return kInf;
    return pm2 * f + lam / t;
  };

  int best = 0;
  double best_val = objective(0.0);
  std::vector<double> xs(kScanPoints);
  for (int j = 0; j < kScanPoints; ++j) {
    xs[j] = kLogTMax * j / (kScanPoints - 1);
    const double v = j == 0 ? best_val : objective(xs[j]);
    if (v < best_val) {
      best_val = v;
      best = j;
    }
  }
  const double lo = xs[std::max(best - 1, 0)];
  const double hi = xs[std::min(best + 1, kScanPoints - 1)];
  EnvelopeMinimum out;
  out.value = best_val;
  out.t = std::exp(xs[best]);
  if (hi > lo) {
    std::uintmax_t iters = 200;
    const auto [x, fx] = boost::math::tools::brent_find_minima(objective, lo, hi, 40, iters);
    if (fx < out.value) {
      out.value = fx;
      out.t = std::exp(x);
    }
  }
  out.s = (1.0 - 1.0 / out.t) / pm2;
  return out;
}

double mu_lower_envelope(const PhiSpec& phi, double lam) {
  return minimize_envelope_objective(phi, lam).value;
}

double mu_lower_envelope(const ParameterPoint& pp, double lam, const EnvelopeOptions& opt) {
  if (!(pp.p > 2.0 && pp.p < pp.two_star)) throw DomainError("mu_lower_envelope requires 2 < p < 2*");
  return mu_lower_envelope(envelope_phi(pp, opt), lam);
}

double klt_lambda_bar_schrodinger(const ParameterPoint& pp, double mu) {
  require_mu(mu);
  if (mu <= 1.0) return mu;
  if (!(pp.p > 2.0 && pp.p < pp.two_sharp)) {
    throw DomainError("explicit lambda_bar requires 2 < p < 2#; use klt_lambda_bar_envelope");
  }
  const double g = pp.gamma;
  const double pm2 = pp.p - 2.0;
  return (pm2 + g * std::pow(mu, 1.0 + pm2 / g)) / (pm2 + g);
}

double klt_lambda_bar_envelope(const PhiSpec& phi, double mu) {
  require_mu(mu);
  if (mu <= 1.0) return mu;
  auto f = [&](double lam) { return mu_lower_envelope(phi, lam) - mu; };
  double lo = 1.0;
  double hi = 2.0 * mu;
  int guard = 0;
  while (f(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 60) throw ConvergenceError("klt_lambda_bar_envelope: no bracket");
  }
  boost::math::tools::eps_tolerance<double> tol(40);
  std::uintmax_t iters = 200;
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f(lo), f(hi), tol, iters);
  return 0.5 * (a + b);
}

double klt_lambda_bar_reverse(const ParameterPoint& pp, double mu) {
  require_mu(mu);
  if (pp.at_p_star) throw DomainError("klt_lambda_bar_reverse requires p != p_*(d)");
  if (mu <= 1.0) return mu;
  return lambda_lower_thm2(pp, mu);
}

double antipodal_constant(const ParameterPoint& pp) {
  const int d = pp.d;
  if (d < 3) throw DomainError("antipodal constant requires d >= 3");
  const double dd = d;
  if (pp.log_case) return 0.5 * dd * (dd + 3.0) * (dd + 3.0) / ((dd + 1.0) * (dd + 1.0));
  if (!(pp.p > 1.0 && pp.p <= pp.two_star)) {
    throw DomainError("antipodal constant requires p in (1, 2) u (2, 2*]");
  }
  const double factor = 1.0 + (dd * dd - 4.0) * (pp.two_star - pp.p) / (dd * (dd + 2.0) + pp.p - 1.0);
  return dd / (pp.p - 2.0) * factor;
}

double afst_log_lambda(int d) {
  if (d < 2) throw DomainError("afst constants require d >= 2");
  const double dd = d;
  return dd + 2.0 / dd * (4.0 * dd - 1.0) /
                  (2.0 * (dd + 3.0) + std::sqrt(2.0 * (dd + 3.0) * (2.0 * dd + 3.0)));
}

double default_lambda_star(int d) { return d * (1.0 + 1e-6); }

AfstConstants afst_constants(const ParameterPoint& pp, double lambda_star) {
  const int d = pp.d;
  if (d < 2) throw DomainError("afst constants require d >= 2");
  if (!(pp.p > 2.0 && pp.p < pp.two_sharp)) throw DomainError("afst constants require 2 < p < 2#");
  if (!(lambda_star > d)) throw DomainError("lambda_star must exceed d");
  const double dd = d;
  AfstConstants out;
  out.gns_constant =
      (dd + (dd - 1.0) * (dd - 1.0) / (dd * (dd + 2.0)) * (pp.two_sharp - pp.p) * (lambda_star - dd)) /
      (pp.p - 2.0);
  out.log_lambda = afst_log_lambda(d);
  return out;
}

double c_dp(const ParameterPoint& pp) {
  if (pp.log_case) throw DomainError("C_{d,p} requires p != 2");
  return std::exp2(pp.delta / pp.p) * pp.d * std::pow(pp.sphere_volume, 1.0 - 2.0 / pp.p) /
         (pp.p - 2.0);
}

std::string BoundCurve::to_csv() const {
  io::CsvTable t({"abscissa", "value", "name", "theorem"});
  for (const auto& [x, y] : samples) t.row().cell(x).cell(y).cell(name).cell(theorem);
  return t.str();
}

nlohmann::json BoundCurve::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["theorem"] = theorem;
  j["d"] = pp.d;
  j["p"] = pp.p;
  j["validity"] = {abscissa_min, abscissa_max};
  nlohmann::json xs = nlohmann::json::array();
  nlohmann::json ys = nlohmann::json::array();
  for (const auto& [x, y] : samples) {
    xs.push_back(x);
    ys.push_back(y);
  }
  j["abscissa"] = xs;
  j["value"] = ys;
  return j;
}

BoundCurve sample_bound(const std::string& name, const std::string& theorem, const ParameterPoint& pp,
                        const std::vector<double>& grid, const std::function<double(double)>& f) {
  BoundCurve c;
  c.name = name;
  c.theorem = theorem;
  c.pp = pp;
  if (!grid.empty()) {
    c.abscissa_min = *std::min_element(grid.begin(), grid.end());
    c.abscissa_max = *std::max_element(grid.begin(), grid.end());
  }
  for (double x : grid) c.samples.emplace_back(x, f(x));
  return c;
}

}  // namespace gnsphere
