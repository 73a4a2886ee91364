#include "gnsphere/sphere_calculus.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <vector>

#include "gnsphere/bounds.hpp"
#include "gnsphere/error.hpp"
#include "gnsphere/kernels.hpp"

namespace gnsphere {

namespace {

void require_finite(const AxiFunction& u) {
  if (!u.all_finite()) throw DomainError("function has non-finite values");
}

struct Norms {
  double M;  // ||u||_p^2
  double N;  // ||u||_2^2
};

Norms norms(const AxiFunction& u, double p) {
  return {std::pow(power_integral(u, p), 2.0 / p), power_integral(u, 2.0)};
}

}  // namespace

double power_integral(const AxiFunction& u, double q) {
  return kernels::weighted_abs_pow_sum(u.rule().weights(), u.values(), q);
}

double lp_norm(const AxiFunction& u, double q) {
  if (!(q >= 1.0)) throw DomainError("lp_norm requires q >= 1");
  require_finite(u);
  return std::pow(power_integral(u, q), 1.0 / q);
}

double dirichlet(const AxiFunction& u) {
  const auto c = u.coefficients();
  double acc = 0.0;
  for (std::size_t k = 1; k < c.size(); ++k) acc += u.rule().eigenvalue(static_cast<int>(k)) * c[k] * c[k];
  return acc;
}

double dirichlet_from_values(const AxiFunction& u) {
  const auto z = u.rule().nodes();
  const auto w = u.rule().weights();
  const auto du = u.derivative_values();
  double acc = 0.0;
  for (std::size_t j = 0; j < du.size(); ++j) acc += w[j] * (1.0 - z[j] * z[j]) * du[j] * du[j];
  return acc;
}

double log_entropy(const AxiFunction& u) {
  const double n2 = power_integral(u, 2.0);
  if (!(n2 > 0.0)) throw DomainError("log entropy of the zero function");
  const auto w = u.rule().weights();
  const auto v = u.values();
  double acc = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double r = v[j] * v[j] / n2;
    if (r > 0.0) acc += w[j] * v[j] * v[j] * std::log(r);
  }
  return acc;
}

double z_moment(const AxiFunction& u, double q) {
  const auto z = u.rule().nodes();
  const auto w = u.rule().weights();
  const auto v = u.values();
  double acc = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) acc += w[j] * z[j] * std::pow(std::abs(v[j]), q);
  return acc;
}

double odd_fraction(const AxiFunction& u) {
  const auto c = u.coefficients();
  double odd = 0.0, all = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    all += c[k] * c[k];
    if (k % 2 == 1) odd += c[k] * c[k];
  }
  return all > 0.0 ? std::sqrt(odd / all) : 0.0;
}

EntropyFisher entropy_fisher(const AxiFunction& u, double p) {
  if (!(p >= 1.0)) throw DomainError("entropy requires p >= 1");
  require_finite(u);
  EntropyFisher ef;
  ef.i = dirichlet(u);
  if (p == 2.0) {
    ef.e = 0.5 * log_entropy(u);
  } else {
    const Norms nm = norms(u, p);
    ef.e = (nm.M - nm.N) / (p - 2.0);
  }
  return ef;
}

const char* to_string(InequalityId id) {
  switch (id) {
    case InequalityId::Gns: return "gns";
    case InequalityId::LogSobolev: return "log-sobolev";
    case InequalityId::ImprovedHeat: return "improved-heat";
    case InequalityId::ImprovedPhi: return "improved-phi";
    case InequalityId::Orthogonal: return "orthogonal";
    case InequalityId::Antipodal: return "antipodal";
    case InequalityId::StabilityQuadratic: return "stability-quadratic";
    case InequalityId::Ckp: return "ckp";
  }
  return "?";
}

std::optional<InequalityId> parse_inequality(const std::string& name) {
  for (auto id : {InequalityId::Gns, InequalityId::LogSobolev, InequalityId::ImprovedHeat,
                  InequalityId::ImprovedPhi, InequalityId::Orthogonal, InequalityId::Antipodal,
                  InequalityId::StabilityQuadratic, InequalityId::Ckp}) {
    if (name == to_string(id)) return id;
  }
  return std::nullopt;
}

double deficit_tolerance(double lhs) { return 1e-8 * (1.0 + std::abs(lhs)); }

Deficit deficit(const AxiFunction& u, InequalityId id, const DeficitParams& params) {
  require_finite(u);
  const double p = params.p;
  const ParameterPoint pp = make_parameter_point(u.d(), p);
  const int d = pp.d;
  const double i = dirichlet(u);

  Deficit out;
  out.inequality = to_string(id);
  out.inputs = {{"inequality", to_string(id)}, {"d", d}, {"p", p}, {"n", u.size()}};
  out.lhs = i;

  switch (id) {
    case InequalityId::Gns: {
      if (pp.log_case) throw DomainError("gns requires p != 2; use log-sobolev");
      const Norms nm = norms(u, p);
      out.rhs = d / (p - 2.0) * (nm.M - nm.N);
      break;
    }
    case InequalityId::LogSobolev: {
      out.rhs = 0.5 * d * log_entropy(u);
      break;
    }
    case InequalityId::ImprovedHeat: {
      if (!pp.bakry_emery_range) throw DomainError("improved-heat requires p != 2 and p <= 2#");
      const Norms nm = norms(u, p);
      const double g = pp.gamma;
      if (pp.at_p_star) {
        out.rhs = d / (2.0 - p) * nm.N * std::log(nm.N / nm.M);
      } else {
        const double r = g / (2.0 - p);
        out.rhs = d / (2.0 - p - g) * (nm.N - std::pow(nm.M, 1.0 - r) * std::pow(nm.N, r));
      }
      break;
    }
    case InequalityId::ImprovedPhi: {
      if (!params.phi) throw DomainError("improved-phi requires a phi");
      if (pp.log_case) throw DomainError("improved-phi requires p != 2");
      const Norms nm = norms(u, p);
      const double s = (nm.M - nm.N) / ((p - 2.0) * nm.M);
      out.rhs = d * (*params.phi)(std::max(s, 0.0)) * nm.M;
      out.inputs["s"] = s;
      break;
    }
    case InequalityId::Orthogonal: {
      if (!(p > 2.0 && p < pp.two_sharp)) throw DomainError("orthogonal requires 2 < p < 2#");
      const double ls = params.lambda_star.value_or(default_lambda_star(d));
      const double mass = power_integral(u, p);
      const double mom = z_moment(u, p);
      if (std::abs(mom) > params.symmetry_tol * mass) {
        throw PreconditionError("orthogonal: int z |u|^p = " + std::to_string(mom) + " is not zero");
      }
      const Norms nm = norms(u, p);
      out.rhs = afst_constants(pp, ls).gns_constant * (nm.M - nm.N);
      out.inputs["lambda_star"] = ls;
      break;
    }
    case InequalityId::Antipodal: {
      if (d < 3) throw DomainError("antipodal requires d >= 3");
      if (odd_fraction(u) > params.symmetry_tol) {
        throw PreconditionError("antipodal: u(-z) != u(z)");
      }
      const double c = antipodal_constant(pp);
      if (pp.log_case) {
        out.rhs = c * log_entropy(u);
      } else {
        const Norms nm = norms(u, p);
        out.rhs = c * (nm.M - nm.N);
      }
      break;
    }
    case InequalityId::StabilityQuadratic: {
      if (!(p > 2.0 && p < pp.two_sharp)) throw DomainError("stability-quadratic requires 2 < p < 2#");
      const Norms nm = norms(u, p);
      const double diff = nm.M - nm.N;
      out.lhs = i - d / (p - 2.0) * diff;
      out.rhs = pp.gamma * d / (2.0 * (p - 2.0) * (p - 2.0)) * diff * diff / nm.M;
      break;
    }
    case InequalityId::Ckp: {
      const CkpDistance c = ckp_distance(u, p);
      out.lhs = c.entropy_gap;
      out.rhs = c.lower_bound;
      break;
    }
  }
  out.deficit = out.lhs - out.rhs;
  return out;
}

double nu_q(double q, double s) {
  if (std::abs(s) <= 1.0) return s * s;
  if (s > 1.0) return std::pow(s, q);
  throw DomainError("nu_q is defined for s >= -1");
}

namespace {

// (t^q - 1 - q(t-1)) / nu_q(t-1) with s = t - 1.
double cq_ratio(double q, double s) {
  const double num = std::expm1(q * std::log1p(s)) - q * s;
  return num / nu_q(q, s);
}

}  // namespace

double c_q(double q, int scan_points) {
  if (!(q > 1.0)) throw DomainError("c_q requires q > 1");
  // Limits at t -> 0, t -> 1 and t -> infinity.
  double best = std::min({q - 1.0, 0.5 * q * (q - 1.0), 1.0});
  constexpr double kGap = 1e-3;

  auto refine = [&](const std::function<double(double)>& f, double lo, double hi) {
    std::vector<double> xs(scan_points);
    int jbest = 0;
    double fbest = std::numeric_limits<double>::infinity();
    for (int j = 0; j < scan_points; ++j) {
      xs[j] = lo + (hi - lo) * j / (scan_points - 1);
      const double v = f(xs[j]);
      if (v < fbest) {
        fbest = v;
        jbest = j;
      }
    }
    const double a = xs[std::max(jbest - 1, 0)];
    const double b = xs[std::min(jbest + 1, scan_points - 1)];
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::brent_find_minima(f, a, b, 52, iters);
    best = std::min({best, fbest, r.second});
  };

  // t in (0, 1): s in (-1, 0)
  refine([&](double s) { return cq_ratio(q, s); }, -1.0 + kGap, -kGap);
  // t in (1, 2]: s in (0, 1]
  refine([&](double s) { return cq_ratio(q, s); }, kGap, 1.0);
  // t > 2 through x = 1/t in (0, 1/2]
  refine([&](double x) { return cq_ratio(q, 1.0 / x - 1.0); }, kGap, 0.5);
  return best;
}

CkpDistance ckp_distance(const AxiFunction& u, double p) {
  require_finite(u);
  if (!(p >= 1.0) || p == 2.0) throw DomainError("ckp_distance requires p in [1, 2) or p > 2");
  const Norms nm = norms(u, p);
  const auto w = u.rule().weights();
  const auto v = u.values();
  CkpDistance out;
  if (p < 2.0) {
    const double ubar_p = power_integral(u, p);
    double acc = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      acc += w[j] * std::pow(std::abs(std::pow(std::abs(v[j]), p) - ubar_p), 2.0 / p);
    }
    out.entropy_gap = nm.N - nm.M;
    out.lower_bound = (2.0 - p) / (std::pow(2.0, p - 1.0) * p * p) * std::pow(nm.N, 1.0 - p) *
                      std::pow(acc, p);
  } else {
    const double q = 0.5 * p;
    double acc = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) acc += w[j] * nu_q(q, v[j] * v[j] / nm.N - 1.0);
    out.entropy_gap = nm.M - nm.N;
    out.lower_bound = nm.N * (std::pow(1.0 + c_q(q) * acc, 2.0 / p) - 1.0);
  }
  return out;
}

AxiFunction random_positive_function(const RulePtr& rule, std::mt19937_64& rng, int degree,
                                     double scale, bool even) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  const int count = std::min(degree + 1, rule->size());
  std::vector<double> a(count, 0.0);
  std::vector<double> at_one(count), unused(count);
  rule->evaluate_basis(1.0, at_one, unused);
  for (int k = 0; k < count; ++k) {
    const double draw = dist(rng);
    if (even && k % 2 == 1) continue;
    a[k] = draw / at_one[k];
  }
  std::vector<double> g(rule->size());
  const auto n = static_cast<std::size_t>(rule->size());
  std::vector<double> padded(n, 0.0);
  std::copy(a.begin(), a.end(), padded.begin());
  kernels::parallel::synthesize(rule->basis(), n, n, padded, g);
  for (double& x : g) x = std::exp(x);
  return AxiFunction::from_values(rule, std::move(g));
}

}  // namespace gnsphere
