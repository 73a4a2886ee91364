#include "gnsphere/phi.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <string>

#include "gnsphere/error.hpp"
#include "gnsphere/quadrature.hpp"

namespace gnsphere {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTaylorCutoff = 1e-7;

void check_s(const ParameterPoint& pp, double s) {
  if (!(s >= 0.0)) throw DomainError("phi: s must be >= 0");
  if (pp.p > 2.0 && s >= 1.0 / (pp.p - 2.0)) {
    throw DomainError("phi: s = " + std::to_string(s) + " outside [0, 1/(p-2))");
  }
}

// A(z) - A(s) for A(x) = (1 - (p-2) x)^a, stable for z close to s.
double a_difference(double p, double a, double z, double s) {
  const double ys = 1.0 - (p - 2.0) * s;
  const double ratio = (p - 2.0) * (s - z) / ys;
  return std::pow(ys, a) * std::expm1(a * std::log1p(ratio));
}

std::vector<double> geometric(double from, double to, int count) {
  std::vector<double> out;
  if (count <= 1 || from == to) {
    out.push_back(from);
    return out;
  }
  const double ratio = std::log(to / from);
  for (int j = 0; j < count; ++j) out.push_back(from * std::exp(ratio * j / (count - 1)));
  return out;
}

}  // namespace

double admissible_s_sup(const ParameterPoint& pp) {
  return pp.p > 2.0 ? 1.0 / (pp.p - 2.0) : kInf;
}

double phi_closed_form(const ParameterPoint& pp, double s) {
  if (pp.log_case) throw DomainError("phi: p = 2 has no improvement function of this form");
  if (pp.at_p_star) throw DomainError("phi: gamma = 2 - p, use the log case");
  check_s(pp, s);
  const double pm2 = pp.p - 2.0;
  const double g = pp.gamma;
  const double x = pm2 * s;
  if (std::abs(x) < kTaylorCutoff) {
    return s + 0.5 * g * s * s + g * (g + 2.0 * pm2) * s * s * s / 6.0;
  }
  // phi = (1-x) (1 - (1-x)^j) / (2-p-gamma), j = -(gamma+p-2)/(p-2)
  const double j = -(g + pm2) / pm2;
  const double log_y = std::log1p(-x);
  return (1.0 - x) * (-std::expm1(j * log_y)) / (2.0 - pp.p - g);
}

double phi_log_case(const ParameterPoint& pp, double s) {
  if (!pp.at_p_star) throw DomainError("phi: log case requires gamma = 2 - p");
  if (!(s >= 0.0)) throw DomainError("phi: s must be >= 0");
  const double y = (2.0 - pp.p) * s;
  return (1.0 + y) * std::log1p(y) / (2.0 - pp.p);
}

double psi(const ParameterPoint& pp, double s) {
  return heat_phi(pp)(s) - s;
}

double phi_beta_exponent(const FlowSetting& fs) {
  return 1.0 - fs.zeta - 0.5 / fs.beta;
}

double phi_beta_prefactor(const FlowSetting& fs) {
  return 2.0 * fs.gamma_beta / (fs.beta * (fs.beta - 1.0) * fs.base.p);
}

double phi_beta(const FlowSetting& fs, double s, int node_count) {
  if (fs.beta == 1.0) return phi_closed_form(fs.base, s);
  if (!fs.admissible) throw DomainError("phi_beta: beta is not admissible (gamma(beta) < 0)");
  if (fs.base.p <= 2.0) throw DomainError("phi_beta requires p > 2");
  check_s(fs.base, s);
  if (s == 0.0) return 0.0;
  const double p = fs.base.p;
  const double a = phi_beta_exponent(fs);
  const double c = phi_beta_prefactor(fs);
  const QuadratureNodes& gl = gauss_legendre(node_count);
  double acc = 0.0;
  for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
    const double z = 0.5 * s * (1.0 + gl.nodes[j]);
    acc += gl.weights[j] * std::exp(c * a_difference(p, a, z, s));
  }
  return 0.5 * s * acc;
}

double psi_beta_derivative(const FlowSetting& fs, double s) {
  const double p = fs.base.p;
  const double a = phi_beta_exponent(fs);
  const double c = phi_beta_prefactor(fs);
  // A(s) - A(0), A(0) = 1
  return std::exp(-c * a_difference(p, a, 0.0, s));
}

double psi_beta(const FlowSetting& fs, double s, int node_count) {
  if (s == 0.0) return 0.0;
  const QuadratureNodes& gl = gauss_legendre(node_count);
  double acc = 0.0;
  for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
    const double z = 0.5 * s * (1.0 + gl.nodes[j]);
    acc += gl.weights[j] * psi_beta_derivative(fs, z);
  }
  return 0.5 * s * acc;
}

PhiSpec heat_phi(const ParameterPoint& pp) {
  if (pp.log_case) throw DomainError("phi: p = 2 has no heat-flow improvement function");
  PhiSpec spec;
  spec.pp = pp;
  spec.variant = pp.at_p_star ? PhiVariant::LogCase : PhiVariant::ClosedForm;
  spec.admissible_s_sup = admissible_s_sup(pp);
  return spec;
}

PhiSpec beta_phi(const FlowSetting& fs, int node_count) {
  if (!fs.admissible) throw DomainError("phi_beta: beta is not admissible (gamma(beta) < 0)");
  if (fs.base.p <= 2.0) throw DomainError("phi_beta requires p > 2");
  PhiSpec spec;
  spec.pp = fs.base;
  spec.variant = fs.beta == 1.0 ? PhiVariant::ClosedForm : PhiVariant::BetaFlow;
  spec.flow = fs;
  spec.node_count = node_count;
  spec.admissible_s_sup = admissible_s_sup(fs.base);
  return spec;
}

std::vector<double> envelope_beta_grid(const ParameterPoint& pp, const EnvelopeOptions& opt) {
  const BetaRange range = beta_roots(pp);
  const double cap = opt.beta_cap;
  const int n = opt.samples_per_component;
  std::vector<double> grid;
  auto add_positive = [&](double lo, double hi) {
    lo = std::min(lo, cap);
    hi = std::min(hi, cap);
    for (double b : geometric(lo, hi, n)) grid.push_back(b);
  };
  auto add_negative = [&](double lo_abs, double hi_abs) {
    lo_abs = std::min(lo_abs, cap);
    hi_abs = std::min(hi_abs, cap);
    for (double b : geometric(lo_abs, hi_abs, n)) grid.push_back(-b);
  };
  switch (range.kind) {
    case BetaRangeKind::Interval:
      if (range.lower > 0.0) add_positive(range.lower, range.upper);
      else if (range.upper < 0.0) add_negative(-range.upper, -range.lower);
      break;
    case BetaRangeKind::UnionHalfLines:
      add_negative(-range.lower, cap);
      add_positive(range.upper, cap);
      break;
    case BetaRangeKind::RightHalfLine: add_positive(range.lower, cap); break;
    case BetaRangeKind::LeftHalfLine: add_negative(-range.upper, cap); break;
    case BetaRangeKind::Empty: break;
  }
  std::vector<double> out;
  for (double b : grid) {
    if (b == 1.0 || b == 0.0) continue;
    if (gamma_of_beta(pp.d, pp.p, b) < 0.0) continue;  // round-off at the endpoints
    out.push_back(b);
  }
  return out;
}

PhiSpec envelope_phi(const ParameterPoint& pp, const EnvelopeOptions& opt) {
  if (!(pp.p > 2.0 && pp.p < pp.two_star)) {
    throw DomainError("phi envelope requires p in (2, 2*)");
  }
  PhiSpec spec;
  spec.pp = pp;
  spec.variant = PhiVariant::Envelope;
  spec.node_count = opt.node_count;
  spec.admissible_s_sup = admissible_s_sup(pp);
  for (double b : envelope_beta_grid(pp, opt)) spec.betas.push_back(make_flow_setting(pp, b));
  spec.envelope_includes_heat = pp.gamma >= 0.0;
  if (spec.betas.empty() && !spec.envelope_includes_heat) {
    // Non-emptiness of the admissible set is a theorem; reaching this is a bug.
    throw std::logic_error("phi envelope: empty admissible beta set");
  }
  return spec;
}

double phi_envelope(const ParameterPoint& pp, double s, int beta_samples) {
  EnvelopeOptions opt;
  opt.samples_per_component = beta_samples;
  return envelope_phi(pp, opt)(s);
}

double PhiSpec::operator()(double s) const {
  switch (variant) {
    case PhiVariant::ClosedForm: return phi_closed_form(pp, s);
    case PhiVariant::LogCase: return phi_log_case(pp, s);
    case PhiVariant::BetaFlow: return phi_beta(flow, s, node_count);
    case PhiVariant::Envelope: {
      check_s(pp, s);
      double best = s;
      if (envelope_includes_heat) best = std::max(best, phi_closed_form(pp, s));
      for (const FlowSetting& fs : betas) best = std::max(best, phi_beta(fs, s, node_count));
      return best;
    }
  }
  return 0.0;
}

double phi_inverse(const PhiSpec& phi, double y) {
  if (!(y >= 0.0)) throw DomainError("phi_inverse: y must be >= 0");
  if (y == 0.0) return 0.0;
  double lo = 0.0;
  double hi = 0.0;
  const double sup = phi.admissible_s_sup;
  bool bracketed = false;
  if (std::isfinite(sup)) {
    for (int k = 1; k <= 52; ++k) {
      hi = sup * (1.0 - std::ldexp(1.0, -k));
      if (phi(hi) >= y) {
        bracketed = true;
        break;
      }
      lo = hi;
    }
  } else {
    hi = 1.0;
    for (int k = 0; k < 200; ++k, hi *= 2.0) {
      if (phi(hi) >= y) {
        bracketed = true;
        break;
      }
      lo = hi;
    }
  }
  if (!bracketed) throw DomainError("phi_inverse: y outside the range of phi");

  auto f = [&](double s) { return phi(s) - y; };
  boost::math::tools::eps_tolerance<double> tol(44);
  std::uintmax_t iters = 200;
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f(lo), f(hi), tol, iters);
  return 0.5 * (a + b);
}

double psi_tilde(const PhiSpec& phi, double i) {
  const int d = phi.pp.d;
  return i - d * phi_inverse(phi, i / d);
}

}  // namespace gnsphere
