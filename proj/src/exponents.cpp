#include "gnsphere/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gnsphere/error.hpp"

namespace gnsphere {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPStarTol = 1e-9;
constexpr double kDegenerateDenominator = 1e-9;

}  // namespace

double bakry_emery_exponent(int d) {
  if (d <= 1) return kInf;
  const double dm1 = d - 1.0;
  return (2.0 * d * d + 1.0) / (dm1 * dm1);
}

double critical_exponent(int d) {
  if (d <= 2) return kInf;
  return 2.0 * d / (d - 2.0);
}

double p_star(int d) {
  if (d == 1) return 7.0 / 4.0;
  const double dd = d;
  const double dm1 = dd - 1.0;
  return (3.0 + dd + 2.0 * dd * dd - 2.0 * std::sqrt(4.0 * dd + 4.0 * dd * dd + dd * dd * dd)) /
         (dm1 * dm1);
}

double heat_gamma(int d, double p) {
  if (d == 1) return (p - 1.0) / 3.0;
  const double r = (d - 1.0) / (d + 2.0);
  return r * r * (p - 1.0) * (bakry_emery_exponent(d) - p);
}

double delta_exponent(int d, double p) { return 2.0 * d - p * (d - 2.0); }

double sphere_volume(int d) {
  const double half = 0.5 * (d + 1.0);
  return 2.0 * std::exp(half * std::log(std::numbers::pi) - std::lgamma(half));
}

ParameterPoint make_parameter_point(int d, double p) {
  if (d < 1) throw DomainError("dimension d must be >= 1, got " + std::to_string(d));
  if (!std::isfinite(p)) throw DomainError("exponent p must be finite");
  if (p < 1.0) throw DomainError("exponent p must be >= 1, got " + std::to_string(p));

  ParameterPoint pp;
  pp.d = d;
  pp.p = p;
  pp.two_sharp = bakry_emery_exponent(d);
  pp.two_star = critical_exponent(d);
  if (d >= 3 && p > pp.two_star) {
    throw DomainError("exponent p = " + std::to_string(p) + " exceeds the critical exponent 2* = " +
                      std::to_string(pp.two_star) + " for d = " + std::to_string(d));
  }
  pp.p_star = gnsphere::p_star(d);
  pp.gamma = heat_gamma(d, p);
  pp.delta = delta_exponent(d, p);
  pp.sphere_volume = sphere_volume(d);
  pp.kappa_p = std::pow(2.0, pp.delta / p - 2.0) * std::pow(pp.sphere_volume, 1.0 - 2.0 / p);

  pp.log_case = (p == 2.0);
  pp.bakry_emery_range = !pp.log_case && p <= pp.two_sharp;
  pp.nonlinear_range = !pp.log_case && p <= pp.two_star;
  pp.at_p_star = std::abs(pp.gamma - (2.0 - p)) < kPStarTol;
  return pp;
}

double porous_medium_exponent(double p, double beta) {
  return 1.0 + 2.0 / (beta * p) - 2.0 / p;
}

double gamma_of_beta(int d, double p, double beta) {
  const double kappa = beta * (p - 2.0) + 1.0;
  const double s = kappa + beta - 1.0;
  const double a = (d - 1.0) / (d + 2.0) * s;
  return -a * a + kappa * (beta - 1.0) + d / (d + 2.0) * s;
}

FlowSetting make_flow_setting(const ParameterPoint& pp, double beta) {
  if (beta == 0.0) throw DomainError("beta = 0 leaves the porous-medium exponent undefined");
  if (pp.p == 2.0) throw DomainError("p = 2 leaves zeta(beta) undefined");
  FlowSetting fs;
  fs.base = pp;
  fs.beta = beta;
  fs.kappa = beta * (pp.p - 2.0) + 1.0;
  fs.m = porous_medium_exponent(pp.p, beta);
  fs.zeta = (2.0 - (4.0 - pp.p) * beta) / (2.0 * beta * (pp.p - 2.0));
  fs.gamma_beta = gamma_of_beta(pp.d, pp.p, beta);
  fs.admissible = fs.gamma_beta >= 0.0;
  return fs;
}

const char* to_string(BetaRangeKind kind) {
  switch (kind) {
    case BetaRangeKind::Interval: return "interval";
    case BetaRangeKind::UnionHalfLines: return "union-of-two-half-lines";
    case BetaRangeKind::LeftHalfLine: return "single-half-line-left";
    case BetaRangeKind::RightHalfLine: return "single-half-line-right";
    case BetaRangeKind::Empty: return "empty";
  }
  return "unknown";
}

bool BetaRange::contains(double beta) const {
  switch (kind) {
    case BetaRangeKind::Interval: return beta >= lower && beta <= upper;
    case BetaRangeKind::UnionHalfLines: return beta <= lower || beta >= upper;
    case BetaRangeKind::LeftHalfLine: return beta <= upper;
    case BetaRangeKind::RightHalfLine: return beta >= lower;
    case BetaRangeKind::Empty: return false;
  }
  return false;
}

double beta_root_denominator(int d, double p) {
  const double dd = d;
  return dd * dd * (p * p - 3.0 * p + 3.0) - 2.0 * dd * (p * p - 3.0) + (p - 3.0) * (p - 3.0);
}

BetaRange beta_roots(const ParameterPoint& pp) {
  if (!pp.nonlinear_range) {
    throw DomainError("beta_roots requires p != 2 inside the nonlinear-flow range");
  }
  const int d = pp.d;
  const double p = pp.p;
  BetaRange r;

  const double denom = beta_root_denominator(d, p);
  if (std::abs(denom) > kDegenerateDenominator) {
    const double dd = d;
    const double num0 = dd * dd - dd * (p - 5.0) - 2.0 * p + 6.0;
    const double disc = std::max(0.0, dd * (p - 1.0) * delta_exponent(d, p));
    const double root = (dd + 2.0) * std::sqrt(disc);
    r.beta_plus = (num0 + root) / denom;
    r.beta_minus = (num0 - root) / denom;
    r.lower = std::min(r.beta_plus, r.beta_minus);
    r.upper = std::max(r.beta_plus, r.beta_minus);
    // gamma(beta) = -denom/(d+2)^2 beta^2 + ..., so a negative denominator opens upward.
    r.kind = denom < 0.0 ? BetaRangeKind::UnionHalfLines : BetaRangeKind::Interval;
  } else {
    // gamma is linear: slope * beta - 1.
    r.degenerate = true;
    r.beta_plus = kNaN;
    r.beta_minus = kNaN;
    const double slope = 3.0 - p + d * (p - 1.0) / (d + 2.0);
    if (std::abs(slope) < 1e-12) {
      r.kind = BetaRangeKind::Empty;
      r.lower = kInf;
      r.upper = -kInf;
    } else if (slope > 0.0) {
      r.kind = BetaRangeKind::RightHalfLine;
      r.lower = 1.0 / slope;
      r.upper = kInf;
    } else {
      r.kind = BetaRangeKind::LeftHalfLine;
      r.lower = -kInf;
      r.upper = 1.0 / slope;
    }
  }

  const double big_p = 9.0 + 4.0 * std::sqrt(3.0);
  if (d == 2 && p > big_p && !r.degenerate) {
    r.witness = 4.0 * (5.0 - p) / (p * p - 18.0 * p + 33.0);
  }
  return r;
}

std::pair<double, double> m_range(const ParameterPoint& pp) {
  const BetaRange r = beta_roots(pp);
  const double p = pp.p;
  auto m = [p](double beta) { return porous_medium_exponent(p, beta); };
  const double m_infinity = 1.0 - 2.0 / p;  // limit of m(beta) as |beta| -> infinity
  switch (r.kind) {
    case BetaRangeKind::Interval:
    case BetaRangeKind::UnionHalfLines: {
      const double a = m(r.lower);
      const double b = m(r.upper);
      return {std::min(a, b), std::max(a, b)};
    }
    case BetaRangeKind::RightHalfLine: return {m_infinity, m(r.lower)};
    case BetaRangeKind::LeftHalfLine: return {m(r.upper), m_infinity};
    case BetaRangeKind::Empty: break;
  }
  throw DomainError("admissible beta set is empty for d = " + std::to_string(pp.d) +
                    ", p = " + std::to_string(pp.p));
}

}  // namespace gnsphere
