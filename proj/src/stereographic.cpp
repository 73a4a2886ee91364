#include "gnsphere/stereographic.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "gnsphere/bounds.hpp"
#include "gnsphere/error.hpp"
#include "gnsphere/io.hpp"

namespace gnsphere {

namespace {

void require_dimension(int d) {
  if (d < 2) throw DomainError("stereographic projection requires d >= 2");
}

double half_exponent(int d) { return 0.5 * (d - 2.0); }

// 1 - z = 2 / (1 + r^2), without cancellation for large r.
double one_minus_z(double r) { return 2.0 / (1.0 + r * r); }

}  // namespace

double radius_of(double z) { return std::sqrt((1.0 + z) / (1.0 - z)); }

double z_of(double r) { return 1.0 - one_minus_z(r); }

double conformal_factor(int d, double z) { return std::pow(1.0 - z, half_exponent(d)); }

RadialEuclideanFunction::RadialEuclideanFunction(AxiFunction u, std::vector<double> r, std::vector<double> v)
    : u_(std::move(u)), r_(std::move(r)), v_(std::move(v)) {}

double RadialEuclideanFunction::operator()(double r) const {
  const double omz = one_minus_z(r);
  return u_(1.0 - omz) * std::pow(omz, half_exponent(d()));
}

double RadialEuclideanFunction::radial_derivative(double r) const {
  const double omz = one_minus_z(r);
  const double z = 1.0 - omz;
  const double k = half_exponent(d());
  const double dz_dr = 4.0 * r / ((1.0 + r * r) * (1.0 + r * r));
  const double f = std::pow(omz, k);
  const double df_dz = k == 0.0 ? 0.0 : -k * std::pow(omz, k - 1.0);
  return (u_.derivative(z) * f + u_(z) * df_dz) * dz_dr;
}

std::string RadialEuclideanFunction::to_csv() const {
  io::CsvTable t({"r", "v"});
  for (std::size_t j = 0; j < r_.size(); ++j) t.row().cell(r_[j]).cell(v_[j]);
  return t.str();
}

nlohmann::json RadialEuclideanFunction::to_json() const {
  return {{"d", d()}, {"n", u_.size()}, {"grid", "r = sqrt((1+z)/(1-z)) at the ultraspherical nodes"},
          {"r", r_}, {"v", v_}, {"sphere", u_.to_json()}};
}

RadialEuclideanFunction push_forward(const AxiFunction& u) {
  require_dimension(u.d());
  const auto z = u.rule().nodes();
  const auto vals = u.values();
  std::vector<double> r(z.size()), v(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    r[j] = radius_of(z[j]);
    v[j] = vals[j] * conformal_factor(u.d(), z[j]);
  }
  return RadialEuclideanFunction(u, std::move(r), std::move(v));
}

AxiFunction pull_back(const RadialEuclideanFunction& v) {
  const auto& rule = v.sphere().rule();
  const auto z = rule.nodes();
  std::vector<double> u(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) u[j] = v.values()[j] / conformal_factor(v.d(), z[j]);
  return AxiFunction::from_values(v.sphere().rule_ptr(), std::move(u));
}

RadialEuclideanFunction from_radial_values(const RulePtr& rule, const std::vector<double>& v) {
  require_dimension(rule->d());
  const auto z = rule->nodes();
  if (v.size() != z.size()) throw DomainError("radial value count does not match the rule");
  std::vector<double> u(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) u[j] = v[j] / conformal_factor(rule->d(), z[j]);
  return push_forward(AxiFunction::from_values(rule, std::move(u)));
}

RadialEuclideanFunction optimal_profile(const RulePtr& rule) {
  // u = 2^{-(d-2)/2} gives v = <x>^{2-d}
  return push_forward(AxiFunction::constant(rule, std::pow(2.0, -half_exponent(rule->d()))));
}

EuclideanNorms euclidean_norms(const RadialEuclideanFunction& v, double p) {
  require_dimension(v.d());
  const int d = v.d();
  const double vol = sphere_volume(d);
  const AxiFunction& u = v.sphere();
  const double n2 = power_integral(u, 2.0);
  EuclideanNorms out;
  out.weighted_p = vol * std::exp2(-0.5 * delta_exponent(d, p)) * power_integral(u, p);
  out.weighted_2 = 0.25 * vol * n2;
  out.dirichlet = vol * (dirichlet(u) + 0.25 * d * (d - 2.0) * n2);
  return out;
}

EuclideanNorms euclidean_norms_radial(const RadialEuclideanFunction& v, double p, double tol) {
  require_dimension(v.d());
  const int d = v.d();
  const double shell = sphere_volume(d - 1);
  const double delta = delta_exponent(d, p);
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

  auto integrate = [&](auto&& g) {
    auto radial = [&](double r) { return g(r) * std::pow(r, d - 1.0); };
    auto outer = [&](double s) {
      if (s == 0.0) return 0.0;
      return radial(1.0 / s) / (s * s);
    };
    const double inner = GK::integrate(radial, 0.0, 1.0, 20, tol);
    const double tail = GK::integrate(outer, 0.0, 1.0, 20, tol);
    return shell * (inner + tail);
  };

  EuclideanNorms out;
  out.weighted_p = integrate([&](double r) {
    return std::pow(std::abs(v(r)), p) * std::pow(1.0 + r * r, -0.5 * delta);
  });
  out.weighted_2 = integrate([&](double r) {
    const double x = v(r);
    return x * x / ((1.0 + r * r) * (1.0 + r * r));
  });
  out.dirichlet = integrate([&](double r) {
    const double g = v.radial_derivative(r);
    return g * g;
  });
  return out;
}

double second_moment(const RadialEuclideanFunction& v) {
  const AxiFunction& u = v.sphere();
  const auto z = u.rule().nodes();
  const auto w = u.rule().weights();
  const auto vals = u.values();
  double acc = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) acc += w[j] * 0.5 * (1.0 + z[j]) * vals[j] * vals[j];
  return 0.25 * sphere_volume(v.d()) * acc;
}

const char* to_string(EuclideanInequalityId id) {
  switch (id) {
    case EuclideanInequalityId::Weighted: return "weighted";
    case EuclideanInequalityId::Stability: return "stability";
    case EuclideanInequalityId::Sharper: return "sharper";
    case EuclideanInequalityId::Afst: return "afst";
    case EuclideanInequalityId::AfstLog: return "afst-log";
  }
  return "?";
}

std::optional<EuclideanInequalityId> parse_euclidean_inequality(const std::string& name) {
  for (auto id : {EuclideanInequalityId::Weighted, EuclideanInequalityId::Stability,
                  EuclideanInequalityId::Sharper, EuclideanInequalityId::Afst,
                  EuclideanInequalityId::AfstLog}) {
    if (name == to_string(id)) return id;
  }
  return std::nullopt;
}

namespace {

void check_afst_constraints(const RadialEuclideanFunction& v, double p, double tol, nlohmann::json& echo) {
  // The vector moment int x <x>^{-4} |v|^2 vanishes for every radial v.
  const EuclideanNorms nv = euclidean_norms(v, 2.0);
  const double ratio = second_moment(v) / nv.weighted_2;
  echo["second_moment_ratio"] = ratio;
  if (std::abs(ratio - 0.5) > tol) {
    throw PreconditionError("afst: |x|^2 moment of v does not match the optimal profile");
  }
  if (p != 2.0) {
    const AxiFunction& u = v.sphere();
    const double mom = z_moment(u, p);
    echo["z_moment"] = mom;
    if (std::abs(mom) > tol * power_integral(u, p)) {
      throw PreconditionError("afst: int z |u|^p is not zero");
    }
  }
}

}  // namespace

Deficit euclidean_deficit(const RadialEuclideanFunction& v, EuclideanInequalityId id,
                          const EuclideanDeficitParams& params) {
  require_dimension(v.d());
  const int d = v.d();
  const double p = id == EuclideanInequalityId::AfstLog ? 2.0 : params.p;
  const ParameterPoint pp = make_parameter_point(d, p);
  const EuclideanNorms nv = euclidean_norms(v, p);
  const double vol = pp.sphere_volume;

  Deficit out;
  out.inequality = to_string(id);
  out.inputs = {{"inequality", out.inequality}, {"d", d}, {"p", p}, {"n", v.sphere().size()}};

  auto base_gap = [&] {
    const double c = c_dp(pp);
    return nv.dirichlet + d * pp.delta / (p - 2.0) * nv.weighted_2 - c * std::pow(nv.weighted_p, 2.0 / p);
  };

  switch (id) {
    case EuclideanInequalityId::Weighted: {
      if (pp.log_case) throw DomainError("weighted inequality requires p != 2");
      out.lhs = nv.dirichlet + d * pp.delta / (p - 2.0) * nv.weighted_2;
      out.rhs = c_dp(pp) * std::pow(nv.weighted_p, 2.0 / p);
      break;
    }
    case EuclideanInequalityId::Stability: {
      if (!(p > 2.0 && p < pp.two_sharp)) throw DomainError("stability requires 2 < p < 2#");
      const double wp = std::pow(nv.weighted_p, 2.0 / p);
      const double bracket =
          wp - std::exp2(2.0 - pp.delta / p) * std::pow(vol, 2.0 / p - 1.0) * nv.weighted_2;
      out.lhs = base_gap();
      out.rhs = pp.gamma / (p - 2.0) * 0.5 * c_dp(pp) * bracket * bracket / wp;
      break;
    }
    case EuclideanInequalityId::Sharper: {
      if (!pp.bakry_emery_range) throw DomainError("sharper inequality requires p != 2 and p <= 2#");
      out.lhs = nv.dirichlet - d * (d - 2.0) * nv.weighted_2;
      const double wp = std::pow(nv.weighted_p, 2.0 / p);
      if (pp.at_p_star) {
        out.rhs = 4.0 * d / (2.0 - p) * nv.weighted_2 * std::log(nv.weighted_2 / (pp.kappa_p * wp));
      } else {
        const double r = pp.gamma / (2.0 - p);
        out.rhs = 4.0 * d / (2.0 - p - pp.gamma) *
                  (nv.weighted_2 - std::pow(pp.kappa_p * wp, 1.0 - r) * std::pow(nv.weighted_2, r));
      }
      break;
    }
    case EuclideanInequalityId::Afst: {
      if (!(p > 2.0 && p < pp.two_sharp)) throw DomainError("afst requires 2 < p < 2#");
      const double ls = params.lambda_star.value_or(default_lambda_star(d));
      if (!(ls > d)) throw DomainError("lambda_star must exceed d");
      check_afst_constraints(v, p, params.constraint_tol, out.inputs);
      const double dd = d;
      const double wp = std::pow(nv.weighted_p, 2.0 / p);
      out.lhs = base_gap();
      out.rhs = (dd - 1.0) * (dd - 1.0) / (dd * (dd + 2.0)) * (pp.two_sharp - p) / (p - 2.0) * (ls - dd) *
                (std::exp2(pp.delta / p) * std::pow(vol, 1.0 - 2.0 / p) * wp - 4.0 * nv.weighted_2);
      out.inputs["lambda_star"] = ls;
      break;
    }
    case EuclideanInequalityId::AfstLog: {
      check_afst_constraints(v, 2.0, params.constraint_tol, out.inputs);
      const double lam = afst_log_lambda(d);
      out.lhs = nv.dirichlet - d * (d - 2.0) * nv.weighted_2;
      // int <x>^{-4} |v|^2 log(...) dx = (|S^d|/4) int u^2 log(u^2/||u||_2^2) d nu
      out.rhs = 2.0 * lam * 0.25 * vol * log_entropy(v.sphere());
      out.inputs["lambda"] = lam;
      break;
    }
  }
  out.deficit = out.lhs - out.rhs;
  return out;
}

}  // namespace gnsphere
