#include "gnsphere/flows.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "gnsphere/error.hpp"
#include "gnsphere/io.hpp"
#include "gnsphere/kernels.hpp"
#include "gnsphere/sphere_calculus.hpp"

namespace gnsphere {

namespace {

constexpr int kMinCertifySamples = 64;
constexpr int kMaxHalvings = 40;

std::vector<double> uniform_times(double horizon, int samples) {
  if (samples < 2) throw DomainError("a trace needs at least two samples");
  std::vector<double> t(samples);
  for (int k = 0; k < samples; ++k) t[k] = horizon * k / (samples - 1);
  return t;
}

void validate(const AxiFunction& u0, const FlowConfig& cfg) {
  if (!(cfg.time_horizon > 0.0)) throw DomainError("time_horizon must be positive");
  if (!(cfg.positivity_floor > 0.0)) throw DomainError("positivity_floor must be positive");
  if (cfg.node_count < 4) throw DomainError("node_count must be >= 4");
  if (!u0.strictly_positive()) throw DomainError("flow requires strictly positive initial data");
}

AxiFunction prepare(const AxiFunction& u0, const FlowConfig& cfg) {
  AxiFunction u = u0.size() == cfg.node_count ? u0 : u0.resample(make_rule(u0.d(), cfg.node_count));
  if (cfg.antipodal) u = u.even_part();
  if (!u.strictly_positive()) throw DomainError("initial data not positive on the flow grid");
  return u;
}

std::optional<PhiSpec> lyapunov_phi(const ParameterPoint& pp, const FlowConfig& cfg) {
  if (cfg.phi) return cfg.phi;
  if (pp.bakry_emery_range) return heat_phi(pp);
  return std::nullopt;
}

void fill_rates(EntropyTrace& tr, bool heat) {
  const double h = tr.times.size() > 1 ? tr.times[1] - tr.times[0] : 1.0;
  const auto de = uniform_derivative(tr.e, h);
  tr.e_rate_residual.resize(de.size());
  for (std::size_t k = 0; k < de.size(); ++k) {
    const double target = heat ? -2.0 * tr.i[k] : -2.0 * tr.beta * tr.beta * tr.grad_u[k];
    tr.e_rate_residual[k] = std::abs(de[k] - target);
  }
}

}  // namespace

std::vector<double> uniform_derivative(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  if (n < 5) throw DomainError("uniform_derivative needs at least 5 samples");
  std::vector<double> out(n);
  const double s = 1.0 / (12.0 * h);
  out[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) * s;
  out[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) * s;
  for (std::size_t k = 2; k + 2 < n; ++k) out[k] = (f[k - 2] - 8 * f[k - 1] + 8 * f[k + 1] - f[k + 2]) * s;
  out[n - 2] = (3 * f[n - 1] + 10 * f[n - 2] - 18 * f[n - 3] + 6 * f[n - 4] - f[n - 5]) * s;
  out[n - 1] = (25 * f[n - 1] - 48 * f[n - 2] + 36 * f[n - 3] - 16 * f[n - 4] + 3 * f[n - 5]) * s;
  return out;
}

FlowSetting heat_flow_setting(const ParameterPoint& pp) {
  FlowSetting fs;
  fs.base = pp;
  fs.beta = 1.0;
  fs.kappa = pp.p - 1.0;
  fs.m = 1.0;
  fs.zeta = pp.log_case ? 0.0 : 0.5;
  fs.gamma_beta = pp.gamma;
  fs.admissible = pp.gamma >= 0.0;
  return fs;
}

std::string EntropyTrace::to_csv() const {
  io::CsvTable t({"t", "e", "i", "mass", "lyapunov", "e_rate_residual"});
  for (std::size_t k = 0; k < times.size(); ++k) {
    t.row().cell(times[k]).cell(e[k]).cell(i[k]).cell(mass[k]).cell(lyapunov[k]).cell(e_rate_residual[k]);
  }
  return t.str();
}

nlohmann::json EntropyTrace::to_json() const {
  nlohmann::json j = {{"d", d},          {"p", p},       {"beta", beta},
                      {"lyapunov_kind", lyapunov_kind}, {"t", times}, {"e", e},
                      {"i", i},          {"mass", mass}, {"lyapunov", lyapunov},
                      {"e_rate_residual", e_rate_residual}};
  if (!grad_u.empty()) j["grad_u"] = grad_u;
  if (!beta_lyapunov.empty()) j["beta_lyapunov"] = beta_lyapunov;
  return j;
}

nlohmann::json FlowConfig::to_json() const {
  return {{"d", setting.base.d},
          {"p", setting.base.p},
          {"beta", setting.beta},
          {"m", setting.m},
          {"gamma_beta", setting.gamma_beta},
          {"admissible", setting.admissible},
          {"time_horizon", time_horizon},
          {"node_count", node_count},
          {"samples", samples},
          {"positivity_floor", positivity_floor},
          {"antipodal", antipodal},
          {"step",
           {{"initial_dt", step.initial_dt},
            {"safety", step.safety},
            {"max_dt", step.max_dt},
            {"rtol", step.rtol},
            {"atol", step.atol}}}};
}

FlowResult run_heat_flow(const AxiFunction& u0, const FlowConfig& cfg) {
  validate(u0, cfg);
  if (cfg.setting.beta != 1.0) throw DomainError("run_heat_flow requires beta = 1");
  const ParameterPoint& pp = cfg.setting.base;
  const double p = pp.p;
  const int d = pp.d;

  AxiFunction u = prepare(u0, cfg);
  u = u.map([s = 1.0 / lp_norm(u, p)](double x) { return x * s; });
  const RulePtr rule = u.rule_ptr();
  const auto n = static_cast<std::size_t>(rule->size());

  const AxiFunction w0 = u.map([p](double x) { return std::pow(x, p); });
  const std::vector<double> w_coeffs(w0.coefficients().begin(), w0.coefficients().end());

  EntropyTrace tr;
  tr.d = d;
  tr.p = p;
  tr.beta = 1.0;
  const auto phi = lyapunov_phi(pp, cfg);
  tr.lyapunov_kind = phi ? "i - d phi(e)" : "i - d e";
  tr.times = uniform_times(cfg.time_horizon, cfg.samples);

  std::vector<double> coeffs(n), values(n);
  AxiFunction current = u;
  for (double t : tr.times) {
    for (std::size_t k = 0; k < n; ++k) {
      coeffs[k] = w_coeffs[k] * std::exp(-rule->eigenvalue(static_cast<int>(k)) * t);
    }
    kernels::parallel::synthesize(rule->basis(), n, n, coeffs, values);
    for (double& v : values) {
      if (!(v > cfg.positivity_floor)) throw ConvergenceError("heat flow: u^p lost positivity");
      v = std::pow(v, 1.0 / p);
    }
    current = AxiFunction::from_values(rule, values);
    const double mass = power_integral(current, p);
    const EntropyFisher ef = entropy_fisher(current, p);
    const double scale = pp.log_case ? mass : std::pow(mass, 2.0 / p);
    const double e = ef.e / scale;
    const double i = ef.i / scale;
    tr.mass.push_back(mass);
    tr.e.push_back(e);
    tr.i.push_back(i);
    tr.lyapunov.push_back(phi ? i - d * (*phi)(std::max(e, 0.0)) : i - d * e);
  }
  fill_rates(tr, true);
  return FlowResult{std::move(tr), FlowStats{}, current};
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                 e5 = b5 - (-92097.0 / 339200), e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

struct PositivityLoss {};

class PorousMediumRhs {
 public:
  PorousMediumRhs(const RulePtr& coarse, const RulePtr& fine, double m, double floor, bool even)
      : coarse_(coarse), fine_(fine), m_(m), floor_(floor), even_(even) {
    n_ = static_cast<std::size_t>(coarse->size());
    nf_ = static_cast<std::size_t>(fine->size());
    sub_.resize(nf_ * n_);
    const auto b = fine->basis();
    for (std::size_t j = 0; j < nf_; ++j)
      for (std::size_t k = 0; k < n_; ++k) sub_[j * n_ + k] = b[j * nf_ + k];
    rho_.resize(nf_);
    g_.resize(nf_);
    proj_.resize(n_);
  }

  /// rho on the fine nodes.
  const std::vector<double>& fine_values(const Eigen::VectorXd& c) {
    kernels::parallel::synthesize(sub_, nf_, n_, std::span<const double>(c.data(), n_), rho_);
    return rho_;
  }

  void operator()(const Eigen::VectorXd& c, Eigen::VectorXd& out) {
    fine_values(c);
    for (std::size_t j = 0; j < nf_; ++j) {
      if (!(rho_[j] > floor_)) throw PositivityLoss{};
      g_[j] = std::pow(rho_[j], m_);
    }
    kernels::parallel::analyze(sub_, nf_, n_, fine_->weights(), g_, proj_);
    out.resize(static_cast<Eigen::Index>(n_));
    for (std::size_t k = 0; k < n_; ++k) {
      const bool drop = even_ && (k % 2 == 1);
      out[static_cast<Eigen::Index>(k)] = drop ? 0.0 : -coarse_->eigenvalue(static_cast<int>(k)) * proj_[k] / m_;
    }
  }

 private:
  RulePtr coarse_, fine_;
  double m_, floor_;
  bool even_;
  std::size_t n_ = 0, nf_ = 0;
  std::vector<double> sub_, rho_, g_, proj_;
};

}  // namespace

FlowResult run_nonlinear_flow(const AxiFunction& u0, const FlowConfig& cfg) {
  validate(u0, cfg);
  const FlowSetting& fs = cfg.setting;
  const ParameterPoint& pp = fs.base;
  if (pp.log_case) throw DomainError("nonlinear flow requires p != 2");
  if (fs.beta == 0.0) throw DomainError("nonlinear flow requires beta != 0");
  if (!(fs.m > 0.0)) throw DomainError("nonlinear flow requires m > 0");
  const double p = pp.p;
  const double beta = fs.beta;
  const double bp = beta * p;
  const int d = pp.d;

  AxiFunction u = prepare(u0, cfg);
  u = u.map([s = std::pow(power_integral(u, bp), -1.0 / bp)](double x) { return x * s; });
  const RulePtr coarse = u.rule_ptr();
  const RulePtr fine = make_rule(d, 2 * cfg.node_count);
  const auto n = static_cast<Eigen::Index>(coarse->size());

  const AxiFunction rho0 = u.map([bp](double x) { return std::pow(x, bp); });
  Eigen::VectorXd y(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    y[k] = (cfg.antipodal && k % 2 == 1) ? 0.0 : rho0.coefficients()[static_cast<std::size_t>(k)];
  }

  PorousMediumRhs rhs(coarse, fine, fs.m, cfg.positivity_floor, cfg.antipodal);

  EntropyTrace tr;
  tr.d = d;
  tr.p = p;
  tr.beta = beta;
  tr.lyapunov_kind = "i - d e";
  tr.times = uniform_times(cfg.time_horizon, cfg.samples);
  const bool beta_chain = fs.admissible && beta != 1.0 && p > 2.0;

  auto record = [&](const Eigen::VectorXd& c) {
    const auto& rho = rhs.fine_values(c);
    std::vector<double> f(rho.size()), g(rho.size());
    for (std::size_t j = 0; j < rho.size(); ++j) {
      if (!(rho[j] > 0.0)) throw ConvergenceError("nonlinear flow: rho lost positivity");
      f[j] = std::pow(rho[j], 1.0 / p);
      g[j] = std::pow(rho[j], 1.0 / bp);
    }
    const AxiFunction uf = AxiFunction::from_values(fine, std::move(f));
    const AxiFunction ug = AxiFunction::from_values(fine, std::move(g));
    const double mass = c[0];
    const double M = std::pow(mass, 2.0 / p);
    const double N = power_integral(uf, 2.0);
    const double e = (M - N) / ((p - 2.0) * M);
    const double i = dirichlet(uf) / M;
    tr.mass.push_back(mass);
    tr.e.push_back(e);
    tr.i.push_back(i);
    tr.grad_u.push_back(dirichlet(ug) / M);
    tr.lyapunov.push_back(i - d * e);
    if (beta_chain) {
      const double es = std::max(e, 0.0);
      tr.beta_lyapunov.push_back(i * psi_beta_derivative(fs, es) - d * psi_beta(fs, es));
    }
  };

  FlowStats stats;
  stats.min_dt = std::numeric_limits<double>::infinity();
  double t = 0.0;
  double dt = std::min(cfg.step.initial_dt, cfg.step.max_dt);
  double err_prev = 1.0;
  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);
  rhs(y, k1);
  record(y);
  int halvings = 0;

  for (std::size_t s = 1; s < tr.times.size(); ++s) {
    const double target = tr.times[s];
    while (t < target) {
      bool last = false;
      double h = dt;
      if (t + h >= target) {
        h = target - t;
        last = true;
      }
      try {
        ytmp = y + h * a21 * k1;
        rhs(ytmp, k2);
        ytmp = y + h * (a31 * k1 + a32 * k2);
        rhs(ytmp, k3);
        ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        rhs(ytmp, k4);
        ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        rhs(ytmp, k5);
        ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        rhs(ytmp, k6);
        ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        rhs(ynew, k7);
      } catch (const PositivityLoss&) {
        ++stats.positivity_rejections;
        ++stats.rejected;
        dt = 0.5 * h;
        if (++halvings > kMaxHalvings) {
          throw ConvergenceError("nonlinear flow: positivity lost after 40 step halvings");
        }
        continue;
      }
      err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      double en = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) {
        const double sc = cfg.step.atol + cfg.step.rtol * std::max(std::abs(y[k]), std::abs(ynew[k]));
        en = std::max(en, std::abs(err[k]) / sc);
      }
      if (en <= 1.0) {
        t = last ? target : t + h;
        y = ynew;
        k1 = k7;
        ++stats.accepted;
        halvings = 0;
        stats.min_dt = std::min(stats.min_dt, h);
        stats.max_dt = std::max(stats.max_dt, h);
        const double enc = std::max(en, 1e-10);
        double factor = cfg.step.safety * std::pow(enc, -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
        factor = std::clamp(factor, 0.2, 5.0);
        err_prev = enc;
        if (!last) dt = std::min(h * factor, cfg.step.max_dt);
      } else {
        ++stats.rejected;
        dt = h * std::max(0.2, cfg.step.safety * std::pow(en, -0.2));
      }
    }
    record(y);
  }
  fill_rates(tr, false);
  if (stats.accepted == 0) stats.min_dt = 0.0;

  std::vector<double> final_vals(static_cast<std::size_t>(n));
  std::vector<double> coeffs(y.data(), y.data() + n);
  kernels::parallel::synthesize(coarse->basis(), static_cast<std::size_t>(n), static_cast<std::size_t>(n),
                                coeffs, final_vals);
  for (double& v : final_vals) v = std::pow(std::max(v, cfg.positivity_floor), 1.0 / bp);
  return FlowResult{std::move(tr), stats, AxiFunction::from_values(coarse, std::move(final_vals))};
}

FlowResult run_flow(const AxiFunction& u0, const FlowConfig& cfg) {
  return cfg.setting.beta == 1.0 ? run_heat_flow(u0, cfg) : run_nonlinear_flow(u0, cfg);
}

nlohmann::json OdeChainReport::to_json() const {
  return {{"min_differential_inequality", min_differential},
          {"max_lyapunov_increment", max_lyapunov_increment},
          {"max_beta_lyapunov_increment", max_beta_lyapunov_increment},
          {"tolerance", tolerance},
          {"pass", pass}};
}

OdeChainReport certify_ode_chain(const EntropyTrace& trace, const ParameterPoint& pp, double tolerance,
                                 double lyapunov_slack) {
  const std::size_t n = trace.times.size();
  if (n < static_cast<std::size_t>(kMinCertifySamples)) {
    throw DomainError("certify_ode_chain needs at least 64 samples");
  }
  OdeChainReport rep;
  rep.tolerance = tolerance;
  rep.min_differential = std::numeric_limits<double>::infinity();
  rep.max_lyapunov_increment = -std::numeric_limits<double>::infinity();
  rep.max_beta_lyapunov_increment = -std::numeric_limits<double>::infinity();

  if (trace.beta == 1.0) {
    const double h = trace.times[1] - trace.times[0];
    const auto di = uniform_derivative(trace.i, h);
    const double pm2 = pp.p - 2.0;
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const double ep = -2.0 * trace.i[k];
      const double epp = -2.0 * di[k];
      const double r = epp + 2.0 * pp.d * ep - pp.gamma * ep * ep / (1.0 - pm2 * trace.e[k]);
      rep.differential_inequality.push_back(r);
      rep.min_differential = std::min(rep.min_differential, r);
    }
    if (rep.min_differential < -tolerance) rep.pass = false;
  } else {
    rep.min_differential = 0.0;
  }
  for (std::size_t k = 1; k < n; ++k) {
    const double inc = trace.lyapunov[k] - trace.lyapunov[k - 1];
    rep.lyapunov_increments.push_back(inc);
    rep.max_lyapunov_increment = std::max(rep.max_lyapunov_increment, inc);
  }
  if (rep.max_lyapunov_increment > lyapunov_slack) rep.pass = false;
  for (std::size_t k = 1; k < trace.beta_lyapunov.size(); ++k) {
    const double inc = trace.beta_lyapunov[k] - trace.beta_lyapunov[k - 1];
    rep.beta_lyapunov_increments.push_back(inc);
    rep.max_beta_lyapunov_increment = std::max(rep.max_beta_lyapunov_increment, inc);
  }
  if (trace.beta_lyapunov.empty()) rep.max_beta_lyapunov_increment = 0.0;
  if (rep.max_beta_lyapunov_increment > lyapunov_slack) rep.pass = false;
  return rep;
}

}  // namespace gnsphere
