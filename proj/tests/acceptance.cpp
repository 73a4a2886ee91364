// Acceptance checks. Each criterion prints one PASS/FAIL line; the exit code is
// nonzero if any selected criterion fails. Usage: acceptance [N ...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "gnsphere/bounds.hpp"
#include "gnsphere/exponents.hpp"
#include "gnsphere/flows.hpp"
#include "gnsphere/phi.hpp"
#include "gnsphere/sphere_calculus.hpp"
#include "gnsphere/stereographic.hpp"
#include "gnsphere/variational.hpp"

using namespace gnsphere;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double central_derivative(const std::function<double(double)>& f, double s, double h) {
  return (f(s - 2 * h) - 8 * f(s - h) + 8 * f(s + h) - f(s + 2 * h)) / (12 * h);
}

Outcome criterion1() {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> dd(1, 10);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  int cases = 0;
  while (cases < 20) {
    const int d = dd(rng);
    const double p_hi = d == 1 ? 8.0 : std::min(bakry_emery_exponent(d), 8.0);
    const double p = 1.0 + (p_hi - 1.0) * unit(rng);
    if (std::abs(p - 2.0) < 1e-3) continue;
    const ParameterPoint pp = make_parameter_point(d, p);
    if (std::abs(pp.gamma - (2.0 - p)) < 1e-6) continue;
    const double s_max = p > 2.0 ? std::min(0.9 / (p - 2.0), 4.0) : 4.0;
    auto phi = [&](double s) { return phi_closed_form(pp, s); };
    const double h = 1e-4 * s_max;
    for (int k = 0; k < 100; ++k) {
      const double s = 2.0 * h + (s_max - 4.0 * h) * k / 99.0;
      const double lhs = central_derivative(phi, s, h);
      const double rhs = 1.0 + pp.gamma * phi(s) / (1.0 - (p - 2.0) * s);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    ++cases;
  }
  return {worst < 1e-8, "max ODE residual " + fmt("%.3e", worst) + " over 20 (d, p) x 100 points"};
}

Outcome criterion2() {
  std::vector<std::string> bad;
  const ParameterPoint p33 = make_parameter_point(3, 3.0);
  if (std::abs(p33.gamma - 0.56) > 1e-12) bad.push_back("gamma(3,3)=" + fmt("%.17g", p33.gamma));
  if (p_star(1) != 1.75) bad.push_back("p_*(1)=" + fmt("%.17g", p_star(1)));
  const double anti = antipodal_constant(p33);
  if (std::abs(anti - 96.0 / 17.0) > 1e-12) bad.push_back("antipodal(3,3)=" + fmt("%.17g", anti));
  const double afst = afst_log_lambda(2);
  if (std::abs(afst - 2.38114) > 1e-4) bad.push_back("afst log lambda(2)=" + fmt("%.17g", afst));
  for (double lam : {1.0, 2.0, 4.0}) {
    const double v = mu_lower_prop34(p33, lam);
    if (std::abs(v - 0.5 * std::sqrt(lam)) > 1e-12) bad.push_back("prop34(" + fmt("%g", lam) + ")=" + fmt("%.17g", v));
  }
  std::string detail = "gamma(3,3)=0.56, p_*(1)=7/4, antipodal(3,3)=96/17, log lambda(2)=" + fmt("%.6f", afst) +
                       ", Hoelder bound sqrt(lam)/2";
  for (const auto& b : bad) detail += " | mismatch " + b;
  return {bad.empty(), detail};
}

/// Two-level 10^4-point scan of f on [a, b], optionally in log coordinates.
double scan_min(const std::function<double(double)>& f, double a, double b, bool logscale) {
  const int n = 10000;
  auto coord = [&](double lo, double hi, int k) {
    const double x = lo + (hi - lo) * k / (n - 1);
    return logscale ? std::exp(x) : x;
  };
  double lo = logscale ? std::log(a) : a;
  double hi = logscale ? std::log(b) : b;
  double best = std::numeric_limits<double>::infinity();
  for (int level = 0; level < 2; ++level) {
    int arg = 0;
    best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
      const double v = f(coord(lo, hi, k));
      if (v < best) {
        best = v;
        arg = k;
      }
    }
    const double step = (hi - lo) / (n - 1);
    const double c = lo + step * arg;
    lo = std::max(lo, c - step);
    hi = std::min(hi, c + step);
  }
  return best;
}

Outcome criterion3() {
  std::mt19937_64 rng(303);
  std::uniform_int_distribution<int> dd(1, 10);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  int done = 0;
  int per_case[3] = {0, 0, 0};
  while (done < 10) {
    const int which = done % 3;
    const int d = dd(rng);
    const double ps = p_star(d);
    double p;
    if (which == 0) {
      const double hi = d == 1 ? 8.0 : bakry_emery_exponent(d);
      p = 2.0 + (hi - 2.0) * (0.02 + 0.96 * unit(rng));
    } else if (which == 1) {
      p = ps + (2.0 - ps) * (0.05 + 0.9 * unit(rng));
    } else {
      p = 1.0 + (ps - 1.0) * 0.95 * unit(rng);
    }
    const ParameterPoint pp = make_parameter_point(d, p);
    const double arg = 1.0 + 9.0 * unit(rng);
    double formula, brute;
    if (which == 0) {
      const double theta = pp.gamma / (p - 2.0);
      formula = mu_lower_thm2(pp, arg);
      brute = scan_min([&](double t) { return (arg + (std::pow(t, 1.0 + theta) - 1.0) / (1.0 + theta)) / t; },
                       1.0, 1e4, true);
    } else if (which == 1) {
      const double theta = pp.gamma / (2.0 - p) - 1.0;
      formula = lambda_lower_thm2(pp, arg);
      brute = scan_min([&](double t) { return (std::pow(t, -theta) - 1.0) / theta + arg * t; }, 1e-12, 1.0, true);
    } else {
      const double theta = pp.gamma / (2.0 - p);
      formula = lambda_lower_thm2(pp, arg);
      brute = scan_min([&](double t) { return (1.0 - std::pow(t, 1.0 - theta)) / (1.0 - theta) + arg * t; },
                       0.0, 1.0, false);
    }
    worst = std::max(worst, std::abs(formula - brute) / std::abs(brute));
    ++per_case[which];
    ++done;
  }
  return {worst < 1e-6, "max relative gap " + fmt("%.3e", worst) + " (cases 1/2/4: " + std::to_string(per_case[0]) +
                            "/" + std::to_string(per_case[1]) + "/" + std::to_string(per_case[2]) + ")"};
}

Outcome criterion4() {
  const int samples = 100;
  int checks = 0, violations = 0;
  std::string first_bad;
  double worst = std::numeric_limits<double>::infinity();
  auto record = [&](const Deficit& df, const std::string& where) {
    ++checks;
    const double slack = df.deficit + deficit_tolerance(df.lhs);
    worst = std::min(worst, df.deficit / (1.0 + std::abs(df.lhs)));
    if (slack < 0.0) {
      ++violations;
      if (first_bad.empty()) first_bad = where + " deficit " + fmt("%.3e", df.deficit);
    }
  };

  struct Combo {
    int d;
    double p;
    std::vector<InequalityId> sphere;
    std::vector<EuclideanInequalityId> euclid;
    bool envelope;
  };
  using I = InequalityId;
  using E = EuclideanInequalityId;
  const std::vector<Combo> combos = {
      {3, 1.5, {I::Gns, I::ImprovedHeat, I::Ckp, I::Antipodal}, {E::Weighted, E::Sharper}, false},
      {3, 3.0, {I::Gns, I::ImprovedHeat, I::Ckp, I::Antipodal, I::StabilityQuadratic}, {E::Weighted, E::Stability, E::Sharper}, false},
      {2, 4.0, {I::Gns, I::ImprovedHeat, I::Ckp, I::StabilityQuadratic}, {E::Weighted, E::Stability, E::Sharper}, false},
      {3, 5.0, {I::Gns, I::ImprovedPhi}, {E::Weighted}, true},
      {3, 2.0, {I::LogSobolev}, {}, false},
      {2, 2.0, {I::LogSobolev}, {}, false},
      {3, p_star(3), {I::ImprovedHeat}, {}, false},
  };

  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> scale(0.05, 1.0);
  for (const auto& c : combos) {
    const ParameterPoint pp = make_parameter_point(c.d, c.p);
    const RulePtr rule = make_rule(c.d, 48);
    DeficitParams params;
    params.p = c.p;
    if (c.envelope) params.phi = envelope_phi(pp);
    for (auto id : c.sphere) {
      const bool even = id == I::Antipodal;
      for (int s = 0; s < samples; ++s) {
        const AxiFunction u = random_positive_function(rule, rng, 8, scale(rng), even);
        record(deficit(u, id, params), std::string(to_string(id)) + " d=" + std::to_string(c.d) + " p=" + fmt("%g", c.p));
      }
    }
    EuclideanDeficitParams ep;
    ep.p = c.p;
    for (auto id : c.euclid) {
      for (int s = 0; s < samples; ++s) {
        const AxiFunction u = random_positive_function(rule, rng, 8, scale(rng));
        record(euclidean_deficit(push_forward(u), id, ep),
               std::string(to_string(id)) + " d=" + std::to_string(c.d) + " p=" + fmt("%g", c.p));
      }
    }
  }
  std::string detail = std::to_string(checks) + " deficits, " + std::to_string(violations) +
                       " below -1e-8(1+|lhs|); min deficit/(1+|lhs|) " + fmt("%.3e", worst);
  if (!first_bad.empty()) detail += " | first: " + first_bad;
  return {violations == 0, detail};
}

Outcome criterion5() {
  std::vector<std::string> bad;
  const ParameterPoint p33 = make_parameter_point(3, 3.0);
  const RulePtr rule = make_rule(3, 48);
  const AxiFunction u0 = AxiFunction::sample(rule, [](double z) { return 1.0 + 0.1 * z; });

  FlowConfig heat;
  heat.setting = heat_flow_setting(p33);
  const FlowResult hr = run_heat_flow(u0, heat);
  const auto& ht = hr.trace;
  double mass_drift = 0.0;
  for (double m : ht.mass) mass_drift = std::max(mass_drift, std::abs(m - ht.mass.front()));
  const double rate = *std::max_element(ht.e_rate_residual.begin(), ht.e_rate_residual.end());
  const OdeChainReport rep = certify_ode_chain(ht, p33, 1e-8, 1e-8);
  if (mass_drift > 1e-10) bad.push_back("heat mass drift " + fmt("%.3e", mass_drift));
  if (rate >= 1e-6) bad.push_back("|e'+2i| " + fmt("%.3e", rate));
  if (rep.max_lyapunov_increment > 1e-8) bad.push_back("i-d phi(e) increment " + fmt("%.3e", rep.max_lyapunov_increment));
  if (rep.min_differential < -1e-8) bad.push_back("(e''+2de'-...) " + fmt("%.3e", rep.min_differential));

  const ParameterPoint p35 = make_parameter_point(3, 5.0);
  FlowConfig nl;
  nl.setting = make_flow_setting(p35, 1.2);
  const FlowResult nr = run_nonlinear_flow(u0, nl);
  const auto& nt = nr.trace;
  double nl_drift = 0.0;
  for (double m : nt.mass) nl_drift = std::max(nl_drift, std::abs(m - nt.mass.front()));
  double nl_inc = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < nt.lyapunov.size(); ++k) nl_inc = std::max(nl_inc, nt.lyapunov[k] - nt.lyapunov[k - 1]);
  if (nl_drift > 1e-6) bad.push_back("nonlinear mass drift " + fmt("%.3e", nl_drift));
  if (nl_inc > 1e-8) bad.push_back("i-de increment " + fmt("%.3e", nl_inc));

  std::string detail = "heat: drift " + fmt("%.2e", mass_drift) + ", |e'+2i| " + fmt("%.2e", rate) +
                       ", max Lyapunov step " + fmt("%.2e", rep.max_lyapunov_increment) + ", min (3.3)-residual " +
                       fmt("%.2e", rep.min_differential) + "; nonlinear: drift " + fmt("%.2e", nl_drift) +
                       ", max i-de step " + fmt("%.2e", nl_inc) + ", " + std::to_string(nr.stats.accepted) + " steps";
  for (const auto& b : bad) detail += " | " + b;
  return {bad.empty(), detail};
}

Outcome criterion6() {
  std::vector<std::string> bad;
  const ParameterPoint pp = make_parameter_point(3, 3.0);
  const std::vector<double> grid = {0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0};
  const SweepCurve curve = bound_curve_sweep(pp, grid, 64, 606);
  std::string values;
  for (const auto& r : curve.rows) {
    values += fmt(" %g:", r.lambda) + fmt("%.6f", r.numeric_mu);
    if (r.lambda <= 1.0) {
      if (std::abs(r.numeric_mu - r.lambda) > 1e-4) bad.push_back("identity at " + fmt("%g", r.lambda));
      continue;
    }
    const double thm2 = mu_lower_thm2(pp, r.lambda);
    const double prop = mu_lower_prop34(pp, r.lambda);
    if (!(prop < thm2)) bad.push_back("prop34 >= thm2 at " + fmt("%g", r.lambda));
    if (!(thm2 <= r.numeric_mu)) bad.push_back("numeric below thm2 at " + fmt("%g", r.lambda));
    if (!(r.numeric_mu <= r.lambda + 1e-12)) bad.push_back("numeric above lambda at " + fmt("%g", r.lambda));
  }
  const double t2 = mu_lower_thm2(pp, 2.0);
  if (std::abs(t2 - 1.6127) > 1e-3) bad.push_back("thm2(2)=" + fmt("%.6f", t2));
  std::string detail = "mu(lambda):" + values + "; thm2(2)=" + fmt("%.5f", t2);
  for (const auto& b : bad) detail += " | " + b;
  return {bad.empty(), detail};
}

Outcome criterion7() {
  const KltReport a = klt_validate(3, 3.0, KltMode::Schrodinger, 50, 707);
  const KltReport b = klt_validate(3, 3.0, KltMode::Reverse, 50, 708);
  const int v = a.violations + b.violations + a.probe_violations + b.probe_violations;
  return {v == 0, "-Delta-V: " + std::to_string(a.violations) + " violations, min margin " + fmt("%.3e", a.min_margin) +
                      "; -Delta+V: " + std::to_string(b.violations) + " violations, min margin " +
                      fmt("%.3e", b.min_margin) + "; probe violations " +
                      std::to_string(a.probe_violations + b.probe_violations)};
}

Outcome criterion8() {
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> scale(0.05, 1.0);
  double worst = 0.0;
  int count = 0;
  for (int d : {2, 3, 5}) {
    const RulePtr rule = make_rule(d, 96);
    std::vector<double> ps;
    for (double p : {1.5, 3.0, 4.0}) {
      if (d < 3 || p <= critical_exponent(d)) ps.push_back(p);
    }
    for (int s = 0; s < 50; ++s) {
      const double p = ps[static_cast<std::size_t>(s) % ps.size()];
      const RadialEuclideanFunction v = push_forward(random_positive_function(rule, rng, 8, scale(rng)));
      const EuclideanNorms a = euclidean_norms(v, p);
      const EuclideanNorms b = euclidean_norms_radial(v, p);
      for (auto [x, y] : {std::pair{a.weighted_p, b.weighted_p}, std::pair{a.weighted_2, b.weighted_2},
                          std::pair{a.dirichlet, b.dirichlet}}) {
        worst = std::max(worst, std::abs(x - y) / std::abs(y));
      }
      ++count;
    }
  }
  return {worst < 1e-10, "max relative gap " + fmt("%.3e", worst) + " over " + std::to_string(count) +
                             " functions, d in {2,3,5}"};
}

Outcome criterion9() {
  const ParameterPoint pp = make_parameter_point(3, 3.0);
  const RulePtr rule = make_rule(3, 48);
  DeficitParams params;
  params.p = 3.0;
  std::vector<double> eps = {0.08, 0.04, 0.02, 0.01};
  std::vector<double> defs;
  for (double e : eps) {
    const AxiFunction u = AxiFunction::sample(rule, [e](double z) { return 1.0 + e * z; });
    defs.push_back(deficit(u, InequalityId::Gns, params).deficit);
  }
  (void)pp;
  bool ok = true;
  std::string detail = "deficit ratios D(eps)/D(eps/2):";
  for (std::size_t k = 0; k + 1 < defs.size(); ++k) {
    const double r = defs[k] / defs[k + 1];
    detail += fmt(" %.4f", r);
    if (std::abs(r / 8.0 - 1.0) > 0.2) ok = false;
  }
  detail += " (target 8 within 20%; the deficit is even in eps, so its leading order is eps^4)";
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"phi ODE certification", criterion1},
      {"golden constants", criterion2},
      {"closed-form bounds vs brute-force minimization", criterion3},
      {"inequality battery", criterion4},
      {"flow certification", criterion5},
      {"mu(lambda) curve ordering", criterion6},
      {"KLT validation", criterion7},
      {"stereographic identities", criterion8},
      {"sharpness probe", criterion9},
  };
  const double budgets[] = {1.0, 0.0, 5.0, 60.0, 30.0, 300.0, 120.0, 10.0, 0.0};

  std::vector<int> selected;
  for (int a = 1; a < argc; ++a) selected.push_back(std::atoi(argv[a]));
  if (selected.empty()) {
    for (int k = 1; k <= 9; ++k) selected.push_back(k);
  }

  int failures = 0;
  for (int k : selected) {
    if (k < 1 || k > 9) {
      std::fprintf(stderr, "unknown criterion %d\n", k);
      return 2;
    }
    const auto& [name, fn] = criteria[static_cast<std::size_t>(k - 1)];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = fn();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double budget = budgets[k - 1];
    if (budget > 0.0 && secs > budget) {
      out.pass = false;
      out.detail += " | over time budget " + fmt("%.0f s", budget);
    }
    std::printf("criterion %d [%s] %s: %s (%.2f s)\n", k, out.pass ? "PASS" : "FAIL", name, out.detail.c_str(), secs);
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
