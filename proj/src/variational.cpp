#include "gnsphere/variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "gnsphere/bounds.hpp"
#include "gnsphere/error.hpp"
#include "gnsphere/io.hpp"
#include "gnsphere/kernels.hpp"
#include "gnsphere/phi.hpp"
#include "gnsphere/sphere_calculus.hpp"

namespace gnsphere {

namespace {

double gradient_weight(const RayleighProblem& pb) {
  return pb.functional == RayleighFunctional::Gns1 ? (pb.pp.p - 2.0) / pb.pp.d : (2.0 - pb.pp.p) / pb.pp.d;
}

void validate(const RayleighProblem& pb) {
  if (!(pb.parameter > 0.0)) throw DomainError("Rayleigh parameter must be positive");
  if (pb.functional == RayleighFunctional::Gns1 && !(pb.pp.p > 2.0)) {
    throw DomainError("the lambda-problem requires p > 2");
  }
  if (pb.functional == RayleighFunctional::Gns2 && !(pb.pp.p >= 1.0 && pb.pp.p < 2.0)) {
    throw DomainError("the mu-problem requires 1 <= p < 2");
  }
  if (pb.modes < 2 || pb.modes > pb.node_count) throw DomainError("modes must lie in [2, node_count]");
  if (pb.restarts < 1) throw DomainError("restarts must be >= 1");
}

struct Workspace {
  std::vector<double> w, dw, u2, up;
};

/// Also returns log M, used to renormalize c_0.
QuotientEval evaluate(const RayleighProblem& pb, const UltrasphericalRule& rule, const std::vector<double>& c,
                      Workspace& ws, double* log_m) {
  const auto n = static_cast<std::size_t>(rule.size());
  const std::size_t k_count = c.size();
  const auto B = rule.basis();
  const auto D = rule.basis_derivative();
  const auto z = rule.nodes();
  const auto om = rule.weights();
  const double p = pb.pp.p;

  std::vector<double> cp(n, 0.0);
  std::copy(c.begin(), c.end(), cp.begin());
  ws.w.resize(n);
  ws.dw.resize(n);
  ws.u2.resize(n);
  ws.up.resize(n);
  kernels::parallel::synthesize(B, n, n, cp, ws.w);
  kernels::parallel::synthesize(D, n, n, cp, ws.dw);

  // The quotient is scale invariant; shifting w keeps exp() in range.
  const double shift = *std::max_element(ws.w.begin(), ws.w.end());
  double N = 0.0, P = 0.0, I = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    ws.u2[j] = std::exp(2.0 * (ws.w[j] - shift));
    ws.up[j] = std::exp(p * (ws.w[j] - shift));
    N += om[j] * ws.u2[j];
    P += om[j] * ws.up[j];
    I += om[j] * (1.0 - z[j] * z[j]) * ws.u2[j] * ws.dw[j] * ws.dw[j];
  }
  const double M = std::pow(P, 2.0 / p);
  if (log_m) *log_m = 2.0 / p * std::log(P) + 2.0 * shift;

  std::vector<double> dN(k_count, 0.0), dM(k_count, 0.0), dI(k_count, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double a = om[j] * ws.u2[j];
    const double b = om[j] * ws.up[j];
    const double s = om[j] * (1.0 - z[j] * z[j]) * ws.u2[j];
    for (std::size_t k = 0; k < k_count; ++k) {
      const double bk = B[j * n + k];
      dN[k] += 2.0 * a * bk;
      dM[k] += b * bk;
      dI[k] += 2.0 * s * (ws.dw[j] * ws.dw[j] * bk + ws.dw[j] * D[j * n + k]);
    }
  }
  for (auto& x : dM) x *= 2.0 * M / P;

  const double a = gradient_weight(pb);
  QuotientEval out;
  out.gradient.resize(k_count);
  double F, G;
  if (pb.functional == RayleighFunctional::Gns1) {
    F = a * I + pb.parameter * N;
    G = M;
    out.value = F / G;
    for (std::size_t k = 0; k < k_count; ++k) {
      out.gradient[k] = (a * dI[k] + pb.parameter * dN[k] - out.value * dM[k]) / G;
    }
  } else {
    F = a * I + pb.parameter * M;
    G = N;
    out.value = F / G;
    for (std::size_t k = 0; k < k_count; ++k) {
      out.gradient[k] = (a * dI[k] + pb.parameter * dM[k] - out.value * dN[k]) / G;
    }
  }
  return out;
}

struct StartOutcome {
  double value = std::numeric_limits<double>::infinity();
  std::vector<double> c;
  bool converged = false;
  int iterations = 0;
};

/// Preconditioned L-BFGS on c_1..c_{K-1}; c_0 only fixes the scale and stays 0.
/// A step is accepted only if the quotient on a rule with twice the nodes
/// agrees, which keeps iterates resolved by the quadrature.
StartOutcome descend(const RayleighProblem& pb, const UltrasphericalRule& rule, const UltrasphericalRule& check,
                     std::vector<double> c) {
  constexpr int kMemory = 12;
  constexpr double kResolution = 1e-10;
  Workspace ws, ws_check;
  const std::size_t K = c.size();
  c[0] = 0.0;
  std::vector<double> precond(K);
  for (std::size_t k = 0; k < K; ++k) precond[k] = k == 0 ? 0.0 : 1.0 / (1.0 + rule.eigenvalue(static_cast<int>(k)));

  auto resolved = [&](const std::vector<double>& x, double value) {
    if (!(std::isfinite(value) && value > 0.0)) return false;
    const double fine = evaluate(pb, check, x, ws_check, nullptr).value;
    return std::abs(fine - value) <= kResolution * std::abs(value);
  };
  auto dot = [K](const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t k = 1; k < K; ++k) acc += a[k] * b[k];
    return acc;
  };

  QuotientEval cur = evaluate(pb, rule, c, ws, nullptr);
  StartOutcome out;
  if (!resolved(c, cur.value)) {
    out.c = std::move(c);
    return out;
  }
  std::vector<std::vector<double>> S, Y;
  std::vector<double> rho_hist;
  std::vector<double> dir(K), trial(K), q(K), alpha_hist(kMemory);
  for (int it = 0; it < pb.max_iters; ++it) {
    double gnorm = 0.0;
    for (std::size_t k = 1; k < K; ++k) gnorm = std::max(gnorm, std::abs(cur.gradient[k]));
    out.iterations = it;
    if (gnorm < 1e-3 * pb.grad_tol) {
      out.converged = true;
      break;
    }
    // Two-loop recursion with a scaled spectral preconditioner as initial inverse Hessian.
    q = cur.gradient;
    q[0] = 0.0;
    const int m = static_cast<int>(S.size());
    for (int j = m - 1; j >= 0; --j) {
      alpha_hist[j] = rho_hist[j] * dot(S[j], q);
      for (std::size_t k = 1; k < K; ++k) q[k] -= alpha_hist[j] * Y[j][k];
    }
    double h0 = 1.0;
    if (m > 0) {
      double ypy = 0.0;
      for (std::size_t k = 1; k < K; ++k) ypy += Y[m - 1][k] * precond[k] * Y[m - 1][k];
      h0 = dot(S[m - 1], Y[m - 1]) / ypy;
    }
    for (std::size_t k = 0; k < K; ++k) q[k] *= h0 * precond[k];
    for (int j = 0; j < m; ++j) {
      const double b = rho_hist[j] * dot(Y[j], q);
      for (std::size_t k = 1; k < K; ++k) q[k] += S[j][k] * (alpha_hist[j] - b);
    }
    dir = q;
    double gd = dot(cur.gradient, dir);
    if (!(gd > 0.0)) {
      for (std::size_t k = 0; k < K; ++k) dir[k] = precond[k] * cur.gradient[k];
      gd = dot(cur.gradient, dir);
      S.clear();
      Y.clear();
      rho_hist.clear();
    }

    QuotientEval next;
    bool accepted = false;
    double step = 1.0;
    for (int bt = 0; bt < 50; ++bt) {
      for (std::size_t k = 0; k < K; ++k) trial[k] = c[k] - step * dir[k];
      next = evaluate(pb, rule, trial, ws, nullptr);
      if (std::isfinite(next.value) && next.value < cur.value && next.value <= cur.value - 1e-4 * step * gd &&
          resolved(trial, next.value)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No strict decrease left at working precision.
      out.converged = gnorm < pb.grad_tol;
      break;
    }
    std::vector<double> s_vec(K), y_vec(K);
    for (std::size_t k = 0; k < K; ++k) {
      s_vec[k] = trial[k] - c[k];
      y_vec[k] = next.gradient[k] - cur.gradient[k];
    }
    const double sy = dot(s_vec, y_vec);
    if (sy > 1e-16 * std::sqrt(dot(s_vec, s_vec) * dot(y_vec, y_vec))) {
      if (static_cast<int>(S.size()) == kMemory) {
        S.erase(S.begin());
        Y.erase(Y.begin());
        rho_hist.erase(rho_hist.begin());
      }
      S.push_back(std::move(s_vec));
      Y.push_back(std::move(y_vec));
      rho_hist.push_back(1.0 / sy);
    }
    c = trial;
    cur = std::move(next);
  }
  out.value = cur.value;
  out.c = std::move(c);
  return out;
}

AxiFunction build_minimizer(const RulePtr& rule, const std::vector<double>& c) {
  const auto n = static_cast<std::size_t>(rule->size());
  std::vector<double> cp(n, 0.0), w(n);
  std::copy(c.begin(), c.end(), cp.begin());
  kernels::parallel::synthesize(rule->basis(), n, n, cp, w);
  for (double& x : w) x = std::exp(x);
  return AxiFunction::from_values(rule, std::move(w));
}

}  // namespace

nlohmann::json RayleighResult::to_json() const {
  return {{"value", value},
          {"converged", converged},
          {"iterations", iterations},
          {"best_start", best_start},
          {"start_values", start_values},
          {"minimizer", minimizer.to_json()}};
}

double rayleigh_quotient(const RayleighProblem& problem, const AxiFunction& u) {
  validate(problem);
  if (!u.strictly_positive()) throw DomainError("rayleigh_quotient requires positive u");
  const double a = gradient_weight(problem);
  const double I = dirichlet(u);
  const double N = power_integral(u, 2.0);
  const double M = std::pow(power_integral(u, problem.pp.p), 2.0 / problem.pp.p);
  if (problem.functional == RayleighFunctional::Gns1) return (a * I + problem.parameter * N) / M;
  return (a * I + problem.parameter * M) / N;
}

QuotientEval rayleigh_quotient_log(const RayleighProblem& problem, const RulePtr& rule,
                                   const std::vector<double>& c) {
  validate(problem);
  Workspace ws;
  return evaluate(problem, *rule, c, ws, nullptr);
}

RayleighResult best_constant(const RayleighProblem& problem) {
  validate(problem);
  const RulePtr rule = make_rule(problem.pp.d, problem.node_count);
  const RulePtr check = make_rule(problem.pp.d, 2 * problem.node_count);
  const auto K = static_cast<std::size_t>(problem.modes);

  std::vector<double> at_one(K), unused(K);
  rule->evaluate_basis(1.0, at_one, unused);

  std::mt19937_64 rng(problem.seed);
  std::uniform_real_distribution<double> dist(-0.5, 0.5);
  std::vector<StartOutcome> outcomes;
  for (int s = 0; s < problem.restarts; ++s) {
    std::vector<double> c(K, 0.0);
    if (s == 1) {
      c[1] = 0.3 / at_one[1];
    } else if (s > 1) {
      for (std::size_t k = 1; k < std::min<std::size_t>(K, 7); ++k) c[k] = dist(rng) / at_one[k];
    }
    outcomes.push_back(descend(problem, *rule, *check, std::move(c)));
  }

  std::size_t best = 0;
  for (std::size_t s = 1; s < outcomes.size(); ++s) {
    if (outcomes[s].value < outcomes[best].value - 1e-14 * (1.0 + std::abs(outcomes[best].value))) best = s;
  }
  std::vector<double> values;
  for (const auto& o : outcomes) values.push_back(o.value);
  const AxiFunction raw = build_minimizer(rule, outcomes[best].c);
  const double norm = problem.functional == RayleighFunctional::Gns1 ? lp_norm(raw, problem.pp.p) : lp_norm(raw, 2.0);
  return RayleighResult{outcomes[best].value,
                        raw.map([norm](double x) { return x / norm; }),
                        outcomes[best].converged,
                        outcomes[best].iterations,
                        static_cast<int>(best),
                        std::move(values)};
}

std::string SweepCurve::to_csv() const {
  io::CsvTable t({"lambda", "numeric_mu", "thm2", "prop34", "identity", "converged"});
  for (const auto& r : rows) {
    t.row().cell(r.lambda).cell(r.numeric_mu);
    if (r.thm2) t.cell(*r.thm2); else t.cell(std::string());
    if (r.prop34) t.cell(*r.prop34); else t.cell(std::string());
    t.cell(r.identity).cell(std::string(r.converged ? "true" : "false"));
  }
  return t.str();
}

nlohmann::json SweepCurve::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j = {{"lambda", r.lambda}, {"numeric_mu", r.numeric_mu}, {"identity", r.identity},
                        {"converged", r.converged}};
    j["thm2"] = r.thm2 ? nlohmann::json(*r.thm2) : nlohmann::json(nullptr);
    j["prop34"] = r.prop34 ? nlohmann::json(*r.prop34) : nlohmann::json(nullptr);
    rows_json.push_back(std::move(j));
  }
  return {{"d", pp.d}, {"p", pp.p}, {"rows", rows_json}};
}

SweepCurve bound_curve_sweep(const ParameterPoint& pp, const std::vector<double>& lam_grid, int node_count,
                             std::uint64_t seed) {
  SweepCurve curve;
  curve.pp = pp;
  curve.rows.resize(lam_grid.size());
  const auto count = static_cast<long>(lam_grid.size());
  std::vector<std::string> errors(lam_grid.size());
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < count; ++k) {
    try {
      const double lam = lam_grid[static_cast<std::size_t>(k)];
      RayleighProblem pb;
      pb.pp = pp;
      pb.parameter = lam;
      pb.node_count = node_count;
      pb.seed = seed + static_cast<std::uint64_t>(k);
      const RayleighResult res = best_constant(pb);
      SweepRow row;
      row.lambda = lam;
      row.numeric_mu = res.value;
      row.converged = res.converged;
      row.identity = lam;
      if (lam >= 1.0) {
        try { row.thm2 = mu_lower_thm2(pp, lam); } catch (const DomainError&) {}
      }
      try { row.prop34 = mu_lower_prop34(pp, lam); } catch (const DomainError&) {}
      curve.rows[static_cast<std::size_t>(k)] = row;
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(k)] = e.what();
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw DomainError(e);
  }
  return curve;
}

Eigen::MatrixXd schrodinger_matrix(const SchrodingerProblem& problem) {
  if (problem.potential.d() != problem.d) throw DomainError("potential dimension does not match d");
  if (!problem.potential.all_finite()) throw DomainError("potential must be finite at the nodes");
  if (problem.sign == PotentialSign::PlusV && !problem.potential.strictly_positive()) {
    throw DomainError("the +V operator requires V > 0");
  }
  const int n = problem.node_count;
  const RulePtr fine = make_rule(problem.d, 2 * n);
  const int nf = fine->size();
  const auto B = fine->basis();
  const auto z = fine->nodes();
  const auto om = fine->weights();

  Eigen::MatrixXd Bm(nf, n);
  Eigen::VectorXd wv(nf);
  for (int j = 0; j < nf; ++j) {
    for (int k = 0; k < n; ++k) Bm(j, k) = B[static_cast<std::size_t>(j) * nf + k];
    wv[j] = om[static_cast<std::size_t>(j)] * problem.potential(z[static_cast<std::size_t>(j)]);
  }
  const double sign = problem.sign == PotentialSign::MinusV ? -1.0 : 1.0;
  Eigen::MatrixXd h = sign * (Bm.transpose() * wv.asDiagonal() * Bm);
  for (int k = 0; k < n; ++k) h(k, k) += fine->eigenvalue(k);
  return 0.5 * (h + h.transpose());
}

EigenPair lowest_eigenpair(const Eigen::MatrixXd& h, int max_iters, double tol) {
  const Eigen::Index n = h.rows();
  if (n == 0 || h.cols() != n) throw DomainError("lowest_eigenpair requires a square nonempty matrix");
  double gersh = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    gersh = std::min(gersh, h(i, i) - (h.row(i).cwiseAbs().sum() - std::abs(h(i, i))));
  }
  const double scale = 1.0 + h.cwiseAbs().maxCoeff();
  const double shift = gersh - 1e-3 * scale;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(h - shift * I);

  Eigen::VectorXd x = Eigen::VectorXd::Ones(n).normalized();
  double rho = x.dot(h * x);
  EigenPair out;
  int it = 0;
  for (; it < max_iters; ++it) {
    x = ldlt.solve(x).normalized();
    const double next = x.dot(h * x);
    const bool done = std::abs(next - rho) < 1e-10 * scale;
    rho = next;
    if (done) break;
  }
  for (int r = 0; r < 20; ++r, ++it) {
    const double res = (h * x - rho * x).norm();
    if (res < tol * scale) break;
    Eigen::LDLT<Eigen::MatrixXd> f(h - rho * I);
    Eigen::VectorXd y = f.solve(x);
    if (!y.allFinite() || y.norm() == 0.0) break;
    x = y.normalized();
    rho = x.dot(h * x);
  }
  if ((h * x - rho * x).norm() > 1e-8 * scale) throw ConvergenceError("lowest_eigenpair did not converge");
  out.value = rho;
  out.vector = x;
  out.iterations = it;
  return out;
}

double principal_eigenvalue(const SchrodingerProblem& problem) {
  return lowest_eigenpair(schrodinger_matrix(problem)).value;
}

double potential_norm(const AxiFunction& v, double q) { return lp_norm(v, q); }

const char* to_string(KltMode mode) {
  return mode == KltMode::Schrodinger ? "schrodinger" : "reverse";
}

nlohmann::json KltReport::to_json() const {
  nlohmann::json s = nlohmann::json::array();
  for (const auto& x : samples) {
    s.push_back({{"mu", x.mu}, {"eigenvalue", x.eigenvalue}, {"bound", x.bound}, {"margin", x.margin},
                 {"min_probe_gap", x.max_probe_gap}});
  }
  return {{"d", d},
          {"q", q},
          {"p", p},
          {"mode", to_string(mode)},
          {"tolerance", tolerance},
          {"min_margin", min_margin},
          {"violations", violations},
          {"probe_violations", probe_violations},
          {"samples", s}};
}

KltReport klt_validate(int d, double q, KltMode mode, int n_samples, std::uint64_t seed, double tolerance,
                       int probes) {
  if (n_samples < 1) throw DomainError("klt_validate needs at least one sample");
  KltReport rep;
  rep.d = d;
  rep.q = q;
  rep.mode = mode;
  rep.tolerance = tolerance;
  if (mode == KltMode::Schrodinger) {
    if (!(q > std::max(1.0, 0.5 * d))) throw DomainError("the -Delta - V bound requires q > max(1, d/2)");
    rep.p = 2.0 * q / (q - 1.0);
  } else {
    if (!(q > 1.0)) throw DomainError("the -Delta + V bound requires q > 1");
    rep.p = 2.0 * q / (q + 1.0);
  }
  const ParameterPoint pp = make_parameter_point(d, rep.p);
  std::optional<PhiSpec> envelope;

  const int n = 48;
  const RulePtr rule = make_rule(d, n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp(0.2, 6.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  rep.min_margin = std::numeric_limits<double>::infinity();

  for (int s = 0; s < n_samples; ++s) {
    const double a = amp(rng);
    const AxiFunction g = random_positive_function(rule, rng, 8, 0.5);
    const AxiFunction v = g.map([a](double x) { return a * x; });
    SchrodingerProblem prob{d, v, mode == KltMode::Schrodinger ? PotentialSign::MinusV : PotentialSign::PlusV, q, n};
    const Eigen::MatrixXd h = schrodinger_matrix(prob);
    const EigenPair ep = lowest_eigenpair(h);

    KltSample smp;
    smp.eigenvalue = ep.value;
    if (mode == KltMode::Schrodinger) {
      smp.mu = potential_norm(v, q);
      try {
        smp.bound = klt_lambda_bar_schrodinger(pp, smp.mu);
      } catch (const DomainError&) {
        if (!envelope) envelope = envelope_phi(pp);
        smp.bound = klt_lambda_bar_envelope(*envelope, smp.mu);
      }
      smp.margin = ep.value + smp.bound;
    } else {
      smp.mu = 1.0 / potential_norm(v.map([](double x) { return 1.0 / x; }), q);
      smp.bound = klt_lambda_bar_reverse(pp, smp.mu);
      smp.margin = ep.value - smp.bound;
    }

    smp.max_probe_gap = std::numeric_limits<double>::infinity();
    for (int r = 0; r < probes; ++r) {
      Eigen::VectorXd c(h.rows());
      for (Eigen::Index k = 0; k < c.size(); ++k) c[k] = gauss(rng) / (1.0 + static_cast<double>(k));
      const double quotient = c.dot(h * c) / c.squaredNorm();
      smp.max_probe_gap = std::min(smp.max_probe_gap, quotient - ep.value);
    }
    if (smp.max_probe_gap < -tolerance * (1.0 + std::abs(ep.value))) ++rep.probe_violations;
    if (smp.margin < -tolerance) ++rep.violations;
    rep.min_margin = std::min(rep.min_margin, smp.margin);
    rep.samples.push_back(smp);
  }
  return rep;
}

}  // namespace gnsphere
