// gnsphere: constant tables, bound curves, flows, inequality checks and
// eigenvalue bounds from the command line.
//
// Exit codes: 0 all checks passed, 2 invalid input, 3 invariant violated,
// 4 solver did not converge.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gnsphere/bounds.hpp"
#include "gnsphere/error.hpp"
#include "gnsphere/exponents.hpp"
#include "gnsphere/flows.hpp"
#include "gnsphere/io.hpp"
#include "gnsphere/phi.hpp"
#include "gnsphere/sphere_calculus.hpp"
#include "gnsphere/stereographic.hpp"
#include "gnsphere/variational.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gnsphere;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitViolation = 3;
constexpr int kExitSolver = 4;

struct Common {
  int d = 3;
  double p = 3.0;
  std::optional<double> beta;
  std::string lambda_grid;
  int n_nodes = 48;
  std::uint64_t seed = 7;
  double tol = 1e-8;
  std::string out_dir;
  std::string format = "csv";
};

class Run {
 public:
  Run(std::string command, const Common& c) : command_(std::move(command)), common_(c) {
    start_ = std::chrono::steady_clock::now();
    if (common_.out_dir.empty()) {
      const char* env = std::getenv("GNSPHERE_OUT_DIR");
      common_.out_dir = env && *env ? env : "gnsphere-out";
    }
  }

  /// Writes `content` under the output directory and records it.
  void emit(const std::string& name, const std::string& content) {
    io::write_atomic(fs::path(common_.out_dir) / name, content);
    outputs_.push_back(name);
  }

  void emit_table(const std::string& stem, const std::string& csv, const json& j) {
    if (common_.format == "json") {
      emit(stem + ".json", io::dump_json(j) + "\n");
    } else {
      emit(stem + ".csv", csv);
    }
  }

  void finish(const json& parameters, const json& tolerances, int exit_code) {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json m = {{"command", command_},
              {"tool_version", GNSPHERE_VERSION},
              {"parameters", parameters},
              {"seed", common_.seed},
              {"tolerances", tolerances},
              {"outputs", outputs_},
              {"exit_code", exit_code},
              {"wall_clock_seconds", secs}};
    io::write_atomic(fs::path(common_.out_dir) / (command_ + "_manifest.json"), io::dump_json(m) + "\n");
    std::cout << "wrote " << outputs_.size() << " file(s) to " << common_.out_dir << "\n";
  }

  const Common& common() const { return common_; }

 private:
  std::string command_;
  Common common_;
  std::vector<std::string> outputs_;
  std::chrono::steady_clock::time_point start_;
};

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::stringstream ss(text);
    std::string a, b, n;
    std::getline(ss, a, ':');
    std::getline(ss, b, ':');
    std::getline(ss, n, ':');
    const double lo = std::stod(a), hi = std::stod(b);
    const int count = std::stoi(n);
    if (count < 2 || !(hi > lo)) throw DomainError("grid 'a:b:n' needs b > a and n >= 2");
    for (int k = 0; k < count; ++k) out.push_back(lo + (hi - lo) * k / (count - 1));
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  if (out.empty()) throw DomainError("empty grid");
  return out;
}

json optional_value(const std::function<double()>& f) {
  try {
    const double v = f();
    return std::isfinite(v) ? json(v) : json(io::format_double(v));
  } catch (const DomainError& e) {
    return json(nullptr);
  }
}

// --------------------------------------------------------------- constants

int cmd_constants(const Common& c) {
  const ParameterPoint pp = make_parameter_point(c.d, c.p);
  struct Row {
    std::string name;
    json value;
    std::string tag;
  };
  std::vector<Row> rows = {
      {"d", pp.d, "input"},
      {"p", pp.p, "input"},
      {"two_sharp", std::isfinite(pp.two_sharp) ? json(pp.two_sharp) : json("inf"), "Bakry-Emery exponent"},
      {"two_star", std::isfinite(pp.two_star) ? json(pp.two_star) : json("inf"), "critical Sobolev exponent"},
      {"p_star", pp.p_star, "exponent where gamma = 2 - p"},
      {"gamma", pp.gamma, "heat-flow improvement constant"},
      {"delta", pp.delta, "stereographic weight exponent"},
      {"kappa_p", pp.kappa_p, "weighted Euclidean normalization"},
      {"sphere_volume", pp.sphere_volume, "|S^d|"},
      {"c_dp", optional_value([&] { return c_dp(pp); }), "weighted Euclidean inequality constant"},
      {"antipodal_constant", optional_value([&] { return antipodal_constant(pp); }),
       "improved constant for even functions"},
      {"afst_log_lambda", optional_value([&] { return afst_log_lambda(pp.d); }),
       "orthogonality-constrained log-Sobolev constant"},
      {"mu_lower_at_lambda_2", optional_value([&] { return mu_lower_thm2(pp, 2.0); }),
       "heat-flow lower bound on mu(lambda)"},
      {"lambda_lower_at_mu_2", optional_value([&] { return lambda_lower_thm2(pp, 2.0); }),
       "heat-flow lower bound on lambda(mu)"},
  };
  try {
    const BetaRange br = beta_roots(pp);
    rows.push_back({"beta_range_kind", to_string(br.kind), "nonlinear-flow admissible set"});
    rows.push_back({"beta_lower", optional_value([&] { return br.lower; }), "nonlinear-flow admissible set"});
    rows.push_back({"beta_upper", optional_value([&] { return br.upper; }), "nonlinear-flow admissible set"});
    if (br.witness) rows.push_back({"beta_witness", *br.witness, "explicit admissible exponent"});
    const auto [m_lo, m_hi] = m_range(pp);
    rows.push_back({"m_minus", m_lo, "porous-medium exponent range"});
    rows.push_back({"m_plus", m_hi, "porous-medium exponent range"});
  } catch (const DomainError&) {
  }
  if (c.beta) {
    const FlowSetting fs = make_flow_setting(pp, *c.beta);
    rows.push_back({"beta", fs.beta, "input"});
    rows.push_back({"m", fs.m, "porous-medium exponent"});
    rows.push_back({"kappa", fs.kappa, "nonlinear-flow drift coefficient"});
    rows.push_back({"zeta", fs.zeta, "nonlinear-flow auxiliary exponent"});
    rows.push_back({"gamma_beta", fs.gamma_beta, "nonlinear-flow improvement constant"});
    rows.push_back({"admissible", fs.admissible, "nonlinear-flow admissible set"});
  }

  json j = json::object();
  io::CsvTable t({"name", "value", "theorem"});
  for (const auto& r : rows) {
    j[r.name] = {{"value", r.value}, {"theorem", r.tag}};
    std::string v;
    if (r.value.is_number_float()) v = io::format_double(r.value.get<double>());
    else if (r.value.is_null()) v = "";
    else if (r.value.is_string()) v = r.value.get<std::string>();
    else v = r.value.dump();
    t.row().cell(r.name).cell(v).cell(r.tag);
  }
  if (c.out_dir.empty() && std::getenv("GNSPHERE_OUT_DIR") == nullptr) {
    std::cout << (c.format == "json" ? io::dump_json(j) + "\n" : t.str());
    return kExitOk;
  }
  Run run("constants", c);
  run.emit_table("constants", t.str(), j);
  run.finish({{"d", c.d}, {"p", c.p}, {"beta", c.beta ? json(*c.beta) : json(nullptr)}}, json::object(), kExitOk);
  return kExitOk;
}

// ----------------------------------------------------------------- figure1

int cmd_figure1(const Common& c, bool refine) {
  const ParameterPoint pp = make_parameter_point(c.d, c.p);
  std::vector<double> grid = parse_grid(c.lambda_grid.empty() ? "0.25:5:20" : c.lambda_grid);
  if (refine) {
    std::vector<double> fine;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      fine.push_back(grid[k]);
      if (k + 1 < grid.size()) fine.push_back(0.5 * (grid[k] + grid[k + 1]));
    }
    grid = std::move(fine);
  }
  const SweepCurve curve = bound_curve_sweep(pp, grid, std::max(c.n_nodes, 32), c.seed);
  Run run("figure1", c);
  run.emit_table("figure1", curve.to_csv(), curve.to_json());
  int code = kExitOk;
  for (const auto& r : curve.rows) {
    if (r.numeric_mu > r.lambda + c.tol) code = kExitViolation;
    if (r.thm2 && r.numeric_mu < *r.thm2 - c.tol) code = kExitViolation;
  }
  run.finish({{"d", c.d},
              {"p", c.p},
              {"lambda_grid", grid},
              {"columns",
               {{"numeric_mu", "multi-start minimization of the lambda-quotient"},
                {"thm2", "heat-flow lower bound on mu(lambda)"},
                {"prop34", "Hoelder interpolation lower bound"},
                {"identity", "mu = lambda"}}}},
             {{"tol", c.tol}}, code);
  return code;
}

// ----------------------------------------------------------------- figure2

int cmd_figure2(const Common& c, const std::string& d_list, int points) {
  std::vector<int> dims;
  for (double x : parse_grid(d_list.empty() ? "1,2,3,4,5" : d_list)) dims.push_back(static_cast<int>(x));
  Run run("figure2", c);
  json summary = json::array();
  for (int d : dims) {
    if (d < 1 || d > 10) throw DomainError("figure2 supports d in {1, ..., 10}");
    const double p_max = d >= 3 ? critical_exponent(d) : (d == 2 ? 17.0 : 10.0);
    std::vector<double> ps;
    for (int k = 0; k < points; ++k) ps.push_back(1.0 + (p_max - 1.0) * k / (points - 1));
    std::vector<std::pair<double, std::string>> special = {{2.0, "excluded: p = 2"}};
    if (d == 3) {
      special.push_back({2.25, "degenerate root formula"});
      special.push_back({6.0, "critical exponent"});
    }
    if (d == 2) {
      special.push_back({9.0 - 4.0 * std::sqrt(3.0), "degenerate root formula"});
      special.push_back({9.0 + 4.0 * std::sqrt(3.0), "degenerate root formula"});
    }
    for (const auto& s : special) ps.push_back(s.first);
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());

    io::CsvTable t({"p", "m_minus", "m_plus", "note"});
    json rows = json::array();
    for (double p : ps) {
      std::string note;
      for (const auto& s : special) {
        if (s.first == p) note = s.second;
      }
      t.row().cell(p);
      if (p == 2.0) {
        t.cell(std::string()).cell(std::string()).cell(note);
        rows.push_back({{"p", p}, {"note", note}});
        continue;
      }
      try {
        const auto [lo, hi] = m_range(make_parameter_point(d, p));
        t.cell(lo).cell(hi).cell(note);
        rows.push_back({{"p", p}, {"m_minus", lo}, {"m_plus", hi}, {"note", note}});
      } catch (const DomainError&) {
        const std::string n2 = note.empty() ? "empty admissible set" : note + "; empty admissible set";
        t.cell(std::string()).cell(std::string()).cell(n2);
        rows.push_back({{"p", p}, {"note", n2}});
      }
    }
    run.emit_table("figure2_d" + std::to_string(d), t.str(), {{"d", d}, {"rows", rows}});
    summary.push_back({{"d", d}, {"p_max", p_max}});
  }
  run.finish({{"d_list", dims},
              {"points", points},
              {"columns", {{"m_minus", "porous-medium exponent range"}, {"m_plus", "porous-medium exponent range"}}},
              {"ranges", summary}},
             json::object(), kExitOk);
  return kExitOk;
}

// -------------------------------------------------------------------- flow

AxiFunction initial_data(const json& spec, const RulePtr& rule) {
  const std::string type = spec.value("type", "affine");
  if (type == "affine") {
    const double eps = spec.value("epsilon", 0.1);
    return AxiFunction::sample(rule, [eps](double z) { return 1.0 + eps * z; });
  }
  if (type == "random") {
    std::mt19937_64 rng(spec.value("seed", 1ULL));
    return random_positive_function(rule, rng, spec.value("degree", 8), spec.value("scale", 0.5),
                                    spec.value("even", false));
  }
  if (type == "values") return AxiFunction::from_json(spec.at("function"));
  throw DomainError("unknown initial data type '" + type + "'");
}

int cmd_flow(const Common& c, const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) throw DomainError("cannot open config file '" + config_path + "'");
  json cfg_json;
  try {
    cfg_json = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("config is not valid JSON: ") + e.what());
  }
  const int d = cfg_json.value("d", c.d);
  const double p = cfg_json.value("p", c.p);
  const double beta = cfg_json.value("beta", c.beta.value_or(1.0));
  const ParameterPoint pp = make_parameter_point(d, p);

  FlowConfig cfg;
  cfg.setting = beta == 1.0 ? heat_flow_setting(pp) : make_flow_setting(pp, beta);
  cfg.time_horizon = cfg_json.value("time_horizon", cfg.time_horizon);
  cfg.node_count = cfg_json.value("node_count", cfg.node_count);
  cfg.samples = cfg_json.value("samples", cfg.samples);
  cfg.antipodal = cfg_json.value("antipodal", cfg.antipodal);
  cfg.positivity_floor = cfg_json.value("positivity_floor", cfg.positivity_floor);
  if (cfg_json.contains("step")) {
    const json& s = cfg_json["step"];
    cfg.step.initial_dt = s.value("initial_dt", cfg.step.initial_dt);
    cfg.step.max_dt = s.value("max_dt", cfg.step.max_dt);
    cfg.step.rtol = s.value("rtol", cfg.step.rtol);
    cfg.step.atol = s.value("atol", cfg.step.atol);
    cfg.step.safety = s.value("safety", cfg.step.safety);
  }
  if (cfg_json.value("phi", std::string("heat")) == "envelope") cfg.phi = envelope_phi(pp);

  const RulePtr rule = make_rule(d, cfg.node_count);
  const AxiFunction u0 = initial_data(cfg_json.value("initial", json::object()), rule);
  const double tol = cfg_json.value("tolerance", c.tol);
  const double slack = cfg_json.value("lyapunov_slack", 1e-8);

  const FlowResult res = run_flow(u0, cfg);
  Run run("flow", c);
  run.emit_table("trace", res.trace.to_csv(), res.trace.to_json());

  json report;
  bool pass = true;
  if (beta == 1.0 && !pp.log_case && static_cast<int>(res.trace.times.size()) >= 64) {
    const OdeChainReport rep = certify_ode_chain(res.trace, pp, tol, slack);
    report = rep.to_json();
    pass = rep.pass;
  } else {
    double inc = -INFINITY;
    for (std::size_t k = 1; k < res.trace.lyapunov.size(); ++k) {
      inc = std::max(inc, res.trace.lyapunov[k] - res.trace.lyapunov[k - 1]);
    }
    pass = inc <= slack;
    report = {{"max_lyapunov_increment", inc}, {"pass", pass}};
  }
  double drift = 0.0;
  for (double m : res.trace.mass) drift = std::max(drift, std::abs(m - res.trace.mass.front()));
  const double rate = *std::max_element(res.trace.e_rate_residual.begin(), res.trace.e_rate_residual.end());
  report["mass_drift"] = drift;
  report["max_entropy_rate_residual"] = rate;
  report["steps"] = {{"accepted", res.stats.accepted},
                     {"rejected", res.stats.rejected},
                     {"positivity_rejections", res.stats.positivity_rejections}};
  run.emit("certification.json", io::dump_json(report) + "\n");
  const int code = pass ? kExitOk : kExitViolation;
  run.finish({{"config", config_path}, {"flow", cfg.to_json()}}, {{"tolerance", tol}, {"lyapunov_slack", slack}},
             code);
  return code;
}

// ------------------------------------------------------------------ verify

struct SuiteEntry {
  std::string name;
  std::function<Deficit(const AxiFunction&)> eval;
  bool even = false;
};

std::vector<SuiteEntry> suite_entries(const ParameterPoint& pp, const std::string& suite) {
  std::vector<SuiteEntry> out;
  DeficitParams params;
  params.p = pp.p;
  params.lambda_star = default_lambda_star(pp.d);
  const std::vector<InequalityId> sphere = {InequalityId::Gns,          InequalityId::LogSobolev,
                                            InequalityId::ImprovedHeat, InequalityId::ImprovedPhi,
                                            InequalityId::Orthogonal,   InequalityId::Antipodal,
                                            InequalityId::StabilityQuadratic, InequalityId::Ckp};
  for (auto id : sphere) {
    if (suite != "all" && suite != to_string(id)) continue;
    SuiteEntry e{to_string(id), nullptr, id == InequalityId::Antipodal || id == InequalityId::Orthogonal};
    if (id == InequalityId::ImprovedPhi) {
      auto prm = std::make_shared<DeficitParams>(params);
      prm->phi = pp.bakry_emery_range ? heat_phi(pp) : envelope_phi(pp);
      e.eval = [id, prm](const AxiFunction& u) { return deficit(u, id, *prm); };
    } else {
      e.eval = [id, params](const AxiFunction& u) { return deficit(u, id, params); };
    }
    out.push_back(std::move(e));
  }
  for (auto id : {EuclideanInequalityId::Weighted, EuclideanInequalityId::Stability, EuclideanInequalityId::Sharper,
                  EuclideanInequalityId::Afst, EuclideanInequalityId::AfstLog}) {
    if (suite != "all" && suite != to_string(id)) continue;
    EuclideanDeficitParams ep;
    ep.p = pp.p;
    ep.lambda_star = default_lambda_star(pp.d);
    const bool even = id == EuclideanInequalityId::Afst || id == EuclideanInequalityId::AfstLog;
    out.push_back({to_string(id), [id, ep](const AxiFunction& u) { return euclidean_deficit(push_forward(u), id, ep); },
                   even});
  }
  return out;
}

int cmd_verify(const Common& c, const std::string& suite, int n) {
  if (suite.empty()) throw CLI::ValidationError("verify", "a suite name is required");
  const ParameterPoint pp = make_parameter_point(c.d, c.p);
  const std::vector<SuiteEntry> entries = suite_entries(pp, suite);
  if (entries.empty()) throw DomainError("unknown suite '" + suite + "'");
  if (n < 1) throw DomainError("--n must be positive");

  const RulePtr rule = make_rule(c.d, c.n_nodes);
  json results = json::array();
  int violations = 0, applicable = 0;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    std::mt19937_64 rng(c.seed + 1000003ULL * k);
    std::uniform_real_distribution<double> scale(0.05, 1.0);
    json r = {{"inequality", e.name}};
    try {
      int bad = 0;
      double worst = INFINITY;
      for (int s = 0; s < n; ++s) {
        const AxiFunction u = random_positive_function(rule, rng, 8, scale(rng), e.even);
        const Deficit df = e.eval(u);
        worst = std::min(worst, df.deficit / (1.0 + std::abs(df.lhs)));
        if (df.deficit < -c.tol * (1.0 + std::abs(df.lhs))) ++bad;
      }
      r["checked"] = n;
      r["violations"] = bad;
      r["min_normalized_deficit"] = worst;
      violations += bad;
      ++applicable;
    } catch (const DomainError& ex) {
      if (suite != "all") throw;
      r["skipped"] = ex.what();
    }
    results.push_back(std::move(r));
  }
  const int code = violations > 0 ? kExitViolation : kExitOk;
  Run run("verify", c);
  json report = {{"suite", suite}, {"d", c.d}, {"p", c.p}, {"applicable", applicable},
                 {"violations", violations}, {"results", results}};
  run.emit("verify_report.json", io::dump_json(report) + "\n");
  run.finish({{"suite", suite}, {"d", c.d}, {"p", c.p}, {"n", n}, {"n_nodes", c.n_nodes}}, {{"tol", c.tol}}, code);
  std::cout << applicable << " inequalit" << (applicable == 1 ? "y" : "ies") << " checked, " << violations
            << " violation(s)\n";
  return code;
}

// --------------------------------------------------------------------- klt

int cmd_klt(const Common& c, double q, int samples, const std::string& mode) {
  std::vector<KltMode> modes;
  if (mode == "schrodinger" || mode == "both") modes.push_back(KltMode::Schrodinger);
  if (mode == "reverse" || mode == "both") modes.push_back(KltMode::Reverse);
  if (modes.empty()) throw DomainError("--mode must be schrodinger, reverse or both");
  Run run("klt", c);
  int violations = 0;
  json reports = json::array();
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const KltReport rep = klt_validate(c.d, q, modes[k], samples, c.seed + k, c.tol);
    violations += rep.violations + rep.probe_violations;
    reports.push_back(rep.to_json());
    std::cout << to_string(modes[k]) << ": " << rep.violations << " violation(s), min margin "
              << io::format_double(rep.min_margin) << "\n";
  }
  run.emit("klt_report.json", io::dump_json(reports) + "\n");
  const int code = violations > 0 ? kExitViolation : kExitOk;
  run.finish({{"d", c.d}, {"q", q}, {"samples", samples}, {"mode", mode}}, {{"tol", c.tol}}, code);
  return code;
}

void add_common(CLI::App* app, Common& c, bool with_grid) {
  app->add_option("--d", c.d, "sphere dimension")->check(CLI::PositiveNumber);
  app->add_option("--p", c.p, "exponent");
  app->add_option("--beta", c.beta, "nonlinear-flow exponent");
  if (with_grid) app->add_option("--lambda-grid", c.lambda_grid, "comma list or a:b:n");
  app->add_option("--n-nodes", c.n_nodes, "quadrature nodes")->check(CLI::Range(4, 512));
  app->add_option("--seed", c.seed, "random seed");
  app->add_option("--tol", c.tol, "check tolerance")->check(CLI::PositiveNumber);
  app->add_option("--out-dir", c.out_dir, "output directory (default: $GNSPHERE_OUT_DIR or ./gnsphere-out)");
  app->add_option("--format", c.format, "table format")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interpolation inequalities on the sphere: constants, bounds, flows, checks"};
  app.set_version_flag("--version", GNSPHERE_VERSION);
  app.require_subcommand(1);

  Common c;
  auto* constants = app.add_subcommand("constants", "exponents and constants at (d, p)");
  add_common(constants, c, false);

  bool refine = false;
  auto* figure1 = app.add_subcommand("figure1", "numeric mu(lambda) with its lower bounds");
  add_common(figure1, c, true);
  figure1->add_flag("--refine", refine, "insert midpoints into the lambda grid");

  std::string d_list;
  int points = 200;
  auto* figure2 = app.add_subcommand("figure2", "porous-medium exponent band m_-(p), m_+(p)");
  add_common(figure2, c, false);
  figure2->add_option("--d-list", d_list, "comma list of dimensions");
  figure2->add_option("--points", points, "p samples per dimension")->check(CLI::Range(2, 100000));

  std::string config;
  auto* flow = app.add_subcommand("flow", "run a heat or nonlinear flow from a JSON config");
  add_common(flow, c, false);
  flow->add_option("--config", config, "flow configuration (JSON)")->required();

  std::string suite;
  int n = 100;
  auto* verify = app.add_subcommand("verify", "deficits of an inequality on random positive functions");
  add_common(verify, c, false);
  verify->add_option("suite", suite, "inequality name or 'all'");
  verify->add_option("--n", n, "number of random functions");

  double q = 3.0;
  int samples = 50;
  std::string mode = "both";
  auto* klt = app.add_subcommand("klt", "eigenvalue bounds for Schrodinger operators on random potentials");
  add_common(klt, c, false);
  klt->add_option("--q", q, "Lebesgue exponent of the potential");
  klt->add_option("--samples", samples, "number of random potentials");
  klt->add_option("--mode", mode, "schrodinger, reverse or both");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*constants) return cmd_constants(c);
    if (*figure1) return cmd_figure1(c, refine);
    if (*figure2) return cmd_figure2(c, d_list, points);
    if (*flow) return cmd_flow(c, config);
    if (*verify) return cmd_verify(c, suite, n);
    if (*klt) return cmd_klt(c, q, samples, mode);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n" << verify->help();
    return kExitInput;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ConvergenceError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
