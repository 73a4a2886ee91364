#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gnsphere/axi_function.hpp"
#include "gnsphere/exponents.hpp"
#include "gnsphere/phi.hpp"

namespace gnsphere {

/// Time series along a flow. Initial data are scaled to unit mass first
/// (||u||_p = 1 for the heat flow, int u^{beta p} = 1 for the nonlinear flow),
/// so e and i are the normalized entropy and Fisher information.
struct EntropyTrace {
  int d = 0;
  double p = 0.0;
  double beta = 1.0;
  std::string lyapunov_kind;  // "i - d phi(e)" or "i - d e"
  std::vector<double> times;
  std::vector<double> e;
  std::vector<double> i;
  std::vector<double> mass;             // int u^p or int u^{beta p}
  std::vector<double> lyapunov;
  std::vector<double> e_rate_residual;  // |e' + 2i| or |e' + 2 beta^2 ||grad u||^2|
  std::vector<double> grad_u;           // ||grad u||_2^2 (nonlinear runs)
  std::vector<double> beta_lyapunov;    // i psi_beta'(e) - d psi_beta(e), when defined

  std::string to_csv() const;  // t,e,i,mass,lyapunov,e_rate_residual
  nlohmann::json to_json() const;
};

struct StepControl {
  double initial_dt = 1e-4;
  double safety = 0.9;
  double max_dt = 1e-2;
  double rtol = 1e-8;
  double atol = 1e-12;
};

struct FlowStats {
  int accepted = 0;
  int rejected = 0;
  int positivity_rejections = 0;
  double min_dt = 0.0;
  double max_dt = 0.0;
};

struct FlowConfig {
  FlowSetting setting;  // beta = 1 selects the heat flow
  double time_horizon = 1.0;
  StepControl step;
  int node_count = 48;
  double positivity_floor = 1e-12;
  int samples = 129;              // uniform trace grid, endpoints included
  bool antipodal = false;         // even modes only
  std::optional<PhiSpec> phi;     // heat-flow Lyapunov; defaults to the heat phi when available

  nlohmann::json to_json() const;
};

/// FlowSetting for beta = 1, also for p = 2 where make_flow_setting refuses.
FlowSetting heat_flow_setting(const ParameterPoint& pp);

struct FlowResult {
  EntropyTrace trace;
  FlowStats stats;
  AxiFunction final_state;
};

/// w = u^p evolves by the heat equation, exactly in the eigenbasis.
FlowResult run_heat_flow(const AxiFunction& u0, const FlowConfig& cfg);

/// rho = u^{beta p} evolves by rho_t = Delta(rho^m)/m, which is the same flow as
/// u_t = u^{2-2beta}(Delta u + kappa |grad u|^2/u). Dormand-Prince 5(4) with PI
/// step control; rho^m is projected on a rule with twice the nodes.
FlowResult run_nonlinear_flow(const AxiFunction& u0, const FlowConfig& cfg);

/// Dispatches on cfg.setting.beta.
FlowResult run_flow(const AxiFunction& u0, const FlowConfig& cfg);

struct OdeChainReport {
  // Heat flow: e'' + 2d e' - gamma e'^2/(1-(p-2)e) with e'' = -2 i', e' = -2 i.
  std::vector<double> differential_inequality;
  // Increments of the Lyapunov quantity between consecutive samples (should be <= 0).
  std::vector<double> lyapunov_increments;
  std::vector<double> beta_lyapunov_increments;
  double min_differential = 0.0;
  double max_lyapunov_increment = 0.0;
  double max_beta_lyapunov_increment = 0.0;
  double tolerance = 0.0;
  bool pass = true;

  nlohmann::json to_json() const;
};

/// Requires a uniform trace with at least 64 samples.
OdeChainReport certify_ode_chain(const EntropyTrace& trace, const ParameterPoint& pp,
                                 double tolerance = 1e-6, double lyapunov_slack = 1e-8);

/// Fourth-order finite-difference derivative on a uniform grid.
std::vector<double> uniform_derivative(const std::vector<double>& f, double h);

}  // namespace gnsphere
