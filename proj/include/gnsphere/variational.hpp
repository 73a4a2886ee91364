#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "gnsphere/axi_function.hpp"
#include "gnsphere/exponents.hpp"

namespace gnsphere {

enum class RayleighFunctional {
  Gns1,  // ((p-2)/d) ||grad u||^2 + lam ||u||_2^2 over ||u||_p^2, p > 2
  Gns2,  // ((2-p)/d) ||grad u||^2 + mu ||u||_p^2 over ||u||_2^2, 1 <= p < 2
};

struct RayleighProblem {
  ParameterPoint pp;
  double parameter = 1.0;  // lambda for Gns1, mu for Gns2
  RayleighFunctional functional = RayleighFunctional::Gns1;
  int node_count = 64;     // quadrature nodes
  int modes = 16;          // u = exp(sum_{k < modes} c_k p_k)
  int max_iters = 4000;
  double grad_tol = 1e-6;  // sup-norm of the gradient once no strict decrease is left
  int restarts = 8;        // the constant start counts as one
  std::uint64_t seed = 1;
};

struct RayleighResult {
  double value = 0.0;
  AxiFunction minimizer;
  bool converged = false;
  int iterations = 0;          // of the winning start
  int best_start = 0;          // 0 = constant
  std::vector<double> start_values;

  nlohmann::json to_json() const;
};

/// Quotient of `problem` at positive u.
double rayleigh_quotient(const RayleighProblem& problem, const AxiFunction& u);

/// Quotient and its gradient with respect to the log-coefficients c (u = exp(sum c_k p_k)).
struct QuotientEval {
  double value = 0.0;
  std::vector<double> gradient;
};
QuotientEval rayleigh_quotient_log(const RayleighProblem& problem, const RulePtr& rule,
                                   const std::vector<double>& c);

/// Multi-start preconditioned L-BFGS on log u, minimizer scaled to unit norm. A start that hits
/// max_iters is kept with converged = false.
RayleighResult best_constant(const RayleighProblem& problem);

struct SweepRow {
  double lambda = 0.0;
  double numeric_mu = 0.0;
  std::optional<double> thm2;
  std::optional<double> prop34;
  double identity = 0.0;
  bool converged = false;
};

struct SweepCurve {
  ParameterPoint pp;
  std::vector<SweepRow> rows;

  /// lambda,numeric_mu,thm2,prop34,identity,converged; empty cells where a bound does not apply.
  std::string to_csv() const;
  nlohmann::json to_json() const;
};

/// best_constant for Gns1 across the grid with the analytic bounds alongside.
/// Grid point k uses seed + k.
SweepCurve bound_curve_sweep(const ParameterPoint& pp, const std::vector<double>& lam_grid,
                             int node_count = 64, std::uint64_t seed = 1);

enum class PotentialSign {
  MinusV,  // -Delta - V
  PlusV,   // -Delta + V
};

struct SchrodingerProblem {
  int d = 3;
  AxiFunction potential;
  PotentialSign sign = PotentialSign::MinusV;
  double q = 2.0;
  int node_count = 48;  // Galerkin basis size
};

/// Dense Galerkin matrix diag(k(k+d-1)) -+ (int V p_k p_l), assembled on a
/// rule with twice the nodes.
Eigen::MatrixXd schrodinger_matrix(const SchrodingerProblem& problem);

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;  // unit Galerkin coefficients
  int iterations = 0;
};

/// Smallest eigenvalue: shifted inverse iteration from below the Gershgorin
/// bound, then Rayleigh-quotient iteration.
EigenPair lowest_eigenpair(const Eigen::MatrixXd& h, int max_iters = 2000, double tol = 1e-13);

double principal_eigenvalue(const SchrodingerProblem& problem);

/// ||V||_q on the potential's own rule.
double potential_norm(const AxiFunction& v, double q);

enum class KltMode {
  Schrodinger,  // -Delta - V, p = 2q/(q-1)
  Reverse,      // -Delta + V, p = 2q/(q+1)
};

const char* to_string(KltMode mode);

struct KltSample {
  double mu = 0.0;
  double eigenvalue = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // eigenvalue - bound (Reverse) or eigenvalue + bound (Schrodinger)
  double max_probe_gap = 0.0;  // min over probes of (probe quotient - eigenvalue), should be >= 0
};

struct KltReport {
  int d = 0;
  double q = 0.0;
  double p = 0.0;
  KltMode mode = KltMode::Schrodinger;
  double tolerance = 1e-8;
  std::vector<KltSample> samples;
  double min_margin = 0.0;
  int violations = 0;
  int probe_violations = 0;

  nlohmann::json to_json() const;
};

/// Random positive band-limited potentials V = A exp(g), A uniform in [0.2, 6].
KltReport klt_validate(int d, double q, KltMode mode, int n_samples, std::uint64_t seed,
                       double tolerance = 1e-8, int probes = 50);

}  // namespace gnsphere
