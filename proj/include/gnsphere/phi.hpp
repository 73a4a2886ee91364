#pragma once

#include <vector>

#include "gnsphere/exponents.hpp"

namespace gnsphere {

enum class PhiVariant { ClosedForm, LogCase, BetaFlow, Envelope };

/// An improvement function phi with phi(0) = 0, phi'(0) = 1, phi convex.
struct PhiSpec {
  ParameterPoint pp;
  PhiVariant variant = PhiVariant::ClosedForm;
  FlowSetting flow;                  // BetaFlow only
  std::vector<FlowSetting> betas;    // Envelope only: admissible samples (beta != 1)
  bool envelope_includes_heat = false;
  int node_count = 64;
  double admissible_s_sup = 0.0;     // 1/(p-2) for p > 2, +inf otherwise

  double operator()(double s) const;
};

/// Upper end of the s-domain: 1/(p-2) when p > 2, +inf when p < 2.
double admissible_s_sup(const ParameterPoint& pp);

/// Heat-flow phi: closed form or log case depending on gamma == 2 - p.
PhiSpec heat_phi(const ParameterPoint& pp);
PhiSpec beta_phi(const FlowSetting& fs, int node_count = 64);

struct EnvelopeOptions {
  int samples_per_component = 64;
  double beta_cap = 1e3;
  int node_count = 64;
};

/// Sup of phi_beta over a log-spaced grid of the admissible set (p in (2, 2*)).
PhiSpec envelope_phi(const ParameterPoint& pp, const EnvelopeOptions& opt = {});

/// The admissible beta grid used by envelope_phi (excludes beta = 1).
std::vector<double> envelope_beta_grid(const ParameterPoint& pp, const EnvelopeOptions& opt);

double phi_closed_form(const ParameterPoint& pp, double s);
double phi_log_case(const ParameterPoint& pp, double s);
double psi(const ParameterPoint& pp, double s);

/// phi_beta(s) = int_0^s exp(c (A(z) - A(s))) dz with A(s) = (1-(p-2)s)^a,
/// a = 1 - zeta - 1/(2 beta), c = 2 gamma(beta) / (beta (beta-1) p).
/// The solution of phi' = 1 + gamma(beta)/beta^2 (1-(p-2)s)^{-zeta-1/(2beta)} phi, phi(0) = 0.
double phi_beta(const FlowSetting& fs, double s, int node_count = 64);

double phi_beta_exponent(const FlowSetting& fs);   // a
double phi_beta_prefactor(const FlowSetting& fs);  // c

/// psi_beta' = exp(c (A(s) - 1)) and psi_beta = int_0^s psi_beta'; phi_beta = psi_beta / psi_beta'.
double psi_beta_derivative(const FlowSetting& fs, double s);
double psi_beta(const FlowSetting& fs, double s, int node_count = 64);

double phi_envelope(const ParameterPoint& pp, double s, int beta_samples = 64);

/// s with phi(s) = y (relative tolerance 1e-10).
double phi_inverse(const PhiSpec& phi, double y);

/// i - d phi^{-1}(i / d) >= 0.
double psi_tilde(const PhiSpec& phi, double i);

}  // namespace gnsphere
