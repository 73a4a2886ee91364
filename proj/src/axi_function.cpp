#include "gnsphere/axi_function.hpp"

#include <cmath>
#include <stdexcept>

#include "gnsphere/error.hpp"
#include "gnsphere/kernels.hpp"

namespace gnsphere {

AxiFunction::AxiFunction(RulePtr rule, std::vector<double> values, std::vector<double> coeffs)
    : rule_(std::move(rule)), values_(std::move(values)), coeffs_(std::move(coeffs)) {}

AxiFunction AxiFunction::from_values(RulePtr rule, std::vector<double> values) {
  const auto n = static_cast<std::size_t>(rule->size());
  if (values.size() != n) throw DomainError("value count does not match the rule size");
  std::vector<double> coeffs(n);
  kernels::parallel::analyze(rule->basis(), n, n, rule->weights(), values, coeffs);
  return AxiFunction(std::move(rule), std::move(values), std::move(coeffs));
}

AxiFunction AxiFunction::from_coefficients(RulePtr rule, std::vector<double> coeffs) {
  const auto n = static_cast<std::size_t>(rule->size());
  if (coeffs.size() > n) throw DomainError("more coefficients than the rule resolves");
  coeffs.resize(n, 0.0);
  std::vector<double> values(n);
  kernels::parallel::synthesize(rule->basis(), n, n, coeffs, values);
  return AxiFunction(std::move(rule), std::move(values), std::move(coeffs));
}

AxiFunction AxiFunction::sample(RulePtr rule, const std::function<double(double)>& f) {
  std::vector<double> values(rule->size());
  const auto z = rule->nodes();
  for (std::size_t j = 0; j < values.size(); ++j) values[j] = f(z[j]);
  return from_values(std::move(rule), std::move(values));
}

AxiFunction AxiFunction::constant(RulePtr rule, double c) {
  std::vector<double> values(rule->size(), c);
  std::vector<double> coeffs(rule->size(), 0.0);
  coeffs[0] = c;
  return AxiFunction(std::move(rule), std::move(values), std::move(coeffs));
}

double AxiFunction::operator()(double z) const {
  std::vector<double> p(coeffs_.size());
  rule_->evaluate_basis(z, p, {});
  double acc = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) acc += coeffs_[k] * p[k];
  return acc;
}

double AxiFunction::derivative(double z) const {
  std::vector<double> p(coeffs_.size()), dp(coeffs_.size());
  rule_->evaluate_basis(z, p, dp);
  double acc = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) acc += coeffs_[k] * dp[k];
  return acc;
}

std::vector<double> AxiFunction::derivative_values() const {
  const auto n = static_cast<std::size_t>(size());
  std::vector<double> out(n);
  kernels::parallel::synthesize(rule_->basis_derivative(), n, n, coeffs_, out);
  return out;
}

std::vector<double> AxiFunction::laplacian_values() const {
  const auto n = static_cast<std::size_t>(size());
  std::vector<double> c(n);
  for (std::size_t k = 0; k < n; ++k) c[k] = -rule_->eigenvalue(static_cast<int>(k)) * coeffs_[k];
  std::vector<double> out(n);
  kernels::parallel::synthesize(rule_->basis(), n, n, c, out);
  return out;
}

bool AxiFunction::strictly_positive() const {
  for (double v : values_)
    if (!(v > 0.0)) return false;
  return true;
}

bool AxiFunction::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

AxiFunction AxiFunction::map(const std::function<double(double)>& f) const {
  std::vector<double> out(values_.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = f(values_[j]);
  return from_values(rule_, std::move(out));
}

AxiFunction AxiFunction::resample(RulePtr rule) const {
  if (rule->d() != d()) throw DomainError("cannot resample across dimensions");
  const auto z = rule->nodes();
  std::vector<double> out(z.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = (*this)(z[j]);
  return from_values(std::move(rule), std::move(out));
}

AxiFunction AxiFunction::even_part() const {
  std::vector<double> c = coeffs_;
  for (std::size_t k = 1; k < c.size(); k += 2) c[k] = 0.0;
  return from_coefficients(rule_, std::move(c));
}

nlohmann::json AxiFunction::to_json() const {
  nlohmann::json j;
  j["d"] = d();
  j["n"] = size();
  j["nodes"] = std::vector<double>(rule_->nodes().begin(), rule_->nodes().end());
  j["values"] = values_;
  j["coefficients"] = coeffs_;
  return j;
}

AxiFunction AxiFunction::from_json(const nlohmann::json& j) {
  const int d = j.at("d").get<int>();
  const int n = j.at("n").get<int>();
  RulePtr rule = make_rule(d, n);
  if (j.contains("values")) return from_values(rule, j.at("values").get<std::vector<double>>());
  if (j.contains("coefficients"))
    return from_coefficients(rule, j.at("coefficients").get<std::vector<double>>());
  throw DomainError("AxiFunction JSON needs values or coefficients");
}

}  // namespace gnsphere
