#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gnsphere/bounds.hpp"
#include "gnsphere/error.hpp"
#include "gnsphere/exponents.hpp"
#include "gnsphere/phi.hpp"

using namespace gnsphere;

namespace {

// min over t >= 1 of (lam + (t^{1+theta} - 1)/(1+theta)) / t by a fine log-spaced scan.
double scan_min_t(double lam, double theta) {
  double best = 1e300;
  for (int k = 0; k <= 200000; ++k) {
    double t = std::exp(12.0 * k / 200000.0);
    best = std::min(best, (lam + (std::pow(t, 1 + theta) - 1) / (1 + theta)) / t);
  }
  return best;
}

}  // namespace

TEST_CASE("heat bound on mu") {
  auto pp = make_parameter_point(3, 3.0);
  CHECK(mu_lower_thm2(pp, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  double v = mu_lower_thm2(pp, 2.0);
  CHECK(v == doctest::Approx(std::pow(2.0 + 25.0 / 14.0, 14.0 / 39.0)).epsilon(1e-13));
  CHECK(v == doctest::Approx(1.6127).epsilon(1e-4));
  CHECK(std::abs(v - scan_min_t(2.0, pp.gamma / (pp.p - 2.0))) < 1e-6 * v);
  CHECK(mu_lower_thm2(pp, 3.0) > v);
  double prev = 1.0;
  for (int k = 0; k < 100; ++k) {
    double lam = 1.0 + 0.2 * k;
    double m = mu_lower_thm2(pp, lam);
    CHECK(m <= lam + 1e-12);
    CHECK(m >= prev - 1e-14);
    prev = m;
  }
}

TEST_CASE("reverse bound on lambda") {
  auto pp = make_parameter_point(3, 1.5);
  CHECK(lambda_lower_thm2(pp, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  double v = lambda_lower_thm2(pp, 2.0);
  CHECK(v > 1.0);
  CHECK(v < 2.0);
  auto ps = make_parameter_point(3, p_star(3));
  CHECK(lambda_lower_thm2(ps, 5.0) == 1.0);
  double prev = 1.0;
  for (int k = 0; k < 100; ++k) {
    double m = lambda_lower_thm2(pp, 1.0 + 0.1 * k);
    CHECK(m >= prev - 1e-14);
    prev = m;
  }
}

TEST_CASE("interpolation bound") {
  auto pp = make_parameter_point(3, 3.0);
  for (double lam : {1.0, 2.0, 4.0, 9.0}) CHECK(mu_lower_prop34(pp, lam) == doctest::Approx(std::sqrt(lam) / 2.0).epsilon(1e-13));
  CHECK(mu_lower_prop34(pp, 1.0) < mu_lower_thm2(pp, 1.0));
  auto q = make_parameter_point(4, 3.0);
  double theta = 4.0 * 1.0 / 6.0;
  double slope = std::log(mu_lower_prop34(q, 1e4) / mu_lower_prop34(q, 1e3)) / std::log(10.0);
  CHECK(std::abs(slope - (1.0 - theta)) < 1e-3);
  CHECK_THROWS_AS(mu_lower_prop34(make_parameter_point(2, 3.0), 2.0), DomainError);
}

TEST_CASE("envelope bound") {
  auto pp = make_parameter_point(3, 3.0);
  auto env = envelope_phi(pp);
  CHECK(mu_lower_envelope(env, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(minimize_envelope_objective(env, 1.0).t == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(mu_lower_envelope(env, 2.0) >= mu_lower_thm2(pp, 2.0) - 1e-9);
  // With the heat phi the minimization reproduces the closed form.
  auto heat = heat_phi(pp);
  for (double lam : {1.5, 2.0, 5.0}) CHECK(mu_lower_envelope(heat, lam) == doctest::Approx(mu_lower_thm2(pp, lam)).epsilon(1e-9));
  auto p5 = make_parameter_point(3, 5.0);
  double v = mu_lower_envelope(p5, 2.0);
  CHECK(v > 1.0);
  CHECK(v < 2.0);
}

TEST_CASE("inverse bounds used for eigenvalue estimates") {
  auto pp = make_parameter_point(3, 3.0);
  for (double lam : {1.5, 2.0, 5.0}) CHECK(std::abs(klt_lambda_bar_schrodinger(pp, mu_lower_thm2(pp, lam)) - lam) < 1e-8);
  double expected = (1.0 + 0.56 * std::pow(2.0, 1.0 + 25.0 / 14.0)) / 1.56;
  CHECK(klt_lambda_bar_schrodinger(pp, 2.0) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(klt_lambda_bar_schrodinger(pp, 0.4) == 0.4);
  auto env = heat_phi(pp);
  CHECK(klt_lambda_bar_envelope(env, 2.0) == doctest::Approx(expected).epsilon(1e-7));
  auto rp = make_parameter_point(3, 1.5);
  CHECK(klt_lambda_bar_reverse(rp, 0.5) == 0.5);
  CHECK(klt_lambda_bar_reverse(rp, 3.0) == doctest::Approx(lambda_lower_thm2(rp, 3.0)));
}

TEST_CASE("improved constants") {
  CHECK(antipodal_constant(make_parameter_point(3, 3.0)) == doctest::Approx(96.0 / 17.0).epsilon(1e-13));
  CHECK(antipodal_constant(make_parameter_point(3, 6.0)) == doctest::Approx(0.75).epsilon(1e-13));
  CHECK(antipodal_constant(make_parameter_point(3, 2.0)) == doctest::Approx(27.0 / 8.0).epsilon(1e-13));
  CHECK(afst_log_lambda(2) == doctest::Approx(2.0 + 7.0 / (10.0 + std::sqrt(70.0))).epsilon(1e-13));
  CHECK(afst_log_lambda(3) == doctest::Approx(3.0 + (22.0 / 3.0) / (12.0 + 6.0 * std::sqrt(3.0))).epsilon(1e-13));
  auto pp = make_parameter_point(3, 3.0);
  CHECK_THROWS_AS(afst_constants(pp, 3.0), DomainError);
  CHECK(afst_constants(pp, default_lambda_star(3)).gns_constant == doctest::Approx(3.0).epsilon(1e-5));
  CHECK(afst_constants(pp, 4.0).gns_constant > 3.0);
  CHECK(default_lambda_star(3) == doctest::Approx(3.0 * (1 + 1e-6)).epsilon(1e-15));
}

TEST_CASE("Euclidean constant") {
  auto crit = make_parameter_point(3, 6.0);
  double s3 = 2.0 * std::numbers::pi * std::numbers::pi;
  CHECK(c_dp(crit) == doctest::Approx(3.0 * std::pow(s3, 2.0 / 3.0) / 4.0).epsilon(1e-13));
  auto pp = make_parameter_point(2, 4.0);
  CHECK(std::isfinite(c_dp(pp)));
  CHECK(c_dp(pp) > 0.0);
  for (auto q : {make_parameter_point(2, 4.0), make_parameter_point(3, 3.0), make_parameter_point(5, 2.7)}) {
    CHECK(c_dp(q) == doctest::Approx(4.0 * q.d * q.kappa_p / (q.p - 2.0)).epsilon(1e-13));
  }
}

TEST_CASE("sampled curve serialization") {
  auto pp = make_parameter_point(3, 3.0);
  auto curve = sample_bound("mu_lower", "heat", pp, {1.0, 2.0}, [&](double x) { return mu_lower_thm2(pp, x); });
  CHECK(curve.samples.size() == 2);
  auto csv = curve.to_csv();
  CHECK(csv.rfind("abscissa,value,name,theorem", 0) == 0);
  auto j = curve.to_json();
  CHECK(j["name"] == "mu_lower");
}
