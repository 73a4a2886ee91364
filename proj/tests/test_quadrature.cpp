#include <cmath>
#include <random>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "doctest.h"
#include "gnsphere/error.hpp"
#include "gnsphere/kernels.hpp"
#include "gnsphere/quadrature.hpp"

using namespace gnsphere;

namespace {

// int z^k d nu_d for the probability weight proportional to (1-z^2)^{d/2-1}.
double exact_moment(int d, int k) {
  if (k % 2 == 1) return 0.0;
  double a = d / 2.0;
  return boost::math::beta((k + 1) / 2.0, a) / boost::math::beta(0.5, a);
}

}  // namespace

TEST_CASE("rule weights form a probability measure") {
  for (int d : {1, 2, 3, 5, 9}) {
    for (int n : {4, 16, 64}) {
      auto rule = make_rule(d, n);
      double sum = 0.0;
      for (double w : rule->weights()) {
        CHECK(w > 0.0);
        sum += w;
      }
      CHECK(std::abs(sum - 1.0) < 1e-14);
    }
  }
}

TEST_CASE("moments up to the exactness degree") {
  for (int d : {1, 2, 3, 4, 7}) {
    auto rule = make_rule(d, 12);
    for (int k = 0; k <= rule->exactness_degree(); ++k) {
      double q = 0.0;
      for (int j = 0; j < rule->size(); ++j) q += rule->weights()[j] * std::pow(rule->nodes()[j], k);
      CHECK(std::abs(q - exact_moment(d, k)) < 1e-12);
    }
  }
  auto arcsine = make_rule(1, 32);
  double m2 = 0.0;
  for (int j = 0; j < 32; ++j) m2 += arcsine->weights()[j] * arcsine->nodes()[j] * arcsine->nodes()[j];
  CHECK(std::abs(m2 - 0.5) < 1e-13);
}

TEST_CASE("Legendre rule for d = 2 integrates cubics at two nodes") {
  auto q = gauss_gegenbauer(0.5, 2);
  double cubic = 0.0, quad = 0.0;
  for (int j = 0; j < 2; ++j) {
    double z = q.nodes[j];
    cubic += q.weights[j] * (1.0 + 2.0 * z + 3.0 * z * z + 4.0 * z * z * z);
    quad += q.weights[j] * z * z;
  }
  CHECK(cubic == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(quad == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  double total = 0.0;
  for (double w : gauss_legendre(7).weights) total += w;
  CHECK(total == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("normalization constant") {
  CHECK(ultraspherical_mass(2) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(ultraspherical_mass(1) == doctest::Approx(M_PI).epsilon(1e-14));
  CHECK(ultraspherical_mass(3) == doctest::Approx(M_PI / 2.0).epsilon(1e-14));
}

TEST_CASE("basis is orthonormal and diagonalizes the operator") {
  for (int d : {1, 3, 6}) {
    const int n = 24;
    auto rule = make_rule(d, n);
    auto B = rule->basis();
    auto D = rule->basis_derivative();
    auto w = rule->weights();
    auto z = rule->nodes();
    for (int a = 0; a < n; a += 5) {
      for (int b = 0; b < n; b += 3) {
        double g = 0.0;
        for (int j = 0; j < n; ++j) g += w[j] * B[j * n + a] * B[j * n + b];
        CHECK(std::abs(g - (a == b ? 1.0 : 0.0)) < 1e-12);
      }
    }
    // Weak form of L p_k = -k(k+d-1) p_k: int (1-z^2) p_a' p_b' = lambda_a delta_ab.
    for (int a = 1; a < 10; ++a) {
      double g = 0.0;
      for (int j = 0; j < n; ++j) g += w[j] * (1.0 - z[j] * z[j]) * D[j * n + a] * D[j * n + a];
      CHECK(g == doctest::Approx(rule->eigenvalue(a)).epsilon(1e-11));
    }
  }
}

TEST_CASE("basis evaluation off the nodes matches the tabulated values") {
  auto rule = make_rule(4, 10);
  std::vector<double> v(10), dv(10);
  rule->evaluate_basis(rule->nodes()[3], v, dv);
  for (int k = 0; k < 10; ++k) {
    CHECK(v[k] == doctest::Approx(rule->basis()[3 * 10 + k]).epsilon(1e-12));
    CHECK(dv[k] == doctest::Approx(rule->basis_derivative()[3 * 10 + k]).epsilon(1e-10));
  }
}

TEST_CASE("small rules are rejected") {
  CHECK_THROWS_AS(make_rule(3, 3), DomainError);
  CHECK_THROWS_AS(make_rule(0, 8), DomainError);
}

TEST_CASE("parallel kernels are bit-identical to the serial ones") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (std::size_t rows : {std::size_t{17}, std::size_t{300}}) {
    const std::size_t cols = rows;
    std::vector<double> basis(rows * cols), coeffs(cols), weights(rows), vals(rows);
    for (auto& x : basis) x = nd(rng);
    for (auto& x : coeffs) x = nd(rng);
    for (auto& x : weights) x = std::abs(nd(rng));
    for (auto& x : vals) x = nd(rng);

    std::vector<double> s(rows), p(rows);
    kernels::serial::synthesize(basis, rows, cols, coeffs, s);
    kernels::parallel::synthesize(basis, rows, cols, coeffs, p);
    CHECK(s == p);

    std::vector<double> cs(cols), cp(cols);
    kernels::serial::analyze(basis, rows, cols, weights, vals, cs);
    kernels::parallel::analyze(basis, rows, cols, weights, vals, cp);
    CHECK(cs == cp);

    std::vector<double> big(20000), as(20000), ap(20000);
    for (auto& x : big) x = nd(rng);
    kernels::serial::abs_pow(big, 2.7, as);
    kernels::parallel::abs_pow(big, 2.7, ap);
    CHECK(as == ap);
  }
}

TEST_CASE("weighted reductions") {
  std::vector<double> w{0.25, 0.5, 0.25};
  std::vector<double> f{-2.0, 1.0, 3.0};
  CHECK(kernels::weighted_sum(w, f) == doctest::Approx(0.75));
  CHECK(kernels::weighted_abs_pow_sum(w, f, 2.0) == doctest::Approx(0.25 * 4 + 0.5 + 0.25 * 9));
}
