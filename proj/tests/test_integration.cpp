#include <cmath>
#include <random>

#include "doctest.h"
#include "gnsphere/bounds.hpp"
#include "gnsphere/exponents.hpp"
#include "gnsphere/flows.hpp"
#include "gnsphere/phi.hpp"
#include "gnsphere/sphere_calculus.hpp"
#include "gnsphere/stereographic.hpp"
#include "gnsphere/variational.hpp"

using namespace gnsphere;

TEST_CASE("improved inequality holds along the heat flow") {
  auto pp = make_parameter_point(3, 3.0);
  auto rule = make_rule(3, 48);
  std::mt19937_64 rng(83);
  auto u0 = random_positive_function(rule, rng, 6, 0.4);
  FlowConfig cfg;
  cfg.setting = heat_flow_setting(pp);
  cfg.time_horizon = 0.5;
  cfg.samples = 65;
  auto res = run_heat_flow(u0, cfg);
  for (double l : res.trace.lyapunov) CHECK(l >= -1e-9);
  auto phi = heat_phi(pp);
  auto end = deficit(res.final_state, InequalityId::ImprovedPhi, {.p = 3.0, .phi = phi});
  CHECK(end.deficit >= -deficit_tolerance(end.lhs));
  CHECK(certify_ode_chain(res.trace, pp).pass);
}

TEST_CASE("numerical minimizer respects the improved inequality") {
  RayleighProblem pb;
  pb.pp = make_parameter_point(3, 3.0);
  pb.parameter = 3.0;
  auto res = best_constant(pb);
  auto gns = deficit(res.minimizer, InequalityId::Gns, {.p = 3.0});
  auto imp = deficit(res.minimizer, InequalityId::ImprovedHeat, {.p = 3.0});
  CHECK(gns.deficit >= -1e-9);
  CHECK(imp.deficit >= -deficit_tolerance(imp.lhs));
  CHECK(res.value >= mu_lower_thm2(pb.pp, 3.0) - 1e-9);
}

TEST_CASE("Euclidean and sphere forms of the base inequality agree") {
  auto rule = make_rule(3, 96);
  std::mt19937_64 rng(89);
  for (int n = 0; n < 10; ++n) {
    auto u = random_positive_function(rule, rng, 8, 0.4);
    auto sphere = deficit(u, InequalityId::Gns, {.p = 3.0});
    auto eucl = euclidean_deficit(push_forward(u), EuclideanInequalityId::Weighted, {.p = 3.0});
    // Both vanish together and share a sign.
    CHECK((sphere.deficit >= -1e-10) == (eucl.deficit >= -1e-10 * (1.0 + std::abs(eucl.lhs))));
  }
}
