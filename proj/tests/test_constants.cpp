#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fracpq/constants.hpp"
#include "fracpq/fibering.hpp"
#include "fracpq/report.hpp"
#include "test_helpers.hpp"

using namespace fracpq;

TEST_CASE("Rayleigh quotient is scale invariant") {
  const Problem prob = assemble_problem(testutil::default_config(16));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> cdist(0.1, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    GridFunction u = testutil::random_sample(prob, rng);
    const double c = cdist(rng);
    CHECK(rayleigh_quotient(scaled(u, c), prob.params.r, prob) ==
          doctest::Approx(rayleigh_quotient(u, prob.params.r, prob)).epsilon(1e-11));
  }
}

TEST_CASE("three-node minimum matches a dense random search") {
  const Problem prob = assemble_problem(testutil::default_config(3));
  const double m = prob.params.r;
  GridFunction argmin;
  const double est = estimate_sobolev(m, prob, 5, 4000, &argmin);
  // the returned value is the quotient of the returned minimizer
  CHECK(est == doctest::Approx(rayleigh_quotient(argmin, m, prob)).epsilon(1e-10));

  std::mt19937_64 rng(424242);
  std::normal_distribution<double> gauss;
  double best = std::numeric_limits<double>::infinity();
  GridFunction u = GridFunction::zero(prob.grid);
  for (int k = 0; k < 1000000; ++k) {
    for (int i = 0; i < 3; ++i) u.values[i] = gauss(rng);
    const double nm = lebesgue_norm(u, m);
    if (nm == 0.0) continue;
    best = std::min(best, seminorm_pow(u, prob.kernel_p) / std::pow(nm, prob.params.p));
  }
  CHECK(est <= best * (1.0 + 1e-9));       // descent at least as good
  CHECK(est == doctest::Approx(best).epsilon(1e-3));
}

TEST_CASE("estimate stays within the refinement noise band") {
  double prev = 0.0;
  std::vector<double> values;
  for (int N : {16, 32, 64}) {
    const Problem prob = assemble_problem(testutil::default_config(N));
    const double s = estimate_sobolev(prob.params.r, prob);
    values.push_back(s);
    if (prev > 0.0) CHECK(s <= prev * 1.05);
    prev = s;
  }
  MESSAGE("refinement study S_r(16,32,64) = " << values[0] << ", " << values[1] << ", "
                                              << values[2]);
}

TEST_CASE("degenerate-set threshold formula") {
  ProblemParams pp;
  pp.n = 1;
  pp.s1 = 0.35;
  pp.s2 = 0.2;
  pp.p = 2.0;
  pp.q = 2.0;
  pp.delta = 1.0;  // formula check only; admissibility is not needed here
  pp.r = 4.0;
  const double l0 = lambda_zero(pp, 1.0, 1.0, 1.0);
  CHECK(l0 == doctest::Approx((2.0 / 3.0) * std::sqrt(1.0 / 3.0)).epsilon(1e-14));
  CHECK(l0 == doctest::Approx(0.384900179).epsilon(1e-8));

  // scales as 1/||a||
  CHECK(lambda_zero(pp, 1.0, 2.0, 1.0) == doctest::Approx(0.5 * l0).epsilon(1e-14));
  // doubling ||b|| multiplies by 2^{-(p-delta)/(r-p)}
  CHECK(lambda_zero(pp, 1.0, 1.0, 2.0) ==
        doctest::Approx(l0 * std::pow(2.0, -(pp.p - pp.delta) / (pp.r - pp.p)))
            .epsilon(1e-14));

  // positive on the desk configuration
  const Problem prob = assemble_problem(testutil::default_config(16));
  const double S_r = estimate_sobolev(prob.params.r, prob);
  CHECK(lambda_zero(prob.params, S_r, prob.fields.a_dual, prob.fields.b_sup) > 0.0);
}

TEST_CASE("hump coefficient is positive and scales with ||b||") {
  ProblemParams pp;
  pp.p = 2.5;
  pp.q = 2.0;
  pp.delta = 1.5;
  pp.r = 4.0;
  pp.n = 1;
  pp.s1 = 0.35;
  pp.s2 = 0.2;
  const double t0 = hump_coefficient(pp, 2.0, 1.0);
  CHECK(t0 > 0.0);
  CHECK(hump_coefficient(pp, 2.0, 2.0) ==
        doctest::Approx(t0 * std::pow(0.5, 1.0 / (pp.r - pp.p))).epsilon(1e-14));
}

TEST_CASE("critical energy floor constant") {
  // p* = 10 with n = 1, p = 2, s1 = 0.4.
  ProblemParams pp;
  pp.n = 1;
  pp.s1 = 0.4;
  pp.s2 = 0.2;
  pp.p = 2.0;
  pp.q = 2.0;
  pp.delta = 1.0;
  pp.r = 10.0;
  REQUIRE(pp.critical());

  const double lead = 9.0 * 1.0 / (2.0 * 1.0 * 10.0);
  const double mid = std::pow(9.0 / 8.0, 2.0);
  const double dom = std::pow(2.0, 2.0 * 9.0 / 10.0);
  CHECK(critical_cdelta(pp, 1.0, 1.0, 2.0) ==
        doctest::Approx(lead * mid * dom).epsilon(1e-13));

  // ||a|| -> 0 drives the constant to 0
  CHECK(critical_cdelta(pp, 1.0, 1e-10, 2.0) < 1e-9);
  // monotone increasing in the domain measure
  CHECK(critical_cdelta(pp, 1.0, 1.0, 3.0) > critical_cdelta(pp, 1.0, 1.0, 2.0));

  // refuses subcritical configurations
  ProblemParams sub = pp;
  sub.r = 4.0;
  CHECK_THROWS_AS(critical_cdelta(sub, 1.0, 1.0, 2.0), UsageError);
}

TEST_CASE("first critical level and its positivity threshold") {
  const Problem prob = assemble_problem(testutil::critical_config(12));
  const ProblemParams& pp = prob.params;
  const double S = 2.0;
  const double cd = critical_cdelta(pp, S, prob.fields.a_sup, prob.grid->domain_measure());

  // lambda = 0 leaves the pure Sobolev level
  CHECK(critical_level(pp, 0.0, cd, S) ==
        doctest::Approx(pp.s1 * std::pow(S, 1.0 / (pp.p * pp.s1))).epsilon(1e-14));

  // the threshold lambda drives the level to zero
  const double gate = critical_level_threshold(pp, cd, S);
  CHECK(critical_level(pp, gate, cd, S) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(critical_level(pp, 0.5 * gate, cd, S) > 0.0);
  CHECK(critical_level(pp, 2.0 * gate, cd, S) < 0.0);

  // hand recomputation
  const double lam = 0.3 * gate;
  const double byhand = pp.s1 / 1.0 * std::pow(S, 1.0 / (pp.p * pp.s1)) -
                        cd * std::pow(lam, pp.p / (pp.p - pp.delta));
  CHECK(critical_level(pp, lam, cd, S) == doctest::Approx(byhand).epsilon(1e-14));
}

TEST_CASE("norm window for minimizing sequences") {
  ProblemParams pp;
  pp.p = 2.5;
  pp.q = 2.0;
  pp.delta = 1.5;
  pp.r = 4.0;
  pp.n = 1;
  pp.s1 = 0.35;
  pp.s2 = 0.2;

  // hand evaluation at unit inputs
  const auto [lo, hi] = norm_window(pp, 1.0, -1.0, 1.0, 1.0);
  CHECK(lo == doctest::Approx(std::pow(1.5 * 4.0 / 2.5, 1.0 / 1.5)).epsilon(1e-13));
  CHECK(hi == doctest::Approx(std::pow(2.5 * 2.5 / (1.5 * 1.5), 1.0)).epsilon(1e-13));

  // With the branch level at its lambda^{p/(p-delta)} scaling, both ends
  // vanish as lambda -> 0 (power factors in lambda).
  const double lam_small = 1e-12;
  const double theta_scaled = -std::pow(lam_small, pp.p / (pp.p - pp.delta));
  const auto [lo2, hi2] = norm_window(pp, lam_small, theta_scaled, 1.0, 1.0);
  CHECK(lo2 < 1e-7);
  CHECK(hi2 < 1e-11);

  // monotone in ||a||
  const auto [lo3, hi3] = norm_window(pp, 1.0, -1.0, 1.0, 2.0);
  CHECK(hi3 > hi);
  CHECK(lo3 < lo);

  CHECK_THROWS_AS(norm_window(pp, 1.0, 0.5, 1.0, 1.0), PreconditionError);
}

TEST_CASE("ring geometry") {
  ProblemParams pp;
  pp.p = 2.5;
  pp.q = 2.0;
  pp.delta = 2.0;
  pp.r = 4.0;
  pp.n = 1;
  pp.s1 = 0.35;
  pp.s2 = 0.2;

  SUBCASE("p > q branch") {
    const MountainPassGeometry geo = mountain_pass_geometry(pp, 1.0, 1.0);
    const double t0 = std::pow(0.5 * 4.0 / (2.5 * 1.0 * 2.0), 1.0 / 1.5);
    CHECK(geo.rho == doctest::Approx(t0).epsilon(1e-13));
    CHECK(geo.f_t0 ==
          doctest::Approx(1.5 / (2.5 * 2.0) * std::pow(t0, 0.5)).epsilon(1e-13));
    CHECK(geo.f_t0 > 0.0);  // r > p
    CHECK(geo.eta == doctest::Approx(0.5 * geo.f_t0));
    CHECK(geo.lambda_star == doctest::Approx(pp.q * geo.f_t0 / 2.0).epsilon(1e-13));

    // C2 -> infinity shrinks the ring radius to zero
    const MountainPassGeometry tight = mountain_pass_geometry(pp, 1.0, 1e12);
    CHECK(tight.rho < 1e-7);
  }

  SUBCASE("p = q branch") {
    ProblemParams pq = pp;
    pq.p = 2.0;  // p = q = delta = 2
    const MountainPassGeometry geo = mountain_pass_geometry(pq, 1.0, 1.0);
    CHECK(geo.f_t0 == doctest::Approx(0.5).epsilon(1e-14));
    // f(rho) = f(0)/2: rho = (r/(2 p C2))^{1/(r-p)} = 1
    CHECK(geo.rho == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(geo.eta == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(geo.lambda_star == doctest::Approx(0.5).epsilon(1e-14));
  }

  SUBCASE("needs delta = q") {
    ProblemParams bad = pp;
    bad.delta = 1.5;
    CHECK_THROWS_AS(mountain_pass_geometry(bad, 1.0, 1.0), PreconditionError);
  }
}

TEST_CASE("concentration scales") {
  ProblemParams pp;
  pp.n = 1;
  pp.s1 = 0.4;  // p s1 = 0.8
  pp.s2 = 0.2;
  pp.p = 2.0;
  pp.q = 1.8;
  pp.delta = 1.5;
  pp.r = 4.0;

  // hand evaluation: exponent p(p-1)/((p-delta)(n-p s1)) = 2/(0.5*0.2) = 20
  const auto [eps, beta] = critical_scales(pp, 1e-3, 1.0, 0.5);
  CHECK(eps == doctest::Approx(1e-60).epsilon(1e-10));
  CHECK(beta == doctest::Approx(1e-30).epsilon(1e-10));

  // lambda -> 0 sends both scales to zero
  const auto [eps2, beta2] = critical_scales(pp, 1e-4, 1.0, 0.5);
  CHECK(eps2 < 1e-79);
  CHECK(beta2 < 1e-39);

  // alpha at its lower bound (n - p s1)/(p - 1) = 0.2 is rejected
  CHECK_THROWS_AS(critical_scales(pp, 1e-3, 1.0, 0.2), PreconditionError);
  // eps > kappa/2 violates the smallness requirement
  CHECK_THROWS_AS(critical_scales(pp, 0.99, 1e-30, 0.5), PreconditionError);
  // lambda must be positive
  CHECK_THROWS_AS(critical_scales(pp, 0.0, 1.0, 0.5), PreconditionError);
}

TEST_CASE("embedding quotients are positive") {
  const Problem prob = assemble_problem(testutil::mountain_pass_config(16));
  const auto [c1, c2] = measure_embedding_quotients(prob, 50);
  CHECK(c1 > 0.0);
  CHECK(c2 > 0.0);
}

TEST_CASE("full report: positivity and determinism") {
  const Problem prob = assemble_problem(testutil::default_config(16));
  const ConstantsReport rep = build_constants_report(prob);
  CHECK(rep.S_r > 0.0);
  CHECK(rep.S_crit > 0.0);
  CHECK(rep.lambda_0 > 0.0);
  CHECK(rep.T0_coefficient > 0.0);
  CHECK(rep.theta_plus_bound < 0.0);
  CHECK(rep.bound_lo > 0.0);
  CHECK(rep.bound_hi > 0.0);
  CHECK(rep.bound_lo < rep.bound_hi);
  CHECK_FALSE(rep.C_delta.has_value());  // subcritical

  const ConstantsReport again = build_constants_report(prob);
  CHECK(to_json(rep).dump() == to_json(again).dump());

  // critical configuration exposes the critical constants
  const Problem crit = assemble_problem(testutil::critical_config(12));
  const ConstantsReport crep = build_constants_report(crit);
  REQUIRE(crep.C_delta.has_value());
  REQUIRE(crep.c_infty.has_value());
  CHECK(*crep.C_delta > 0.0);
  REQUIRE(crep.lambda_gate.has_value());
  CHECK(*crep.lambda_gate > 0.0);

  // delta = q configuration exposes the ring geometry
  const Problem mp = assemble_problem(testutil::mountain_pass_config(12));
  const ConstantsReport mrep = build_constants_report(mp);
  REQUIRE(mrep.mountain_pass.has_value());
  CHECK(mrep.mountain_pass->rho > 0.0);
  CHECK(mrep.mountain_pass->eta > 0.0);
  CHECK(mrep.mountain_pass->lambda_star > 0.0);
}

TEST_CASE("threshold consistency with the ray classification") {
  const Problem base = assemble_problem(testutil::default_config(24));
  const double S_r = estimate_sobolev(base.params.r, base);
  const double l0 = lambda_zero(base.params, S_r, base.fields.a_dual, base.fields.b_sup);

  const Problem below = with_lambda(base, 0.5 * l0);
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    GridFunction u = testutil::sample_with_signs(below, rng, +1, +1);
    const FiberingProfile prof = classify(u, below);
    CHECK(prof.found_roots == 2);
  }

  // Above the threshold the two-root structure may disappear; count and
  // report rather than assert (the threshold is a sufficient condition, so
  // samples can keep their roots well past it).
  const Problem above = with_lambda(base, 2.0 * l0);
  int no_roots = 0;
  for (int trial = 0; trial < 100; ++trial) {
    GridFunction u = testutil::sample_with_signs(above, rng, +1, +1);
    if (classify(u, above).no_roots) ++no_roots;
  }
  MESSAGE("no-root outcomes at 2*lambda_0: " << no_roots << "/100");

  // Forcing lambda past one sample's personal hump level must flag NoRoots.
  GridFunction u = testutil::sample_with_signs(base, rng, +1, +1);
  const FiberingProfile prof = classify(u, base);
  REQUIRE(prof.t_max.has_value());
  const double lam_over = 1.01 * prof.map.slope(*prof.t_max) / prof.map.Ia;
  const FiberingProfile over = classify(u, with_lambda(base, lam_over));
  CHECK(over.no_roots);
  CHECK(over.found_roots == 0);
}
