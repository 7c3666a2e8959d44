#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fracpq/energy.hpp"
#include "oracle.hpp"
#include "test_helpers.hpp"

using namespace fracpq;

namespace {

double fd_directional(const GridFunction& u, const GridFunction& v, const Problem& prob,
                      double step = 1e-6) {
  GridFunction up{u.grid, u.values + step * v.values};
  GridFunction dn{u.grid, u.values - step * v.values};
  return (energy(up, prob) - energy(dn, prob)) / (2.0 * step);
}

}  // namespace

TEST_CASE("energy of zero and term isolation") {
  const Problem prob = assemble_problem(testutil::default_config(24));
  GridFunction zero = GridFunction::zero(prob.grid);
  const EnergyBreakdown e0 = energy_breakdown(zero, prob);
  CHECK(e0.term_p == 0.0);
  CHECK(e0.term_q == 0.0);
  CHECK(e0.term_a == 0.0);
  CHECK(e0.term_b == 0.0);
  CHECK(e0.total == 0.0);

  // lambda = 0, beta = 0, b = 0: only the leading kernel term survives.
  nlohmann::json cfg = testutil::default_config(24);
  cfg["lambda"] = 0.0;
  cfg["beta"] = 0.0;
  cfg["b"] = "0";
  const Problem bare = assemble_problem(cfg);
  std::mt19937_64 rng(5);
  GridFunction u = testutil::random_sample(bare, rng);
  const EnergyBreakdown e = energy_breakdown(u, bare);
  CHECK(e.term_q == 0.0);
  CHECK(e.term_a == 0.0);
  CHECK(e.term_b == 0.0);
  CHECK(e.total ==
        doctest::Approx(seminorm_pow(u, bare.kernel_p) / bare.params.p).epsilon(1e-14));
}

TEST_CASE("energy matches an independent reassembly") {
  const Problem prob = assemble_problem(testutil::default_config(32));
  GridFunction u = GridFunction::zero(prob.grid);
  for (Eigen::Index i = 0; i < prob.grid->size(); ++i)
    u.values[i] = std::sin(M_PI * prob.grid->coords(i, 0));
  const double lib = energy(u, prob);
  const double ref = oracle::energy(u, prob.params, prob.fields.a, prob.fields.b);
  CHECK(lib == doctest::Approx(ref).epsilon(1e-12));

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    GridFunction w = testutil::random_sample(prob, rng);
    CHECK(energy(w, prob) ==
          doctest::Approx(oracle::energy(w, prob.params, prob.fields.a, prob.fields.b))
              .epsilon(1e-12));
  }
}

TEST_CASE("breakdown total identity") {
  const Problem prob = assemble_problem(testutil::default_config(24));
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    GridFunction u = testutil::random_sample(prob, rng);
    const EnergyBreakdown e = energy_breakdown(u, prob);
    const double recomposed = e.term_p + e.term_q - e.term_a - e.term_b;
    CHECK(e.total == doctest::Approx(recomposed).epsilon(1e-14));
  }
}

TEST_CASE("gradient of zero vanishes") {
  const Problem prob = assemble_problem(testutil::default_config(24));
  GridFunction zero = GridFunction::zero(prob.grid);
  GridFunction g = energy_gradient(zero, prob);
  CHECK(g.values.abs().maxCoeff() == 0.0);
  CHECK(residual_norm(zero, prob) == 0.0);
}

TEST_CASE("p = 2 pure kernel gradient is a symmetric linear map") {
  nlohmann::json cfg = testutil::default_config(16);
  cfg["lambda"] = 0.0;
  cfg["beta"] = 0.0;
  cfg["b"] = "0";
  cfg["p"] = 2.0;
  cfg["q"] = 2.0;
  cfg["delta"] = 1.5;
  cfg["r"] = 4.0;
  const Problem prob = assemble_problem(cfg);

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    GridFunction v = testutil::random_sample(prob, rng);
    GridFunction w = testutil::random_sample(prob, rng);
    // <A v, w> = <v, A w> for the linear (p = 2) operator
    const double lhs = (energy_gradient(v, prob).values * w.values).sum();
    const double rhs = (energy_gradient(w, prob).values * v.values).sum();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
    // linearity
    GridFunction sum{v.grid, v.values + w.values};
    const Eigen::ArrayXd gsum = energy_gradient(sum, prob).values;
    const Eigen::ArrayXd gsep =
        energy_gradient(v, prob).values + energy_gradient(w, prob).values;
    CHECK((gsum - gsep).abs().maxCoeff() <= 1e-11 * gsum.abs().maxCoeff());
  }
}

TEST_CASE("gradient consistency against central differences") {
  const Problem prob = assemble_problem(testutil::default_config(32));
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    GridFunction u = testutil::random_sample(prob, rng);
    const GridFunction grad = energy_gradient(u, prob);
    for (int dir = 0; dir < 10; ++dir) {
      GridFunction v = testutil::random_sample(prob, rng);
      const double exact = (grad.values * v.values).sum();
      const double approx = fd_directional(u, v, prob);
      CHECK(std::abs(exact - approx) / (1.0 + std::abs(approx)) < 1e-5);
    }
  }
}

TEST_CASE("even data gives an even gradient") {
  const Problem prob = assemble_problem(testutil::default_config(33));
  const Eigen::Index n = prob.grid->size();
  GridFunction u = GridFunction::zero(prob.grid);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = prob.grid->coords(i, 0);
    u.values[i] = std::cos(M_PI * x) + 0.3 * x * x;
  }
  // a = cos(pi x) and b = 1 - 2x^2 are even; the grid is symmetric.
  const GridFunction g = energy_gradient(u, prob);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index mirror = n - 1 - i;
    CHECK(g.values[i] == doctest::Approx(g.values[mirror]).epsilon(1e-12));
  }
}

TEST_CASE("residual is nonzero away from critical points") {
  // A normalized random function is not a critical point of the bare kernel
  // energy.
  nlohmann::json cfg = testutil::default_config(24);
  cfg["lambda"] = 0.0;
  cfg["beta"] = 0.0;
  cfg["b"] = "0";
  const Problem bare = assemble_problem(cfg);
  std::mt19937_64 rng(3);
  GridFunction u = testutil::random_sample(bare, rng);
  u.values /= lebesgue_norm(u, 2.0);
  CHECK(residual_norm(u, bare) > 0.0);
}
