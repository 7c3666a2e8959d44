#include "fracpq/energy.hpp"

#include <cmath>

namespace fracpq {

EnergyBreakdown energy_breakdown(const GridFunction& u, const Problem& prob) {
  const ProblemParams& pp = prob.params;
  EnergyBreakdown e;
  e.term_p = seminorm_pow(u, prob.kernel_p) / pp.p;
  e.term_q = pp.beta * seminorm_pow(u, prob.kernel_q) / pp.q;
  e.term_a = pp.lambda * weighted_power_integral(u, prob.fields.a, pp.delta) / pp.delta;
  e.term_b = weighted_power_integral(u, prob.fields.b, pp.r) / pp.r;
  e.total = e.term_p + e.term_q - e.term_a - e.term_b;
  return e;
}

GridFunction energy_gradient(const GridFunction& u, const Problem& prob) {
  const ProblemParams& pp = prob.params;
  const double hn = u.grid->cell_measure();

  Eigen::ArrayXd g = form_gradient(u, prob.kernel_p);
  if (pp.beta != 0.0) g += pp.beta * form_gradient(u, prob.kernel_q);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    g[i] -= pp.lambda * prob.fields.a[i] * odd_power(u.values[i], pp.delta) * hn;
    g[i] -= prob.fields.b[i] * odd_power(u.values[i], pp.r) * hn;
  }
  return {u.grid, std::move(g)};
}

double residual_norm(const GridFunction& gradient) {
  const double hn = gradient.grid->cell_measure();
  return std::sqrt(gradient.values.square().sum()) * std::sqrt(hn);
}

double residual_norm(const GridFunction& u, const Problem& prob) {
  return residual_norm(energy_gradient(u, prob));
}

}  // namespace fracpq
