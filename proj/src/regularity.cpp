#include "fracpq/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracpq/constants.hpp"
#include "fracpq/fibering.hpp"
#include "fracpq/kernel.hpp"

namespace fracpq {

namespace {

std::vector<double> truncation_norms(const Eigen::ArrayXd& v, double r, double hn, int K) {
  std::vector<double> U(static_cast<std::size_t>(K) + 1, 0.0);
  for (int k = 0; k <= K; ++k) {
    const double shift = 1.0 - std::pow(2.0, -k);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double w = v[i] - shift;
      if (w > 0.0) sum += std::pow(w, r);
    }
    U[static_cast<std::size_t>(k)] = sum * hn;
  }
  return U;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return 0.0;
  return (n * sxy - sx * sy) / denom;
}

}  // namespace

DeGiorgiTrace degiorgi_verify(const GridFunction& u, const Problem& prob, int K,
                              std::optional<double> rho_override) {
  const ProblemParams& pp = prob.params;
  if (pp.critical())
    throw PreconditionError(
        "the uniform-bound iteration needs r below the critical exponent");
  if (K < 1) throw PreconditionError("need at least one truncation level");

  DeGiorgiTrace tr;
  const double hn = u.grid->cell_measure();
  const double norm_r = lebesgue_norm(u, pp.r);

  if (norm_r == 0.0) {
    tr.rho = rho_override.value_or(1.0);
    tr.v = GridFunction::zero(u.grid);
    tr.U.assign(static_cast<std::size_t>(K) + 1, 0.0);
    tr.eta = 0.5;
    tr.growth_const = 2.0;
    tr.decay_ok = true;
    tr.linf_bound = 0.0;
    tr.linf_ok = true;
    return tr;
  }

  const double n = static_cast<double>(pp.n);
  const double r = pp.r;
  const double growth_exp = 1.0 + r * pp.s1 / n;
  const double norm_pow = r * r / pp.p - r;  // exponent of (rho ||u||_r)

  // Measure the per-step constant C from the first iterates of a provisional
  // normalization, then fix it.
  const double rho_probe = rho_override.value_or(std::max(1.0, 1.0 / norm_r));
  {
    const Eigen::ArrayXd v_probe = u.values / (rho_probe * norm_r);
    const std::vector<double> Up = truncation_norms(v_probe, r, hn, 4);
    const double A = std::pow(rho_probe * norm_r, norm_pow);
    double c = 1.000001;
    for (int k = 1; k <= 3; ++k) {
      const double num = Up[static_cast<std::size_t>(k) + 1];
      const double den = A * std::pow(Up[static_cast<std::size_t>(k)], growth_exp);
      if (num > 0.0 && den > 0.0)
        c = std::max(c, std::pow(num / den, 1.0 / static_cast<double>(k)));
    }
    tr.growth_const = c;
  }

  tr.eta = std::pow(tr.growth_const, -n / (r * pp.s1));
  const double gamma = r * r * pp.s1 / n + r - r * r / pp.p;
  if (rho_override) {
    tr.rho = *rho_override;
  } else {
    tr.rho = std::max(
        {1.0, 1.0 / norm_r, std::pow(std::pow(norm_r, norm_pow) / tr.eta, 1.0 / gamma),
         std::pow(tr.growth_const, n * n / std::pow(r * pp.s1, 2))});
  }

  tr.v = GridFunction{u.grid, u.values / (tr.rho * norm_r)};
  tr.U = truncation_norms(tr.v.values, r, hn, K);

  tr.decay_ok = true;
  const double base = std::pow(tr.rho, -r);
  for (int k = 0; k <= K; ++k) {
    if (tr.U[static_cast<std::size_t>(k)] > std::pow(tr.eta, k) * base * (1.0 + 1e-12)) {
      tr.decay_ok = false;
      break;
    }
  }

  tr.linf_bound = tr.rho * norm_r;
  tr.linf_ok = u.values.abs().maxCoeff() <= tr.linf_bound;
  return tr;
}

RegularityReport holder_exponent(const GridFunction& u, const Problem& prob,
                                 const Eigen::Vector2d& x0,
                                 const std::vector<double>& radii) {
  const Grid& g = *u.grid;
  if (radii.empty()) throw GeometryError("need at least one probe radius");
  for (int a = 0; a < g.n; ++a)
    if (!(g.lo[a] < x0[a] && x0[a] < g.hi[a]))
      throw GeometryError("probe center must lie inside the domain");

  std::vector<double> dist(static_cast<std::size_t>(g.size()));
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    dist[static_cast<std::size_t>(i)] =
        g.n == 1 ? std::abs(g.coords(i, 0) - x0[0])
                 : std::hypot(g.coords(i, 0) - x0[0], g.coords(i, 1) - x0[1]);
  }

  RegularityReport rep;
  const double r_min = *std::min_element(radii.begin(), radii.end());
  std::size_t smallest_count = 0;

  for (double radius : radii) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    std::size_t count = 0;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      if (dist[static_cast<std::size_t>(i)] <= radius) {
        lo = std::min(lo, u.values[i]);
        hi = std::max(hi, u.values[i]);
        ++count;
      }
    }
    if (radius == r_min) smallest_count = count;
    rep.osc_table.emplace_back(radius, count > 0 ? hi - lo : 0.0);
  }
  if (smallest_count < 3)
    throw GeometryError("smallest probe ball must contain at least 3 nodes");

  std::vector<double> lx, ly;
  for (const auto& [radius, osc] : rep.osc_table)
    if (osc > 0.0) {
      lx.push_back(std::log(radius));
      ly.push_back(std::log(osc));
    }
  if (lx.size() >= 2) rep.alpha_fit = least_squares_slope(lx, ly);

  const double R0 = *std::max_element(radii.begin(), radii.end());
  rep.tail_p = nonlocal_tail(u, x0, R0, prob.kernel_p);
  rep.tail_q = nonlocal_tail(u, x0, R0, prob.kernel_q);
  rep.q_value = u.values.abs().maxCoeff() + rep.tail_p;
  rep.alpha_ceiling = (prob.params.p * prob.params.s1 - prob.params.q * prob.params.s2) /
                      (prob.params.p - 1.0);
  return rep;
}

void CutoffParams::validate(const Grid& grid) const {
  if (!(eps > 0.0) || eps > 0.5 * kappa * (1.0 + 1e-12))
    throw PreconditionError("cutoff needs 0 < eps <= kappa/2");
  if (!(theta > 1.0)) throw PreconditionError("cutoff needs theta > 1");
  double inradius = std::numeric_limits<double>::infinity();
  for (int a = 0; a < grid.n; ++a) {
    if (!(grid.lo[a] < 0.0 && 0.0 < grid.hi[a]))
      throw PreconditionError("cutoff construction needs the origin inside the domain");
    inradius = std::min({inradius, -grid.lo[a], grid.hi[a]});
  }
  if (!(theta * kappa < inradius))
    throw PreconditionError("cutoff support B_{theta kappa} must fit inside the domain");
}

double minimizer_profile(double rho, const ProblemParams& pp) {
  const double mu = (static_cast<double>(pp.n) - pp.p * pp.s1) / (pp.p - 1.0);
  return rho <= 1.0 ? 1.0 : std::pow(rho, -mu);
}

double rescaled_profile(double rho, double eps, const ProblemParams& pp) {
  const double scale = std::pow(eps, -(static_cast<double>(pp.n) - pp.p * pp.s1) / pp.p);
  return scale * minimizer_profile(rho / eps, pp);
}

double cutoff_transfer(double t, const CutoffParams& cp, const ProblemParams& pp) {
  const double u_hi = rescaled_profile(cp.kappa, cp.eps, pp);
  const double u_lo = rescaled_profile(cp.theta * cp.kappa, cp.eps, pp);
  const double m = u_hi / (u_hi - u_lo);
  if (t <= u_lo) return 0.0;
  if (t <= u_hi) return m * (t - u_lo);
  return t;
}

double cutoff_slope_transfer(double t, const CutoffParams& cp, const ProblemParams& pp) {
  const double u_hi = rescaled_profile(cp.kappa, cp.eps, pp);
  const double u_lo = rescaled_profile(cp.theta * cp.kappa, cp.eps, pp);
  const double m = u_hi / (u_hi - u_lo);
  if (t <= u_lo) return 0.0;
  if (t <= u_hi) return std::pow(m, pp.p) * (t - u_lo);
  return t + u_hi * (std::pow(m, pp.p - 1.0) - 1.0);
}

double cutoff_profile(double rho, const CutoffParams& cp, const ProblemParams& pp) {
  return cutoff_transfer(rescaled_profile(rho, cp.eps, pp), cp, pp);
}

GridFunction build_cutoff(const CutoffParams& cp, const GridPtr& grid,
                          const ProblemParams& pp) {
  cp.validate(*grid);
  GridFunction u = GridFunction::zero(grid);
  for (Eigen::Index i = 0; i < grid->size(); ++i) {
    const double rho = grid->n == 1 ? std::abs(grid->coords(i, 0))
                                    : std::hypot(grid->coords(i, 0), grid->coords(i, 1));
    u.values[i] = cutoff_profile(rho, cp, pp);
  }
  return u;
}

CutoffTrends cutoff_scaling_table(double kappa, const std::vector<double>& eps_list,
                                  const Problem& prob, double S_crit, double theta) {
  const ProblemParams& pp = prob.params;
  CutoffTrends out;
  out.s_power =
      std::pow(S_crit, static_cast<double>(pp.n) / (pp.p * pp.s1));

  const double pc = pp.critical_exponent();
  std::vector<double> x_excess, x_deficit, y_excess, y_deficit;
  for (double eps : eps_list) {
    CutoffParams cp{eps, kappa, theta};
    GridFunction u = build_cutoff(cp, prob.grid, pp);
    CutoffTrendRow row;
    row.eps = eps;
    row.seminorm_excess = seminorm_pow(u, prob.kernel_p) - out.s_power;
    row.mass_deficit = out.s_power - std::pow(lebesgue_norm(u, pc), pc);
    out.rows.push_back(row);

    const double ratio = eps / kappa;
    const double mu = (static_cast<double>(pp.n) - pp.p * pp.s1) / (pp.p - 1.0);
    x_excess.push_back(std::pow(ratio, mu));
    x_deficit.push_back(std::pow(ratio, static_cast<double>(pp.n) / (pp.p - 1.0)));
    y_excess.push_back(row.seminorm_excess);
    y_deficit.push_back(row.mass_deficit);
  }
  if (out.rows.size() >= 2) {
    out.excess_slope = least_squares_slope(x_excess, y_excess);
    out.deficit_slope = least_squares_slope(x_deficit, y_deficit);
  }
  return out;
}

CriticalProbe critical_level_probe(const Problem& prob, double kappa, double alpha,
                                   double theta) {
  const ProblemParams& pp = prob.params;
  if (!pp.critical())
    throw PreconditionError("the energy-level probe needs the critical configuration");
  const double hyp = static_cast<double>(pp.n) * (pp.p - 1.0) /
                     (static_cast<double>(pp.n) - pp.p * pp.s1);
  if (!(1.0 < hyp && hyp <= pp.delta))
    throw PreconditionError("probe needs 1 < n(p-1)/(n - p s1) <= delta");

  CriticalProbe probe;
  const auto [eps, beta] = critical_scales(pp, pp.lambda, kappa, alpha);
  probe.eps = eps;
  probe.beta = beta;

  const Problem scaled_prob = with_beta(prob, beta);
  CutoffParams cp{eps, kappa, theta};
  const GridFunction u = build_cutoff(cp, prob.grid, pp);
  const FiberingMap map = fibering_map(u, scaled_prob);
  if (!(map.Ib > 0.0))
    throw PreconditionError("ray supremum is unbounded: int b |u|^r <= 0 on the bump");
  probe.sup_ray = map.psi(ray_argmax(map));

  const double S_crit = estimate_sobolev(pp.critical_exponent(), prob);
  const double cd =
      critical_cdelta(pp, S_crit, prob.fields.a_sup, prob.grid->domain_measure());
  probe.c_infty = critical_level(pp, pp.lambda, cd, S_crit);
  probe.pass = probe.sup_ray < probe.c_infty;
  return probe;
}

}  // namespace fracpq
