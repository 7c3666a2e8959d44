#include "fracpq/constants.hpp"

#include <cmath>
#include <limits>

#include "fracpq/fibering.hpp"
#include "fracpq/random.hpp"

namespace fracpq {

double rayleigh_quotient(const GridFunction& u, double m, const Problem& prob) {
  const double denom = lebesgue_norm(u, m);
  if (denom == 0.0) throw PreconditionError("Rayleigh quotient of the zero function");
  return seminorm_pow(u, prob.kernel_p) / std::pow(denom, prob.params.p);
}

double estimate_sobolev(double m, const Problem& prob, int restarts, int max_iter,
                        GridFunction* argmin_out) {
  const ProblemParams& pp = prob.params;
  if (!(m >= 1.0) || m > pp.critical_exponent() * (1.0 + 1e-12))
    throw PreconditionError("Sobolev exponent must satisfy 1 <= m <= p*n/(n-p*s1)");

  const double hn = prob.grid->cell_measure();
  double best = std::numeric_limits<double>::infinity();

  // Restart 0 is the deterministic positive profile: the minimizer is
  // sign-definite, and the positive start reliably sits in its basin. The
  // remaining restarts are isotropic nodal noise.
  for (int rst = 0; rst <= restarts; ++rst) {
    std::mt19937_64 rng(
        derive_seed(prob.seed, "sobolev-" + std::to_string(m) + "-" + std::to_string(rst)));
    GridFunction u{prob.grid, Eigen::ArrayXd::Ones(prob.grid->size())};
    if (rst > 0) {
      std::normal_distribution<double> gauss;
      for (Eigen::Index i = 0; i < u.values.size(); ++i) u.values[i] = gauss(rng);
    }
    double nm = lebesgue_norm(u, m);
    while (nm == 0.0) {
      std::normal_distribution<double> gauss;
      for (Eigen::Index i = 0; i < u.values.size(); ++i) u.values[i] = gauss(rng);
      nm = lebesgue_norm(u, m);
    }
    u.values /= nm;

    double fval = seminorm_pow(u, prob.kernel_p);
    double step = 0.5;
    int resets = 3;
    for (int it = 0; it < max_iter; ++it) {
      // Gradient of the quotient on the unit L^m sphere, up to the harmless
      // overall factor p: form_gradient is the (1/p)-scaled derivative of the
      // numerator, so the denominator term is scaled to match.
      Eigen::ArrayXd g = form_gradient(u, prob.kernel_p);
      for (Eigen::Index i = 0; i < g.size(); ++i)
        g[i] -= fval * odd_power(u.values[i], m) * hn;

      bool improved = false;
      step = std::min(step * 4.0, 1e3);  // let the search regrow after rough stretches
      for (int halve = 0; halve < 60; ++halve) {
        GridFunction v{u.grid, u.values - step * g};
        const double nv = lebesgue_norm(v, m);
        if (nv > 0.0) {
          v.values /= nv;
          const double fv = seminorm_pow(v, prob.kernel_p);
          if (fv < fval * (1.0 - 1e-15)) {
            u = std::move(v);
            fval = fv;
            improved = true;
            break;
          }
        }
        step *= 0.5;
      }
      if (!improved) {
        if (resets-- <= 0) break;
        step = 0.5;
      }
    }
    if (fval < best) {
      best = fval;
      if (argmin_out) *argmin_out = u;
    }
  }
  return best;
}

double lambda_zero(const ProblemParams& pp, double S_r, double a_dual, double b_sup) {
  if (!(S_r > 0.0 && a_dual > 0.0 && b_sup > 0.0))
    throw PreconditionError("lambda_0 needs positive S_r, ||a|| and ||b||");
  const double d = pp.delta;
  const double first = (pp.r - pp.p) * std::pow(S_r, d / pp.p) / ((pp.r - d) * a_dual);
  const double second = (pp.p - d) * std::pow(S_r, pp.r / pp.p) / ((pp.r - d) * b_sup);
  return first * std::pow(second, (pp.p - d) / (pp.r - pp.p));
}

double hump_coefficient(const ProblemParams& pp, double S_r, double b_sup) {
  if (!(S_r > 0.0 && b_sup > 0.0))
    throw PreconditionError("hump coefficient needs positive S_r and ||b||");
  const double d = pp.delta;
  return std::pow((pp.p - d) * std::pow(S_r, pp.r / pp.p) / ((pp.r - d) * b_sup),
                  1.0 / (pp.r - pp.p));
}

double critical_cdelta(const ProblemParams& pp, double S_crit, double a_sup,
                       double domain_measure) {
  if (!pp.critical())
    throw UsageError("energy floor constant is defined for the critical configuration");
  const double d = pp.delta;
  const double pc = pp.critical_exponent();
  const double lead = (pc - d) * (pp.p - d) / (pp.p * d * pc);
  const double mid = std::pow((pc - d) / (pc - pp.p), pp.p * d / (pp.p - d));
  return lead * mid * std::pow(S_crit, -d / (pp.p - d)) *
         std::pow(a_sup, pp.p / (pp.p - d)) *
         std::pow(domain_measure, pp.p * (pc - d) / ((pp.p - d) * pc));
}

double critical_level(const ProblemParams& pp, double lambda, double C_delta,
                      double S_crit) {
  const double n = static_cast<double>(pp.n);
  return pp.s1 / n * std::pow(S_crit, n / (pp.p * pp.s1)) -
         C_delta * std::pow(lambda, pp.p / (pp.p - pp.delta));
}

double critical_level_threshold(const ProblemParams& pp, double C_delta, double S_crit) {
  const double n = static_cast<double>(pp.n);
  return std::pow(pp.s1 * std::pow(S_crit, n / (pp.p * pp.s1)) / (n * C_delta),
                  (pp.p - pp.delta) / pp.p);
}

std::pair<double, double> norm_window(const ProblemParams& pp, double lambda,
                                      double theta_plus, double S_r, double a_dual) {
  if (!(theta_plus < 0.0))
    throw PreconditionError("norm window needs a negative branch infimum");
  if (!(lambda > 0.0)) throw PreconditionError("norm window needs lambda > 0");
  const double d = pp.delta;
  const double srd = std::pow(S_r, d / pp.p);
  // Lower bound from 0 > theta+ >= -lambda (1/d - 1/r) int a|u|^d on the
  // Nehari set; the lambda sits under the fraction.
  const double lo = std::pow(
      (-theta_plus) * d * pp.r * srd / (lambda * (pp.r - d) * a_dual), 1.0 / d);
  const double hi = std::pow(lambda * pp.p * (pp.r - d) * a_dual / (d * (pp.r - pp.p) * srd),
                             1.0 / (pp.p - d));
  return {lo, hi};
}

MountainPassGeometry mountain_pass_geometry(const ProblemParams& pp, double C1,
                                            double C2) {
  if (std::abs(pp.delta - pp.q) > 1e-14)
    throw PreconditionError("ring geometry applies to the delta = q configuration");
  if (!(C2 > 0.0)) throw PreconditionError("ring geometry needs C2 > 0");
  if (!(C1 > 0.0)) throw PreconditionError("ring geometry needs C1 > 0");

  MountainPassGeometry geo;
  geo.c1 = C1;
  geo.c2 = C2;
  if (pp.p - pp.q > 1e-14) {
    geo.t0 = std::pow((pp.p - pp.q) * pp.r / (pp.p * C2 * (pp.r - pp.q)),
                      1.0 / (pp.r - pp.p));
    geo.f_t0 = (pp.r - pp.p) / (pp.p * (pp.r - pp.q)) * std::pow(geo.t0, pp.p - pp.q);
    geo.rho = geo.t0;
  } else {
    // p = q: f(t) = 1/p - C2 t^{r-p}/r peaks at 0; place the ring where f has
    // dropped to half its supremum.
    geo.t0 = 0.0;
    geo.f_t0 = 1.0 / pp.p;
    geo.rho = std::pow(pp.r / (2.0 * pp.p * C2), 1.0 / (pp.r - pp.p));
  }
  geo.eta = 0.5 * geo.f_t0;
  geo.lambda_star = pp.q * geo.f_t0 / (2.0 * C1);
  return geo;
}

std::pair<double, double> measure_embedding_quotients(const Problem& prob, int samples) {
  const ProblemParams& pp = prob.params;
  std::mt19937_64 rng(derive_seed(prob.seed, "embedding-quotients"));
  double c1 = 0.0, c2 = 0.0;
  for (int k = 0; k < samples; ++k) {
    GridFunction u = fourier_sample(prob.grid, rng);
    const double P = seminorm_pow(u, prob.kernel_p);
    if (P <= 0.0) continue;
    const double norm_p = std::pow(P, 1.0 / pp.p);
    const double ia = weighted_power_integral(u, prob.fields.a, pp.q);
    const double ib = weighted_power_integral(u, prob.fields.b, pp.r);
    c1 = std::max(c1, ia / std::pow(norm_p, pp.q));
    c2 = std::max(c2, ib / std::pow(norm_p, pp.r));
  }
  return {std::max(c1, 1e-12), std::max(c2, 1e-12)};
}

std::pair<double, double> critical_scales(const ProblemParams& pp, double lambda,
                                          double kappa, double alpha) {
  if (!(lambda > 0.0)) throw PreconditionError("concentration scales need lambda > 0");
  const double alpha_min = (static_cast<double>(pp.n) - pp.p * pp.s1) / (pp.p - 1.0);
  if (!(alpha > alpha_min * (1.0 + 1e-12)))
    throw PreconditionError("exponent alpha must exceed (n - p s1)/(p - 1) strictly");
  const double eps = std::pow(
      lambda, pp.p * (pp.p - 1.0) /
                  ((pp.p - pp.delta) * (static_cast<double>(pp.n) - pp.p * pp.s1)));
  if (eps > 0.5 * kappa)
    throw PreconditionError("concentration scale violates eps <= kappa/2");
  return {eps, std::pow(eps, alpha)};
}

ConstantsReport build_constants_report(const Problem& prob) {
  const ProblemParams& pp = prob.params;
  ConstantsReport rep;
  rep.S_r = estimate_sobolev(pp.r, prob);
  rep.S_crit = pp.critical() ? rep.S_r : estimate_sobolev(pp.critical_exponent(), prob);
  rep.lambda_0 = lambda_zero(pp, rep.S_r, prob.fields.a_dual, prob.fields.b_sup);
  rep.T0_coefficient = hump_coefficient(pp, rep.S_r, prob.fields.b_sup);

  // Branch-infimum bound from a seeded local-minimum projection; feeds the
  // norm window when lambda > 0.
  if (pp.lambda > 0.0) {
    std::mt19937_64 rng(derive_seed(prob.seed, "theta-plus-sample"));
    for (int tries = 0; tries < 200; ++tries) {
      GridFunction u = fourier_sample(prob.grid, rng);
      const FiberingMap map = fibering_map(u, prob);
      if (map.Ia <= 0.0) continue;
      const FiberingProfile prof = classify_map(map);
      if (!prof.t_plus) continue;
      const double C2 = std::pow(*prof.t_plus, pp.p) * map.P;
      rep.theta_plus_bound =
          -(pp.p - pp.delta) * (pp.r - pp.p) / (pp.p * pp.delta * pp.r) * C2;
      break;
    }
    if (rep.theta_plus_bound < 0.0) {
      const auto window = norm_window(pp, pp.lambda, rep.theta_plus_bound, rep.S_r,
                                      prob.fields.a_dual);
      rep.bound_lo = window.first;
      rep.bound_hi = window.second;
    }
  }

  if (pp.critical()) {
    rep.C_delta = critical_cdelta(pp, rep.S_crit, prob.fields.a_sup,
                                  prob.grid->domain_measure());
    rep.c_infty = critical_level(pp, pp.lambda, *rep.C_delta, rep.S_crit);
    rep.lambda_gate = critical_level_threshold(pp, *rep.C_delta, rep.S_crit);
  }

  if (std::abs(pp.delta - pp.q) <= 1e-14) {
    const auto [c1, c2] = measure_embedding_quotients(prob);
    rep.mountain_pass = mountain_pass_geometry(pp, c1, c2);
  }

  // Concentration scales with a default bump radius (quarter of the largest
  // origin-centered ball inside Omega) when the origin lies inside.
  const Grid& g = *prob.grid;
  double inradius = std::numeric_limits<double>::infinity();
  bool origin_inside = true;
  for (int a = 0; a < g.n; ++a) {
    if (!(g.lo[a] < 0.0 && 0.0 < g.hi[a])) origin_inside = false;
    inradius = std::min(inradius, std::min(-g.lo[a], g.hi[a]));
  }
  if (origin_inside && pp.lambda > 0.0) {
    rep.kappa_used = 0.25 * inradius;
    rep.alpha_used = 2.0 * (static_cast<double>(pp.n) - pp.p * pp.s1) / (pp.p - 1.0);
    try {
      const auto [eps, beta] = critical_scales(pp, pp.lambda, rep.kappa_used, rep.alpha_used);
      rep.eps_of_lambda = eps;
      rep.beta_of_eps_alpha = beta;
    } catch (const PreconditionError&) {
      // lambda too large for the bump radius; scales left unset.
    }
  }
  return rep;
}

}  // namespace fracpq
