#pragma once

#include <optional>
#include <utility>

#include "fracpq/problem.hpp"

namespace fracpq {

/// Rayleigh quotient ||u||_{p,s1}^p / ||u||_{L^m}^p of a nonzero function.
double rayleigh_quotient(const GridFunction& u, double m, const Problem& prob);

/// Discrete Sobolev constant S_m = inf over nonzero u of the Rayleigh
/// quotient, estimated by normalized projected gradient descent with
/// `restarts` seeded random restarts (plus one deterministic positive
/// start); returns the best value found, and the minimizer through
/// `argmin_out` when given. Requires 1 <= m <= p n/(n - p s1).
double estimate_sobolev(double m, const Problem& prob, int restarts = 5,
                        int max_iter = 4000, GridFunction* argmin_out = nullptr);

/// Threshold below which the degenerate Nehari set is empty:
///   lambda_0 = ((r-p) S_r^{d/p} / ((r-d) ||a||))
///              * ((p-d) S_r^{r/p} / ((r-d) ||b||))^{(p-d)/(r-p)},  d = delta.
double lambda_zero(const ProblemParams& pp, double S_r, double a_dual, double b_sup);

/// u-independent coefficient of the lower bound for the hump location:
///   T0 * ||u||^{-1} <= t_max, with T0 = ((p-d) S_r^{r/p}/((r-d) ||b||))^{1/(r-p)}.
double hump_coefficient(const ProblemParams& pp, double S_r, double b_sup);

/// Energy floor constant of the critical case (r at the Sobolev exponent):
/// critical points satisfy J >= -C_delta lambda^{p/(p-delta)}.
double critical_cdelta(const ProblemParams& pp, double S_crit, double a_sup,
                       double domain_measure);

/// First critical level c_inf = (s1/n) S^{n/(p s1)} - C_delta lambda^{p/(p-delta)}.
double critical_level(const ProblemParams& pp, double lambda, double C_delta,
                      double S_crit);

/// Largest lambda with c_inf > 0.
double critical_level_threshold(const ProblemParams& pp, double C_delta, double S_crit);

/// Norm window for minimizing sequences on the local-minimum branch, given a
/// negative branch infimum theta_plus:
///   lo = (lambda (-theta+) d r S_r^{d/p} / ((r-d) ||a||))^{1/d},
///   hi = (lambda p (r-d) ||a|| / (d (r-p) S_r^{d/p}))^{1/(p-d)}.
std::pair<double, double> norm_window(const ProblemParams& pp, double lambda,
                                      double theta_plus, double S_r, double a_dual);

/// Ring geometry for the delta = q energy: radius rho, floor eta and the
/// lambda range on which the functional stays above eta on the sphere.
struct MountainPassGeometry {
  double rho = 0.0;
  double eta = 0.0;
  double lambda_star = 0.0;
  double t0 = 0.0;
  double f_t0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
};

/// From the measured embedding constants C1 >= int a|u|^q / ||u||^q and
/// C2 >= int b|u|^r / ||u||^r: with f(t) = t^{p-q}/p - C2 t^{r-q}/r, the ring
/// radius is the maximizer t0 of f (for p = q the maximum sits at 0, and rho
/// solves f(rho) = f(0)/2 instead); eta = f(t0)/2 and
/// lambda_star = q f(t0)/(2 C1).
MountainPassGeometry mountain_pass_geometry(const ProblemParams& pp, double C1,
                                            double C2);

/// Empirical maxima over `samples` random functions of the two quotients
/// int a|u|^q / ||u||_{p,s1}^q and int b|u|^r / ||u||_{p,s1}^r (floored at a
/// tiny positive value).
std::pair<double, double> measure_embedding_quotients(const Problem& prob,
                                                      int samples = 200);

/// Concentration scales of the critical analysis:
///   eps = lambda^{p(p-1)/((p-delta)(n - p s1))}, beta = eps^alpha,
/// requiring alpha > (n - p s1)/(p - 1) strictly and eps <= kappa/2.
std::pair<double, double> critical_scales(const ProblemParams& pp, double lambda,
                                          double kappa, double alpha);

/// Everything the `constants` subcommand reports.
struct ConstantsReport {
  double S_r = 0.0;
  double S_crit = 0.0;
  double lambda_0 = 0.0;
  double T0_coefficient = 0.0;
  double theta_plus_bound = 0.0;  // negative upper bound for the N^+ infimum
  double bound_lo = 0.0;
  double bound_hi = 0.0;
  std::optional<double> C_delta;       // critical configuration only
  std::optional<double> c_infty;       // critical configuration only
  std::optional<double> lambda_gate;   // c_infty positivity threshold
  std::optional<MountainPassGeometry> mountain_pass;  // delta = q only
  std::optional<double> eps_of_lambda;
  std::optional<double> beta_of_eps_alpha;
  double alpha_used = 0.0;
  double kappa_used = 0.0;
};

/// Computes the full report for the problem's lambda. Deterministic for a
/// fixed problem seed.
ConstantsReport build_constants_report(const Problem& prob);

}  // namespace fracpq
