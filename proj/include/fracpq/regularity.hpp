#pragma once

#include <optional>
#include <vector>

#include "fracpq/problem.hpp"

namespace fracpq {

/// Trace of the level-truncation iteration that certifies a uniform bound:
/// v = u/(rho ||u||_r), w_k = (v - 1 + 2^{-k})^+, U_k = ||w_k||_r^r. When the
/// U_k decay geometrically (U_k <= eta^k / rho^r) the grid max of |u| is
/// bounded by rho ||u||_r.
struct DeGiorgiTrace {
  double rho = 1.0;
  GridFunction v;
  std::vector<double> U;
  double eta = 0.0;
  double growth_const = 0.0;  // measured per-step constant C > 1
  bool decay_ok = false;
  double linf_bound = 0.0;  // rho ||u||_r
  bool linf_ok = false;     // grid max |u| <= linf_bound
};

/// Runs the iteration for k = 0..K. Requires a subcritical configuration.
/// `rho_override` forces the normalization (used by tests).
DeGiorgiTrace degiorgi_verify(const GridFunction& u, const Problem& prob, int K,
                              std::optional<double> rho_override = std::nullopt);

/// Oscillation decay over shrinking balls and the least-squares exponent of
/// osc ~ r^alpha, plus the nonlocal tails entering the oscillation estimate.
struct RegularityReport {
  std::optional<double> alpha_fit;  // unset when all oscillations vanish
  std::vector<std::pair<double, double>> osc_table;  // (radius, oscillation)
  double tail_p = 0.0;
  double tail_q = 0.0;
  double q_value = 0.0;  // grid max |u| + tail_p at the largest radius
  double alpha_ceiling = 0.0;  // (p s1 - q s2)/(p - 1), reported not asserted
};

RegularityReport holder_exponent(const GridFunction& u, const Problem& prob,
                                 const Eigen::Vector2d& x0,
                                 const std::vector<double>& radii);

/// Truncated bump construction: a model minimizer profile U (constant core
/// glued to the power tail r^{-(n - p s1)/(p - 1)}), its rescaling
/// U_eps(r) = eps^{-(n - p s1)/p} U(r/eps), and the transfer that truncates
/// it to vanish outside the ball of radius theta*kappa.
struct CutoffParams {
  double eps = 0.0;
  double kappa = 0.0;
  double theta = 2.0;

  void validate(const Grid& grid) const;  // 0 < eps <= kappa/2, theta > 1, ball fits
};

/// Model minimizer profile U (normalized so the core value is 1).
double minimizer_profile(double rho, const ProblemParams& pp);

/// Rescaled profile U_eps.
double rescaled_profile(double rho, double eps, const ProblemParams& pp);

/// Piecewise-linear transfer G: zero below U_eps(theta kappa), slope
/// m = U_eps(kappa)/(U_eps(kappa) - U_eps(theta kappa)) in between, identity
/// above U_eps(kappa).
double cutoff_transfer(double t, const CutoffParams& cp, const ProblemParams& pp);

/// Companion transfer g with slopes m^p / 1 (enters the energy comparison).
double cutoff_slope_transfer(double t, const CutoffParams& cp, const ProblemParams& pp);

/// Radial value of the truncated bump: G(U_eps(rho)).
double cutoff_profile(double rho, const CutoffParams& cp, const ProblemParams& pp);

/// Samples the truncated bump (centered at the origin) on the grid.
GridFunction build_cutoff(const CutoffParams& cp, const GridPtr& grid,
                          const ProblemParams& pp);

struct CutoffTrendRow {
  double eps = 0.0;
  double seminorm_excess = 0.0;  // ||u_cut||_{p,s1}^p - S^{n/(p s1)}
  double mass_deficit = 0.0;     // S^{n/(p s1)} - ||u_cut||_{p*}^{p*}
};

struct CutoffTrends {
  std::vector<CutoffTrendRow> rows;
  double excess_slope = 0.0;   // vs (eps/kappa)^{(n - p s1)/(p - 1)}
  double deficit_slope = 0.0;  // vs (eps/kappa)^{n/(p - 1)}
  double s_power = 0.0;        // S^{n/(p s1)} reference level
};

/// Seminorm and critical-mass scaling of the truncated bump across eps.
CutoffTrends cutoff_scaling_table(double kappa, const std::vector<double>& eps_list,
                                  const Problem& prob, double S_crit,
                                  double theta = 2.0);

struct CriticalProbe {
  double sup_ray = 0.0;
  double c_infty = 0.0;
  double eps = 0.0;
  double beta = 0.0;
  bool pass = false;
};

/// Critical-case energy-level probe: with eps and beta tied to lambda by the
/// concentration scaling, checks sup_t J(t u_{eps,kappa}) < c_infty.
/// Requires the critical configuration and 1 < n(p-1)/(n - p s1) <= delta.
CriticalProbe critical_level_probe(const Problem& prob, double kappa, double alpha,
                                   double theta = 2.0);

}  // namespace fracpq
