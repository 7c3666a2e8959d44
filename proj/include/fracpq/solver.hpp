#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fracpq/constants.hpp"
#include "fracpq/energy.hpp"
#include "fracpq/fibering.hpp"
#include "fracpq/problem.hpp"

namespace fracpq {

enum class Branch { NehariPlus, NehariMinus, MountainPass };

const char* to_string(Branch b);

struct SolverOptions {
  double step = 0.5;          // initial relative step of the line search
  double tol_residual = 1e-7;
  int max_iter = 20000;
  int restarts = 3;
  std::uint64_t seed = 1;
  double distinct_rtol = 1e-3;  // L2 separation threshold for two_solutions
  std::optional<double> sobolev_r;  // enables the norm-window diagnostic

  void validate() const {
    if (!(step > 0.0)) throw ConfigError("solver step must be positive");
    if (!(tol_residual > 0.0)) throw ConfigError("solver tolerance must be positive");
    if (max_iter < 1) throw ConfigError("solver needs max_iter >= 1");
    if (restarts < 1) throw ConfigError("solver needs at least one restart");
  }
};

/// A computed critical point with its diagnostics.
struct SolutionRecord {
  GridFunction u;
  EnergyBreakdown energy;
  double residual = 0.0;
  Branch branch = Branch::NehariPlus;
  FiberingProfile fibering;  // ray profile of the final iterate
  int ray_sign = 0;          // sign of the second ray derivative at t = 1
  double theta = 0.0;        // branch level estimate (energy of the record)
  bool nonnegative = false;
  int iterations = 0;
  double restart_spread = 0.0;  // energy spread across converged restarts
  bool norm_window_ok = true;   // N^+ diagnostic when sobolev_r is supplied
  std::optional<double> c_infty;           // critical configuration only
  std::optional<bool> below_critical_level;
  std::optional<MountainPassGeometry> geometry;  // mountain-pass runs only
  std::uint64_t seed = 0;
};

/// Non-convergence carrying the best iterate reached.
struct ConvergenceFailure : ConvergenceError {
  SolutionRecord best;
  ConvergenceFailure(const std::string& msg, SolutionRecord rec)
      : ConvergenceError(msg), best(std::move(rec)) {}
};

/// Projected descent on the local-minimum (N^+) or local-maximum (N^-)
/// branch of the Nehari set: project the iterate onto the branch, take a
/// gradient step with backtracking, repeat until the weak residual drops
/// below tolerance. Best energy over `restarts` seeded starts.
SolutionRecord solve_nehari(const Problem& prob, Branch branch, const SolverOptions& opts);

/// t|u| with t the branch scaling of |u|; removes sign changes without
/// raising the energy on the N^+ branch.
GridFunction nonneg_replace(const GridFunction& u, const Problem& prob,
                            Branch branch = Branch::NehariPlus);

/// Ray inf-sup solver for the delta = q configuration: maximize the energy
/// along each direction (golden section), descend the direction by the
/// envelope gradient, stop when the maximizer w is a critical point.
SolutionRecord solve_mountain_pass(const Problem& prob, const SolverOptions& opts);

struct TwoSolutionsResult {
  SolutionRecord plus;
  SolutionRecord minus;
  double l2_distance = 0.0;
  bool distinct = false;
  double lambda_0 = 0.0;
  double sobolev_r = 0.0;
  std::vector<std::string> warnings;
};

/// Both Nehari branches with nonnegative replacement, distinctness check and
/// the critical-case gates (refuses when the first critical level is <= 0).
TwoSolutionsResult two_solutions(const Problem& prob, const SolverOptions& opts);

struct SweepRow {
  double lambda = 0.0;
  bool converged_plus = false;
  bool converged_minus = false;
  double theta_plus = 0.0;
  double theta_minus = 0.0;
  double residual_plus = 0.0;
  double residual_minus = 0.0;
  double l2_distance = 0.0;
  std::string error;
};

/// two_solutions per lambda; failures land in the row, never abort the sweep.
std::vector<SweepRow> sweep_lambda(const Problem& prob, const std::vector<double>& lambdas,
                                   const SolverOptions& opts);

}  // namespace fracpq
