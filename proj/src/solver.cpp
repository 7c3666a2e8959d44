#include "fracpq/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracpq/random.hpp"
#include "fracpq/regularity.hpp"

namespace fracpq {

const char* to_string(Branch b) {
  switch (b) {
    case Branch::NehariPlus: return "nplus";
    case Branch::NehariMinus: return "nminus";
    case Branch::MountainPass: return "mp";
  }
  return "?";
}

namespace {

std::optional<double> branch_root(const FiberingProfile& prof, Branch branch) {
  return branch == Branch::NehariPlus ? prof.t_plus : prof.t_minus;
}

struct DescentState {
  GridFunction u;
  double energy_value = 0.0;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Project-then-step descent restricted to one branch of the Nehari set.
DescentState descend_on_branch(GridFunction u, const Problem& prob, Branch branch,
                               const SolverOptions& opts) {
  DescentState st;
  st.u = std::move(u);
  st.energy_value = energy(st.u, prob);

  GridFunction grad = energy_gradient(st.u, prob);
  st.residual = residual_norm(grad);
  const double unorm = std::sqrt(st.u.values.square().sum());
  const double gnorm = std::sqrt(grad.values.square().sum());
  double step = opts.step * unorm / (gnorm + 1e-300);

  while (st.iterations < opts.max_iter && st.residual > opts.tol_residual) {
    bool accepted = false;
    step *= 8.0;  // let the line search regrow after backtracking-heavy steps
    for (int halve = 0; halve < 40; ++halve) {
      GridFunction cand{st.u.grid, st.u.values - step * grad.values};
      const FiberingMap map = fibering_map(cand, prob);
      if (map.P > 0.0) {
        const FiberingProfile prof = classify_map(map);
        if (const auto root = branch_root(prof, branch)) {
          GridFunction v = scaled(cand, *root);
          const double ev = energy(v, prob);
          bool accept = ev < st.energy_value;
          if (!accept && std::abs(ev - st.energy_value) <=
                             64.0 * std::numeric_limits<double>::epsilon() *
                                 std::abs(st.energy_value)) {
            // Energy decrements are below double resolution close to the
            // critical point; switch the acceptance metric to the residual.
            accept = residual_norm(v, prob) < 0.999 * st.residual;
          }
          if (accept) {
            st.u = std::move(v);
            st.energy_value = ev;
            accepted = true;
            break;
          }
        }
      }
      step *= 0.5;
    }
    if (!accepted) break;  // stagnation: no productive step across 40 octaves
    grad = energy_gradient(st.u, prob);
    st.residual = residual_norm(grad);
    ++st.iterations;
  }
  st.converged = st.residual <= opts.tol_residual;
  return st;
}

SolutionRecord make_record(DescentState st, const Problem& prob, Branch branch,
                           const SolverOptions& opts) {
  SolutionRecord rec;
  rec.u = std::move(st.u);
  rec.energy = energy_breakdown(rec.u, prob);
  rec.residual = residual_norm(rec.u, prob);
  rec.branch = branch;
  rec.fibering = classify(rec.u, prob);
  rec.ray_sign = nehari_sign(rec.fibering.map);
  rec.theta = rec.energy.total;
  rec.nonnegative = rec.u.values.minCoeff() >= 0.0;
  rec.iterations = st.iterations;
  rec.seed = opts.seed;

  if (branch == Branch::NehariPlus && opts.sobolev_r && prob.params.lambda > 0.0 &&
      rec.theta < 0.0) {
    const auto [lo, hi] = norm_window(prob.params, prob.params.lambda, rec.theta,
                                      *opts.sobolev_r, prob.fields.a_dual);
    const double norm_p = std::pow(rec.fibering.map.P, 1.0 / prob.params.p);
    rec.norm_window_ok = norm_p >= lo * (1.0 - 1e-9) && norm_p <= hi * (1.0 + 1e-9);
  }
  return rec;
}

}  // namespace

SolutionRecord solve_nehari(const Problem& prob, Branch branch, const SolverOptions& opts) {
  opts.validate();
  if (branch == Branch::MountainPass)
    throw UsageError("use solve_mountain_pass for the ray inf-sup branch");
  const bool want_plus = branch == Branch::NehariPlus;

  std::vector<GridFunction> starts;
  for (int rst = 0; rst < opts.restarts; ++rst) {
    std::mt19937_64 rng(derive_seed(
        opts.seed, std::string("nehari-") + to_string(branch) + "-" + std::to_string(rst)));
    for (int tries = 0; tries < 200; ++tries) {
      GridFunction w = fourier_sample(prob.grid, rng);
      const FiberingMap map = fibering_map(w, prob);
      if (map.P <= 0.0) continue;
      if (want_plus && map.Ia <= 0.0) continue;
      const FiberingProfile prof = classify_map(map);
      if (const auto root = branch_root(prof, branch)) {
        starts.push_back(scaled(w, *root));
        break;
      }
    }
  }

  // In the critical configuration the relevant maximum-branch levels are
  // reached by concentrating profiles, which smooth random starts cannot
  // produce. Seed the truncated bump at a few resolvable widths as well.
  if (!want_plus && prob.params.critical()) {
    const Grid& g = *prob.grid;
    double inradius = std::numeric_limits<double>::infinity();
    bool origin_inside = true;
    for (int a = 0; a < g.n; ++a) {
      if (!(g.lo[a] < 0.0 && 0.0 < g.hi[a])) origin_inside = false;
      inradius = std::min({inradius, -g.lo[a], g.hi[a]});
    }
    if (origin_inside) {
      const double kappa = 0.25 * inradius;
      for (double eps : {kappa / 4.0, kappa / 8.0, kappa / 16.0}) {
        try {
          const GridFunction bump =
              build_cutoff(CutoffParams{eps, kappa, 2.0}, prob.grid, prob.params);
          const FiberingProfile prof = classify(bump, prob);
          if (prof.t_minus) starts.push_back(scaled(bump, *prof.t_minus));
        } catch (const Error&) {
          // unresolvable bump on this grid; skip the seed
        }
      }
    }
  }

  std::vector<DescentState> converged;
  std::optional<DescentState> best_attempt;
  const int seeded = static_cast<int>(starts.size());

  for (GridFunction& start : starts) {
    DescentState st = descend_on_branch(std::move(start), prob, branch, opts);
    if (st.converged) {
      converged.push_back(std::move(st));
    } else if (!best_attempt || st.residual < best_attempt->residual) {
      best_attempt = std::move(st);
    }
  }

  if (seeded == 0) {
    if (want_plus)
      throw PreconditionError(
          "could not seed the local-minimum branch: no sample with int a|u|^delta > 0 "
          "admits a local-minimum scaling (this branch needs lambda > 0 and sign "
          "conditions on the coefficient integrals)");
    throw PreconditionError("could not seed the local-maximum branch: no sample admits "
                            "a local-maximum scaling");
  }
  if (converged.empty()) {
    SolutionRecord best = make_record(std::move(*best_attempt), prob, branch, opts);
    throw ConvergenceFailure("descent did not reach the residual tolerance", std::move(best));
  }

  auto cmp = [](const DescentState& a, const DescentState& b) {
    return a.energy_value < b.energy_value;
  };
  std::sort(converged.begin(), converged.end(), cmp);
  const double spread = converged.back().energy_value - converged.front().energy_value;
  SolutionRecord rec = make_record(std::move(converged.front()), prob, branch, opts);
  rec.restart_spread = spread;
  return rec;
}

GridFunction nonneg_replace(const GridFunction& u, const Problem& prob, Branch branch) {
  GridFunction au = abs(u);
  const FiberingProfile prof = classify(au, prob);
  const auto root = branch_root(prof, branch);
  if (!root)
    throw NoRootError("the branch scaling of |u| does not exist", prof);
  GridFunction out = scaled(au, *root);
  if (branch == Branch::NehariPlus) {
    const double ein = energy(u, prob);
    const double eout = energy(out, prob);
    if (eout > ein + 1e-10 * (1.0 + std::abs(ein)))
      throw Error("nonnegative replacement raised the energy on the minimum branch");
  }
  return out;
}

namespace {

GridFunction normalize_direction(const GridFunction& u, const Problem& prob) {
  const double P = seminorm_pow(u, prob.kernel_p);
  if (P <= 0.0) throw PreconditionError("direction has zero norm");
  return scaled(u, std::pow(P, -1.0 / prob.params.p));
}

}  // namespace

SolutionRecord solve_mountain_pass(const Problem& prob, const SolverOptions& opts) {
  opts.validate();
  const ProblemParams& pp = prob.params;
  if (std::abs(pp.delta - pp.q) > 1e-14)
    throw PreconditionError("the ray inf-sup solver applies to the delta = q configuration");

  const auto [c1, c2] = measure_embedding_quotients(prob);
  const MountainPassGeometry geo = mountain_pass_geometry(pp, c1, c2);
  if (!(pp.lambda < geo.lambda_star))
    throw PreconditionError("lambda is not below the ring-geometry threshold");

  SolutionRecord best;
  double best_value = std::numeric_limits<double>::infinity();
  bool have_best = false;
  std::optional<SolutionRecord> best_failed;

  for (int rst = 0; rst < opts.restarts; ++rst) {
    std::mt19937_64 rng(derive_seed(opts.seed, "mp-" + std::to_string(rst)));

    std::optional<GridFunction> dir;
    for (int tries = 0; tries < 200 && !dir; ++tries) {
      GridFunction w = fourier_sample(prob.grid, rng);
      const FiberingMap map = fibering_map(w, prob);
      if (map.P > 0.0 && map.Ib > 0.0) dir = normalize_direction(w, prob);
    }
    if (!dir) continue;

    GridFunction u = std::move(*dir);
    FiberingMap map = fibering_map(u, prob);
    double t_hat = ray_argmax(map);
    double fval = map.psi(t_hat);
    GridFunction w = scaled(u, t_hat);
    GridFunction grad_w = energy_gradient(w, prob);
    double res = residual_norm(grad_w);

    double step = opts.step * std::sqrt(u.values.square().sum()) /
                  (std::sqrt(grad_w.values.square().sum()) * t_hat + 1e-300);
    int iters = 0;
    while (iters < opts.max_iter && res > opts.tol_residual) {
      bool accepted = false;
      step *= 8.0;  // regrow after backtracking-heavy steps
      for (int halve = 0; halve < 40; ++halve) {
        // Envelope derivative of u -> max_t I(tu) is t_hat * grad I(w).
        GridFunction cand{u.grid, u.values - step * t_hat * grad_w.values};
        const double candP = seminorm_pow(cand, prob.kernel_p);
        if (candP > 0.0) {
          GridFunction v = scaled(cand, std::pow(candP, -1.0 / pp.p));
          const FiberingMap vmap = fibering_map(v, prob);
          if (vmap.Ib > 0.0) {
            const double vt = ray_argmax(vmap);
            const double vf = vmap.psi(vt);
            bool accept = vf < fval;
            if (!accept &&
                std::abs(vf - fval) <=
                    64.0 * std::numeric_limits<double>::epsilon() * std::abs(fval)) {
              // same fp-resolution fallback as the branch descent
              accept = residual_norm(scaled(v, vt), prob) < 0.999 * res;
            }
            if (accept) {
              u = std::move(v);
              map = vmap;
              t_hat = vt;
              fval = vf;
              accepted = true;
              break;
            }
          }
        }
        step *= 0.5;
      }
      if (!accepted) break;
      w = scaled(u, t_hat);
      grad_w = energy_gradient(w, prob);
      res = residual_norm(grad_w);
      ++iters;
    }

    SolutionRecord rec;
    rec.u = w;
    rec.energy = energy_breakdown(w, prob);
    rec.residual = res;
    rec.branch = Branch::MountainPass;
    rec.fibering = classify(w, prob);
    rec.ray_sign = nehari_sign(rec.fibering.map);
    rec.theta = fval;
    rec.nonnegative = w.values.minCoeff() >= 0.0;
    rec.iterations = iters;
    rec.geometry = geo;
    rec.seed = opts.seed;

    if (res <= opts.tol_residual) {
      if (!have_best || fval < best_value) {
        best = std::move(rec);
        best_value = fval;
        have_best = true;
      }
    } else if (!best_failed || rec.residual < best_failed->residual) {
      best_failed = std::move(rec);
    }
  }

  if (!have_best) {
    if (best_failed)
      throw ConvergenceFailure("ray inf-sup descent did not reach tolerance",
                               std::move(*best_failed));
    throw PreconditionError("no direction with int b|u|^r > 0 could be seeded");
  }
  if (pp.critical()) {
    const double S_crit = estimate_sobolev(pp.critical_exponent(), prob);
    const double cd = critical_cdelta(pp, S_crit, prob.fields.a_sup,
                                      prob.grid->domain_measure());
    best.c_infty = critical_level(pp, pp.lambda, cd, S_crit);
    best.below_critical_level = best.energy.total < *best.c_infty;
  }
  return best;
}

TwoSolutionsResult two_solutions(const Problem& prob, const SolverOptions& opts) {
  opts.validate();
  const ProblemParams& pp = prob.params;
  TwoSolutionsResult out;

  out.sobolev_r = estimate_sobolev(pp.r, prob);
  out.lambda_0 = lambda_zero(pp, out.sobolev_r, prob.fields.a_dual, prob.fields.b_sup);
  if (pp.lambda >= out.lambda_0)
    out.warnings.push_back(
        "lambda is at or above the degenerate-set threshold; the two-root ray "
        "structure is not guaranteed");

  std::optional<double> c_inf;
  std::optional<double> energy_floor;
  if (pp.critical()) {
    const double cd =
        critical_cdelta(pp, out.sobolev_r, prob.fields.a_sup, prob.grid->domain_measure());
    c_inf = critical_level(pp, pp.lambda, cd, out.sobolev_r);
    if (*c_inf <= 0.0)
      throw PreconditionError(
          "critical configuration refused: first critical level c_infty = " +
          std::to_string(*c_inf) + " <= 0 at lambda = " + std::to_string(pp.lambda));
    energy_floor = -cd * std::pow(pp.lambda, pp.p / (pp.p - pp.delta));
  }

  SolverOptions branch_opts = opts;
  branch_opts.sobolev_r = out.sobolev_r;

  for (Branch branch : {Branch::NehariPlus, Branch::NehariMinus}) {
    SolutionRecord rec = solve_nehari(prob, branch, branch_opts);

    // Nonnegative replacement, re-polished until it is also a critical point.
    for (int round = 0; round < 5 && !rec.nonnegative; ++round) {
      GridFunction v = nonneg_replace(rec.u, prob, branch);
      DescentState st = descend_on_branch(std::move(v), prob, branch, branch_opts);
      if (!st.converged) {
        out.warnings.push_back(std::string(to_string(branch)) +
                               ": replacement polish did not reconverge");
        break;
      }
      const double prev = rec.energy.total;
      rec = make_record(std::move(st), prob, branch, branch_opts);
      if (rec.nonnegative || std::abs(rec.energy.total - prev) < 1e-14) break;
    }
    if (!rec.nonnegative) {
      // Accept a fully nonnegative iterate even if it required the direct
      // replacement without further polish.
      GridFunction v = nonneg_replace(rec.u, prob, branch);
      if (residual_norm(v, prob) <= opts.tol_residual) {
        DescentState st;
        st.u = std::move(v);
        st.energy_value = energy(st.u, prob);
        st.residual = residual_norm(st.u, prob);
        st.converged = true;
        rec = make_record(std::move(st), prob, branch, branch_opts);
      }
    }

    rec.c_infty = c_inf;
    if (c_inf) rec.below_critical_level = rec.energy.total < *c_inf;
    if (energy_floor && rec.energy.total < *energy_floor - 1e-9)
      out.warnings.push_back(std::string(to_string(branch)) +
                             ": energy fell below the critical floor");
    (branch == Branch::NehariPlus ? out.plus : out.minus) = std::move(rec);
  }

  if (!(out.plus.theta < 0.0))
    out.warnings.push_back("the minimum-branch level is not negative");

  GridFunction diff{out.plus.u.grid, out.plus.u.values - out.minus.u.values};
  out.l2_distance = lebesgue_norm(diff, 2.0);
  const double ref = std::max(lebesgue_norm(out.plus.u, 2.0), lebesgue_norm(out.minus.u, 2.0));
  out.distinct = out.l2_distance > opts.distinct_rtol * ref;
  return out;
}

std::vector<SweepRow> sweep_lambda(const Problem& prob, const std::vector<double>& lambdas,
                                   const SolverOptions& opts) {
  std::vector<SweepRow> rows;
  rows.reserve(lambdas.size());
  for (double lam : lambdas) {
    SweepRow row;
    row.lambda = lam;
    try {
      const Problem variant = with_lambda(prob, lam);
      const TwoSolutionsResult res = two_solutions(variant, opts);
      row.converged_plus = true;
      row.converged_minus = true;
      row.theta_plus = res.plus.theta;
      row.theta_minus = res.minus.theta;
      row.residual_plus = res.plus.residual;
      row.residual_minus = res.minus.residual;
      row.l2_distance = res.l2_distance;
    } catch (const Error& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace fracpq
