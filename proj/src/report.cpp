#include "fracpq/report.hpp"

#include <cmath>
#include <cstdio>

namespace fracpq {

namespace {

nlohmann::json opt(const std::optional<double>& v) {
  if (v) return *v;
  return nullptr;
}

}  // namespace

nlohmann::json to_json(const FiberingProfile& prof) {
  nlohmann::json j;
  j["P"] = prof.map.P;
  j["Q"] = prof.map.Q;
  j["Ia"] = prof.map.Ia;
  j["Ib"] = prof.map.Ib;
  j["case"] = to_string(prof.kind);
  j["ia_degenerate"] = prof.ia_degenerate;
  j["ib_degenerate"] = prof.ib_degenerate;
  j["t_star"] = opt(prof.t_star);
  j["t_max"] = opt(prof.t_max);
  j["t1"] = opt(prof.t_plus);
  j["t2"] = opt(prof.t_minus);
  j["no_roots"] = prof.no_roots;
  j["expected_roots"] = prof.expected_roots;
  j["found_roots"] = prof.found_roots;
  return j;
}

nlohmann::json to_json(const ConstantsReport& rep) {
  nlohmann::json j;
  j["S_r"] = rep.S_r;
  j["S_crit"] = rep.S_crit;
  j["lambda_0"] = rep.lambda_0;
  j["T0_coefficient"] = rep.T0_coefficient;
  j["theta_plus_bound"] = rep.theta_plus_bound;
  j["bound_lo"] = rep.bound_lo;
  j["bound_hi"] = rep.bound_hi;
  j["C_delta"] = opt(rep.C_delta);
  j["c_infty"] = opt(rep.c_infty);
  j["lambda_gate"] = opt(rep.lambda_gate);
  if (rep.mountain_pass) {
    nlohmann::json mp;
    mp["rho"] = rep.mountain_pass->rho;
    mp["eta"] = rep.mountain_pass->eta;
    mp["lambda_star"] = rep.mountain_pass->lambda_star;
    mp["t0"] = rep.mountain_pass->t0;
    mp["f_t0"] = rep.mountain_pass->f_t0;
    mp["C1"] = rep.mountain_pass->c1;
    mp["C2"] = rep.mountain_pass->c2;
    j["mountain_pass"] = mp;
  } else {
    j["mountain_pass"] = nullptr;
  }
  j["eps_of_lambda"] = opt(rep.eps_of_lambda);
  j["beta_of_eps_alpha"] = opt(rep.beta_of_eps_alpha);
  j["alpha_used"] = rep.alpha_used;
  j["kappa_used"] = rep.kappa_used;
  return j;
}

nlohmann::json to_json(const SolutionRecord& rec, bool include_values) {
  nlohmann::json j;
  j["branch"] = to_string(rec.branch);
  j["energy"] = rec.energy.total;
  j["energy_terms"] = {{"term_p", rec.energy.term_p},
                       {"term_q", rec.energy.term_q},
                       {"term_a", rec.energy.term_a},
                       {"term_b", rec.energy.term_b}};
  j["residual"] = rec.residual;
  j["theta"] = rec.theta;
  j["ray_sign"] = rec.ray_sign;
  j["nonnegative"] = rec.nonnegative;
  j["iterations"] = rec.iterations;
  j["restart_spread"] = rec.restart_spread;
  j["norm_window_ok"] = rec.norm_window_ok;
  j["c_infty"] = opt(rec.c_infty);
  j["below_critical_level"] =
      rec.below_critical_level ? nlohmann::json(*rec.below_critical_level)
                               : nlohmann::json(nullptr);
  j["fibering"] = to_json(rec.fibering);
  if (rec.geometry) {
    j["geometry"] = {{"rho", rec.geometry->rho},
                     {"eta", rec.geometry->eta},
                     {"lambda_star", rec.geometry->lambda_star}};
  }
  j["seed"] = rec.seed;
  if (include_values) {
    std::vector<double> vals(rec.u.values.data(), rec.u.values.data() + rec.u.values.size());
    j["u"] = vals;
  }
  return j;
}

nlohmann::json to_json(const TwoSolutionsResult& res, bool include_values) {
  nlohmann::json j;
  j["plus"] = to_json(res.plus, include_values);
  j["minus"] = to_json(res.minus, include_values);
  j["l2_distance"] = res.l2_distance;
  j["distinct"] = res.distinct;
  j["lambda_0"] = res.lambda_0;
  j["S_r"] = res.sobolev_r;
  j["warnings"] = res.warnings;
  return j;
}

nlohmann::json to_json(const RegularityReport& rep) {
  nlohmann::json j;
  j["alpha_fit"] = opt(rep.alpha_fit);
  nlohmann::json table = nlohmann::json::array();
  for (const auto& [radius, osc] : rep.osc_table)
    table.push_back({{"radius", radius}, {"osc", osc}});
  j["osc_table"] = table;
  j["tail_p"] = rep.tail_p;
  j["tail_q"] = rep.tail_q;
  j["Q_value"] = rep.q_value;
  j["alpha_ceiling"] = rep.alpha_ceiling;
  return j;
}

nlohmann::json to_json(const DeGiorgiTrace& tr) {
  nlohmann::json j;
  j["rho"] = tr.rho;
  j["eta"] = tr.eta;
  j["growth_const"] = tr.growth_const;
  j["decay_ok"] = tr.decay_ok;
  j["linf_bound"] = tr.linf_bound;
  j["linf_ok"] = tr.linf_ok;
  j["U"] = tr.U;
  return j;
}

nlohmann::json to_json(const HarnackReport& rep) {
  nlohmann::json j;
  j["inf_quarter_ball"] = rep.inf_quarter_ball;
  j["annulus_mean"] = rep.annulus_mean;
  j["sup_ball"] = rep.sup_ball;
  j["tail_p_neg"] = rep.tail_p_neg;
  j["tail_q_neg"] = rep.tail_q_neg;
  j["radius_power"] = rep.radius_power;
  return j;
}

nlohmann::json to_json(const CriticalProbe& probe) {
  nlohmann::json j;
  j["sup_ray"] = probe.sup_ray;
  j["c_infty"] = probe.c_infty;
  j["eps"] = probe.eps;
  j["beta"] = probe.beta;
  j["pass"] = probe.pass;
  return j;
}

std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string solution_csv(const GridFunction& u) {
  const Grid& g = *u.grid;
  std::string out = g.n == 1 ? "x,u\n" : "x,y,u\n";
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    out += csv_number(g.coords(i, 0));
    if (g.n == 2) {
      out += ',';
      out += csv_number(g.coords(i, 1));
    }
    out += ',';
    out += csv_number(u.values[i]);
    out += '\n';
  }
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out =
      "lambda,converged_plus,converged_minus,theta_plus,theta_minus,"
      "residual_plus,residual_minus,l2_distance,error\n";
  for (const auto& row : rows) {
    out += csv_number(row.lambda);
    out += row.converged_plus ? ",1" : ",0";
    out += row.converged_minus ? ",1" : ",0";
    out += ',';
    out += csv_number(row.theta_plus);
    out += ',';
    out += csv_number(row.theta_minus);
    out += ',';
    out += csv_number(row.residual_plus);
    out += ',';
    out += csv_number(row.residual_minus);
    out += ',';
    out += csv_number(row.l2_distance);
    out += ',';
    out += row.error;
    out += '\n';
  }
  return out;
}

std::string ray_scan_csv(const FiberingMap& map, int points) {
  std::string out = "t,psi,dpsi,d2psi\n";
  const double lo = 1e-4, hi = 1e4;
  const double step = std::pow(hi / lo, 1.0 / (points - 1));
  for (int k = 0; k < points; ++k) {
    const double t = lo * std::pow(step, k);
    out += csv_number(t);
    out += ',';
    out += csv_number(map.psi(t));
    out += ',';
    out += csv_number(map.dpsi(t));
    out += ',';
    out += csv_number(map.d2psi(t));
    out += '\n';
  }
  return out;
}

std::string osc_csv(const RegularityReport& rep) {
  std::string out = "radius,osc\n";
  for (const auto& [radius, osc] : rep.osc_table) {
    out += csv_number(radius);
    out += ',';
    out += csv_number(osc);
    out += '\n';
  }
  return out;
}

}  // namespace fracpq
