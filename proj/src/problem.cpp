#include "fracpq/problem.hpp"


#include "fracpq/errors.hpp"

namespace fracpq {

namespace {

double require_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw ConfigError(std::string("config key '") + key + "' missing or not a number");
  return j[key].get<double>();
}

std::string require_string(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string())
    throw ConfigError(std::string("config key '") + key + "' missing or not a string");
  return j[key].get<std::string>();
}

}  // namespace

nlohmann::json effective_config(const nlohmann::json& raw) {
  if (!raw.is_object()) throw ConfigError("configuration must be a JSON object");
  // Run manifests embed the configuration they were produced from; accept
  // them directly so a recorded run can be replayed from its manifest.
  if (raw.contains("config") && raw["config"].is_object()) return raw["config"];
  return raw;
}

Problem assemble_problem(const nlohmann::json& raw) {
  const nlohmann::json config = effective_config(raw);

  Problem prob;
  prob.params.n = static_cast<int>(require_number(config, "n"));
  prob.params.s1 = require_number(config, "s1");
  prob.params.s2 = require_number(config, "s2");
  prob.params.p = require_number(config, "p");
  prob.params.q = require_number(config, "q");
  prob.params.delta = require_number(config, "delta");
  prob.params.r = require_number(config, "r");
  prob.params.lambda = require_number(config, "lambda");
  prob.params.beta = require_number(config, "beta");
  prob.params.validate();

  const int N = static_cast<int>(require_number(config, "N"));
  if (N < 3) throw ConfigError("N must be at least 3");

  if (!config.contains("bounds")) throw ConfigError("config key 'bounds' missing");
  const auto& b = config["bounds"];
  std::array<double, 2> lo{0.0, 0.0}, hi{0.0, 0.0};
  if (b.is_array() && b.size() == 2 && b[0].is_number()) {
    if (prob.params.n != 1) throw ConfigError("scalar bounds given for a 2D problem");
    lo[0] = b[0].get<double>();
    hi[0] = b[1].get<double>();
  } else if (b.is_array() && b.size() == static_cast<std::size_t>(prob.params.n) &&
             b[0].is_array()) {
    for (int a = 0; a < prob.params.n; ++a) {
      lo[a] = b[a][0].get<double>();
      hi[a] = b[a][1].get<double>();
    }
  } else {
    throw ConfigError("'bounds' must be [lo, hi] or [[lo, hi], ...] matching n");
  }
  prob.grid = build_grid(lo, hi, N, prob.params.n);

  prob.a_text = require_string(config, "a");
  prob.b_text = require_string(config, "b");
  const Expression ae = Expression::parse(prob.a_text);
  const Expression be = Expression::parse(prob.b_text);
  prob.fields = sample_weights(ae, be, *prob.grid, prob.params);

  prob.seed = config.contains("seed") ? config["seed"].get<std::uint64_t>() : 1u;

  prob.kernel_p = build_kernel_table(prob.grid, prob.params.s1, prob.params.p);
  prob.kernel_q = build_kernel_table(prob.grid, prob.params.s2, prob.params.q);
  return prob;
}

Problem with_lambda(Problem prob, double lambda) {
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be nonnegative");
  prob.params.lambda = lambda;
  return prob;
}

Problem with_beta(Problem prob, double beta) {
  if (!(beta >= 0.0)) throw ConfigError("beta must be nonnegative");
  prob.params.beta = beta;
  return prob;
}

}  // namespace fracpq
