#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "fracpq/grid.hpp"
#include "fracpq/kernel.hpp"
#include "fracpq/params.hpp"

namespace fracpq {

/// Everything a computation needs: parameters, grid, coefficient samples and
/// the two kernel tables for (p, s1) and (q, s2). Immutable after assembly;
/// cheap enough to copy when a variant (different lambda or beta) is needed.
struct Problem {
  ProblemParams params;
  GridPtr grid;
  WeightField fields;
  KernelTable kernel_p;
  KernelTable kernel_q;
  std::uint64_t seed = 0;
  std::string a_text;
  std::string b_text;
};

/// Unwraps a run manifest to the configuration it embeds; plain
/// configurations pass through unchanged.
nlohmann::json effective_config(const nlohmann::json& raw);

/// Parses a configuration document with keys
///   n, bounds, N, s1, s2, p, q, delta, r, lambda, beta, a, b, seed
/// (or a run manifest embedding one) and assembles grid, weights and kernel
/// tables. Throws ConfigError on any malformed or inadmissible input.
Problem assemble_problem(const nlohmann::json& config);

/// Copy of `prob` with a different lambda.
Problem with_lambda(Problem prob, double lambda);

/// Copy of `prob` with a different beta.
Problem with_beta(Problem prob, double beta);

}  // namespace fracpq
