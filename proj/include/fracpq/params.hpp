#pragma once

#include <cmath>

#include "fracpq/errors.hpp"

namespace fracpq {

/// Scalar exponents and parameters of the Dirichlet problem
///
///   (-Delta)^{s1}_p u + beta (-Delta)^{s2}_q u
///       = lambda a(x) |u|^{delta-2} u + b(x) |u|^{r-2} u   in Omega,
///   u = 0 on R^n \ Omega.
///
/// Admissible ranges: 1 < delta <= q <= p < r <= p n/(n - p s1),
/// 0 < s2 < s1 < 1, n > p s1, lambda >= 0, beta >= 0.
struct ProblemParams {
  int n = 1;
  double s1 = 0.0;
  double s2 = 0.0;
  double p = 0.0;
  double q = 0.0;
  double delta = 0.0;
  double r = 0.0;
  double lambda = 0.0;
  double beta = 0.0;

  /// Fractional Sobolev exponent p n / (n - p s1).
  double critical_exponent() const {
    return p * static_cast<double>(n) / (static_cast<double>(n) - p * s1);
  }

  /// True when r sits at the critical exponent (1e-12 relative).
  bool critical() const {
    const double pc = critical_exponent();
    return std::abs(r - pc) <= 1e-12 * pc;
  }

  /// Throws ConfigError if any admissibility constraint fails.
  void validate() const;
};

inline void ProblemParams::validate() const {
  if (n != 1 && n != 2) throw ConfigError("dimension n must be 1 or 2");
  if (!(0.0 < s2 && s2 < s1 && s1 < 1.0))
    throw ConfigError("fractional orders must satisfy 0 < s2 < s1 < 1");
  if (!(static_cast<double>(n) > p * s1))
    throw ConfigError("need n > p*s1 for the critical exponent to exist");
  const double pc = critical_exponent();
  if (!(1.0 < delta && delta <= q && q <= p && p < r))
    throw ConfigError("exponents must satisfy 1 < delta <= q <= p < r");
  if (r > pc * (1.0 + 1e-12))
    throw ConfigError("r exceeds the critical exponent p*n/(n - p*s1)");
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be nonnegative");
  if (!(beta >= 0.0)) throw ConfigError("beta must be nonnegative");
}

}  // namespace fracpq
