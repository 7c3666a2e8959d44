#pragma once

#include "fracpq/problem.hpp"

namespace fracpq {

/// The four summands of the energy functional
///   (1/p)||u||_{p,s1}^p + (beta/q)||u||_{q,s2}^q
///   - (lambda/delta) int a |u|^delta - (1/r) int b |u|^r
/// with total = term_p + term_q - term_a - term_b by construction.
struct EnergyBreakdown {
  double term_p = 0.0;
  double term_q = 0.0;
  double term_a = 0.0;
  double term_b = 0.0;
  double total = 0.0;
};

EnergyBreakdown energy_breakdown(const GridFunction& u, const Problem& prob);

inline double energy(const GridFunction& u, const Problem& prob) {
  return energy_breakdown(u, prob).total;
}

/// Weak residual against the nodal indicator basis: component i is the
/// derivative of the energy with respect to u_i. Vanishes exactly at discrete
/// critical points.
GridFunction energy_gradient(const GridFunction& u, const Problem& prob);

/// Euclidean norm of the gradient scaled by h^{n/2}.
double residual_norm(const GridFunction& gradient);

/// Convenience: assembles the gradient and returns its residual norm.
double residual_norm(const GridFunction& u, const Problem& prob);

}  // namespace fracpq
