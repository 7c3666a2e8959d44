#pragma once

#include <Eigen/Dense>

#include "fracpq/grid.hpp"
#include "fracpq/params.hpp"

namespace fracpq {

/// Odd power |t|^{e-2} t, extended by 0 at t = 0 (its limit for e > 1).
inline double odd_power(double t, double e) {
  if (t == 0.0) return 0.0;
  return std::pow(std::abs(t), e - 2.0) * t;
}

/// Precomputed singular-kernel data for one (s, e) pair on a fixed grid:
///   w(i,j) = h^{2n} / |x_i - x_j|^{n + e s}   for i != j (zero diagonal),
///   c(i)   = integral over R^n \ Omega of |x_i - y|^{-(n + e s)} dy.
/// The exterior coefficient is closed form in 1D and adaptive angular
/// quadrature in 2D.
struct KernelTable {
  GridPtr grid;
  double s = 0.0;
  double e = 0.0;
  Eigen::MatrixXd w;
  Eigen::ArrayXd c;
};

KernelTable build_kernel_table(const GridPtr& grid, double s, double e);

/// e-th power of the Gagliardo norm with zero exterior extension:
///   sum_{i != j} w_ij |u_i - u_j|^e + 2 sum_i c_i |u_i|^e h^n.
/// Computed as nonlinear_form(u, u, kt) so the two agree to the last bit.
double seminorm_pow(const GridFunction& u, const KernelTable& kt);

/// Nonlinear form
///   sum_{i != j} w_ij |u_i-u_j|^{e-2} (u_i-u_j)(v_i-v_j)
///   + 2 sum_i c_i |u_i|^{e-2} u_i v_i h^n.
/// Pairs are accumulated in fixed lexicographic order (i < j, doubled) with
/// compensated summation.
double nonlinear_form(const GridFunction& u, const GridFunction& v, const KernelTable& kt);

/// Nodal assembly of the form against indicator test functions:
///   g_i = 2 sum_{j != i} w_ij |u_i-u_j|^{e-2}(u_i-u_j) + 2 c_i |u_i|^{e-2} u_i h^n,
/// i.e. g_i = nonlinear_form(u, e_i, kt) = (1/e) d(seminorm_pow)/du_i.
Eigen::ArrayXd form_gradient(const GridFunction& u, const KernelTable& kt);

/// Nonlocal tail centered at x0 with radius R:
///   ( R^{e s} sum_{|x_i - x0| > R} |u_i|^{e-1} |x_i - x0|^{-(n + e s)} h^n )^{1/(e-1)}.
/// The exterior of Omega contributes nothing because u vanishes there.
double nonlocal_tail(const GridFunction& u, const Eigen::Vector2d& x0, double R,
                     const KernelTable& kt);

/// Diagnostic pair for the weak Harnack inequality, plus the correction
/// quantities used when u is only nonnegative inside the ball.
struct HarnackReport {
  double inf_quarter_ball = 0.0;  // inf over nodes in B_{R/4}(x0)
  double annulus_mean = 0.0;      // (avg over B_R \ B_{R/2} of u^{q-1})^{1/(q-1)}
  double sup_ball = 0.0;          // sup over B_R
  double tail_p_neg = 0.0;        // T_p(u_-; x0; R)
  double tail_q_neg = 0.0;        // T_q(u_-; x0; R)
  double radius_power = 0.0;      // R^{(p s1 - q s2)/(p - 1)}
};

HarnackReport harnack_pair(const GridFunction& u, const Eigen::Vector2d& x0, double R,
                           const ProblemParams& params, const KernelTable& kt_p,
                           const KernelTable& kt_q);

}  // namespace fracpq
