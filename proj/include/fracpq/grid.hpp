#pragma once

#include <Eigen/Dense>
#include <array>
#include <memory>

#include "fracpq/expression.hpp"
#include "fracpq/params.hpp"

namespace fracpq {

/// Uniform tensor grid of interior nodes over a box Omega in R^n (n = 1, 2).
/// Spacing h = (hi - lo)/(N + 1); nodes sit strictly inside the box, which is
/// the natural placement for functions that vanish on R^n \ Omega.
struct Grid {
  int n = 1;
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{0.0, 0.0};
  int nodes_per_axis = 0;
  double h = 0.0;
  Eigen::MatrixXd coords;  // size() rows, n columns

  Eigen::Index size() const { return coords.rows(); }
  double cell_measure() const { return n == 1 ? h : h * h; }
  double domain_measure() const {
    double m = 1.0;
    for (int a = 0; a < n; ++a) m *= hi[a] - lo[a];
    return m;
  }
  bool same_layout(const Grid& o) const {
    return n == o.n && nodes_per_axis == o.nodes_per_axis && lo == o.lo && hi == o.hi;
  }
};

using GridPtr = std::shared_ptr<const Grid>;

/// Builds the uniform interior grid. For n = 2 both axes share N and must
/// have equal extent so the spacing h is a single scalar.
GridPtr build_grid(const std::array<double, 2>& lo, const std::array<double, 2>& hi,
                   int nodes_per_axis, int n);

/// 1D convenience overload.
GridPtr build_grid(double lo, double hi, int nodes_per_axis);

/// Real values on interior nodes; implicitly zero everywhere outside Omega.
struct GridFunction {
  GridPtr grid;
  Eigen::ArrayXd values;

  static GridFunction zero(const GridPtr& g) {
    return {g, Eigen::ArrayXd::Zero(g->size())};
  }
};

inline GridFunction scaled(const GridFunction& u, double t) {
  return {u.grid, t * u.values};
}

inline GridFunction abs(const GridFunction& u) {
  return {u.grid, u.values.abs()};
}

/// Discrete Lebesgue norm (sum_i |u_i|^m h^n)^(1/m) for m >= 1.
double lebesgue_norm(const GridFunction& u, double m);

/// Weighted power integral sum_i w_i |u_i|^expo h^n (signed weights allowed).
double weighted_power_integral(const GridFunction& u, const Eigen::ArrayXd& w,
                               double expo);

/// Nodal samples of the coefficient functions a(x), b(x) with their cached
/// norms: sup norms and the dual norm of a in L^{r/(r-delta)}.
struct WeightField {
  Eigen::ArrayXd a;
  Eigen::ArrayXd b;
  double a_sup = 0.0;
  double b_sup = 0.0;
  double a_dual = 0.0;
  double dual_exponent = 0.0;  // r/(r-delta)
};

WeightField sample_weights(const Expression& a, const Expression& b, const Grid& grid,
                           const ProblemParams& params);

}  // namespace fracpq
