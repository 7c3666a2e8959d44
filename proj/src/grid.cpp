#include "fracpq/grid.hpp"

#include <cmath>

#include "fracpq/errors.hpp"

namespace fracpq {

GridPtr build_grid(const std::array<double, 2>& lo, const std::array<double, 2>& hi,
                   int nodes_per_axis, int n) {
  if (n != 1 && n != 2) throw ConfigError("grid dimension must be 1 or 2");
  if (nodes_per_axis < 1) throw ConfigError("nodes per axis must be >= 1");
  for (int a = 0; a < n; ++a)
    if (!(lo[a] < hi[a])) throw ConfigError("grid bounds must satisfy lo < hi");
  if (n == 2) {
    const double len0 = hi[0] - lo[0];
    const double len1 = hi[1] - lo[1];
    if (std::abs(len0 - len1) > 1e-14 * len0)
      throw ConfigError("2D grids require equal axis extents");
  }

  auto g = std::make_shared<Grid>();
  g->n = n;
  g->lo = lo;
  g->hi = hi;
  g->nodes_per_axis = nodes_per_axis;
  g->h = (hi[0] - lo[0]) / static_cast<double>(nodes_per_axis + 1);

  const Eigen::Index total = n == 1 ? nodes_per_axis
                                    : static_cast<Eigen::Index>(nodes_per_axis) * nodes_per_axis;
  g->coords.resize(total, n);
  if (n == 1) {
    for (int i = 0; i < nodes_per_axis; ++i)
      g->coords(i, 0) = lo[0] + g->h * static_cast<double>(i + 1);
  } else {
    Eigen::Index row = 0;
    for (int iy = 0; iy < nodes_per_axis; ++iy)
      for (int ix = 0; ix < nodes_per_axis; ++ix, ++row) {
        g->coords(row, 0) = lo[0] + g->h * static_cast<double>(ix + 1);
        g->coords(row, 1) = lo[1] + g->h * static_cast<double>(iy + 1);
      }
  }
  return g;
}

GridPtr build_grid(double lo, double hi, int nodes_per_axis) {
  return build_grid({lo, 0.0}, {hi, 0.0}, nodes_per_axis, 1);
}

double lebesgue_norm(const GridFunction& u, double m) {
  if (!(m >= 1.0)) throw PreconditionError("Lebesgue exponent must satisfy m >= 1");
  const double hn = u.grid->cell_measure();
  const double s = (u.values.abs().pow(m)).sum() * hn;
  return std::pow(s, 1.0 / m);
}

double weighted_power_integral(const GridFunction& u, const Eigen::ArrayXd& w,
                               double expo) {
  const double hn = u.grid->cell_measure();
  return (w * u.values.abs().pow(expo)).sum() * hn;
}

WeightField sample_weights(const Expression& a, const Expression& b, const Grid& grid,
                           const ProblemParams& params) {
  WeightField f;
  const Eigen::Index nn = grid.size();
  f.a.resize(nn);
  f.b.resize(nn);
  for (Eigen::Index i = 0; i < nn; ++i) {
    const double x = grid.coords(i, 0);
    const double y = grid.n == 2 ? grid.coords(i, 1) : 0.0;
    f.a[i] = a(x, y);
    f.b[i] = b(x, y);
    if (!std::isfinite(f.a[i]) || !std::isfinite(f.b[i]))
      throw ConfigError("coefficient sample is not finite inside the domain");
  }
  f.a_sup = f.a.abs().maxCoeff();
  f.b_sup = f.b.abs().maxCoeff();
  f.dual_exponent = params.r / (params.r - params.delta);
  const double hn = grid.cell_measure();
  f.a_dual = std::pow((f.a.abs().pow(f.dual_exponent)).sum() * hn, 1.0 / f.dual_exponent);
  return f;
}

}  // namespace fracpq
