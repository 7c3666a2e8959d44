#include "fracpq/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "fracpq/errors.hpp"
#include "fracpq/kahan.hpp"

namespace fracpq {

namespace {

double node_distance(const Grid& g, Eigen::Index i, Eigen::Index j) {
  if (g.n == 1) return std::abs(g.coords(i, 0) - g.coords(j, 0));
  const double dx = g.coords(i, 0) - g.coords(j, 0);
  const double dy = g.coords(i, 1) - g.coords(j, 1);
  return std::hypot(dx, dy);
}

/// Exit distance of the ray from (x, y) at angle phi to the rectangle edge.
double ray_exit_distance(double x, double y, double phi, const Grid& g) {
  const double cx = std::cos(phi);
  const double sy = std::sin(phi);
  double t = std::numeric_limits<double>::infinity();
  if (cx > 1e-300) t = std::min(t, (g.hi[0] - x) / cx);
  else if (cx < -1e-300) t = std::min(t, (g.lo[0] - x) / cx);
  if (sy > 1e-300) t = std::min(t, (g.hi[1] - y) / sy);
  else if (sy < -1e-300) t = std::min(t, (g.lo[1] - y) / sy);
  return t;
}

double simpson(const std::function<double(double)>& f, double a, double b) {
  return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double left = simpson(f, a, m);
  const double right = simpson(f, m, b);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, right, 0.5 * tol, depth - 1);
}

/// c_i in 2D via the polar identity
///   int_{R^2 \ Omega} |x_i - y|^{-(2 + es)} dy
///     = (1/(es)) int_0^{2pi} d(phi)^{-es} dphi,
/// where d(phi) is the ray exit distance; the integrand is smooth between
/// corner directions, so the quadrature intervals are split there.
double exterior_coefficient_2d(double x, double y, double es, const Grid& g) {
  auto integrand = [&](double phi) {
    return std::pow(ray_exit_distance(x, y, phi, g), -es);
  };
  std::vector<double> cuts;
  cuts.push_back(0.0);
  const double corners[4][2] = {{g.lo[0], g.lo[1]}, {g.hi[0], g.lo[1]},
                                {g.lo[0], g.hi[1]}, {g.hi[0], g.hi[1]}};
  for (const auto& c : corners) {
    double phi = std::atan2(c[1] - y, c[0] - x);
    if (phi < 0.0) phi += 2.0 * std::numbers::pi;
    cuts.push_back(phi);
  }
  cuts.push_back(2.0 * std::numbers::pi);
  std::sort(cuts.begin(), cuts.end());

  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k];
    const double b = cuts[k + 1];
    if (b - a < 1e-14) continue;
    total += adaptive_simpson(integrand, a, b, simpson(integrand, a, b), 1e-13, 40);
  }
  return total / es;
}

}  // namespace

KernelTable build_kernel_table(const GridPtr& grid, double s, double e) {
  if (!(s > 0.0 && s < 1.0)) throw ConfigError("fractional order must lie in (0,1)");
  if (!(e > 1.0)) throw ConfigError("kernel exponent must exceed 1");

  KernelTable kt;
  kt.grid = grid;
  kt.s = s;
  kt.e = e;
  const Grid& g = *grid;
  const Eigen::Index nn = g.size();
  const double es = e * s;
  const double pair_scale = std::pow(g.cell_measure(), 2);  // h^{2n}
  const double kernel_exp = static_cast<double>(g.n) + es;

  kt.w = Eigen::MatrixXd::Zero(nn, nn);
  for (Eigen::Index i = 0; i < nn; ++i)
    for (Eigen::Index j = i + 1; j < nn; ++j) {
      const double wij = pair_scale / std::pow(node_distance(g, i, j), kernel_exp);
      kt.w(i, j) = wij;
      kt.w(j, i) = wij;
    }

  kt.c.resize(nn);
  if (g.n == 1) {
    for (Eigen::Index i = 0; i < nn; ++i) {
      const double x = g.coords(i, 0);
      kt.c[i] = (std::pow(x - g.lo[0], -es) + std::pow(g.hi[0] - x, -es)) / es;
    }
  } else {
    for (Eigen::Index i = 0; i < nn; ++i)
      kt.c[i] = exterior_coefficient_2d(g.coords(i, 0), g.coords(i, 1), es, g);
  }
  return kt;
}

double nonlinear_form(const GridFunction& u, const GridFunction& v, const KernelTable& kt) {
  if (!u.grid->same_layout(*kt.grid) || !v.grid->same_layout(*kt.grid))
    throw UsageError("grid mismatch between function and kernel table");
  const Eigen::Index nn = kt.grid->size();
  const double e = kt.e;

  KahanSum pairs;
  for (Eigen::Index i = 0; i < nn; ++i)
    for (Eigen::Index j = i + 1; j < nn; ++j) {
      const double du = u.values[i] - u.values[j];
      if (du == 0.0) continue;
      pairs.add(kt.w(i, j) * odd_power(du, e) * (v.values[i] - v.values[j]));
    }

  KahanSum exterior;
  for (Eigen::Index i = 0; i < nn; ++i)
    exterior.add(kt.c[i] * odd_power(u.values[i], e) * v.values[i]);

  const double hn = kt.grid->cell_measure();
  return 2.0 * pairs.value() + 2.0 * exterior.value() * hn;
}

double seminorm_pow(const GridFunction& u, const KernelTable& kt) {
  return nonlinear_form(u, u, kt);
}

Eigen::ArrayXd form_gradient(const GridFunction& u, const KernelTable& kt) {
  if (!u.grid->same_layout(*kt.grid))
    throw UsageError("grid mismatch between function and kernel table");
  const Eigen::Index nn = kt.grid->size();
  const double e = kt.e;
  const double hn = kt.grid->cell_measure();

  Eigen::ArrayXd g = Eigen::ArrayXd::Zero(nn);
  for (Eigen::Index i = 0; i < nn; ++i)
    for (Eigen::Index j = i + 1; j < nn; ++j) {
      const double du = u.values[i] - u.values[j];
      if (du == 0.0) continue;
      const double f = 2.0 * kt.w(i, j) * odd_power(du, e);
      g[i] += f;
      g[j] -= f;
    }
  for (Eigen::Index i = 0; i < nn; ++i)
    g[i] += 2.0 * kt.c[i] * odd_power(u.values[i], e) * hn;
  return g;
}

namespace {

double distance_to(const Grid& g, Eigen::Index i, const Eigen::Vector2d& x0) {
  if (g.n == 1) return std::abs(g.coords(i, 0) - x0[0]);
  return std::hypot(g.coords(i, 0) - x0[0], g.coords(i, 1) - x0[1]);
}

double tail_of_values(const Eigen::ArrayXd& vals, const Eigen::Vector2d& x0, double R,
                      const KernelTable& kt) {
  const Grid& g = *kt.grid;
  const double es = kt.e * kt.s;
  const double kernel_exp = static_cast<double>(g.n) + es;
  const double hn = g.cell_measure();
  KahanSum sum;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double d = distance_to(g, i, x0);
    if (d <= R) continue;
    const double a = std::abs(vals[i]);
    if (a == 0.0) continue;
    sum.add(std::pow(a, kt.e - 1.0) * std::pow(d, -kernel_exp) * hn);
  }
  return std::pow(std::pow(R, es) * sum.value(), 1.0 / (kt.e - 1.0));
}

}  // namespace

double nonlocal_tail(const GridFunction& u, const Eigen::Vector2d& x0, double R,
                     const KernelTable& kt) {
  if (!(R > 0.0)) throw PreconditionError("tail radius must be positive");
  if (!u.grid->same_layout(*kt.grid))
    throw UsageError("grid mismatch between function and kernel table");
  return tail_of_values(u.values, x0, R, kt);
}

HarnackReport harnack_pair(const GridFunction& u, const Eigen::Vector2d& x0, double R,
                           const ProblemParams& params, const KernelTable& kt_p,
                           const KernelTable& kt_q) {
  if (!(R > 0.0)) throw PreconditionError("ball radius must be positive");
  const Grid& g = *u.grid;

  double inf_quarter = std::numeric_limits<double>::infinity();
  double sup_ball = -std::numeric_limits<double>::infinity();
  KahanSum annulus;
  Eigen::Index n_quarter = 0, n_annulus = 0;
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const double d = distance_to(g, i, x0);
    if (d <= R) {
      if (u.values[i] < 0.0)
        throw PreconditionError("function must be nonnegative inside the ball");
      sup_ball = std::max(sup_ball, u.values[i]);
    }
    if (d <= R / 4.0) {
      inf_quarter = std::min(inf_quarter, u.values[i]);
      ++n_quarter;
    }
    if (d > R / 2.0 && d <= R) {
      annulus.add(std::pow(u.values[i], params.q - 1.0));
      ++n_annulus;
    }
  }
  if (n_quarter == 0) throw GeometryError("no nodes inside the quarter ball");
  if (n_annulus == 0) throw GeometryError("no nodes inside the annulus");

  HarnackReport rep;
  rep.inf_quarter_ball = inf_quarter;
  rep.annulus_mean =
      std::pow(annulus.value() / static_cast<double>(n_annulus), 1.0 / (params.q - 1.0));
  rep.sup_ball = sup_ball;

  Eigen::ArrayXd neg = (-u.values).max(0.0);
  rep.tail_p_neg = tail_of_values(neg, x0, R, kt_p);
  rep.tail_q_neg = tail_of_values(neg, x0, R, kt_q);
  rep.radius_power =
      std::pow(R, (params.p * params.s1 - params.q * params.s2) / (params.p - 1.0));
  return rep;
}

}  // namespace fracpq
