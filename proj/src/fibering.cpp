#include "fracpq/fibering.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace fracpq {

namespace {

constexpr double kBracketLo = 1e-6;
constexpr double kBracketHi = 1e6;
constexpr int kBracketPoints = 601;
constexpr double kDegenerate = 1e-14;

double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 240 && (hi - lo) > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((flo <= 0.0) == (fm <= 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Scans a log grid for a sign change of f and bisects the first bracket.
std::optional<double> first_sign_change(const std::function<double(double)>& f,
                                        double lo, double hi) {
  const double step = std::pow(hi / lo, 1.0 / (kBracketPoints - 1));
  double t_prev = lo;
  double f_prev = f(lo);
  for (int k = 1; k < kBracketPoints; ++k) {
    const double t = lo * std::pow(step, k);
    const double ft = f(t);
    if (f_prev == 0.0) return t_prev;
    if ((f_prev < 0.0) != (ft < 0.0)) return bisect(f, t_prev, t);
    t_prev = t;
    f_prev = ft;
  }
  return std::nullopt;
}

}  // namespace

const char* to_string(FiberingCase c) {
  switch (c) {
    case FiberingCase::BothPositive: return "BothPositive";
    case FiberingCase::IaNegIbPos: return "IaNegIbPos";
    case FiberingCase::IaPosIbNeg: return "IaPosIbNeg";
    case FiberingCase::BothNegative: return "BothNegative";
  }
  return "?";
}

double FiberingMap::psi(double t) const {
  if (t < 0.0) throw PreconditionError("ray parameter t must be nonnegative");
  const ProblemParams& pp = params;
  return std::pow(t, pp.p) / pp.p * P + pp.beta * std::pow(t, pp.q) / pp.q * Q -
         pp.lambda * std::pow(t, pp.delta) / pp.delta * Ia -
         std::pow(t, pp.r) / pp.r * Ib;
}

double FiberingMap::dpsi(double t) const {
  if (t <= 0.0) throw PreconditionError("ray derivative needs t > 0");
  const ProblemParams& pp = params;
  return std::pow(t, pp.p - 1.0) * P + pp.beta * std::pow(t, pp.q - 1.0) * Q -
         pp.lambda * std::pow(t, pp.delta - 1.0) * Ia - std::pow(t, pp.r - 1.0) * Ib;
}

double FiberingMap::d2psi(double t) const {
  if (t <= 0.0) throw PreconditionError("ray second derivative needs t > 0");
  const ProblemParams& pp = params;
  return (pp.p - 1.0) * std::pow(t, pp.p - 2.0) * P +
         pp.beta * (pp.q - 1.0) * std::pow(t, pp.q - 2.0) * Q -
         pp.lambda * (pp.delta - 1.0) * std::pow(t, pp.delta - 2.0) * Ia -
         (pp.r - 1.0) * std::pow(t, pp.r - 2.0) * Ib;
}

double FiberingMap::slope(double t) const {
  if (t <= 0.0) throw PreconditionError("slope needs t > 0");
  const ProblemParams& pp = params;
  return std::pow(t, pp.p - pp.delta) * P + pp.beta * std::pow(t, pp.q - pp.delta) * Q -
         std::pow(t, pp.r - pp.delta) * Ib;
}

double FiberingMap::dslope(double t) const {
  if (t <= 0.0) throw PreconditionError("slope derivative needs t > 0");
  const ProblemParams& pp = params;
  return (pp.p - pp.delta) * std::pow(t, pp.p - pp.delta - 1.0) * P +
         pp.beta * (pp.q - pp.delta) * std::pow(t, pp.q - pp.delta - 1.0) * Q -
         (pp.r - pp.delta) * std::pow(t, pp.r - pp.delta - 1.0) * Ib;
}

double FiberingMap::e_lambda() const {
  const ProblemParams& pp = params;
  return ((pp.r - pp.p) * P + pp.beta * (pp.r - pp.q) * Q) / (pp.r - pp.delta) -
         pp.lambda * Ia;
}

double FiberingMap::t_star() const {
  const ProblemParams& pp = params;
  if (!(Ib > 0.0)) throw PreconditionError("t_star needs int b |u|^r > 0");
  return std::pow((pp.p - pp.delta) * P / ((pp.r - pp.delta) * Ib),
                  1.0 / (pp.r - pp.p));
}

double FiberingMap::d2_scale() const {
  const ProblemParams& pp = params;
  return (pp.p - 1.0) * P + pp.beta * (pp.q - 1.0) * Q +
         std::abs(pp.lambda * (pp.delta - 1.0) * Ia) + std::abs((pp.r - 1.0) * Ib);
}

FiberingMap fibering_map(const GridFunction& u, const Problem& prob) {
  FiberingMap m;
  m.params = prob.params;
  m.P = seminorm_pow(u, prob.kernel_p);
  m.Q = seminorm_pow(u, prob.kernel_q);
  m.Ia = weighted_power_integral(u, prob.fields.a, prob.params.delta);
  m.Ib = weighted_power_integral(u, prob.fields.b, prob.params.r);
  m.abs_Ia = weighted_power_integral(u, prob.fields.a.abs(), prob.params.delta);
  m.abs_Ib = weighted_power_integral(u, prob.fields.b.abs(), prob.params.r);
  return m;
}

FiberingMap fibering_map_from_integrals(double P, double Q, double Ia, double Ib,
                                        const ProblemParams& params) {
  FiberingMap m;
  m.params = params;
  m.P = P;
  m.Q = Q;
  m.Ia = Ia;
  m.Ib = Ib;
  m.abs_Ia = std::abs(Ia);
  m.abs_Ib = std::abs(Ib);
  return m;
}

namespace {

/// Newton polish inside the bracket [lo, hi] for f(t) = slope(t) - level,
/// so the reported root satisfies |dpsi| <= 1e-9 (1 + |psi|).
double polish_root(const FiberingMap& m, double t, double level) {
  for (int it = 0; it < 8; ++it) {
    const double f = m.slope(t) - level;
    const double df = m.dslope(t);
    if (df == 0.0) break;
    const double t_next = t - f / df;
    if (!(t_next > 0.0) || !std::isfinite(t_next)) break;
    t = t_next;
    if (std::abs(m.dpsi(t)) <= 1e-12 * (1.0 + std::abs(m.psi(t)))) break;
  }
  return t;
}

}  // namespace

FiberingProfile classify_map(const FiberingMap& map) {
  if (map.P <= 0.0) throw PreconditionError("classification needs a nonzero function");

  FiberingProfile prof;
  prof.map = map;
  prof.ia_degenerate = std::abs(map.Ia) <= kDegenerate * std::max(map.abs_Ia, 1e-300);
  prof.ib_degenerate = std::abs(map.Ib) <= kDegenerate * std::max(map.abs_Ib, 1e-300);

  // Degenerate substitutions: Ib -> +0 keeps the increasing-branch structure,
  // Ia -> 0 drops the lambda term.
  FiberingMap m = map;
  if (prof.ia_degenerate) m.Ia = 0.0;
  if (prof.ib_degenerate) m.Ib = 0.0;

  const bool ia_pos = m.Ia >= 0.0;
  const bool ib_pos = prof.ib_degenerate ? true : m.Ib > 0.0;
  prof.kind = ia_pos ? (ib_pos ? FiberingCase::BothPositive : FiberingCase::IaPosIbNeg)
                     : (ib_pos ? FiberingCase::IaNegIbPos : FiberingCase::BothNegative);

  const double level = m.params.lambda * m.Ia;
  auto f = [&](double t) { return m.slope(t) - level; };
  auto df = [&](double t) { return m.dslope(t); };

  const bool humped = m.Ib > 0.0 && m.dslope(kBracketLo) > 0.0;
  std::optional<double> tm;
  if (humped) tm = first_sign_change(df, kBracketLo, kBracketHi);

  if (m.Ib > 0.0) prof.t_star = m.t_star();

  if (humped && tm) {
    // slope rises to a unique hump at t_max and then falls to -infinity.
    prof.t_max = tm;
    const double hump = m.slope(*tm);
    if (hump <= level) {
      prof.no_roots = true;
    } else {
      if (f(kBracketLo) < 0.0) {
        const double t1 = bisect(f, kBracketLo, *tm);
        prof.t_plus = polish_root(m, t1, level);
        ++prof.found_roots;
      }
      if (f(kBracketHi) < 0.0) {
        const double t2 = bisect(f, *tm, kBracketHi);
        prof.t_minus = polish_root(m, t2, level);
        ++prof.found_roots;
      }
    }
    prof.expected_roots = prof.no_roots ? 0 : (level > 0.0 ? 2 : 1);
  } else if (m.Ib > 0.0 && !humped) {
    // Hump sits at or below the bracket: slope decreases on the whole range,
    // so any crossing is a local maximum.
    const double hump = m.slope(kBracketLo);
    if (hump <= level) {
      prof.no_roots = true;
    } else if (f(kBracketHi) < 0.0) {
      const double t2 = bisect(f, kBracketLo, kBracketHi);
      prof.t_minus = polish_root(m, t2, level);
      ++prof.found_roots;
    }
    prof.expected_roots = prof.no_roots ? 0 : 1;
  } else {
    // Ib <= 0 (or positive but increasing through the whole bracket):
    // slope is nondecreasing, at most one crossing, always a local minimum.
    if (auto root = first_sign_change(f, kBracketLo, kBracketHi)) {
      prof.t_plus = polish_root(m, *root, level);
      ++prof.found_roots;
    }
    prof.expected_roots = (level > 0.0) ? 1 : 0;
  }
  return prof;
}

FiberingProfile classify(const GridFunction& u, const Problem& prob) {
  return classify_map(fibering_map(u, prob));
}

GridFunction project_nehari_plus(const GridFunction& u, const Problem& prob) {
  FiberingProfile prof = classify(u, prob);
  if (!prof.t_plus)
    throw NoRootError("no local-minimum scaling exists for this function", prof);
  return scaled(u, *prof.t_plus);
}

GridFunction project_nehari_minus(const GridFunction& u, const Problem& prob) {
  FiberingProfile prof = classify(u, prob);
  if (!prof.t_minus)
    throw NoRootError("no local-maximum scaling exists for this function", prof);
  return scaled(u, *prof.t_minus);
}

int nehari_sign(const FiberingMap& map) {
  const double band = 1e-9 * map.d2_scale();
  const double d2 = map.d2psi(1.0);
  if (d2 > band) return 1;
  if (d2 < -band) return -1;
  return 0;
}

double ray_argmax(const FiberingMap& map) {
  constexpr int points = 400;
  const double step = std::pow(kBracketHi / kBracketLo, 1.0 / (points - 1));
  double best_t = kBracketLo;
  double best_v = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < points; ++k) {
    const double t = kBracketLo * std::pow(step, k);
    const double v = map.psi(t);
    if (v > best_v) {
      best_v = v;
      best_t = t;
    }
  }
  double a = best_t / step, b = best_t * step;
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = map.psi(c), fd = map.psi(d);
  for (int it = 0; it < 200 && (b - a) > 1e-13 * b; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = map.psi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = map.psi(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace fracpq
