#pragma once

#include <optional>

#include "fracpq/energy.hpp"
#include "fracpq/problem.hpp"

namespace fracpq {

/// Sign pattern of the two coefficient integrals Ia = int a|u|^delta and
/// Ib = int b|u|^r, which determines the shape of the ray map t -> J(tu).
enum class FiberingCase { BothPositive, IaNegIbPos, IaPosIbNeg, BothNegative };

const char* to_string(FiberingCase c);

/// One-dimensional restriction of the energy to the ray through u, expressed
/// through the four homogeneous integrals
///   P = ||u||_{p,s1}^p, Q = ||u||_{q,s2}^q, Ia, Ib.
/// psi(t) = t^p/p P + beta t^q/q Q - lambda t^delta/delta Ia - t^r/r Ib,
/// and slope(t) = t^{p-delta} P + beta t^{q-delta} Q - t^{r-delta} Ib is the
/// lambda-independent part: dpsi(t) = t^{delta-1} (slope(t) - lambda Ia).
struct FiberingMap {
  double P = 0.0;
  double Q = 0.0;
  double Ia = 0.0;
  double Ib = 0.0;
  double abs_Ia = 0.0;  // unsigned versions, used for degeneracy detection
  double abs_Ib = 0.0;
  ProblemParams params;

  double psi(double t) const;
  double dpsi(double t) const;
  double d2psi(double t) const;
  double slope(double t) const;   // M(t)
  double dslope(double t) const;  // M'(t)
  double level() const { return params.lambda * Ia; }

  /// [(r-p) P + beta (r-q) Q]/(r-delta) - lambda Ia; vanishes on the
  /// degenerate part of the Nehari set.
  double e_lambda() const;

  /// ((p-delta) P / ((r-delta) Ib))^{1/(r-p)}; requires Ib > 0.
  double t_star() const;

  /// Magnitude scale of d2psi(1), used for the inflection tolerance band.
  double d2_scale() const;
};

FiberingMap fibering_map(const GridFunction& u, const Problem& prob);

FiberingMap fibering_map_from_integrals(double P, double Q, double Ia, double Ib,
                                        const ProblemParams& params);

/// Classification outcome: case, critical scales of the ray map, and the
/// located roots of dpsi. t_plus scales u onto the local-minimum branch
/// (N^+), t_minus onto the local-maximum branch (N^-).
struct FiberingProfile {
  FiberingMap map;
  FiberingCase kind = FiberingCase::BothPositive;
  bool ia_degenerate = false;
  bool ib_degenerate = false;
  std::optional<double> t_star;
  std::optional<double> t_max;
  std::optional<double> t_plus;   // N^+ root (dslope > 0 there)
  std::optional<double> t_minus;  // N^- root (dslope < 0 there)
  bool no_roots = false;          // level above the hump of slope()
  int expected_roots = 0;
  int found_roots = 0;
};

/// Analyzes the ray map of u: locates t_max as the bracketed root of dslope
/// and the <= 2 solutions of slope(t) = lambda Ia by bisection on the two
/// monotone branches of slope, scanning t in [1e-6, 1e6].
FiberingProfile classify(const GridFunction& u, const Problem& prob);

/// Same analysis from precomputed integrals (no grid function involved).
FiberingProfile classify_map(const FiberingMap& map);

/// Raised when a requested projection root does not exist.
struct NoRootError : PreconditionError {
  FiberingProfile profile;
  NoRootError(const std::string& msg, FiberingProfile prof)
      : PreconditionError(msg), profile(std::move(prof)) {}
};

/// Scales u onto the N^+ (resp. N^-) branch. Throws NoRootError carrying the
/// profile when the root is absent.
GridFunction project_nehari_plus(const GridFunction& u, const Problem& prob);
GridFunction project_nehari_minus(const GridFunction& u, const Problem& prob);

/// Sign of d2psi(1) within a 1e-9 tolerance band: +1 (local min side),
/// -1 (local max side), 0 when inside the band (inflection-ambiguous).
int nehari_sign(const FiberingMap& map);

/// Maximizer of psi over t in [1e-6, 1e6]: coarse log scan followed by
/// golden-section refinement. The supremum is finite whenever Ib > 0.
double ray_argmax(const FiberingMap& map);

}  // namespace fracpq
