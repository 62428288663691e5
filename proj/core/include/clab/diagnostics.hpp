#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "clab/fem.hpp"

namespace clab {

/// int_{B_r} U^2 for the piecewise-linear U. Cells inside B_r are integrated
/// exactly; cells cut by the circle are clipped to it and integrated with
/// Green's theorem (exact on the straight pieces, high-order Gauss on arcs).
double mass(const SolutionField& U, double r);

struct DoublingReport {
  std::vector<double> radii;
  /// mass(r) for each radius
  std::vector<double> mass;
  /// mass(2 r) / mass(r)
  std::vector<double> ratio;
  double rbar1 = 0.0;
  /// N = mass(rbar1) / mass(rbar1 / 4)
  double frequency = 0.0;
  /// N^3 / rbar1^3, the doubling bound with unit constant
  double bound = 0.0;
  /// Smallest C with mass(4 r) <= C N^3 / rbar1^3 mass(2 r) for all radii.
  double C_emp = 0.0;
  /// Least-squares slope of log mass(r) against log r.
  double vanishing_slope = 0.0;
};

/// Throws ParameterError unless every radius lies in (0, rbar1 / 16), and
/// DegenerateError when mass(rbar1 / 4) = 0.
DoublingReport doubling_report(const SolutionField& U, const std::vector<double>& radii, double rbar1);

/// Least-squares slope of log mass(r) against log r; needs at least four radii
/// spanning a factor of ten (ParameterError) and positive masses (DegenerateError).
double vanishing_order(const SolutionField& U, const std::vector<double>& radii);

/// Quintic smoothstep S(t) = 6t^5 - 15t^4 + 10t^3 and its derivative bounds.
double smoothstep(double t);
double smoothstep_d1(double t);
double smoothstep_d2(double t);
inline constexpr double kSmoothstepD1Max = 15.0 / 8.0;
double smoothstep_d2_max();

/// Radial cutoff: 0 on [0, r) and beyond rbar1/2, 1 on [2r, rbar1/4], quintic
/// smoothstep transitions in between. C^2.
struct CutoffProfile {
  double r = 0.0;
  double rbar1 = 0.0;
  double operator()(double t) const;
  double d1(double t) const;
  double d2(double t) const;
  /// Constants C with |eta^(k)| <= C r^-k on (r, 2r) and C rbar1^-k on
  /// (rbar1/4, rbar1/2); the outer band has width rbar1/4, hence 4^k.
  double C1() const { return 4.0 * kSmoothstepD1Max; }
  double C2() const { return 16.0 * smoothstep_d2_max(); }
};

/// Throws ParameterError unless 0 < 4r < rbar1/4.
CutoffProfile cutoff_profile(double r, double rbar1);

/// Both sides of the preliminary doubling inequality at one (r, R, tau):
/// lhs = R^{-1-2tau} M(R) + R (4r)^{-2-2tau} M(4r) and
/// rhs = r^{-2-2tau} M(2r) + rbar1^{-2-2tau} M(rbar1), in logarithms.
struct ThreeBallCheck {
  double tau = 0.0;
  double log_lhs = 0.0;
  double log_rhs = 0.0;
  /// lhs / rhs
  double ratio = 0.0;
};

/// Evaluates the inequality for each tau; requires 0 < 4r < R <= rbar1/4.
std::vector<ThreeBallCheck> three_ball_check(const SolutionField& U, double r, double R, double rbar1,
                                        const std::vector<double>& taus);

nlohmann::json to_json(const DoublingReport& d);

}  // namespace clab
