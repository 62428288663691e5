#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "clab/quadrature.hpp"
#include "clab/test_function.hpp"
#include "clab/weights.hpp"

namespace clab {

/// thm21: the estimate for u with weight w^{-2 tau} and (Delta_g u)^2 on the left.
/// prop35: the estimate for f itself with (P_{w,tau} f)^2 on the left.
/// prop42: thm21 plus the r-term, for u supported in an annulus.
/// lem41: r-weighted f^2 against the A_w(f)^2 integral, for f = w^{-tau} u
///        supported in an annulus.
enum class Estimate { Thm21, Prop35, Prop42, Lem41 };

std::string to_string(Estimate e);
/// Throws ParameterError for an unknown name.
Estimate estimate_from_string(const std::string& s);

/// Both sides of an estimate, term by term. margin = lhs - (term_grad +
/// term_u2 + term_r + term_interface). For lem41, lhs = 16 * int A^2,
/// term_u2 = psi(r) * int f^2 (the inequality actually proved) and term_r =
/// r * int f^2 is reported but not part of the margin; C_emp = term_r / int A^2.
///
/// Every quantity except for prop35 is multiplied by exp(-log_scale) with
/// log_scale = -2 tau log w_ref, w_ref = psi(inner support radius), which keeps
/// the numbers in floating-point range; margins and ratios are unaffected.
struct CarlemanSides {
  Estimate estimate = Estimate::Thm21;
  double tau = 0.0;
  double lhs = 0.0;
  double term_grad = 0.0;
  double term_u2 = 0.0;
  double term_r = 0.0;
  double term_interface = 0.0;
  /// Sum of |upper| + |lower| contributions to the interface integral.
  double interface_scale = 0.0;
  double margin = 0.0;
  double log_scale = 0.0;
  /// The u^2 (resp. f^2) integral without the tau-dependent prefactor.
  double u2_integral = 0.0;
  double C_emp = 0.0;
  int level = 0;
  double max_change = 0.0;
};

struct CarlemanOptions {
  double rel_tol = 1e-4;
  int max_level = 4;
  QuadratureOptions quadrature;
};

/// Evaluates both sides by quadrature refined until successive levels agree.
/// Throws HypothesisError when the declared support of u does not match the
/// estimate (annulus for prop42 and lem41; punctured ball, half-ball or
/// annulus for thm21 and prop35) and IntegrandError on non-convergence.
CarlemanSides carleman_sides(const TestFunction& u, const PiecewiseCoefficient& gamma, const MetricField& m,
                             double tau, const WeightParams& eps, Estimate which, const CarlemanOptions& opt = {});

/// The constant C of the r-term in prop42: 2 lambda C41 / gamma0, with
/// C41 = 16 r / psi(r) from lem41.
double prop42_constant(double r, double lambda, double gamma0, double eps);

struct Antisymmetry {
  /// int |grad_g w|^2 / w^2 A_w(f) f over the punctured ball
  double value = 0.0;
  /// int |grad_g w|^2 / w^2 |A_w(f)| |f|
  double scale = 0.0;
  double relative() const { return scale > 0.0 ? std::abs(value) / scale : std::abs(value); }
};

Antisymmetry antisymmetry_integral(const TestFunction& f, const MetricField& m, const WeightParams& eps,
                                   const CarlemanOptions& opt = {});

nlohmann::json to_json(const CarlemanSides& s);

}  // namespace clab
