#pragma once

#include <optional>

#include "clab/weights.hpp"

namespace clab {

/// Data for the conjugated operator P_{v,tau}(f) = v^{-tau} lap_g(v^tau f).
struct ConjugationContext {
  ScalarField v;
  double tau = 1.0;
  MetricField metric;
  PiecewiseCoefficient gamma;
};

/// Metric and its derivatives frozen at one point, with the lowered metric g.
struct LocalMetric {
  int n = 2;
  Mat ginv;
  Mat g;
  MetricDeriv dg;
  MetricJet jet;

  static LocalMetric at(const MetricField& m, const Vec& x);

  /// <a, g^{-1} b> for lower-index vectors.
  double inner_lower(const Vec& a, const Vec& b) const { return a.dot(ginv * b); }
  /// <g a, b> for raised vectors (the paper's xi . eta).
  double inner_raised(const Vec& a, const Vec& b) const { return a.dot(g * b); }
};

/// g^{ij} d_i d_j f + (d_i g^{ij}) d_j f
double laplace_g(const Jet2& f, const LocalMetric& lm);

/// g^{-1}(x) grad f(x)
Vec weighted_gradient(const ScalarField& f, const MetricField& m, const Vec& x);
double laplace_g(const ScalarField& f, const MetricField& m, const Vec& x);

struct ConjugatedParts {
  double P_direct = 0.0;      // v^{-tau} lap_g(v^tau f)
  double P_decomposed = 0.0;  // P_s + 2 tau |grad_g v|^2 / v^2 A_v(f)
  double P_s = 0.0;
  double A_v = 0.0;
  double F_v = 0.0;
  double grad_v_norm2 = 0.0;  // |grad_g v|^2
  double v = 0.0;
  Vec B_v = Vec::Zero();
  Mat S_v = Mat::Zero();
  Mat M_v = Mat::Zero();
};

/// Throws SingularityError when |grad_g v| vanishes or v <= 0.
ConjugatedParts conjugated_parts(const ConjugationContext& ctx, const ScalarField& f, const Vec& x);

/// |LHS - RHS| together with the sum of absolute term sizes.
struct Residual {
  double residual = 0.0;
  double scale = 0.0;
  double relative() const { return scale > 0.0 ? std::abs(residual) / scale : std::abs(residual); }
};

/// Rellich identity with every divergence expanded by AD. gamma is evaluated
/// on `side` (required when x is on the interface).
Residual check_rellich(const VectorField& B, const PiecewiseCoefficient& gamma, const ScalarField& f,
                       const MetricField& m, const Vec& x, std::optional<Side> side = std::nullopt);

/// The squared-operator expansion: gamma v^2/|grad_g v|^2 (P f)^2 against its
/// nine-term right-hand side.
Residual check_conjugated_identity(const ConjugationContext& ctx, const ScalarField& f, const Vec& x,
                       std::optional<Side> side = std::nullopt);

struct WeightIdentityResiduals {
  Residual le1;  // S_v grad v = 0
  Residual le2;  // F_{psi(v)} = phi(v) F_v - phi'(v) v
  Residual le3;  // expansion of M_{psi(v)}
  Residual le4;  // F_sigma = n - 2 and M_sigma = 0 for the metric frozen at 0
};

WeightIdentityResiduals check_weight_identities(const ScalarField& v, const MetricField& m, const Vec& x, const Vec& xi,
                               const Vec& eta, double eps);

struct NormalTangential {
  Vec grad_N = Vec::Zero();
  Vec grad_T = Vec::Zero();
  Residual pythagoras;
};

/// Split of grad_g f along grad_g sigma; x != 0.
NormalTangential normal_tangential_split(const ScalarField& f, const MetricField& m, const Vec& x);

struct FluxFields {
  Vec G1 = Vec::Zero();
  Vec G2 = Vec::Zero();
  double div_G1 = 0.0;
  double div_G2 = 0.0;
};

/// G1 = tau^2 gamma f^2 grad_g v / v + 2 (gamma B_v . grad_g f) grad_g f - gamma |grad_g f|^2 B_v
/// G2 = 2 tau G1 + tau (n - 2) gamma phi(sigma) grad_g(f^2)
/// with v = ctx.v (normally the weight w).
FluxFields flux_fields(const ConjugationContext& ctx, const ScalarField& f, const Vec& x, const WeightParams& p,
                       std::optional<Side> side = std::nullopt);

struct PointwiseCarleman {
  double lhs = 0.0;
  double term_Ps = 0.0;
  double term_A = 0.0;
  double term_grad = 0.0;
  double term_f2 = 0.0;
  double div_G2 = 0.0;
  double margin = 0.0;
};

/// Pointwise estimate for v = w: lhs minus all right-hand terms including div G2.
PointwiseCarleman check_pointwise_carleman(const ConjugationContext& ctx, const ScalarField& f, const Vec& x,
                                           const WeightParams& p, std::optional<Side> side = std::nullopt);

/// psi(v) as a field.
ScalarField compose_psi(const ScalarField& v, double eps);

}  // namespace clab
