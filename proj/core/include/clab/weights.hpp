#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "clab/metric.hpp"

namespace clab {

struct WeightParams {
  double eps = 0.5;
  WeightParams() = default;
  explicit WeightParams(double e) : eps(e) { validate(); }
  void validate() const {
    if (!(eps > 0.0 && eps <= 1.0)) throw ParameterError("epsilon must lie in (0, 1]");
  }
};

/// psi(s) = s (1 + s^eps)^(-1/eps). Throws DomainError for s <= 0.
double psi(double s, double eps);
double psi_prime(double s, double eps);
/// phi(s) = 1 + s^eps, for s >= 0.
double phi(double s, double eps);
double phi_prime(double s, double eps);

template <typename T>
T psi_of(const T& s, double eps) {
  return s * pow(1.0 + pow(s, eps), -1.0 / eps);
}

template <typename T>
T phi_of(const T& s, double eps) {
  return 1.0 + pow(s, eps);
}

template <typename T>
T sigma_of(const Vec3<T>& x, int dim) {
  T s2 = x[0] * x[0];
  for (int i = 1; i < dim; ++i) s2 = s2 + x[i] * x[i];
  return sqrt(s2);
}

/// sigma = |x| as a field.
ScalarField sigma_field(int dim);
/// w = psi(sigma) as a field.
ScalarField weight_field(const WeightParams& p, int dim);

struct WeightBundle {
  double sigma = 0.0;
  double w = 0.0;
  /// g^{-1} grad w
  Vec grad_w = Vec::Zero();
  /// |grad_g w|^2 in the metric g
  double grad_w_norm2 = 0.0;
  double lap_w = 0.0;
  double F_w = 0.0;
  double phi_sigma = 1.0;
  /// Two-sided bound on |grad_g w|^2 / w^2 and w <= sigma.
  bool bounds_ok = false;
};

/// Throws SingularityError at x = 0 and DomainError outside the unit ball.
WeightBundle weight_bundle(const Vec& x, const WeightParams& p, const MetricField& m);

/// Empirical constants for the weight bounds: each is the observed worst case
/// times 1.1, and C is the largest of them (at least 1).
struct WeightConstants {
  double C = 1.0;
  double C_sigma = 1.0;  // sigma / w
  double C_grad = 1.0;   // max(|grad_g w|, 1 / |grad_g w|)
  double C_lap = 0.0;    // |lap_g w| w
  double C_F = 0.0;      // |F_w|
  /// min over samples of (|grad_g w|^2 / w^2) / lower bound and upper bound / (|grad_g w|^2 / w^2)
  double lower_margin = 0.0;
  double upper_margin = 0.0;
  bool w_below_sigma = true;
  bool gradient_bounds_hold = true;
  std::size_t samples = 0;
};

WeightConstants weight_constants(const WeightParams& p, const MetricField& m, const std::vector<Vec>& samples);

nlohmann::json to_json(const WeightConstants& c);

}  // namespace clab
