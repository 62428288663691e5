#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "clab/opcalc.hpp"
#include "clab/sampling.hpp"

namespace clab {

/// Polynomial with random coefficients, evaluable on doubles and jets.
struct RandomPoly {
  int dim = 2;
  std::vector<std::array<int, kMaxDim>> exps;
  std::vector<double> coef;

  /// All monomials of total degree <= degree, coefficients N(0, scale^2).
  static RandomPoly draw(Rng& rng, int dim, int degree, double scale);

  template <typename T>
  T operator()(const Vec3<T>& x) const {
    T s = T(0.0);
    for (std::size_t t = 0; t < coef.size(); ++t) {
      T m = T(coef[t]);
      for (int i = 0; i < dim; ++i)
        for (int e = 0; e < exps[t][i]; ++e) m = m * x[i];
      s = s + m;
    }
    return s;
  }
};

/// One random draw of the fields entering the identities.
struct IdentityConfig {
  Vec x = Vec::Zero();
  double tau = 1.0;
  ScalarField v;  // positive, sigma exp(p)
  ScalarField f;  // polynomial plus Gaussian bump
  PiecewiseCoefficient gamma;
  VectorField B;
  Vec xi = Vec::Zero();
  Vec eta = Vec::Zero();
};

/// Deterministic in (seed, index) and independent of evaluation order.
IdentityConfig draw_identity_config(const MetricField& m, std::uint64_t seed, std::size_t index);

struct IdentityStats {
  double max_relative = 0.0;
  double mean_relative = 0.0;
  std::size_t worst_index = 0;
};

struct IdentitySuiteReport {
  std::string metric;
  int dim = 2;
  double eps = 0.5;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double tolerance = 1e-7;
  std::map<std::string, IdentityStats> identities;
  bool pass() const;
};

IdentitySuiteReport run_identity_suite(const MetricField& m, double eps, std::size_t samples, std::uint64_t seed,
                                       unsigned threads = 1);

nlohmann::json to_json(const IdentitySuiteReport& r);

}  // namespace clab
