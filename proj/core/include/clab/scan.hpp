#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "clab/carleman.hpp"

namespace clab {

struct ScanConfig {
  Estimate estimate = Estimate::Thm21;
  MetricField metric;
  PiecewiseCoefficient gamma;
  WeightParams eps{0.5};
  std::vector<double> taus;
  std::vector<TestFunction> family;
  std::string metric_id = "identity";
  std::string gamma_id = "1,1";
  std::string family_id = "bump";
  std::uint64_t seed = 1;
  unsigned threads = 0;
  CarlemanOptions options;
};

struct ScanResult {
  Estimate estimate = Estimate::Thm21;
  std::vector<double> taus;
  std::vector<std::string> members;
  /// Declared outer support radius of each member.
  std::vector<double> member_radius;
  /// sides[member][tau index]
  std::vector<std::vector<CarlemanSides>> sides;
  /// Least grid tau after which all of the member's margins are >= 0.
  std::vector<std::optional<double>> member_tau0;
  /// Largest member tau0 when every member has one.
  std::optional<double> tau0;
  /// Largest R such that every member with support radius <= R has a tau0.
  std::optional<double> rbar;
  double eps = 0.5;
  std::string metric_id;
  std::string gamma_id;
  std::string family_id;
  std::uint64_t seed = 0;
};

/// Every (member, tau) pair in parallel; results land in grid order, so the
/// outcome does not depend on the worker count. Throws ParameterError for an
/// empty family or a grid that is not strictly increasing.
ScanResult tau_scan(const ScanConfig& config);

/// n points log-spaced from a to b inclusive (n = 1 gives {a}).
std::vector<double> log_grid(double a, double b, std::size_t n);

/// Parses "a:b:n" into log_grid(a, b, n).
std::vector<double> parse_tau_grid(const std::string& text);

/// Least squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Member-major CSV with columns tau, term_grad, term_u2, term_r,
/// term_interface, lhs, margin, member, log_scale (%.17g).
void write_csv(const ScanResult& r, std::ostream& os);

nlohmann::json summary_json(const ScanResult& r);

}  // namespace clab
