#pragma once

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "clab/fields.hpp"

namespace clab {

/// d[k](i, j) = partial_k g^{ij}
using MetricDeriv = std::array<Mat, kMaxDim>;
/// g^{ij} as first-order jets in the seeded coordinates.
using MetricJet = std::array<std::array<Jet1, kMaxDim>, kMaxDim>;

/// Inverse metric g^{-1}(x) with first derivatives.
///
/// Matrices are 3x3; for dim = 2 the unused row and column hold the identity
/// so that inverses and eigenvalues of the padded matrix are meaningful.
class MetricField {
 public:
  using EvalFn = std::function<Mat(const Vec&)>;
  using DerivFn = std::function<MetricDeriv(const Vec&)>;

  MetricField() = default;
  MetricField(int dim, EvalFn eval, DerivFn deriv, double lambda, double Lambda, std::string name,
              double radius = 1.0);

  static MetricField identity(int n);

  /// Metric from a generic callable `f(const std::array<T,3>&) -> std::array<std::array<T,3>,3>`;
  /// derivatives come from forward-mode AD, lambda and Lambda are estimated on samples.
  template <typename F>
  static MetricField analytic(int n, F f, std::string name, double radius = 1.0) {
    require_dim(n);
    EvalFn eval = [f, n](const Vec& x) {
      const auto m = f(to_array(x));
      return pad(n, [&](int i, int j) { return m[i][j]; });
    };
    DerivFn deriv = [f, n](const Vec& x) {
      const auto m = f(seed_jet1(x, n));
      MetricDeriv d;
      for (int k = 0; k < kMaxDim; ++k)
        d[k] = pad0(n, [&](int i, int j) { return k < n ? m[i][j].d[k] : 0.0; });
      return d;
    };
    return with_estimated_bounds(n, std::move(eval), std::move(deriv), std::move(name), radius);
  }

  /// Metric known only through values; derivatives by fourth-order central differences.
  static MetricField sampled(int n, EvalFn eval, std::string name, double radius = 1.0, double step = 1e-3);

  /// Computes lambda and Lambda from a low-discrepancy sample of the ball of the given radius.
  static MetricField with_estimated_bounds(int n, EvalFn eval, DerivFn deriv, std::string name,
                                           double radius);

  int dim() const { return dim_; }
  double lambda() const { return lambda_; }
  double Lambda() const { return Lambda_; }
  double radius() const { return radius_; }
  const std::string& name() const { return name_; }
  bool valid() const { return static_cast<bool>(eval_); }

  Mat eval(const Vec& x) const { return eval_(x); }
  MetricDeriv deriv(const Vec& x) const { return deriv_(x); }
  MetricJet jet(const Vec& x) const;

  /// The metric frozen at a point: constant field with zero derivatives.
  MetricField frozen(const Vec& x0) const;

  template <typename G>
  static Mat pad(int n, G&& g) {
    Mat m = Mat::Identity();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = g(i, j);
    return m;
  }
  template <typename G>
  static Mat pad0(int n, G&& g) {
    Mat m = Mat::Zero();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = g(i, j);
    return m;
  }

 private:
  int dim_ = 0;
  EvalFn eval_;
  DerivFn deriv_;
  double lambda_ = 1.0;
  double Lambda_ = 0.0;
  std::string name_;
  double radius_ = 1.0;
};

/// Central-difference derivative of a matrix field, fourth order.
MetricDeriv fd_metric_deriv(const MetricField::EvalFn& eval, int dim, const Vec& x, double step);

/// Interface graph x_n = gamma(x') with gamma(0) = 0 and grad gamma(0) = 0.
/// Arguments are full-length points whose last used coordinate is ignored.
struct InterfaceGraph {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  /// Optional; when empty the Hessian is obtained by differencing the gradient.
  std::function<Mat(const Vec&)> hessian;
  std::string name = "graph";

  static InterfaceGraph flat();
  static InterfaceGraph paraboloid(double c, int dim);
};

/// Tubular-coordinate diffeomorphism y -> x = (y', gamma(y')) + y_n N(y').
class DiffeoMap {
 public:
  DiffeoMap() = default;
  DiffeoMap(int dim, InterfaceGraph graph, double rho);

  int dim() const { return dim_; }
  double rho() const { return rho_; }
  Vec forward(const Vec& y) const;
  /// Newton iteration; throws GeometryError if it fails to converge.
  Vec inverse(const Vec& x) const;
  Mat jacobian(const Vec& y) const;
  const InterfaceGraph& graph() const { return graph_; }

 private:
  Mat graph_hessian(const Vec& y) const;
  Vec normal(const Vec& y, Mat* dnormal) const;

  int dim_ = 2;
  InterfaceGraph graph_;
  double rho_ = 1.0;
  bool flat_ = false;
};

struct FlattenResult {
  DiffeoMap map;
  MetricField metric;
  /// a-tilde(y) = a(Phi(y)) |det D Phi(y)|, one-sided.
  PiecewiseCoefficient coefficient;
};

/// Flattens the interface {x_n = gamma(x')} to {y_n = 0}. The pulled-back
/// equation div(a grad u) = 0 becomes div(a-tilde g^{-1} grad u) = 0 with
/// g^{-1} = (J^T J)^{-1}, J = D Phi.
FlattenResult flatten_interface(int dim, const InterfaceGraph& graph, const PiecewiseCoefficient& a, double rho);

/// Pass/fail summary of the structural assumptions on a metric.
struct AdmissibilityReport {
  std::string metric;
  int dim = 0;
  std::size_t samples = 0;
  std::size_t interface_samples = 0;
  double symmetry_dev = 0.0;
  double eig_min = 0.0;
  double eig_max = 0.0;
  double lambda_declared = 1.0;
  double lipschitz_quotient = 0.0;
  double Lambda_declared = 0.0;
  double ginzero_dev = 0.0;
  double gatzero_dev = 0.0;
  double deriv_fd_dev = 0.0;
  bool symmetry_ok = false;
  bool ellipticity_ok = false;
  bool lipschitz_ok = false;
  bool ginzero_ok = false;
  bool gatzero_ok = false;
  bool deriv_ok = false;
  bool all_ok() const {
    return symmetry_ok && ellipticity_ok && lipschitz_ok && ginzero_ok && gatzero_ok && deriv_ok;
  }
};

inline constexpr double kStructuralTol = 1e-8;

/// Checks symmetry, ellipticity, Lipschitz bound, g^{-1}(0) = I, the interface
/// rows, and derivative consistency. Interface samples are the volume samples
/// projected to {x_n = 0}.
AdmissibilityReport check_metric_admissibility(const MetricField& m, const std::vector<Vec>& samples);

/// Default sample set: 1000 low-discrepancy points in the metric's ball.
AdmissibilityReport check_metric_admissibility(const MetricField& m);

nlohmann::json to_json(const AdmissibilityReport& r);

/// Built-in metric from a JSON description, see docs/formats.md.
MetricField metric_from_json(const nlohmann::json& j);

/// Built-in metric by id: "identity", "paraboloid(c)", or "paraboloid" (c = 0.5).
MetricField metric_from_id(const std::string& id, int dim);

}  // namespace clab
