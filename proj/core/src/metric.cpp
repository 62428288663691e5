#include <algorithm>
#include <cmath>

#include "clab/metric.hpp"
#include "clab/sampling.hpp"

namespace clab {

MetricField::MetricField(int dim, EvalFn eval, DerivFn deriv, double lambda, double Lambda,
                         std::string name, double radius)
    : dim_(dim),
      eval_(std::move(eval)),
      deriv_(std::move(deriv)),
      lambda_(lambda),
      Lambda_(Lambda),
      name_(std::move(name)),
      radius_(radius) {
  require_dim(dim);
  if (!(lambda >= 1.0)) throw ParameterError("ellipticity constant must be >= 1");
  if (!(Lambda >= 0.0)) throw ParameterError("Lipschitz constant must be >= 0");
}

MetricField MetricField::identity(int n) {
  if (n < 2) throw DimensionError("identity metric needs n >= 2, got " + std::to_string(n));
  require_dim(n);
  return MetricField(
      n, [](const Vec&) { return Mat::Identity().eval(); },
      [](const Vec&) {
        MetricDeriv d;
        for (auto& m : d) m.setZero();
        return d;
      },
      1.0, 0.0, "identity");
}

MetricDeriv fd_metric_deriv(const MetricField::EvalFn& eval, int dim, const Vec& x, double h) {
  MetricDeriv d;
  for (int k = 0; k < kMaxDim; ++k) {
    d[k].setZero();
    if (k >= dim) continue;
    Vec e = Vec::Zero();
    e[k] = h;
    d[k] = (8.0 * (eval(x + e) - eval(x - e)) - (eval(x + 2.0 * e) - eval(x - 2.0 * e))) / (12.0 * h);
    for (int i = dim; i < kMaxDim; ++i) {
      d[k].row(i).setZero();
      d[k].col(i).setZero();
    }
  }
  return d;
}

MetricField MetricField::sampled(int n, EvalFn eval, std::string name, double radius, double step) {
  DerivFn deriv = [eval, n, step](const Vec& x) { return fd_metric_deriv(eval, n, x, step); };
  return with_estimated_bounds(n, std::move(eval), std::move(deriv), std::move(name), radius);
}

MetricField MetricField::with_estimated_bounds(int n, EvalFn eval, DerivFn deriv, std::string name,
                                               double radius) {
  require_dim(n);
  double lam = 1.0;
  double Lam = 0.0;
  for (const Vec& x : halton_ball(n, 1000, radius)) {
    const Mat g = eval(x);
    Eigen::MatrixXd block = g.topLeftCorner(n, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(block, Eigen::EigenvaluesOnly);
    const double emin = eig.eigenvalues().minCoeff();
    const double emax = eig.eigenvalues().maxCoeff();
    if (!(emin > 0.0)) throw ConstructionError("metric " + name + " is not positive definite");
    lam = std::max({lam, emax, 1.0 / emin});
    const MetricDeriv d = deriv(x);
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double g2 = 0.0;
        for (int k = 0; k < n; ++k) g2 += d[k](i, j) * d[k](i, j);
        sum += std::sqrt(g2);
      }
    Lam = std::max(Lam, sum);
  }
  return MetricField(n, std::move(eval), std::move(deriv), lam, 1.1 * Lam, std::move(name), radius);
}

MetricJet MetricField::jet(const Vec& x) const {
  const Mat g = eval_(x);
  const MetricDeriv d = deriv_(x);
  MetricJet j;
  for (int a = 0; a < kMaxDim; ++a)
    for (int b = 0; b < kMaxDim; ++b) {
      j[a][b] = Jet1(g(a, b));
      for (int k = 0; k < kMaxDim; ++k) j[a][b].d[k] = d[k](a, b);
    }
  return j;
}

MetricField MetricField::frozen(const Vec& x0) const {
  const Mat g0 = eval_(x0);
  MetricField m = *this;
  m.eval_ = [g0](const Vec&) { return g0; };
  m.deriv_ = [](const Vec&) {
    MetricDeriv d;
    for (auto& k : d) k.setZero();
    return d;
  };
  m.Lambda_ = 0.0;
  m.name_ = name_ + "@frozen";
  return m;
}

}  // namespace clab
