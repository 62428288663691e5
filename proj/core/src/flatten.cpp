#include <cmath>

#include "clab/metric.hpp"
#include "clab/sampling.hpp"

namespace clab {

InterfaceGraph InterfaceGraph::flat() {
  InterfaceGraph g;
  g.value = [](const Vec&) { return 0.0; };
  g.gradient = [](const Vec&) { return Vec::Zero().eval(); };
  g.hessian = [](const Vec&) { return Mat::Zero().eval(); };
  g.name = "flat";
  return g;
}

InterfaceGraph InterfaceGraph::paraboloid(double c, int dim) {
  require_dim(dim);
  const int m = dim - 1;
  InterfaceGraph g;
  g.value = [c, m](const Vec& x) { return c * x.head(m).squaredNorm(); };
  g.gradient = [c, m](const Vec& x) {
    Vec r = Vec::Zero();
    r.head(m) = 2.0 * c * x.head(m);
    return r;
  };
  g.hessian = [c, m](const Vec&) {
    Mat h = Mat::Zero();
    for (int i = 0; i < m; ++i) h(i, i) = 2.0 * c;
    return h;
  };
  g.name = "paraboloid(" + std::to_string(c) + ")";
  return g;
}

DiffeoMap::DiffeoMap(int dim, InterfaceGraph graph, double rho) : dim_(dim), graph_(std::move(graph)), rho_(rho) {
  require_dim(dim);
  if (!(rho > 0.0)) throw ParameterError("neighborhood radius must be positive");
  flat_ = graph_.name == "flat";
}

Mat DiffeoMap::graph_hessian(const Vec& y) const {
  const int m = dim_ - 1;
  if (graph_.hessian) {
    Mat h = graph_.hessian(y);
    Mat r = Mat::Zero();
    r.topLeftCorner(m, m) = h.topLeftCorner(m, m);
    return r;
  }
  const double h = 1e-4 * rho_;
  Mat r = Mat::Zero();
  for (int j = 0; j < m; ++j) {
    Vec e = Vec::Zero();
    e[j] = h;
    const Vec d = (graph_.gradient(y + e) - graph_.gradient(y - e)) / (2.0 * h);
    for (int i = 0; i < m; ++i) r(i, j) = d[i];
  }
  return 0.5 * (r + r.transpose());
}

Vec DiffeoMap::normal(const Vec& y, Mat* dnormal) const {
  const int m = dim_ - 1;
  const Vec p = graph_.gradient(y);
  double p2 = 0.0;
  for (int i = 0; i < m; ++i) p2 += p[i] * p[i];
  const double s = std::sqrt(1.0 + p2);
  Vec nrm = Vec::Zero();
  for (int i = 0; i < m; ++i) nrm[i] = -p[i] / s;
  nrm[m] = 1.0 / s;
  if (dnormal != nullptr) {
    dnormal->setZero();
    const Mat H = graph_hessian(y);
    for (int j = 0; j < m; ++j) {
      double pHj = 0.0;
      for (int a = 0; a < m; ++a) pHj += p[a] * H(a, j);
      for (int a = 0; a < m; ++a) (*dnormal)(a, j) = -H(a, j) / s + p[a] * pHj / (s * s * s);
      (*dnormal)(m, j) = -pHj / (s * s * s);
    }
  }
  return nrm;
}

Vec DiffeoMap::forward(const Vec& y) const {
  if (flat_) return y;
  const int m = dim_ - 1;
  Vec x = Vec::Zero();
  for (int i = 0; i < m; ++i) x[i] = y[i];
  x[m] = graph_.value(y);
  return x + y[m] * normal(y, nullptr);
}

Mat DiffeoMap::jacobian(const Vec& y) const {
  Mat J = Mat::Identity();
  if (flat_) return J;
  const int m = dim_ - 1;
  Mat dN;
  const Vec nrm = normal(y, &dN);
  const Vec p = graph_.gradient(y);
  for (int j = 0; j < m; ++j) {
    Vec col = Vec::Zero();
    col[j] = 1.0;
    col[m] = p[j];
    col += y[m] * dN.col(j);
    J.col(j) = col;
  }
  J.col(m) = nrm;
  return J;
}

Vec DiffeoMap::inverse(const Vec& x) const {
  if (flat_) return x;
  const int m = dim_ - 1;
  Vec y = x;
  y[m] = x[m] - graph_.value(x);
  for (int it = 0; it < 60; ++it) {
    const Vec r = forward(y) - x;
    if (r.norm() <= 1e-14 * (1.0 + x.norm())) return y;
    const Mat J = jacobian(y);
    Vec step = Vec::Zero();
    step.head(dim_) = J.topLeftCorner(dim_, dim_).partialPivLu().solve(r.head(dim_));
    y -= step;
  }
  if ((forward(y) - x).norm() <= 1e-12) return y;
  throw GeometryError("inverse of the flattening map did not converge");
}

FlattenResult flatten_interface(int dim, const InterfaceGraph& graph, const PiecewiseCoefficient& a, double rho) {
  require_dim(dim);
  DiffeoMap map(dim, graph, rho);
  const int n = dim;

  // Normal segments of length rho stay disjoint while rho * curvature < 1.
  double kappa = 0.0;
  for (const Vec& y : halton_interface(dim, 400, rho)) {
    Eigen::MatrixXd H = Mat(graph.hessian ? graph.hessian(y) : Mat::Zero()).topLeftCorner(n - 1, n - 1);
    if (!graph.hessian) {
      const double h = 1e-4 * rho;
      for (int j = 0; j < n - 1; ++j) {
        Vec e = Vec::Zero();
        e[j] = h;
        const Vec d = (graph.gradient(y + e) - graph.gradient(y - e)) / (2.0 * h);
        for (int i = 0; i < n - 1; ++i) H(i, j) = d[i];
      }
    }
    kappa = std::max(kappa, H.norm() > 0 ? Eigen::JacobiSVD<Eigen::MatrixXd>(H).singularValues()(0) : 0.0);
  }
  if (rho * kappa >= 1.0) {
    throw GeometryError("normal segments cross within rho: rho * curvature = " + std::to_string(rho * kappa));
  }
  for (const Vec& y : halton_ball(dim, 400, rho)) {
    const double det = map.jacobian(y).topLeftCorner(n, n).determinant();
    if (!(det > 0.0)) throw GeometryError("flattening Jacobian degenerates inside rho");
  }

  MetricField::EvalFn eval = [map, n](const Vec& y) {
    const Mat J = map.jacobian(y);
    const Eigen::MatrixXd Jn = J.topLeftCorner(n, n);
    const Eigen::MatrixXd Ginv = (Jn.transpose() * Jn).inverse();
    Mat g = Mat::Identity();
    g.topLeftCorner(n, n) = 0.5 * (Ginv + Ginv.transpose());
    return g;
  };
  MetricField metric;
  if (graph.name == "flat") {
    metric = MetricField::identity(n);
  } else {
    metric = MetricField::sampled(n, eval, "flattened-" + graph.name, rho, 1e-3 * rho);
  }

  double gat = 0.0;
  for (const Vec& y : halton_interface(dim, 400, rho)) {
    const Mat g = metric.eval(y);
    for (int k = 0; k < n - 1; ++k) gat = std::max(gat, std::abs(g(n - 1, k)));
    gat = std::max(gat, std::abs(g(n - 1, n - 1) - 1.0));
  }
  if (gat > kStructuralTol) {
    throw ConstructionError("flattened metric violates the interface normalization by " + std::to_string(gat));
  }

  PiecewiseCoefficient coef;
  coef.name = a.name + "@" + graph.name;
  if (graph.name == "flat") {
    coef = a;
  } else {
    auto make = [&](const ScalarField& side) {
      ScalarField::ValueFn f = [map, side, n](const Vec3<double>& y) {
        const Vec yy{y[0], y[1], y[2]};
        const double det = map.jacobian(yy).topLeftCorner(n, n).determinant();
        return side(map.forward(yy)) * std::abs(det);
      };
      return ScalarField::sampled(f, n, 1e-4 * rho, "flattened-" + side.name());
    };
    coef.plus = make(a.plus);
    coef.minus = make(a.minus);
    double g0 = 1e300, lp = 0.0, lm = 0.0;
    for (const Vec& y : halton_ball(dim, 200, rho)) {
      const Side s = side_of(y, n);
      const ScalarField& f = coef.on(s);
      g0 = std::min(g0, f(y));
      const double l = f.gradient(y, n).norm();
      (s == Side::Upper ? lp : lm) = std::max(s == Side::Upper ? lp : lm, l);
    }
    coef.gamma0 = g0;
    coef.lip_plus = 1.1 * lp;
    coef.lip_minus = 1.1 * lm;
  }
  return FlattenResult{map, metric, coef};
}

}  // namespace clab
