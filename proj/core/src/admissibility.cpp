#include <algorithm>
#include <cmath>

#include "clab/metric.hpp"
#include "clab/sampling.hpp"

namespace clab {

AdmissibilityReport check_metric_admissibility(const MetricField& m, const std::vector<Vec>& samples) {
  const int n = m.dim();
  AdmissibilityReport r;
  r.metric = m.name();
  r.dim = n;
  r.samples = samples.size();
  r.lambda_declared = m.lambda();
  r.Lambda_declared = m.Lambda();
  r.eig_min = 1e300;
  r.eig_max = 0.0;

  double deriv_err = 0.0, deriv_scale = 0.0;
  const double h = 1e-3 * m.radius();
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const Vec& x = samples[s];
    const Mat g = m.eval(x);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r.symmetry_dev = std::max(r.symmetry_dev, std::abs(g(i, j) - g(j, i)));
    Eigen::MatrixXd block = g.topLeftCorner(n, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(block, Eigen::EigenvaluesOnly);
    r.eig_min = std::min(r.eig_min, eig.eigenvalues().minCoeff());
    r.eig_max = std::max(r.eig_max, eig.eigenvalues().maxCoeff());

    if (s + 1 < samples.size()) {
      const Vec& y = samples[s + 1];
      const Mat gy = m.eval(y);
      double sum = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) sum += std::abs(g(i, j) - gy(i, j));
      const double dist = (x - y).norm();
      if (dist > 0.0) r.lipschitz_quotient = std::max(r.lipschitz_quotient, sum / dist);
    }

    if (x.norm() + 2.0 * h < m.radius()) {
      const MetricDeriv d = m.deriv(x);
      const MetricDeriv fd = fd_metric_deriv([&m](const Vec& p) { return m.eval(p); }, n, x, h);
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            deriv_err = std::max(deriv_err, std::abs(d[k](i, j) - fd[k](i, j)));
            deriv_scale = std::max(deriv_scale, std::abs(fd[k](i, j)));
          }
    }

    Vec xi = x;
    xi[n - 1] = 0.0;
    const Mat gi = m.eval(xi);
    ++r.interface_samples;
    for (int k = 0; k < n - 1; ++k) r.gatzero_dev = std::max(r.gatzero_dev, std::abs(gi(n - 1, k)));
    r.gatzero_dev = std::max(r.gatzero_dev, std::abs(gi(n - 1, n - 1) - 1.0));
  }
  if (samples.empty()) r.eig_min = r.eig_max = 0.0;

  const Mat g0 = m.eval(Vec::Zero());
  r.ginzero_dev = (g0.topLeftCorner(n, n) - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  r.deriv_fd_dev = deriv_scale > 0.0 ? deriv_err / deriv_scale : deriv_err;

  const double lam = m.lambda();
  r.symmetry_ok = r.symmetry_dev <= kStructuralTol;
  r.ellipticity_ok = r.eig_min >= 1.0 / lam - kStructuralTol && r.eig_max <= lam + kStructuralTol;
  r.lipschitz_ok = r.lipschitz_quotient <= m.Lambda() + kStructuralTol;
  r.ginzero_ok = r.ginzero_dev <= kStructuralTol;
  r.gatzero_ok = r.gatzero_dev <= kStructuralTol;
  r.deriv_ok = r.deriv_fd_dev <= 1e-5;
  return r;
}

AdmissibilityReport check_metric_admissibility(const MetricField& m) {
  return check_metric_admissibility(m, halton_ball(m.dim(), 1000, m.radius()));
}

nlohmann::json to_json(const AdmissibilityReport& r) {
  nlohmann::json j;
  j["metric"] = r.metric;
  j["dim"] = r.dim;
  j["samples"] = r.samples;
  j["interface_samples"] = r.interface_samples;
  j["symmetry"] = {{"max_deviation", r.symmetry_dev}, {"pass", r.symmetry_ok}};
  j["ellipticity"] = {{"eig_min", r.eig_min},
                      {"eig_max", r.eig_max},
                      {"lambda", r.lambda_declared},
                      {"pass", r.ellipticity_ok}};
  j["lipschitz"] = {{"max_quotient", r.lipschitz_quotient}, {"Lambda", r.Lambda_declared}, {"pass", r.lipschitz_ok}};
  j["ginzero"] = {{"max_deviation", r.ginzero_dev}, {"pass", r.ginzero_ok}};
  j["gatzero"] = {{"max_deviation", r.gatzero_dev}, {"pass", r.gatzero_ok}};
  j["derivative"] = {{"relative_fd_deviation", r.deriv_fd_dev}, {"pass", r.deriv_ok}};
  j["pass"] = r.all_ok();
  return j;
}

}  // namespace clab
