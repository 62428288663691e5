#include "clab/weights.hpp"

#include <algorithm>
#include <cmath>

namespace clab {

double psi(double s, double eps) {
  if (!(s > 0.0)) throw DomainError("psi needs s > 0");
  return s * std::pow(1.0 + std::pow(s, eps), -1.0 / eps);
}

double psi_prime(double s, double eps) {
  if (!(s > 0.0)) throw DomainError("psi needs s > 0");
  return std::pow(1.0 + std::pow(s, eps), -1.0 / eps - 1.0);
}

double phi(double s, double eps) {
  if (s < 0.0) throw DomainError("phi needs s >= 0");
  return 1.0 + std::pow(s, eps);
}

double phi_prime(double s, double eps) {
  if (!(s > 0.0)) throw DomainError("phi' needs s > 0");
  return eps * std::pow(s, eps - 1.0);
}

ScalarField sigma_field(int dim) {
  return ScalarField::from_generic([dim](const auto& x) { return sigma_of(x, dim); }, "sigma");
}

ScalarField weight_field(const WeightParams& p, int dim) {
  const double eps = p.eps;
  return ScalarField::from_generic([dim, eps](const auto& x) { return psi_of(sigma_of(x, dim), eps); }, "w");
}

WeightBundle weight_bundle(const Vec& x, const WeightParams& p, const MetricField& m) {
  p.validate();
  const int n = m.dim();
  const double s = x.head(n).norm();
  if (s == 0.0) throw SingularityError("weight bundle is singular at the origin");
  if (s >= 1.0) throw DomainError("weight bundle needs |x| < 1");
  const Jet2 w = weight_field(p, n).jet2(x, n);
  const Mat g = m.eval(x);
  const MetricDeriv dg = m.deriv(x);
  const Vec dw = gradient(w);
  const Mat H = hessian(w);

  WeightBundle b;
  b.sigma = s;
  b.w = value(w);
  b.grad_w = g * dw;
  b.grad_w_norm2 = dw.dot(g * dw);
  double lap = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) lap += g(i, j) * H(i, j) + dg[i](i, j) * dw[j];
  b.lap_w = lap;
  b.F_w = b.w * lap / b.grad_w_norm2 - 1.0;
  b.phi_sigma = phi(s, p.eps);
  const double ratio = b.grad_w_norm2 / (b.w * b.w);
  const double lam = m.lambda();
  const double lower = 1.0 / (lam * s * s * b.phi_sigma * b.phi_sigma);
  const double upper = lam / (s * s);
  const double tol = 1e-12 * upper;
  b.bounds_ok = ratio >= lower - tol && ratio <= upper + tol && b.w <= s;
  return b;
}

WeightConstants weight_constants(const WeightParams& p, const MetricField& m, const std::vector<Vec>& samples) {
  WeightConstants c;
  double sig = 1.0, grad = 1.0, lap = 0.0, F = 0.0;
  double lower_margin = 1e300, upper_margin = 1e300;
  const double lam = m.lambda();
  for (const Vec& x : samples) {
    const WeightBundle b = weight_bundle(x, p, m);
    sig = std::max(sig, b.sigma / b.w);
    const double gn = std::sqrt(b.grad_w_norm2);
    grad = std::max({grad, gn, 1.0 / gn});
    lap = std::max(lap, std::abs(b.lap_w) * b.w);
    F = std::max(F, std::abs(b.F_w));
    const double ratio = b.grad_w_norm2 / (b.w * b.w);
    const double lower = 1.0 / (lam * b.sigma * b.sigma * b.phi_sigma * b.phi_sigma);
    const double upper = lam / (b.sigma * b.sigma);
    lower_margin = std::min(lower_margin, ratio / lower);
    upper_margin = std::min(upper_margin, upper / ratio);
    c.w_below_sigma = c.w_below_sigma && b.w <= b.sigma;
    ++c.samples;
  }
  c.C_sigma = 1.1 * sig;
  c.C_grad = 1.1 * grad;
  c.C_lap = 1.1 * lap;
  c.C_F = 1.1 * F;
  c.C = std::max({1.0, c.C_sigma, c.C_grad, c.C_lap, c.C_F});
  c.lower_margin = c.samples ? lower_margin : 0.0;
  c.upper_margin = c.samples ? upper_margin : 0.0;
  c.gradient_bounds_hold = c.lower_margin >= 1.0 - 1e-12 && c.upper_margin >= 1.0 - 1e-12;
  return c;
}

nlohmann::json to_json(const WeightConstants& c) {
  return {{"C", c.C},
          {"C_sigma", c.C_sigma},
          {"C_grad", c.C_grad},
          {"C_lap", c.C_lap},
          {"C_F", c.C_F},
          {"lower_margin", c.lower_margin},
          {"upper_margin", c.upper_margin},
          {"w_below_sigma", c.w_below_sigma},
          {"gradient_bounds_hold", c.gradient_bounds_hold},
          {"samples", c.samples}};
}

}  // namespace clab
