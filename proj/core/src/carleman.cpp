#include "clab/carleman.hpp"

#include <cmath>

#include "clab/opcalc.hpp"

namespace clab {

std::string to_string(Estimate e) {
  switch (e) {
    case Estimate::Thm21: return "thm21";
    case Estimate::Prop35: return "prop35";
    case Estimate::Prop42: return "prop42";
    case Estimate::Lem41: return "lem41";
  }
  return "?";
}

Estimate estimate_from_string(const std::string& s) {
  if (s == "thm21") return Estimate::Thm21;
  if (s == "prop35") return Estimate::Prop35;
  if (s == "prop42") return Estimate::Prop42;
  if (s == "lem41") return Estimate::Lem41;
  throw ParameterError("unknown estimate '" + s + "' (expected thm21, prop35, prop42 or lem41)");
}

double prop42_constant(double r, double lambda, double gamma0, double eps) {
  const double c41 = 16.0 * r / psi(r, eps);
  return 2.0 * lambda * c41 / gamma0;
}

namespace {

// Everything the integrands need at one node on one side.
struct Local {
  double sigma = 0.0, w = 0.0, q = 0.0, lap_w = 0.0, F = 0.0;
  double u = 0.0, lap_u = 0.0, grad_u2 = 0.0, wu = 0.0;  // wu = grad_g w . grad_g u
  double flux = 0.0;                                    // grad_g u . nu_g on {x_n = 0}
  double gamma = 1.0;
};

Local local_at(const TestFunction& tf, const ScalarField& wf, const PiecewiseCoefficient& gamma,
               const MetricField& m, const Vec& x, Side side) {
  const int n = m.dim();
  const LocalMetric lm = LocalMetric::at(m, x);
  const Jet2 uj = tf.on(side).jet2(x, n);
  const Jet2 wj = wf.jet2(x, n);
  const Vec gu = gradient(uj), gw = gradient(wj);
  const Vec ginv_gu = lm.ginv * gu;
  Local l;
  l.sigma = x.head(n).norm();
  l.w = value(wj);
  l.q = gw.dot(lm.ginv * gw);
  if (!(l.q > 0.0) || !(l.w > 0.0)) throw SingularityError("weight gradient vanishes at a quadrature node");
  l.lap_w = laplace_g(wj, lm);
  l.F = l.w * l.lap_w / l.q - 1.0;
  l.u = value(uj);
  l.lap_u = laplace_g(uj, lm);
  l.grad_u2 = gu.dot(ginv_gu);
  l.wu = gw.dot(ginv_gu);
  l.flux = -ginv_gu[n - 1];
  l.gamma = gamma(x, side);
  return l;
}

enum Slot { kLhs, kGrad, kU2, kR, kA, kF, kJump, kJumpScale, kSlots };

void check_support(const TestFunction& u, Estimate which) {
  const bool annulus = u.support.kind == SupportKind::Annulus;
  if ((which == Estimate::Prop42 || which == Estimate::Lem41) && !annulus)
    throw HypothesisError(to_string(which) + " needs a test function supported in an annulus B_R \\ B_r, got " +
                          to_string(u.support.kind));
  if (!(u.support.r_out > 0.0 && u.support.r_out < 1.0))
    throw HypothesisError("declared support radius must lie in (0, 1)");
  if (annulus && !(u.support.r_in > 0.0 && u.support.r_in < u.support.r_out))
    throw HypothesisError("annulus support needs 0 < r < R");
  if (!u.is_zero() && (u.outer > u.support.r_out * (1.0 + 1e-12) ||
                       (annulus && u.inner < u.support.r_in * (1.0 - 1e-12))))
    throw HypothesisError("test function leaves its declared support");
}

}  // namespace

CarlemanSides carleman_sides(const TestFunction& u, const PiecewiseCoefficient& gamma, const MetricField& m,
                             double tau, const WeightParams& eps, Estimate which, const CarlemanOptions& opt) {
  eps.validate();
  if (u.dim != m.dim()) throw DimensionError("test function and metric dimensions differ");
  if (!(which == Estimate::Lem41 ? tau >= 0.0 : tau > 0.0) || !std::isfinite(tau))
    throw ParameterError("tau must be positive");
  check_support(u, which);

  CarlemanSides out;
  out.estimate = which;
  out.tau = tau;
  if (u.is_zero()) return out;

  const int n = m.dim();
  const double e = eps.eps;
  const ScalarField wf = weight_field(eps, n);
  const bool scaled = which != Estimate::Prop35;
  const double log_wref = std::log(psi(u.inner, e));
  out.log_scale = scaled ? -2.0 * tau * log_wref : 0.0;
  // W = (w_ref / w)^{2 tau}
  auto W_of = [&](double w) { return scaled ? std::exp(2.0 * tau * (log_wref - std::log(w))) : 1.0; };

  Region region = Region::annulus(n, u.inner, u.outer);
  if (u.support.kind == SupportKind::PuncturedHalfBall) region.halves = Halves::Upper;
  if (tau > 0.0) region.layer = u.inner / (2.0 * tau);

  auto volume_terms = [&](const Vec& x, Side side, std::array<double, kSlots>& acc, double wq) {
    const Local l = local_at(u, wf, gamma, m, x, side);
    const double W = W_of(l.w);
    const double g = l.gamma;
    switch (which) {
      case Estimate::Thm21:
      case Estimate::Prop42:
        acc[kLhs] += wq * g * l.sigma * l.sigma * W * l.lap_u * l.lap_u;
        acc[kGrad] += wq * g * std::pow(l.sigma, e) * W * l.grad_u2;
        acc[kU2] += wq * g * std::pow(l.sigma, e - 2.0) * W * l.u * l.u;
        if (which == Estimate::Prop42) acc[kR] += wq * W * l.u * l.u / (l.sigma * l.sigma * l.w);
        break;
      case Estimate::Prop35: {
        const double A = l.w / l.q * l.wu + 0.5 * l.F * l.u;
        const double qw = l.q / (l.w * l.w);
        const double P = l.lap_u + tau * tau * qw * l.u + 2.0 * tau * qw * A;
        acc[kLhs] += wq * g * P * P / qw;
        acc[kA] += wq * g * qw * A * A;
        acc[kGrad] += wq * g * std::pow(l.sigma, e) * l.grad_u2;
        acc[kU2] += wq * g * std::pow(l.sigma, e - 2.0) * l.u * l.u;
        break;
      }
      case Estimate::Lem41: {
        // f = w^{-tau} u, carried as (w_ref / w)^tau u
        const double A = std::sqrt(W) * (l.w / l.q * l.wu - tau * l.u + 0.5 * l.F * l.u);
        const double qw = l.q / (l.w * l.w);
        acc[kA] += wq * g * qw * A * A;
        acc[kF] += wq * g * qw / l.w * W * l.u * l.u;
        break;
      }
    }
  };

  auto interface_value = [&](const Vec& x, Side side) {
    const Local l = local_at(u, wf, gamma, m, x, side);
    const double W = W_of(l.w);
    if (which == Estimate::Prop35)
      return (4.0 * tau * l.w * l.wu / l.q + 2.0 * tau * (n - 2) * phi(l.sigma, e) * l.u) * (l.gamma * l.flux);
    return W * (4.0 * tau * l.w * l.wu / l.q + (2.0 * tau * (n - 2) * phi(l.sigma, e) - 4.0 * tau * tau) * l.u) *
           (l.gamma * l.flux);
  };

  const bool has_interface = which != Estimate::Lem41;
  auto eval = [&](const QuadratureGrid& grid) {
    std::array<double, kSlots> acc{};
    for (const auto& node : grid.volume) volume_terms(node.x, node.side, acc, node.w);
    if (has_interface) {
      for (const auto& node : grid.interface) {
        const double up = interface_value(node.x, Side::Upper);
        const double lo = interface_value(node.x, Side::Lower);
        acc[kJump] += node.w * (up - lo);
        acc[kJumpScale] += node.w * (std::abs(up) + std::abs(lo));
      }
    }
    for (int k = 0; k < kSlots; ++k)
      if (!std::isfinite(acc[k]))
        throw IntegrandError("non-finite " + to_string(which) + " integral at tau = " + std::to_string(tau));
    return std::vector<double>(acc.begin(), acc.end());
  };
  auto floors = [](const std::vector<double>& v) {
    std::vector<double> f(v.size(), 0.0);
    f[kJump] = v[kJumpScale];
    // |.| has kinks where the traces change sign; the scale is only a yardstick
    f[kJumpScale] = 1e3 * v[kJumpScale];
    return f;
  };

  const ConvergedIntegral ci = integrate_converged(eval, region, opt.rel_tol, opt.max_level, opt.quadrature, floors);
  const auto& I = ci.values;
  out.level = ci.level;
  out.max_change = ci.max_change;
  out.interface_scale = I[kJumpScale];
  const double lam = m.lambda();
  switch (which) {
    case Estimate::Thm21:
    case Estimate::Prop42:
      out.lhs = 4.0 * lam * I[kLhs];
      out.term_grad = tau * e / (2.0 * (1.0 + 8.0 * lam * lam)) * I[kGrad];
      out.term_u2 = tau * tau * tau * e / (8.0 * lam) * I[kU2];
      out.u2_integral = I[kU2];
      if (which == Estimate::Prop42)
        out.term_r = tau * tau * u.support.r_in / prop42_constant(u.support.r_in, lam, gamma.gamma0, e) * I[kR];
      out.term_interface = I[kJump];
      out.margin = out.lhs - (out.term_grad + out.term_u2 + out.term_r + out.term_interface);
      break;
    case Estimate::Prop35:
      out.lhs = I[kLhs];
      out.term_r = 2.0 * tau * tau * I[kA];
      out.term_grad = tau * e / 2.0 * I[kGrad];
      out.term_u2 = tau * tau * tau * e / (4.0 * lam) * I[kU2];
      out.u2_integral = I[kU2];
      out.term_interface = I[kJump];
      out.margin = out.lhs - (out.term_grad + out.term_u2 + out.term_r + out.term_interface);
      break;
    case Estimate::Lem41: {
      const double r = u.support.r_in;
      out.lhs = 16.0 * I[kA];
      out.term_u2 = psi(r, e) * I[kF];
      out.term_r = r * I[kF];
      out.u2_integral = I[kF];
      out.margin = out.lhs - out.term_u2;
      out.C_emp = I[kA] > 0.0 ? out.term_r / I[kA] : 0.0;
      break;
    }
  }
  return out;
}

Antisymmetry antisymmetry_integral(const TestFunction& f, const MetricField& m, const WeightParams& eps,
                                   const CarlemanOptions& opt) {
  eps.validate();
  if (f.dim != m.dim()) throw DimensionError("test function and metric dimensions differ");
  Antisymmetry out;
  if (f.is_zero()) return out;
  const ScalarField wf = weight_field(eps, m.dim());
  const PiecewiseCoefficient one = PiecewiseCoefficient::constant(1.0, 1.0);
  Region region = Region::annulus(m.dim(), f.inner, f.outer);
  if (f.support.kind == SupportKind::PuncturedHalfBall) region.halves = Halves::Upper;
  auto eval = [&](const QuadratureGrid& grid) {
    double v = 0.0, s = 0.0;
    for (const auto& node : grid.volume) {
      const Local l = local_at(f, wf, one, m, node.x, node.side);
      const double A = l.w / l.q * l.wu + 0.5 * l.F * l.u;
      const double qw = l.q / (l.w * l.w);
      v += node.w * qw * A * l.u;
      s += node.w * qw * std::abs(A * l.u);
    }
    return std::vector<double>{v, s};
  };
  auto floors = [](const std::vector<double>& v) { return std::vector<double>{v[1], 0.0}; };
  const ConvergedIntegral ci = integrate_converged(eval, region, opt.rel_tol, opt.max_level, opt.quadrature, floors);
  out.value = ci.values[0];
  out.scale = ci.values[1];
  return out;
}

nlohmann::json to_json(const CarlemanSides& s) {
  return {{"estimate", to_string(s.estimate)},
          {"tau", s.tau},
          {"lhs", s.lhs},
          {"term_grad", s.term_grad},
          {"term_u2", s.term_u2},
          {"term_r", s.term_r},
          {"term_interface", s.term_interface},
          {"interface_scale", s.interface_scale},
          {"margin", s.margin},
          {"log_scale", s.log_scale},
          {"C_emp", s.C_emp},
          {"level", s.level}};
}

}  // namespace clab
