#include "clab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "clab/scan.hpp"

namespace clab {

namespace {

// U(x) = u0 + gx X + gy Y with X = x - cx, Y = y - cy. The x-antiderivative of
// U^2 from X = 0 is P = a^2 X + a gx X^2 + gx^2 X^3 / 3 with a = u0 + gy Y, and
// the area integral of U^2 is the boundary integral of P dy.
struct LinearSquare {
  Point2 c;
  double u0, gx, gy;
  double P(const Point2& x) const {
    const double X = x.x() - c.x(), a = u0 + gy * (x.y() - c.y());
    return X * (a * a + a * gx * X + gx * gx * X * X / 3.0);
  }
};

double full_cell(double A, double u0, double u1, double u2) {
  return A / 6.0 * (u0 * u0 + u1 * u1 + u2 * u2 + u0 * u1 + u1 * u2 + u0 * u2);
}

bool in_triangle(const Point2& x, const Point2& a, const Point2& b, const Point2& c, double A) {
  const double tol = -1e-13 * A;
  return signed_area(x, b, c) >= tol && signed_area(a, x, c) >= tol && signed_area(a, b, x) >= tol;
}

double clipped_cell(const SolutionField& U, std::size_t cell, double r) {
  const auto& m = U.mesh;
  const auto& t = m.cells[cell];
  const Point2 v[3] = {m.nodes[t[0]], m.nodes[t[1]], m.nodes[t[2]]};
  const double A = m.area(cell);
  const Eigen::Vector2d g = U.cell_gradient(cell);
  LinearSquare f{m.centroid(cell), 0.0, g.x(), g.y()};
  f.u0 = (U.values[t[0]] + U.values[t[1]] + U.values[t[2]]) / 3.0;

  static const double gx2[2] = {-1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)};
  std::vector<double> angles;
  double s = 0.0;
  for (int e = 0; e < 3; ++e) {
    const Point2& p = v[e];
    const Point2 d = v[(e + 1) % 3] - p;
    // |p + t d|^2 = r^2
    const double qa = d.squaredNorm(), qb = 2.0 * p.dot(d), qc = p.squaredNorm() - r * r;
    std::vector<double> br{0.0, 1.0};
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc > 0.0) {
      const double sq = std::sqrt(disc);
      const double t1 = (-qb - std::copysign(sq, qb)) / (2.0 * qa);
      const double t2 = t1 != 0.0 ? qc / (qa * t1) : -qb / qa;
      for (double tt : {t1, t2})
        if (tt >= 0.0 && tt <= 1.0) {
          br.push_back(tt);
          const Point2 x = p + tt * d;
          angles.push_back(std::atan2(x.y(), x.x()));
        }
    }
    std::sort(br.begin(), br.end());
    for (std::size_t k = 0; k + 1 < br.size(); ++k) {
      const double a = br[k], b = br[k + 1];
      if (b - a <= 0.0) continue;
      if ((p + 0.5 * (a + b) * d).norm() >= r) continue;
      for (double gq : gx2) {
        const double tt = 0.5 * (a + b) + 0.5 * (b - a) * gq;
        s += 0.5 * (b - a) * f.P(p + tt * d) * d.y();
      }
    }
  }

  auto arc = [&](double a, double b) {
    static const auto rule = [] {
      std::pair<std::vector<double>, std::vector<double>> nw;
      gauss_legendre(12, nw.first, nw.second);
      return nw;
    }();
    const auto& [gx, gw] = rule;
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / (std::numbers::pi / 4.0))));
    double acc = 0.0;
    for (int k = 0; k < pieces; ++k) {
      const double lo = a + (b - a) * k / pieces, hi = a + (b - a) * (k + 1) / pieces;
      for (std::size_t i = 0; i < gx.size(); ++i) {
        const double th = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gx[i];
        const Point2 x(r * std::cos(th), r * std::sin(th));
        acc += 0.5 * (hi - lo) * gw[i] * f.P(x) * r * std::cos(th);
      }
    }
    return acc;
  };

  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end(), [](double a, double b) { return b - a < 1e-14; }),
               angles.end());
  if (angles.empty()) {
    if (in_triangle(Point2(r, 0.0), v[0], v[1], v[2], A)) s += arc(0.0, 2.0 * std::numbers::pi);
    return s;
  }
  for (std::size_t k = 0; k < angles.size(); ++k) {
    const double a = angles[k];
    const double b = k + 1 < angles.size() ? angles[k + 1] : angles[0] + 2.0 * std::numbers::pi;
    if (b - a <= 1e-14) continue;
    const double mid = 0.5 * (a + b);
    if (in_triangle(Point2(r * std::cos(mid), r * std::sin(mid)), v[0], v[1], v[2], A)) s += arc(a, b);
  }
  return s;
}

}  // namespace

double mass(const SolutionField& U, double r) {
  if (!(r > 0.0)) throw ParameterError("mass radius must be positive");
  const auto& m = U.mesh;
  double s = 0.0;
  for (std::size_t c = 0; c < m.num_cells(); ++c) {
    const auto& t = m.cells[c];
    double dmax = 0.0, dmin = 1e300;
    for (int i = 0; i < 3; ++i) {
      const double d = m.nodes[t[i]].norm();
      dmax = std::max(dmax, d);
      dmin = std::min(dmin, d);
    }
    if (dmax <= r) {
      s += full_cell(m.area(c), U.values[t[0]], U.values[t[1]], U.values[t[2]]);
      continue;
    }
    // a cell whose vertices are all outside can still be cut by the circle
    double edge = 0.0;
    for (int i = 0; i < 3; ++i) edge = std::max(edge, (m.nodes[t[i]] - m.nodes[t[(i + 1) % 3]]).norm());
    if (dmin - edge > r) continue;
    s += clipped_cell(U, c, r);
  }
  return s;
}

double vanishing_order(const SolutionField& U, const std::vector<double>& radii) {
  if (radii.size() < 4) throw ParameterError("vanishing order needs at least four radii");
  const auto [lo, hi] = std::minmax_element(radii.begin(), radii.end());
  if (!(*lo > 0.0) || *hi < 10.0 * *lo * (1.0 - 1e-12)) throw ParameterError("radii must span a decade");
  std::vector<double> ms;
  for (double r : radii) {
    const double v = mass(U, r);
    if (!(v > 0.0)) throw DegenerateError("nonpositive mass at radius " + std::to_string(r));
    ms.push_back(v);
  }
  return loglog_slope(radii, ms);
}

DoublingReport doubling_report(const SolutionField& U, const std::vector<double>& radii, double rbar1) {
  if (!(rbar1 > 0.0 && rbar1 <= 1.0)) throw ParameterError("rbar1 must lie in (0, 1]");
  if (radii.empty()) throw ParameterError("doubling needs at least one radius");
  for (double r : radii)
    if (!(r > 0.0 && r < rbar1 / 16.0)) throw ParameterError("doubling radii must lie in (0, rbar1/16)");
  DoublingReport d;
  d.radii = radii;
  d.rbar1 = rbar1;
  const double m_full = mass(U, rbar1), m_quarter = mass(U, rbar1 / 4.0);
  if (!(m_quarter > 0.0)) throw DegenerateError("mass(rbar1/4) vanishes: the frequency is undefined");
  d.frequency = m_full / m_quarter;
  d.bound = std::pow(d.frequency, 3) / std::pow(rbar1, 3);
  double worst = 0.0;
  for (double r : radii) {
    const double m1 = mass(U, r), m2 = mass(U, 2.0 * r), m4 = mass(U, 4.0 * r);
    if (!(m1 > 0.0) || !(m2 > 0.0)) throw DegenerateError("mass vanishes at radius " + std::to_string(r));
    d.mass.push_back(m1);
    d.ratio.push_back(m2 / m1);
    worst = std::max(worst, m4 / m2);
  }
  d.C_emp = worst / d.bound;
  if (radii.size() >= 2 && *std::max_element(radii.begin(), radii.end()) > *std::min_element(radii.begin(), radii.end()))
    d.vanishing_slope = loglog_slope(radii, d.mass);
  return d;
}

double smoothstep(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}
double smoothstep_d1(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 30.0 * t * t * (1.0 - t) * (1.0 - t);
}
double smoothstep_d2(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
}
double smoothstep_d2_max() { return 10.0 / std::sqrt(3.0); }

CutoffProfile cutoff_profile(double r, double rbar1) {
  if (!(r > 0.0) || !(4.0 * r < rbar1 / 4.0)) throw ParameterError("cutoff needs 0 < 4r < rbar1/4");
  return {r, rbar1};
}

double CutoffProfile::operator()(double t) const {
  if (t < r) return 0.0;
  if (t < 2.0 * r) return smoothstep((t - r) / r);
  const double q = rbar1 / 4.0;
  if (t <= q) return 1.0;
  if (t < 2.0 * q) return 1.0 - smoothstep((t - q) / q);
  return 0.0;
}

double CutoffProfile::d1(double t) const {
  const double q = rbar1 / 4.0;
  if (t > r && t < 2.0 * r) return smoothstep_d1((t - r) / r) / r;
  if (t > q && t < 2.0 * q) return -smoothstep_d1((t - q) / q) / q;
  return 0.0;
}

double CutoffProfile::d2(double t) const {
  const double q = rbar1 / 4.0;
  if (t > r && t < 2.0 * r) return smoothstep_d2((t - r) / r) / (r * r);
  if (t > q && t < 2.0 * q) return -smoothstep_d2((t - q) / q) / (q * q);
  return 0.0;
}

std::vector<ThreeBallCheck> three_ball_check(const SolutionField& U, double r, double R, double rbar1,
                                        const std::vector<double>& taus) {
  if (!(r > 0.0 && 4.0 * r < R && R <= rbar1 / 4.0)) throw ParameterError("need 0 < 4r < R <= rbar1/4");
  const double mR = mass(U, R), m4 = mass(U, 4.0 * r), m2 = mass(U, 2.0 * r), mb = mass(U, rbar1);
  if (!(mR > 0.0 && m4 > 0.0 && m2 > 0.0 && mb > 0.0)) throw DegenerateError("a mass in the inequality vanishes");
  auto lse = [](double a, double b) {
    const double mx = std::max(a, b);
    return mx + std::log(std::exp(a - mx) + std::exp(b - mx));
  };
  std::vector<ThreeBallCheck> out;
  for (double tau : taus) {
    ThreeBallCheck c;
    c.tau = tau;
    c.log_lhs = lse(-(1.0 + 2.0 * tau) * std::log(R) + std::log(mR),
                    std::log(R) - (2.0 + 2.0 * tau) * std::log(4.0 * r) + std::log(m4));
    c.log_rhs = lse(-(2.0 + 2.0 * tau) * std::log(r) + std::log(m2),
                    -(2.0 + 2.0 * tau) * std::log(rbar1) + std::log(mb));
    c.ratio = std::exp(c.log_lhs - c.log_rhs);
    out.push_back(c);
  }
  return out;
}

nlohmann::json to_json(const DoublingReport& d) {
  return {{"radii", d.radii},         {"mass", d.mass},   {"ratio", d.ratio},
          {"rbar1", d.rbar1},         {"frequency", d.frequency}, {"bound", d.bound},
          {"C_emp", d.C_emp},         {"vanishing_slope", d.vanishing_slope}};
}

}  // namespace clab
