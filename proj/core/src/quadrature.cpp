#include "clab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace clab {

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(order, 0.0);
  weights.assign(order, 0.0);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = order * (x * p1 - p0) / (x * x - 1.0);
    nodes[i] = -x;
    nodes[order - 1 - i] = x;
    weights[i] = weights[order - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  if (order % 2 == 1) nodes[order / 2] = 0.0;
}

double Region::measure() const {
  const double half = halves == Halves::Both ? 1.0 : 0.5;
  if (dim == 2) return half * std::numbers::pi * (r_out * r_out - r_in * r_in);
  return half * 4.0 / 3.0 * std::numbers::pi * (r_out * r_out * r_out - r_in * r_in * r_in);
}

namespace {

std::vector<double> radial_breaks(const Region& r) {
  std::vector<double> b{r.r_in, r.r_out};
  for (double x : r.breaks)
    if (x > r.r_in && x < r.r_out) b.push_back(x);
  if (r.layer > 0.0) {
    for (double t = r.layer; r.r_in + t < r.r_out; t *= 2.0) b.push_back(r.r_in + t);
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end(), [](double a, double c) { return std::abs(a - c) <= 1e-15 * std::max(1.0, std::abs(a)); }),
          b.end());
  return b;
}

// Composite GL rule on the panels [b_k, b_{k+1}] each split in `split` pieces.
void composite(const std::vector<double>& breaks, int split, int order, std::vector<double>& x, std::vector<double>& w) {
  std::vector<double> gx, gw;
  gauss_legendre(order, gx, gw);
  x.clear();
  w.clear();
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double a = breaks[k], b = breaks[k + 1];
    for (int s = 0; s < split; ++s) {
      const double lo = a + (b - a) * s / split, hi = a + (b - a) * (s + 1) / split;
      const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
      for (int i = 0; i < order; ++i) {
        x.push_back(c + h * gx[i]);
        w.push_back(h * gw[i]);
      }
    }
  }
}

}  // namespace

QuadratureGrid make_grid(const Region& region, int level, const QuadratureOptions& opt) {
  require_dim(region.dim);
  if (!(region.r_in > 0.0) || !(region.r_out > region.r_in)) throw ParameterError("quadrature region needs 0 < r_in < r_out");
  QuadratureGrid g;
  g.region = region;
  g.level = level;
  const int split = 1 << level;
  std::vector<double> rx, rw;
  composite(radial_breaks(region), opt.radial_panels * split, opt.radial_order, rx, rw);

  const int apanels = opt.angular_panels * split;
  const bool up = region.halves != Halves::Lower;
  const bool lo = region.halves != Halves::Upper;
  const double pi = std::numbers::pi;
  std::vector<double> ax, aw;

  if (region.dim == 2) {
    // theta in (0, pi) is the upper half, (pi, 2 pi) the lower half.
    for (int half = 0; half < 2; ++half) {
      if ((half == 0 && !up) || (half == 1 && !lo)) continue;
      std::vector<double> br(apanels + 1);
      for (int k = 0; k <= apanels; ++k) br[k] = pi * half + pi * k / apanels;
      composite(br, 1, opt.angular_order, ax, aw);
      for (std::size_t i = 0; i < rx.size(); ++i)
        for (std::size_t j = 0; j < ax.size(); ++j) {
          QuadNode q;
          q.x = Vec(rx[i] * std::cos(ax[j]), rx[i] * std::sin(ax[j]), 0.0);
          q.w = rw[i] * aw[j] * rx[i];
          q.side = half == 0 ? Side::Upper : Side::Lower;
          g.volume.push_back(q);
        }
    }
    for (std::size_t i = 0; i < rx.size(); ++i) {
      for (double sgn : {1.0, -1.0}) {
        QuadNode q;
        q.x = Vec(sgn * rx[i], 0.0, 0.0);
        q.w = rw[i];
        g.interface.push_back(q);
      }
    }
  } else {
    // Polar axis along x_3: theta in (0, pi/2) is the upper half.
    std::vector<double> px, pw;
    std::vector<double> pbr(2 * apanels + 1);
    for (int k = 0; k <= 2 * apanels; ++k) pbr[k] = 2.0 * pi * k / (2 * apanels);
    composite(pbr, 1, opt.angular_order, px, pw);
    for (int half = 0; half < 2; ++half) {
      if ((half == 0 && !up) || (half == 1 && !lo)) continue;
      std::vector<double> br(apanels + 1);
      for (int k = 0; k <= apanels; ++k) br[k] = 0.5 * pi * half + 0.5 * pi * k / apanels;
      composite(br, 1, opt.angular_order, ax, aw);
      for (std::size_t i = 0; i < rx.size(); ++i)
        for (std::size_t j = 0; j < ax.size(); ++j)
          for (std::size_t k = 0; k < px.size(); ++k) {
            const double st = std::sin(ax[j]);
            QuadNode q;
            q.x = Vec(rx[i] * st * std::cos(px[k]), rx[i] * st * std::sin(px[k]), rx[i] * std::cos(ax[j]));
            q.w = rw[i] * aw[j] * pw[k] * rx[i] * rx[i] * st;
            q.side = half == 0 ? Side::Upper : Side::Lower;
            g.volume.push_back(q);
          }
    }
    for (std::size_t i = 0; i < rx.size(); ++i)
      for (std::size_t k = 0; k < px.size(); ++k) {
        QuadNode q;
        q.x = Vec(rx[i] * std::cos(px[k]), rx[i] * std::sin(px[k]), 0.0);
        q.w = rw[i] * pw[k] * rx[i];
        g.interface.push_back(q);
      }
  }
  return g;
}

double QuadratureGrid::volume_weight_sum() const {
  double s = 0.0;
  for (const auto& q : volume) s += q.w;
  return s;
}

double QuadratureGrid::interface_weight_sum() const {
  double s = 0.0;
  for (const auto& q : interface) s += q.w;
  return s;
}

namespace {

[[noreturn]] void bad_node(const Vec& x, double v, const char* what) {
  std::ostringstream os;
  os.precision(17);
  os << what << " integrand is " << v << " at node (" << x[0] << ", " << x[1] << ", " << x[2] << ")";
  throw IntegrandError(os.str());
}

}  // namespace

double integrate(const std::function<double(const Vec&, Side)>& f, const QuadratureGrid& grid) {
  double s = 0.0;
  for (const auto& q : grid.volume) {
    const double v = f(q.x, q.side);
    if (!std::isfinite(v)) bad_node(q.x, v, "volume");
    s += q.w * v;
  }
  return s;
}

double integrate(const std::function<double(const Vec&)>& f, const QuadratureGrid& grid) {
  return integrate([&f](const Vec& x, Side) { return f(x); }, grid);
}

double interface_jump_integral(const std::function<double(const Vec&, Side)>& z, const QuadratureGrid& grid) {
  if (!z) throw TraceError("no one-sided limits supplied for the jump integral");
  double s = 0.0;
  for (const auto& q : grid.interface) {
    const double up = z(q.x, Side::Upper);
    const double lo = z(q.x, Side::Lower);
    if (!std::isfinite(up)) bad_node(q.x, up, "upper trace of the");
    if (!std::isfinite(lo)) bad_node(q.x, lo, "lower trace of the");
    s += q.w * (up - lo);
  }
  return s;
}

ConvergedIntegral integrate_converged(const std::function<std::vector<double>(const QuadratureGrid&)>& eval,
                                      const Region& region, double rel_tol, int max_level,
                                      const QuadratureOptions& opt, const FloorFn& floors) {
  std::vector<double> prev = eval(make_grid(region, 0, opt));
  for (int level = 1; level <= max_level; ++level) {
    std::vector<double> cur = eval(make_grid(region, level, opt));
    const std::vector<double> fl = floors ? floors(cur) : std::vector<double>(cur.size(), 0.0);
    double worst = 0.0;
    bool ok = true;
    for (std::size_t k = 0; k < cur.size(); ++k) {
      const double d = std::abs(cur[k] - prev[k]);
      const double lim = rel_tol * (std::abs(cur[k]) + fl[k]);
      worst = std::max(worst, d / std::max(std::abs(cur[k]) + fl[k], 1e-300));
      if (d > lim) ok = false;
    }
    if (ok) return ConvergedIntegral{cur, level, worst};
    prev = std::move(cur);
  }
  throw IntegrandError("quadrature did not converge to relative tolerance " + std::to_string(rel_tol) +
                       " within " + std::to_string(max_level) + " refinements");
}

}  // namespace clab
