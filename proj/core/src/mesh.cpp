#include "clab/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace clab {

double signed_area(const Point2& a, const Point2& b, const Point2& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

double Mesh::area(std::size_t c) const {
  const auto& t = cells[c];
  return signed_area(nodes[t[0]], nodes[t[1]], nodes[t[2]]);
}

Point2 Mesh::centroid(std::size_t c) const {
  const auto& t = cells[c];
  return (nodes[t[0]] + nodes[t[1]] + nodes[t[2]]) / 3.0;
}

double Mesh::measure() const {
  double s = 0.0;
  for (std::size_t c = 0; c < cells.size(); ++c) s += area(c);
  return s;
}

double Mesh::max_edge() const {
  double m = 0.0;
  for (const auto& t : cells)
    for (int i = 0; i < 3; ++i) m = std::max(m, (nodes[t[i]] - nodes[t[(i + 1) % 3]]).norm());
  return m;
}

namespace {

// Rings strictly inside (a, b], with spacing from `step`, stretched so that
// the last ring lands on b.
void add_rings(double a, double b, const std::function<double(double)>& step, std::vector<double>& out) {
  std::vector<double> r{a};
  while (r.back() < b) {
    const double s = step(r.back());
    if (r.back() + 0.5 * s >= b) break;
    r.push_back(r.back() + s);
  }
  if (r.size() == 1) {
    out.push_back(b);
    return;
  }
  const double last = r.back() + step(r.back());
  for (std::size_t i = 1; i < r.size(); ++i) out.push_back(a + (b - a) * (r[i] - a) / (last - a));
  out.push_back(b);
}

}  // namespace

Mesh disk_mesh(const MeshOptions& opt) {
  if (!(opt.h > 0.0 && opt.h <= 0.5)) throw ParameterError("mesh size h must lie in (0, 0.5]");
  if (opt.grading < 0.0 || !(opt.h_min > 0.0)) throw ParameterError("mesh grading must be nonnegative");
  std::vector<double> fixed{0.0, 1.0};
  for (double r : opt.radii) {
    if (!(r > 0.0 && r < 1.0)) throw ParameterError("fitted radii must lie in (0, 1)");
    fixed.push_back(r);
  }
  std::sort(fixed.begin(), fixed.end());
  fixed.erase(std::unique(fixed.begin(), fixed.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              fixed.end());

  auto step = [&](double r) {
    if (opt.grading > 0.0) return std::min(opt.h, std::max(opt.h_min, opt.grading * r));
    return opt.h;
  };
  std::vector<double> rings;
  for (std::size_t k = 0; k + 1 < fixed.size(); ++k) add_rings(fixed[k], fixed[k + 1], step, rings);

  Mesh m;
  m.nodes.emplace_back(0.0, 0.0);
  m.ring_radius.push_back(0.0);
  m.ring_start.push_back(0);
  std::vector<int> count{1};
  double prev_r = 0.0;
  for (double r : rings) {
    // local spacing: the radial gap to the previous ring, capped by the target
    const double s = std::min(step(r), std::max(r - prev_r, opt.h_min));
    const int quarter = std::max(1, static_cast<int>(std::ceil(0.5 * std::numbers::pi * r / s - 1e-9)));
    const int n = 4 * quarter;
    m.ring_radius.push_back(r);
    m.ring_start.push_back(static_cast<std::uint32_t>(m.nodes.size()));
    count.push_back(n);
    for (int k = 0; k < n; ++k) {
      const double t = 2.0 * std::numbers::pi * k / n;
      Point2 p(r * std::cos(t), r * std::sin(t));
      // exact zeros on the axes keep the interface nodes on {x_2 = 0}
      if (k == 0 || 2 * k == n) p.y() = 0.0;
      if (4 * k == n || 4 * k == 3 * n) p.x() = 0.0;
      m.nodes.push_back(p);
    }
    prev_r = r;
  }

  auto push_cell = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    if (signed_area(m.nodes[a], m.nodes[b], m.nodes[c]) < 0.0) std::swap(b, c);
    m.cells.push_back({a, b, c});
  };

  // fan around the origin
  for (int k = 0; k < count[1]; ++k) {
    const std::uint32_t s = m.ring_start[1];
    push_cell(0, s + k, s + (k + 1) % count[1]);
  }
  // strips between consecutive rings, one half at a time
  for (std::size_t j = 1; j + 1 < m.ring_radius.size(); ++j) {
    const int na = count[j], nb = count[j + 1];
    const std::uint32_t sa = m.ring_start[j], sb = m.ring_start[j + 1];
    for (int half = 0; half < 2; ++half) {
      int i = half * na / 2, k = half * nb / 2;
      const int iend = (half + 1) * na / 2, kend = (half + 1) * nb / 2;
      auto ia = [&](int idx) { return sa + static_cast<std::uint32_t>(idx % na); };
      auto ib = [&](int idx) { return sb + static_cast<std::uint32_t>(idx % nb); };
      while (i < iend || k < kend) {
        const double ta = static_cast<double>(i + 1) / na, tb = static_cast<double>(k + 1) / nb;
        if (k < kend && (i >= iend || tb <= ta)) {
          push_cell(ia(i), ib(k), ib(k + 1));
          ++k;
        } else {
          push_cell(ia(i), ib(k), ia(i + 1));
          ++i;
        }
      }
    }
  }

  m.side.resize(m.cells.size());
  for (std::size_t c = 0; c < m.cells.size(); ++c) m.side[c] = m.centroid(c).y() > 0.0 ? Side::Upper : Side::Lower;

  m.on_boundary.assign(m.nodes.size(), 0);
  const std::size_t last = m.ring_radius.size() - 1;
  const int nl = count[last];
  for (int k = 0; k < nl; ++k) {
    const std::uint32_t a = m.ring_start[last] + k, b = m.ring_start[last] + (k + 1) % nl;
    m.on_boundary[a] = 1;
    m.boundary_edges.push_back({a, b});
  }
  return m;
}

}  // namespace clab
