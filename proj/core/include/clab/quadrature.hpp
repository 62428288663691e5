#pragma once

#include <functional>
#include <string>
#include <vector>

#include "clab/fields.hpp"

namespace clab {

/// Which halves of the ball a region covers.
enum class Halves { Both, Upper, Lower };

/// Annular region r_in < |x| < r_out (r_in >= 1e-6 for punctured balls).
struct Region {
  int dim = 2;
  double r_in = 1e-6;
  double r_out = 1.0;
  Halves halves = Halves::Both;
  /// Additional radial panel breaks, e.g. support edges.
  std::vector<double> breaks;
  /// When positive, radial panels are graded geometrically away from r_in
  /// with first width `layer`: r_in + layer * 2^j.
  double layer = 0.0;

  static Region annulus(int dim, double a, double b) {
    Region r;
    r.dim = dim;
    r.r_in = a;
    r.r_out = b;
    return r;
  }
  static Region ball(int dim, double r) { return annulus(dim, kPunctureRadius, r); }
  double measure() const;

  static constexpr double kPunctureRadius = 1e-6;
};

struct QuadNode {
  Vec x = Vec::Zero();
  double w = 0.0;
  Side side = Side::Upper;
};

/// Tensor Gauss-Legendre grid in polar (n = 2) or spherical (n = 3)
/// coordinates, split by side of {x_n = 0}. Volume nodes never lie on the
/// interface; interface nodes lie exactly on it.
struct QuadratureGrid {
  Region region;
  int level = 0;
  std::vector<QuadNode> volume;
  std::vector<QuadNode> interface;

  double volume_weight_sum() const;
  double interface_weight_sum() const;
};

struct QuadratureOptions {
  int radial_order = 8;
  int angular_order = 8;
  /// Angular panels per half at level 0.
  int angular_panels = 2;
  /// Radial panels per break interval at level 0 (before grading).
  int radial_panels = 1;
};

/// Level L splits every panel into 2^L pieces.
QuadratureGrid make_grid(const Region& region, int level, const QuadratureOptions& opt = {});

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

/// Sum of w f(x, side) over volume nodes; IntegrandError on a non-finite value.
double integrate(const std::function<double(const Vec&, Side)>& f, const QuadratureGrid& grid);
double integrate(const std::function<double(const Vec&)>& f, const QuadratureGrid& grid);

/// Integral over {x_n = 0} of the jump [z] = z(upper limit) - z(lower limit).
/// The callback receives the side from which the limit is taken; an empty
/// callback is a TraceError.
double interface_jump_integral(const std::function<double(const Vec&, Side)>& z, const QuadratureGrid& grid);

/// Vector-valued integrand with refinement until successive levels agree.
struct ConvergedIntegral {
  std::vector<double> values;
  int level = 0;
  double max_change = 0.0;
};

using FloorFn = std::function<std::vector<double>(const std::vector<double>&)>;

/// Evaluates `eval(grid)` on levels 0, 1, ... until every component k changes
/// by less than rel_tol * (|value_k| + floor_k) or max_level is exceeded
/// (IntegrandError). `floors` maps the current values to the per-component
/// absolute floors; empty means zero floors.
ConvergedIntegral integrate_converged(const std::function<std::vector<double>(const QuadratureGrid&)>& eval,
                                      const Region& region, double rel_tol = 1e-4, int max_level = 4,
                                      const QuadratureOptions& opt = {}, const FloorFn& floors = {});

}  // namespace clab
