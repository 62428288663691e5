#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "clab/types.hpp"

namespace clab {

using Point2 = Eigen::Vector2d;
using Cell = std::array<std::uint32_t, 3>;

/// Triangulation of the unit disk fitted to {x_2 = 0} and to a set of circles.
///
/// Nodes sit on concentric rings; every ring carries nodes at angles 0 and pi,
/// and the strip between two rings is triangulated separately in each half,
/// so every cell lies in one closed half-disk. Cells are counter-clockwise.
struct Mesh {
  std::vector<Point2> nodes;
  std::vector<Cell> cells;
  std::vector<Side> side;
  /// Radius of every ring, ring_start[k] = index of its first node.
  std::vector<double> ring_radius;
  std::vector<std::uint32_t> ring_start;
  std::vector<std::uint8_t> on_boundary;
  std::vector<std::array<std::uint32_t, 2>> boundary_edges;

  std::size_t num_nodes() const { return nodes.size(); }
  std::size_t num_cells() const { return cells.size(); }
  double area(std::size_t c) const;
  Point2 centroid(std::size_t c) const;
  double measure() const;
  /// Longest edge over all cells.
  double max_edge() const;
};

struct MeshOptions {
  /// Target edge length away from the origin.
  double h = 1.0 / 32.0;
  /// Circles to be fitted by rings.
  std::vector<double> radii;
  /// When positive, the local edge length is min(h, max(h_min, grading * r)).
  double grading = 0.0;
  double h_min = 1e-4;
};

/// Throws ParameterError for h outside (0, 0.5] or radii outside (0, 1).
Mesh disk_mesh(const MeshOptions& opt);

/// Signed area, positive for counter-clockwise vertices.
double signed_area(const Point2& a, const Point2& b, const Point2& c);

}  // namespace clab
