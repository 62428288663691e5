#pragma once

#include <functional>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "clab/mesh.hpp"
#include "clab/metric.hpp"

namespace clab {

/// Function of a point and the side it is evaluated from.
using SidedFn = std::function<double(const Point2&, Side)>;

struct BoundaryCondition {
  enum class Kind { Dirichlet, Neumann };
  Kind kind = Kind::Dirichlet;
  /// Dirichlet trace or Neumann flux on the boundary of the disk.
  SidedFn data;
  std::string name = "data";
};

/// Measurable inclusion D as a cell mask with contrast k: the coefficient is
/// multiplied by k on D.
struct InclusionSpec {
  std::vector<std::uint8_t> mask;
  double k = 2.0;
};

/// Cells whose centroid lies in the disk of radius rho around the origin.
InclusionSpec disk_inclusion(const Mesh& mesh, double rho, double k);

/// div(a g^{-1} grad u) = 0 on the unit disk with a jumping across {x_2 = 0}.
struct TransmissionProblem {
  MetricField metric = MetricField::identity(2);
  PiecewiseCoefficient a = PiecewiseCoefficient::constant(1.0, 1.0);
  BoundaryCondition bc;
  std::optional<InclusionSpec> inclusion;
};

struct SolveStats {
  std::size_t unknowns = 0;
  /// ||A x - b|| / ||b|| of the linear system actually solved.
  double residual = 0.0;
  std::string method;
};

/// Continuous piecewise-linear field on an interface-fitted mesh. U is
/// continuous across the interface because nodes are shared by both sides.
struct SolutionField {
  Mesh mesh;
  Eigen::VectorXd values;
  SolveStats stats;

  Eigen::Vector2d cell_gradient(std::size_t c) const;
  /// Linear interpolant on cell c at x.
  double eval_in_cell(std::size_t c, const Point2& x) const;
};

/// Conforming P1 solve. Dirichlet: eliminated boundary nodes and a sparse
/// Cholesky factorization (conjugate gradients as fallback). Neumann: the
/// mean-zero normalization is one Lagrange multiplier row.
/// Throws ValidationFailure subclasses for bad input and SolverError when the
/// residual exceeds 1e-10.
SolutionField solve(const TransmissionProblem& problem, const Mesh& mesh, unsigned threads = 0);

/// Nodal interpolant; interface nodes take the upper limit.
SolutionField interpolate(const Mesh& mesh, const SidedFn& f);

/// ||u_h - u||_{L^2} with a degree-5 rule per cell, u evaluated on the cell's side.
double l2_error(const SolutionField& u, const SidedFn& exact);

/// int_{boundary} phi u ds with three-point Gauss rules per boundary edge.
double boundary_pairing(const SolutionField& u, const SidedFn& phi);

/// Exact solutions and boundary data by name:
///   piecewise-linear   x_2 / a^(+/-)
///   piecewise-quadratic  x_1^2 - x_2^2 + x_1 x_2 / a^(+/-)
///   harmonic:k         Re((x_1 + i x_2)^k)
///   cos                cos(theta) (a Neumann flux)
/// The first two need constant coefficients a^(+/-).
SidedFn named_function(const std::string& name, double a_plus = 1.0, double a_minus = 1.0);

}  // namespace clab
