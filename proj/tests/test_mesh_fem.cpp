#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "clab/fem.hpp"
#include "clab/inverse.hpp"

using namespace clab;

constexpr double kPi = std::numbers::pi;

namespace {

Mesh mesh_h(double h, std::vector<double> radii = {}) {
  MeshOptions o;
  o.h = h;
  o.radii = std::move(radii);
  return disk_mesh(o);
}

double order(double e1, double e2) { return std::log2(e1 / e2); }

SolutionField dirichlet(const Mesh& m, const std::string& data, double ap, double am) {
  TransmissionProblem pb;
  pb.a = PiecewiseCoefficient::constant(ap, am);
  pb.bc.data = named_function(data, ap, am);
  return solve(pb, m, 2);
}

}  // namespace

TEST(Mesh, Invariants) {
  const Mesh m = mesh_h(1.0 / 16.0, {0.3});
  double area = 0.0;
  for (std::size_t c = 0; c < m.num_cells(); ++c) {
    EXPECT_GT(m.area(c), 0.0);
    area += m.area(c);
    const auto& t = m.cells[c];
    for (auto v : t) {
      // every cell in one closed half
      if (m.side[c] == Side::Upper) EXPECT_GE(m.nodes[v].y(), 0.0);
      else EXPECT_LE(m.nodes[v].y(), 0.0);
    }
  }
  // inscribed polygon of the outermost ring
  const int n = static_cast<int>(m.num_nodes() - m.ring_start.back());
  EXPECT_NEAR(area, 0.5 * n * std::sin(2.0 * kPi / n), 1e-12);
  EXPECT_LE(m.max_edge(), 1.0 / 16.0 * 1.6);
  // the fitted radius is a ring
  bool found = false;
  for (double r : m.ring_radius) found = found || std::abs(r - 0.3) < 1e-14;
  EXPECT_TRUE(found);
  for (std::size_t i = 0; i < m.num_nodes(); ++i)
    if (m.on_boundary[i]) EXPECT_NEAR(m.nodes[i].norm(), 1.0, 1e-14);
  EXPECT_THROW(disk_mesh({0.0}), ParameterError);
  EXPECT_THROW(mesh_h(0.1, {1.5}), ParameterError);
}

TEST(Mesh, GradedMeshRefinesTowardOrigin) {
  MeshOptions o;
  o.h = 1.0 / 16.0;
  o.grading = 1.0 / 10.0;
  o.h_min = 1e-3;
  const Mesh m = disk_mesh(o);
  EXPECT_LT(m.ring_radius[1], 2e-3);
  EXPECT_NEAR(m.measure(), mesh_h(1.0 / 16.0).measure(), 1e-2);
}

TEST(Solve, PiecewiseLinearIsReproduced) {
  for (double h : {1.0 / 8.0, 1.0 / 32.0}) {
    const auto u = dirichlet(mesh_h(h), "piecewise-linear", 1.0, 3.0);
    EXPECT_LT(u.stats.residual, 1e-10);
    EXPECT_LT(l2_error(u, named_function("piecewise-linear", 1.0, 3.0)), 1e-12);
  }
}

TEST(Solve, HarmonicAndQuadraticConvergeAtSecondOrder) {
  for (const char* name : {"harmonic:3", "piecewise-quadratic"}) {
    const double ap = 1.0, am = std::string(name) == "harmonic:3" ? 1.0 : 2.5;
    std::vector<double> e;
    for (double h : {1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0})
      e.push_back(l2_error(dirichlet(mesh_h(h), name, ap, am), named_function(name, ap, am)));
    EXPECT_GE(order(e[0], e[1]), 1.8) << name;
    EXPECT_GE(order(e[1], e[2]), 1.8) << name;
  }
}

TEST(Solve, NeumannCosineGivesX1) {
  TransmissionProblem pb;
  pb.bc.kind = BoundaryCondition::Kind::Neumann;
  pb.bc.data = named_function("cos");
  const Mesh m = mesh_h(1.0 / 32.0);
  const auto u = solve(pb, m, 1);
  EXPECT_LT(u.stats.residual, 1e-10);
  EXPECT_LT(l2_error(u, [](const Point2& x, Side) { return x.x(); }), 1e-3);
  // mean zero
  double mean = 0.0;
  for (std::size_t c = 0; c < m.num_cells(); ++c) {
    const auto& t = m.cells[c];
    mean += m.area(c) * (u.values[t[0]] + u.values[t[1]] + u.values[t[2]]) / 3.0;
  }
  EXPECT_LT(std::abs(mean), 1e-10);
  // W0 = int cos^2 = pi
  EXPECT_NEAR(boundary_pairing(u, pb.bc.data), kPi, 1e-3);
}

TEST(Solve, IncompatibleNeumannDataRejected) {
  TransmissionProblem pb;
  pb.bc.kind = BoundaryCondition::Kind::Neumann;
  pb.bc.data = [](const Point2&, Side) { return 1.0; };
  EXPECT_THROW(solve(pb, mesh_h(0.125), 1), ParameterError);
}

TEST(Solve, ThreadCountDoesNotChangeTheResult) {
  const Mesh m = mesh_h(1.0 / 16.0);
  TransmissionProblem pb;
  pb.a = PiecewiseCoefficient::constant(1, 4);
  pb.bc.data = named_function("harmonic:2");
  const auto a = solve(pb, m, 1), b = solve(pb, m, 4);
  EXPECT_EQ((a.values - b.values).norm(), 0.0);
}

TEST(Solve, RejectsBadInput) {
  TransmissionProblem pb;
  pb.bc.data = named_function("harmonic:1");
  pb.metric = MetricField::identity(3);
  EXPECT_THROW(solve(pb, mesh_h(0.125), 1), DimensionError);
  EXPECT_THROW(named_function("spline"), ParameterError);
  EXPECT_THROW(disk_inclusion(mesh_h(0.125), 0.2, 1.0), ParameterError);
}

TEST(EnergyGap, EmptyInclusionGivesZero) {
  const Mesh m = mesh_h(1.0 / 16.0);
  InclusionSpec none{std::vector<std::uint8_t>(m.num_cells(), 0), 2.0};
  const auto r = energy_gap(named_function("cos"), PiecewiseCoefficient::constant(1, 1), none, m, 1);
  EXPECT_LT(std::abs(r.gap), 1e-12);
  EXPECT_EQ(r.inclusion_measure, 0.0);
}

TEST(EnergyGap, ConcentricDiskMatchesSeries) {
  double prev = 0.0;
  for (double rho : {0.1, 0.2, 0.3}) {
    const auto r = disk_inclusion_demo(rho, 2.0, 1.0 / 64.0, 2);
    const double cf = disk_gap_closed_form(rho, 2.0);
    EXPECT_LT(r.gap, 0.0);
    EXPECT_NEAR(r.gap, cf, 0.01 * std::abs(cf));
    EXPECT_NEAR(r.inclusion_measure, kPi * rho * rho, 0.01 * kPi * rho * rho);
    EXPECT_GT(std::abs(r.gap), prev);
    prev = std::abs(r.gap);
  }
}

TEST(EnergyGap, ClosedFormSeriesLimit) {
  // first order in k - 1: -pi rho^2 (k - 1)
  const double rho = 0.3;
  EXPECT_NEAR(disk_gap_closed_form(rho, 1.0 + 1e-7) / 1e-7, -kPi * rho * rho, 1e-6);
  EXPECT_EQ(disk_gap_closed_form(rho, 1.0), 0.0);
  // k -> infinity: perfectly conducting disk, -2 pi rho^2 / (1 + rho^2)
  EXPECT_NEAR(disk_gap_closed_form(rho, 1e12), -2 * kPi * rho * rho / (1 + rho * rho), 1e-9);
}
