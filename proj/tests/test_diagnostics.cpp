#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "clab/diagnostics.hpp"

using namespace clab;

constexpr double kPi = std::numbers::pi;

namespace {

const Mesh& graded() {
  static const Mesh m = [] {
    MeshOptions o;
    o.h = 1.0 / 32.0;
    o.grading = 1.0 / 40.0;
    o.h_min = 1e-4;
    return disk_mesh(o);
  }();
  return m;
}

SolutionField harmonic(int k) { return interpolate(graded(), named_function("harmonic:" + std::to_string(k))); }

}  // namespace

TEST(Mass, ConstantFieldIsArea) {
  const auto u = interpolate(graded(), [](const Point2&, Side) { return 1.0; });
  for (double r : {0.0123, 0.05, 0.31, 0.777}) EXPECT_NEAR(mass(u, r), kPi * r * r, 1e-10 * r * r);
  EXPECT_NEAR(mass(u, 1.0), graded().measure(), 1e-12);
  EXPECT_THROW(mass(u, 0.0), ParameterError);
}

TEST(Mass, QuadraticFieldOnCoarseMesh) {
  // linear U is exact on every cell, so clipping is the only approximation
  MeshOptions o;
  o.h = 1.0 / 8.0;
  const auto u = interpolate(disk_mesh(o), [](const Point2& x, Side) { return x.x() + 2.0 * x.y() - 0.5; });
  // int_{B_r} (x + 2y - 1/2)^2 = pi r^4 / 4 (1 + 4) + pi r^2 / 4
  for (double r : {0.17, 0.43, 0.9}) {
    const double exact = kPi * std::pow(r, 4) * 5.0 / 4.0 + kPi * r * r / 4.0;
    EXPECT_NEAR(mass(u, r), exact, 1e-10);
  }
}

TEST(Mass, MonotoneInRadius) {
  const auto u = harmonic(2);
  double prev = 0.0;
  for (double r = 0.01; r < 1.0; r *= 1.3) {
    const double m = mass(u, r);
    EXPECT_GT(m, prev);
    prev = m;
  }
}

TEST(Doubling, HarmonicPolynomialRatios) {
  for (int k = 0; k <= 3; ++k) {
    const auto d = doubling_report(harmonic(k), {0.02, 0.04}, 1.0);
    for (double q : d.ratio) EXPECT_NEAR(q, std::pow(2.0, 2 + 2 * k), 0.02 * std::pow(2.0, 2 + 2 * k)) << k;
  }
}

TEST(Doubling, ConstantFieldFrequency) {
  const auto d = doubling_report(harmonic(0), {0.01, 0.03}, 0.8);
  EXPECT_NEAR(d.frequency, 16.0, 1e-8);
  for (double q : d.ratio) EXPECT_NEAR(q, 4.0, 1e-8);
  EXPECT_NEAR(d.bound, std::pow(16.0, 3) / std::pow(0.8, 3), 1e-4);
}

TEST(Doubling, CempBoundedAcrossFrequencies) {
  double worst = 0.0;
  for (int k = 1; k <= 4; ++k) {
    const auto d = doubling_report(harmonic(k), {0.005, 0.01, 0.02, 0.04}, 1.0);
    EXPECT_NEAR(d.frequency, std::pow(4.0, 2 * k + 2), 1e-3 * std::pow(4.0, 2 * k + 2));
    worst = std::max(worst, d.C_emp);
  }
  EXPECT_LE(worst, 1.0);
}

TEST(Doubling, TransmissionSolutionStableUnderRefinement) {
  std::vector<double> c;
  for (double h : {1.0 / 16.0, 1.0 / 32.0}) {
    MeshOptions o;
    o.h = h;
    o.grading = 1.0 / 20.0;
    TransmissionProblem pb;
    pb.a = PiecewiseCoefficient::constant(1.0, 3.0);
    pb.bc.data = named_function("piecewise-linear", 1.0, 3.0);
    const auto u = solve(pb, disk_mesh(o), 1);
    const auto d = doubling_report(u, {0.01, 0.02}, 0.5);
    for (double q : d.ratio) EXPECT_NEAR(q, 16.0, 1e-6);
    c.push_back(d.C_emp);
  }
  EXPECT_NEAR(c[0], c[1], 1e-6 * c[1]);
}

TEST(Doubling, Preconditions) {
  const auto u = harmonic(1);
  EXPECT_THROW(doubling_report(u, {0.1}, 1.0), ParameterError);
  EXPECT_THROW(doubling_report(u, {}, 1.0), ParameterError);
  EXPECT_THROW(doubling_report(u, {0.01}, 1.5), ParameterError);
  const auto zero = interpolate(graded(), [](const Point2&, Side) { return 0.0; });
  EXPECT_THROW(doubling_report(zero, {0.01}, 1.0), DegenerateError);
}

TEST(VanishingOrder, Slopes) {
  const std::vector<double> radii{0.01, 0.02, 0.04, 0.08, 0.16};
  EXPECT_NEAR(vanishing_order(harmonic(0), radii), 2.0, 1e-6);
  EXPECT_NEAR(vanishing_order(interpolate(graded(), [](const Point2& x, Side) { return x.x(); }), radii), 4.0, 1e-4);
  // piecewise-linear transmission solution, simple zero at the origin
  const auto t = interpolate(graded(), named_function("piecewise-linear", 1.0, 3.0));
  EXPECT_NEAR(vanishing_order(t, radii), 4.0, 0.05 * 4.0);
  EXPECT_THROW(vanishing_order(harmonic(0), {0.01, 0.02, 0.04}), ParameterError);
  EXPECT_THROW(vanishing_order(harmonic(0), {0.01, 0.02, 0.04, 0.05}), ParameterError);
}

TEST(Cutoff, PlateauAndSupport) {
  const auto eta = cutoff_profile(0.01, 0.32);
  EXPECT_EQ(eta(0.05), 1.0);
  EXPECT_EQ(eta(0.005), 0.0);
  EXPECT_EQ(eta(0.17), 0.0);
  EXPECT_EQ(eta(0.9), 0.0);
  EXPECT_THROW(cutoff_profile(0.02, 0.32), ParameterError);
  EXPECT_THROW(cutoff_profile(0.0, 0.32), ParameterError);
}

TEST(Cutoff, DerivativeBoundsBySampling) {
  const double r = 0.01, rb = 0.32;
  const auto eta = cutoff_profile(r, rb);
  double m1_in = 0, m2_in = 0, m1_out = 0, m2_out = 0;
  const int N = 200000;
  for (int i = 1; i < N; ++i) {
    const double t = r + r * i / N;
    m1_in = std::max(m1_in, std::abs(eta.d1(t)));
    m2_in = std::max(m2_in, std::abs(eta.d2(t)));
    const double s = rb / 4 + rb / 4 * i / N;
    m1_out = std::max(m1_out, std::abs(eta.d1(s)));
    m2_out = std::max(m2_out, std::abs(eta.d2(s)));
  }
  EXPECT_NEAR(m1_in * r, 15.0 / 8.0, 1e-6);
  EXPECT_NEAR(m2_in * r * r, 10.0 / std::sqrt(3.0), 1e-6);
  EXPECT_LE(m1_in, eta.C1() / r);
  EXPECT_LE(m2_in, eta.C2() / (r * r));
  EXPECT_LE(m1_out, eta.C1() / rb);
  EXPECT_LE(m2_out, eta.C2() / (rb * rb));
  for (int i = 0; i <= 1000; ++i) {
    const double v = eta(i / 1000.0);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Cutoff, DerivativesMatchDifferencesAndAreContinuous) {
  const auto eta = cutoff_profile(0.01, 0.32);
  const double h = 1e-7;
  for (double t : {0.0123, 0.0177, 0.1, 0.123, 0.15}) {
    EXPECT_NEAR(eta.d1(t), (eta(t + h) - eta(t - h)) / (2 * h), 1e-5 * std::max(1.0, std::abs(eta.d1(t))));
    EXPECT_NEAR(eta.d2(t), (eta.d1(t + h) - eta.d1(t - h)) / (2 * h), 1e-4 * std::max(1.0, std::abs(eta.d2(t))));
  }
  // C^2 at the four band edges
  for (double t : {0.01, 0.02, 0.08, 0.16}) {
    const double d = 1e-9;
    EXPECT_NEAR(eta(t - d), eta(t + d), 1e-6);
    EXPECT_NEAR(eta.d1(t - d), eta.d1(t + d), 1e-4);
    EXPECT_NEAR(eta.d2(t - d) * 1e-4, eta.d2(t + d) * 1e-4, 1e-4);
  }
}

TEST(ThreeBall, SpotCheckOnTransmissionSolution) {
  const auto u = interpolate(graded(), named_function("piecewise-linear", 1.0, 3.0));
  const auto checks = three_ball_check(u, 0.005, 0.05, 0.32, {1.0, 2.0, 5.0, 10.0});
  double C = 0.0;
  for (const auto& c : checks) {
    EXPECT_TRUE(std::isfinite(c.log_lhs) && std::isfinite(c.log_rhs));
    C = std::max(C, c.ratio);
  }
  for (const auto& c : checks) EXPECT_LE(std::exp(c.log_lhs), C * std::exp(c.log_rhs) * (1 + 1e-12));
  EXPECT_LE(C, 1.0);
  EXPECT_THROW(three_ball_check(u, 0.02, 0.05, 0.32, {1.0}), ParameterError);
}
