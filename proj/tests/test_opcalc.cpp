#include <cmath>

#include <gtest/gtest.h>

#include "clab/identity_suite.hpp"
#include "clab/opcalc.hpp"

using namespace clab;

namespace {

ScalarField gaussian(const Vec& c, double s) {
  return ScalarField::from_generic(
      [c, s](const auto& x) {
        auto d0 = x[0] - c[0], d1 = x[1] - c[1];
        return exp(-(d0 * d0 + d1 * d1) / (s * s));
      },
      "gaussian");
}

MetricField diag21() {
  return MetricField::analytic(
      2,
      [](const auto& x) {
        using T = std::decay_t<decltype(x[0])>;
        std::array<std::array<T, 3>, 3> g;
        for (auto& r : g) r.fill(T(0.0));
        g[0][0] = T(2.0);
        g[1][1] = T(1.0);
        g[2][2] = T(1.0);
        return g;
      },
      "diag(2,1)");
}

const MetricField& paraboloid() {
  static const MetricField m = metric_from_id("paraboloid", 2);
  return m;
}

}  // namespace

TEST(WeightedGradient, Examples) {
  const auto x1 = ScalarField::from_generic([](const auto& x) { return x[0]; });
  EXPECT_LT((weighted_gradient(x1, MetricField::identity(2), Vec(0.2, 0.1, 0)) - Vec(1, 0, 0)).norm(), 1e-15);
  const auto s = ScalarField::from_generic([](const auto& x) { return x[0] + x[1]; });
  EXPECT_LT((weighted_gradient(s, diag21(), Vec(0.2, 0.1, 0)) - Vec(2, 1, 0)).norm(), 1e-15);

  const auto r2 = ScalarField::from_generic([](const auto& x) { return x[0] * x[0] + x[1] * x[1]; });
  const auto& m = paraboloid();
  for (const Vec& x : {Vec(0.1, 0.05, 0), Vec(-0.2, -0.1, 0), Vec(0.05, 0.15, 0)}) {
    const double h = 1e-5;
    Vec fd = Vec::Zero();
    for (int i = 0; i < 2; ++i) {
      Vec e = Vec::Zero();
      e[i] = h;
      fd[i] = (r2(Vec(x + e)) - r2(Vec(x - e))) / (2 * h);
    }
    EXPECT_LT((weighted_gradient(r2, m, x) - m.eval(x) * fd).norm(), 1e-6);
  }
}

TEST(LaplaceG, ClassicalValues) {
  const auto r2 = ScalarField::from_generic([](const auto& x) { return x[0] * x[0] + x[1] * x[1]; });
  EXPECT_NEAR(laplace_g(r2, MetricField::identity(2), Vec(0.3, -0.2, 0)), 4.0, 1e-13);
  for (int n : {2, 3}) {
    const auto sig = ScalarField::from_generic([n](const auto& x) {
      auto s = x[0] * x[0];
      for (int i = 1; i < n; ++i) s = s + x[i] * x[i];
      return sqrt(s);
    });
    const Vec x(0.3, 0.2, n == 3 ? 0.1 : 0.0);
    EXPECT_NEAR(laplace_g(sig, MetricField::identity(n), x), (n - 1) / x.head(n).norm(), 1e-12);
  }
}

TEST(LaplaceG, MatchesDivergenceStencil) {
  const auto f = gaussian(Vec(0.1, -0.05, 0), 0.3);
  const auto& m = paraboloid();
  const double h = 1e-4;
  for (const Vec& x : {Vec(0.1, 0.05, 0), Vec(-0.15, -0.1, 0), Vec(0.02, 0.2, 0)}) {
    double div = 0.0;
    for (int i = 0; i < 2; ++i) {
      Vec e = Vec::Zero();
      e[i] = h;
      div += (weighted_gradient(f, m, x + e)[i] - weighted_gradient(f, m, x - e)[i]) / (2 * h);
    }
    EXPECT_NEAR(laplace_g(f, m, x), div, 1e-4 * std::max(1.0, std::abs(div)));
  }
}

TEST(ConjugatedParts, SigmaWeightConstantFunction) {
  ConjugationContext ctx;
  ctx.v = ScalarField::from_generic([](const auto& x) { return sqrt(x[0] * x[0] + x[1] * x[1]); });
  ctx.tau = 2.0;
  ctx.metric = MetricField::identity(2);
  ctx.gamma = PiecewiseCoefficient::constant(1, 1);
  const auto one = ScalarField::constant(1.0);
  const auto p = conjugated_parts(ctx, one, Vec(0.5, 0, 0));
  EXPECT_NEAR(p.A_v, 0.0, 1e-14);
  EXPECT_NEAR(p.F_v, 0.0, 1e-14);
  EXPECT_NEAR(p.P_direct, 16.0, 1e-12);
  EXPECT_NEAR(p.P_s, 16.0, 1e-12);
  EXPECT_THROW(conjugated_parts(ctx, one, Vec::Zero()), Error);
}

TEST(ConjugatedParts, BwIsPhiTimesX) {
  ConjugationContext ctx;
  const double eps = 0.5;
  ctx.v = weight_field(WeightParams(eps), 2);
  ctx.tau = 3.0;
  ctx.metric = MetricField::identity(2);
  ctx.gamma = PiecewiseCoefficient::constant(1, 1);
  for (const Vec& x : {Vec(0.3, 0.1, 0), Vec(-0.05, 0.02, 0), Vec(0.4, -0.5, 0)}) {
    const auto p = conjugated_parts(ctx, ScalarField::constant(1.0), x);
    EXPECT_LT((p.B_v - phi(x.head(2).norm(), eps) * x).norm(), 1e-13);
  }
}

TEST(Rellich, ConstantFieldQuadraticFunction) {
  const auto B = VectorField::constant(Vec(0.3, -0.7, 0));
  const auto f = ScalarField::from_generic([](const auto& x) { return 1.0 + x[0] * x[1] + 2.0 * x[1] * x[1]; });
  const auto r = check_rellich(B, PiecewiseCoefficient::constant(1, 1), f, MetricField::identity(2), Vec(0.2, 0.3, 0));
  EXPECT_LT(r.relative(), 1e-14);
}

TEST(ConjugatedIdentity, ZeroFunctionAndBump) {
  ConjugationContext ctx;
  ctx.v = ScalarField::from_generic([](const auto& x) { return sqrt(x[0] * x[0] + x[1] * x[1]); });
  ctx.tau = 3.0;
  ctx.metric = MetricField::identity(2);
  ctx.gamma = PiecewiseCoefficient::constant(1, 1);
  const auto r0 = check_conjugated_identity(ctx, ScalarField::constant(0.0), Vec(0.2, 0.1, 0));
  EXPECT_EQ(r0.residual, 0.0);
  const auto r1 = check_conjugated_identity(ctx, gaussian(Vec(0.1, 0.1, 0), 0.2), Vec(0.2, 0.1, 0));
  EXPECT_LT(r1.relative(), 1e-8);

  ctx.metric = paraboloid();
  ctx.gamma = PiecewiseCoefficient::constant(1, 2);
  const auto r2 = check_conjugated_identity(ctx, gaussian(Vec(0.1, 0.1, 0), 0.2), Vec(0.2, 0.0, 0), Side::Upper);
  EXPECT_LT(r2.relative(), 1e-7);
}

TEST(WeightIdentities, SigmaInThreeDimensions) {
  const auto sig = sigma_field(3);
  const auto r = check_weight_identities(sig, MetricField::identity(3), Vec(0.2, -0.1, 0.3), Vec(0.4, 1.0, -0.3),
                               Vec(-0.2, 0.5, 0.9), 0.5);
  EXPECT_LT(r.le1.relative(), 1e-12);
  EXPECT_LT(r.le2.relative(), 1e-12);
  EXPECT_LT(r.le3.relative(), 1e-9);
  EXPECT_LT(r.le4.relative(), 1e-12);
}

TEST(NormalTangential, Examples) {
  const auto m = MetricField::identity(2);
  const auto radial = ScalarField::from_generic([](const auto& x) { return exp(-(x[0] * x[0] + x[1] * x[1])); });
  EXPECT_LT(normal_tangential_split(radial, m, Vec(0.3, 0.4, 0)).grad_T.norm(), 1e-15);
  const auto x1 = ScalarField::from_generic([](const auto& x) { return x[0]; });
  const auto s = normal_tangential_split(x1, m, Vec(0, 0.5, 0));
  EXPECT_LT(s.grad_N.norm(), 1e-15);
  EXPECT_LT((s.grad_T - Vec(1, 0, 0)).norm(), 1e-15);
  const auto t = normal_tangential_split(gaussian(Vec(0.1, 0.2, 0), 0.3), paraboloid(), Vec(0.15, -0.1, 0));
  EXPECT_LT(t.pythagoras.relative(), 1e-10);
}

TEST(FluxFields, RelationAndZero) {
  ConjugationContext ctx;
  const WeightParams p(0.5);
  ctx.v = weight_field(p, 2);
  ctx.tau = 2.0;
  ctx.metric = MetricField::identity(2);
  ctx.gamma = PiecewiseCoefficient::constant(1, 1);
  const auto z = flux_fields(ctx, ScalarField::constant(0.0), Vec(0.2, 0.1, 0), p);
  EXPECT_EQ(z.G1.norm(), 0.0);
  EXPECT_EQ(z.G2.norm(), 0.0);
  // n = 2: G2 = 2 tau G1 exactly
  const auto f = gaussian(Vec(0.05, 0.05, 0), 0.1);
  const auto g = flux_fields(ctx, f, Vec(0.1, 0.05, 0), p);
  EXPECT_LT((g.G2 - 2.0 * ctx.tau * g.G1).norm(), 1e-10 * std::max(1.0, g.G2.norm()));
  // n = 3 with the phi term
  ctx.v = weight_field(p, 3);
  ctx.metric = MetricField::identity(3);
  const auto f3 = ScalarField::from_generic([](const auto& x) { return exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])); });
  const Vec x(0.1, 0.2, 0.15);
  const auto g3 = flux_fields(ctx, f3, x, p);
  const double s = x.norm();
  const Vec grad_f2 = 2.0 * f3(x) * weighted_gradient(f3, ctx.metric, x);
  EXPECT_LT((g3.G2 - 2.0 * ctx.tau * g3.G1 - ctx.tau * phi(s, 0.5) * grad_f2).norm(), 1e-10);
}

TEST(PointwiseCarleman, RadialBumpAtLargeTau) {
  ConjugationContext ctx;
  const WeightParams p(0.5);
  ctx.v = weight_field(p, 2);
  ctx.metric = MetricField::identity(2);
  ctx.gamma = PiecewiseCoefficient::constant(1, 1);
  ctx.tau = 200.0;
  const auto f = ScalarField::from_generic([](const auto& x) {
    auto r2 = x[0] * x[0] + x[1] * x[1];
    return exp(-r2 / 1e-4);
  });
  EXPECT_GE(check_pointwise_carleman(ctx, f, Vec(0.01, 0.0, 0), p, Side::Upper).margin, 0.0);
  EXPECT_GE(check_pointwise_carleman(ctx, f, Vec(0.006, 0.008, 0), p).margin, 0.0);
  EXPECT_EQ(check_pointwise_carleman(ctx, ScalarField::constant(0.0), Vec(0.01, 0.0, 0), p, Side::Upper).margin, 0.0);
}

TEST(IdentitySuite, SmallRunIsDeterministicAndPasses) {
  for (const char* id : {"identity", "paraboloid"}) {
    const auto m = metric_from_id(id, 2);
    const auto a = run_identity_suite(m, 0.5, 100, 7, 1);
    const auto b = run_identity_suite(m, 0.5, 100, 7, 4);
    EXPECT_TRUE(a.pass());
    EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
    for (const auto& [name, s] : a.identities) EXPECT_LT(s.max_relative, 1e-7) << name;
  }
}
