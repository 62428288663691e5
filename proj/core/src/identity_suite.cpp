#include "clab/identity_suite.hpp"

#include <cmath>

#include "clab/parallel.hpp"

namespace clab {

RandomPoly RandomPoly::draw(Rng& rng, int dim, int degree, double scale) {
  RandomPoly p;
  p.dim = dim;
  for (int a = 0; a <= degree; ++a)
    for (int b = 0; a + b <= degree; ++b)
      for (int c = 0; a + b + c <= degree; ++c) {
        if (dim == 2 && c > 0) continue;
        p.exps.push_back({a, b, c});
        p.coef.push_back(scale * rng.normal());
      }
  return p;
}

IdentityConfig draw_identity_config(const MetricField& m, std::uint64_t seed, std::size_t index) {
  const int n = m.dim();
  Rng rng(seed * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL * (index + 1));
  const double R = m.radius();
  IdentityConfig c;
  c.x = rng.in_ball(n, 0.9 * R, 1e-6, 0.05 * R);
  c.tau = rng.uniform(1.0, 10.0);

  const RandomPoly pv = RandomPoly::draw(rng, n, 2, 0.15);
  c.v = ScalarField::from_generic([pv, n](const auto& x) { return sigma_of(x, n) * exp(pv(x)); }, "sigma*exp(p)");

  const RandomPoly pf = RandomPoly::draw(rng, n, 4, 1.0);
  const double amp = rng.normal();
  const double width = rng.uniform(0.2, 0.6) * R;
  Vec center = rng.in_ball(n, R);
  c.f = ScalarField::from_generic(
      [pf, amp, width, center, n](const auto& x) {
        auto r2 = (x[0] - center[0]) * (x[0] - center[0]);
        for (int i = 1; i < n; ++i) r2 = r2 + (x[i] - center[i]) * (x[i] - center[i]);
        return pf(x) + amp * exp(r2 * (-1.0 / (width * width)));
      },
      "poly+bump");

  const RandomPoly pp = RandomPoly::draw(rng, n, 2, 0.3);
  const RandomPoly pm = RandomPoly::draw(rng, n, 2, 0.3);
  c.gamma.plus = ScalarField::from_generic([pp](const auto& x) { return 1.0 + 0.5 * exp(pp(x)); }, "gamma+");
  c.gamma.minus = ScalarField::from_generic([pm](const auto& x) { return 1.0 + 0.5 * exp(pm(x)); }, "gamma-");
  c.gamma.gamma0 = 1.0;
  c.gamma.name = "random";

  std::array<RandomPoly, kMaxDim> pb;
  for (int i = 0; i < n; ++i) pb[i] = RandomPoly::draw(rng, n, 2, 1.0);
  c.B = VectorField::from_generic(
      [pb, n](const auto& x) {
        using T = std::decay_t<decltype(x[0])>;
        Vec3<T> r{T(0.0), T(0.0), T(0.0)};
        for (int i = 0; i < n; ++i) r[i] = pb[i](x);
        return r;
      },
      "random-poly");
  c.xi = Vec::Zero();
  c.eta = Vec::Zero();
  for (int i = 0; i < n; ++i) {
    c.xi[i] = rng.normal();
    c.eta[i] = rng.normal();
  }
  return c;
}

namespace {

const char* const kIdentityNames[] = {"Pdecomposition", "rellich", "lemma31", "le1", "le2", "le3", "le4", "modulgrad"};
constexpr std::size_t kIdentityCount = 8;

}  // namespace

bool IdentitySuiteReport::pass() const {
  if (identities.size() != kIdentityCount) return false;
  for (const auto& [name, s] : identities)
    if (!(s.max_relative <= tolerance)) return false;
  return true;
}

IdentitySuiteReport run_identity_suite(const MetricField& m, double eps, std::size_t samples, std::uint64_t seed,
                                       unsigned threads) {
  WeightParams(eps).validate();
  std::vector<std::array<double, kIdentityCount>> rel(samples);
  parallel_for(samples, threads, [&](std::size_t k) {
    const IdentityConfig c = draw_identity_config(m, seed, k);
    ConjugationContext ctx{c.v, c.tau, m, c.gamma};
    const ConjugatedParts cp = conjugated_parts(ctx, c.f, c.x);
    Residual pd;
    pd.residual = cp.P_direct - cp.P_decomposed;
    pd.scale = std::abs(cp.P_direct) + std::abs(cp.P_s) +
               std::abs(2.0 * c.tau * cp.grad_v_norm2 / (cp.v * cp.v) * cp.A_v);
    const Residual rel_r = check_rellich(c.B, c.gamma, c.f, m, c.x);
    const Residual l31 = check_conjugated_identity(ctx, c.f, c.x);
    const WeightIdentityResiduals l32 = check_weight_identities(c.v, m, c.x, c.xi, c.eta, eps);
    const NormalTangential nt = normal_tangential_split(c.f, m, c.x);
    rel[k] = {pd.relative(),         rel_r.relative(),        l31.relative(),          l32.le1.relative(),
              l32.le2.relative(),    l32.le3.relative(),      l32.le4.relative(),      nt.pythagoras.relative()};
  });

  IdentitySuiteReport r;
  r.metric = m.name();
  r.dim = m.dim();
  r.eps = eps;
  r.samples = samples;
  r.seed = seed;
  for (std::size_t i = 0; i < kIdentityCount; ++i) {
    IdentityStats s;
    double sum = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
      sum += rel[k][i];
      if (rel[k][i] > s.max_relative || !std::isfinite(rel[k][i])) {
        s.max_relative = rel[k][i];
        s.worst_index = k;
      }
    }
    s.mean_relative = samples ? sum / static_cast<double>(samples) : 0.0;
    r.identities[kIdentityNames[i]] = s;
  }
  return r;
}

nlohmann::json to_json(const IdentitySuiteReport& r) {
  nlohmann::json ids = nlohmann::json::object();
  for (const auto& [name, s] : r.identities) {
    ids[name] = {{"max_relative_residual", s.max_relative},
                 {"mean_relative_residual", s.mean_relative},
                 {"worst_sample", s.worst_index},
                 {"pass", s.max_relative <= r.tolerance}};
  }
  return {{"metric", r.metric}, {"dim", r.dim},           {"eps", r.eps},   {"samples", r.samples},
          {"seed", r.seed},     {"tolerance", r.tolerance}, {"identities", ids}, {"pass", r.pass()}};
}

}  // namespace clab
