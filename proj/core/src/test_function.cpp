#include "clab/test_function.hpp"

#include <cstdio>

#include "clab/sampling.hpp"
#include "clab/weights.hpp"

namespace clab {

std::string to_string(SupportKind k) {
  switch (k) {
    case SupportKind::PuncturedBall: return "punctured-ball";
    case SupportKind::PuncturedHalfBall: return "punctured-half-ball";
    case SupportKind::Annulus: return "annulus";
  }
  return "?";
}

namespace {

template <typename T>
T eval_field(const ScalarField& f, const Vec3<T>& x) {
  if constexpr (std::is_same_v<T, double>)
    return f(x);
  else if constexpr (std::is_same_v<T, Jet1>)
    return f.jet1(x);
  else
    return f.jet2(x);
}

template <typename T>
T chi(const T& s, double a, double b) {
  if (value_of(s) <= a || value_of(s) >= b) return T(0.0);
  const double h = 0.5 * (b - a);
  const T p = (s - a) * (b - s) * (1.0 / (h * h));
  return p * p * p;
}

template <typename T>
T bump_eval(const BumpSpec& sp, const Vec3<T>& x, int dim, Side side) {
  const T s = sigma_of(x, dim);
  const T c = chi(s, sp.a, sp.b);
  if (value_of(c) == 0.0) return T(0.0);
  const T& x1 = x[0];
  const T& xn = x[dim - 1];
  switch (sp.shape) {
    case 0: return c;
    case 1: return c * x1 / s;
    case 2: return c * (x1 * x1 - xn * xn) / (s * s);
    case 3: return c * (1.0 + sp.c1 * xn / s);
    case 4: return c * (1.0 + (side == Side::Upper ? sp.kappa_plus : sp.kappa_minus) * xn / s);
    default: return c * (1.0 + sp.c1 * x1 / s + sp.c2 * (x1 * x1 - xn * xn) / (s * s));
  }
}

void check_radii(double a, double b, const SupportSpec& support) {
  if (!(a > 0.0 && b > a)) throw ParameterError("test function needs 0 < a < b");
  if (b > support.r_out * (1.0 + 1e-12)) throw ParameterError("test function exceeds declared support radius");
  if (support.kind == SupportKind::Annulus && a < support.r_in * (1.0 - 1e-12))
    throw ParameterError("test function reaches inside the declared annulus");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

TestFunction zero_function(int dim, const SupportSpec& support) {
  require_dim(dim);
  TestFunction t;
  t.dim = dim;
  t.upper = ScalarField::constant(0.0);
  t.lower = ScalarField::constant(0.0);
  t.support = support;
  return t;
}

TestFunction make_bump(int dim, const BumpSpec& spec, const SupportSpec& support) {
  require_dim(dim);
  check_radii(spec.a, spec.b, support);
  TestFunction t;
  t.dim = dim;
  t.support = support;
  t.inner = spec.a;
  t.outer = spec.b;
  t.name = "bump(shape=" + std::to_string(spec.shape) + ",a=" + fmt(spec.a) + ",b=" + fmt(spec.b) + ")";
  t.upper = ScalarField::from_generic(
      [spec, dim](const auto& x) { return bump_eval(spec, x, dim, Side::Upper); }, t.name + "+");
  if (support.kind == SupportKind::PuncturedHalfBall)
    t.lower = ScalarField::constant(0.0);
  else
    t.lower = ScalarField::from_generic(
        [spec, dim](const auto& x) { return bump_eval(spec, x, dim, Side::Lower); }, t.name + "-");
  return t;
}

TestFunction make_transmission_pair(int dim, const TransmissionSpec& spec, const PiecewiseCoefficient& gamma,
                                    const SupportSpec& support) {
  require_dim(dim);
  check_radii(spec.a, spec.b, support);
  if (support.kind == SupportKind::PuncturedHalfBall)
    throw HypothesisError("a transmission pair lives on both sides of the interface");
  TestFunction t;
  t.dim = dim;
  t.support = support;
  t.inner = spec.a;
  t.outer = spec.b;
  t.name = "transmission(a=" + fmt(spec.a) + ",b=" + fmt(spec.b) + ")";
  auto side_field = [&](const ScalarField& g, const std::string& tag) {
    return ScalarField::from_generic(
        [spec, g, dim](const auto& x) {
          using T = std::decay_t<decltype(x[0])>;
          const T c = chi(sigma_of(x, dim), spec.a, spec.b);
          if (value_of(c) == 0.0) return T(0.0);
          Vec3<T> trace = x;
          trace[dim - 1] = T(0.0);
          const T q = spec.q0 + spec.q1 * x[0];
          const T s = spec.s0 + spec.s1 * x[0];
          return c * (q + x[dim - 1] * s / eval_field(g, trace));
        },
        t.name + tag);
  };
  t.upper = side_field(gamma.plus, "+");
  t.lower = side_field(gamma.minus, "-");
  return t;
}

FamilySpec parse_family(const std::string& text) {
  FamilySpec f;
  const auto colon = text.find(':');
  f.name = text.substr(0, colon);
  if (f.name != "bump" && f.name != "radial" && f.name != "transmission")
    throw ParameterError("unknown test-function family '" + f.name + "'");
  if (colon != std::string::npos) {
    const std::string n = text.substr(colon + 1);
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(n, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != n.size() || v <= 0) throw ParameterError("family count must be a positive integer");
    f.count = static_cast<std::size_t>(v);
  }
  return f;
}

std::vector<TestFunction> make_family(int dim, const FamilySpec& spec, const PiecewiseCoefficient& gamma) {
  require_dim(dim);
  if (spec.count == 0) throw ParameterError("test-function family must be nonempty");
  if (!(spec.r_min > 0.0 && spec.r_max > spec.r_min)) throw ParameterError("family radii need 0 < r_min < r_max");
  Rng rng(spec.seed);
  std::vector<TestFunction> out;
  out.reserve(spec.count);
  for (std::size_t k = 0; k < spec.count; ++k) {
    const double a = rng.uniform(spec.r_min, spec.r_min + 0.4 * (spec.r_max - spec.r_min));
    const double b = rng.uniform(a + 0.3 * (spec.r_max - a), spec.r_max);
    SupportSpec sup{spec.kind, spec.kind == SupportKind::Annulus ? a : 0.0, b};
    if (spec.name == "transmission") {
      TransmissionSpec t{a, b, rng.uniform(0.5, 1.5), rng.uniform(-20.0, 20.0), rng.uniform(-1.0, 1.0),
                         rng.uniform(-20.0, 20.0)};
      out.push_back(make_transmission_pair(dim, t, gamma, sup));
    } else {
      BumpSpec b_spec;
      b_spec.a = a;
      b_spec.b = b;
      b_spec.shape = spec.name == "radial" ? 0 : static_cast<int>(k % 6);
      b_spec.c1 = rng.uniform(-0.5, 0.5);
      b_spec.c2 = rng.uniform(-0.5, 0.5);
      b_spec.kappa_plus = rng.uniform(-0.5, 0.5);
      b_spec.kappa_minus = rng.uniform(-0.5, 0.5);
      out.push_back(make_bump(dim, b_spec, sup));
    }
    out.back().name = spec.name + "[" + std::to_string(k) + "]:" + out.back().name;
  }
  return out;
}

}  // namespace clab
