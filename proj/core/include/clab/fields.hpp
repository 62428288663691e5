#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "clab/ad.hpp"

namespace clab {

template <typename T>
using Vec3 = std::array<T, kMaxDim>;

inline Vec3<double> to_array(const Vec& x) { return {x[0], x[1], x[2]}; }

/// Scalar field with exact first and second derivatives.
///
/// The field is stored three times over (double, first-order jet,
/// second-order jet) so that cheap evaluations do not pay for derivatives.
/// Jet evaluations accept arbitrary jet points, which lets fields be composed.
class ScalarField {
 public:
  using ValueFn = std::function<double(const Vec3<double>&)>;
  using Jet1Fn = std::function<Jet1(const JetPoint1&)>;
  using Jet2Fn = std::function<Jet2(const JetPoint&)>;

  ScalarField() = default;
  ScalarField(ValueFn value, Jet1Fn jet1, Jet2Fn jet2, std::string name = "field")
      : value_(std::move(value)), jet1_(std::move(jet1)), jet2_(std::move(jet2)), name_(std::move(name)) {}

  /// Wraps a generic callable `f(const std::array<T,3>&) -> T` for T in
  /// {double, Jet1, Jet2}.
  template <typename F>
  static ScalarField from_generic(F f, std::string name = "field") {
    return ScalarField([f](const Vec3<double>& x) { return f(x); },
                       [f](const JetPoint1& x) { return Jet1(f(x)); },
                       [f](const JetPoint& x) { return Jet2(f(x)); }, std::move(name));
  }

  static ScalarField constant(double c) {
    return from_generic([c](const auto& x) { return decltype(x[0] + 0.0)(c); }, "constant");
  }

  /// Field known only through values; gradient and Hessian by central
  /// differences with the given step, composed with jet inputs by the chain rule.
  static ScalarField sampled(ValueFn f, int dim, double step, std::string name = "sampled");

  explicit operator bool() const { return static_cast<bool>(value_); }
  const std::string& name() const { return name_; }

  double operator()(const Vec& x) const { return value_(to_array(x)); }
  double operator()(const Vec3<double>& x) const { return value_(x); }
  Jet1 jet1(const JetPoint1& p) const { return jet1_(p); }
  Jet2 jet2(const JetPoint& p) const { return jet2_(p); }
  Jet1 jet1(const Vec& x, int dim) const { return jet1_(seed_jet1(x, dim)); }
  Jet2 jet2(const Vec& x, int dim) const { return jet2_(seed_jet2(x, dim)); }

  Vec gradient(const Vec& x, int dim) const { return clab::gradient(jet1(x, dim)); }
  Mat hessian(const Vec& x, int dim) const { return clab::hessian(jet2(x, dim)); }

 private:
  ValueFn value_;
  Jet1Fn jet1_;
  Jet2Fn jet2_;
  std::string name_;
};

/// Vector field with exact first derivatives.
class VectorField {
 public:
  using ValueFn = std::function<Vec3<double>(const Vec3<double>&)>;
  using Jet1Fn = std::function<Vec3<Jet1>(const JetPoint1&)>;

  VectorField() = default;
  VectorField(ValueFn value, Jet1Fn jet1, std::string name = "vector")
      : value_(std::move(value)), jet1_(std::move(jet1)), name_(std::move(name)) {}

  template <typename F>
  static VectorField from_generic(F f, std::string name = "vector") {
    return VectorField([f](const Vec3<double>& x) { return f(x); },
                       [f](const JetPoint1& x) { return f(x); }, std::move(name));
  }

  static VectorField constant(const Vec& c) {
    return from_generic(
        [c](const auto& x) {
          using T = std::decay_t<decltype(x[0])>;
          return Vec3<T>{T(c[0]), T(c[1]), T(c[2])};
        },
        "constant");
  }

  Vec operator()(const Vec& x) const {
    const auto r = value_(to_array(x));
    return {r[0], r[1], r[2]};
  }
  Vec3<Jet1> jet1(const Vec& x, int dim) const { return jet1_(seed_jet1(x, dim)); }
  Vec3<Jet1> jet1(const JetPoint1& p) const { return jet1_(p); }
  const std::string& name() const { return name_; }

 private:
  ValueFn value_;
  Jet1Fn jet1_;
  std::string name_;
};

/// Coefficient with a jump across {x_n = 0}: one Lipschitz field per side.
struct PiecewiseCoefficient {
  ScalarField plus;
  ScalarField minus;
  double gamma0 = 1.0;
  double lip_plus = 0.0;
  double lip_minus = 0.0;
  std::string name = "coefficient";

  const ScalarField& on(Side s) const { return s == Side::Upper ? plus : minus; }

  double operator()(const Vec& x, Side s) const { return on(s)(x); }

  static PiecewiseCoefficient constant(double upper, double lower) {
    if (!(upper > 0.0) || !(lower > 0.0)) throw ParameterError("coefficient values must be positive");
    PiecewiseCoefficient c;
    c.plus = ScalarField::constant(upper);
    c.minus = ScalarField::constant(lower);
    c.gamma0 = std::min(upper, lower);
    c.name = "constant(" + std::to_string(upper) + "," + std::to_string(lower) + ")";
    return c;
  }

  static PiecewiseCoefficient uniform(ScalarField f, double gamma0, double lip, std::string name) {
    PiecewiseCoefficient c;
    c.plus = f;
    c.minus = std::move(f);
    c.gamma0 = gamma0;
    c.lip_plus = c.lip_minus = lip;
    c.name = std::move(name);
    return c;
  }
};

/// Side for a point, taking an explicit side when the point is on the interface.
inline Side resolve_side(const Vec& x, int dim, std::optional<Side> explicit_side) {
  if (explicit_side) return *explicit_side;
  return side_of(x, dim);
}

}  // namespace clab
