#include "clab/fields.hpp"

namespace clab {

namespace {

struct FdDerivs {
  double value;
  Vec grad;
  Mat hess;
};

FdDerivs fd_derivs(const ScalarField::ValueFn& f, int dim, const Vec& x, double h, bool want_hess) {
  FdDerivs r{f(to_array(x)), Vec::Zero(), Mat::Zero()};
  auto at = [&](const Vec& y) { return f(to_array(y)); };
  for (int i = 0; i < dim; ++i) {
    Vec e = Vec::Zero();
    e[i] = h;
    const double fp = at(x + e), fm = at(x - e);
    const double fp2 = at(x + 2.0 * e), fm2 = at(x - 2.0 * e);
    r.grad[i] = (8.0 * (fp - fm) - (fp2 - fm2)) / (12.0 * h);
    if (want_hess) r.hess(i, i) = (-fp2 + 16.0 * fp - 30.0 * r.value + 16.0 * fm - fm2) / (12.0 * h * h);
  }
  if (want_hess) {
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j) {
        Vec ei = Vec::Zero(), ej = Vec::Zero();
        ei[i] = h;
        ej[j] = h;
        const double v = (at(x + ei + ej) - at(x + ei - ej) - at(x - ei + ej) + at(x - ei - ej)) / (4.0 * h * h);
        r.hess(i, j) = r.hess(j, i) = v;
      }
  }
  return r;
}

}  // namespace

ScalarField ScalarField::sampled(ValueFn f, int dim, double step, std::string name) {
  require_dim(dim);
  Jet1Fn j1 = [f, dim, step](const JetPoint1& p) {
    const Vec x{p[0].v, p[1].v, p[2].v};
    const FdDerivs d = fd_derivs(f, dim, x, step, false);
    Jet1 r(d.value);
    for (int i = 0; i < kMaxDim; ++i)
      for (int a = 0; a < dim; ++a) r.d[i] += d.grad[a] * p[a].d[i];
    return r;
  };
  Jet2Fn j2 = [f, dim, step](const JetPoint& p) {
    const Vec x{value(p[0]), value(p[1]), value(p[2])};
    const FdDerivs d = fd_derivs(f, dim, x, step, true);
    Jet2 r(d.value);
    for (int i = 0; i < kMaxDim; ++i) {
      double gi = 0.0;
      for (int a = 0; a < dim; ++a) gi += d.grad[a] * p[a].v.d[i];
      r.v.d[i] = gi;
      r.d[i].v = gi;
      for (int j = 0; j < kMaxDim; ++j) {
        double hij = 0.0;
        for (int a = 0; a < dim; ++a) {
          hij += d.grad[a] * p[a].d[i].d[j];
          for (int b = 0; b < dim; ++b) hij += d.hess(a, b) * p[a].v.d[i] * p[b].v.d[j];
        }
        r.d[i].d[j] = hij;
      }
    }
    return r;
  };
  return ScalarField(std::move(f), std::move(j1), std::move(j2), std::move(name));
}

}  // namespace clab
