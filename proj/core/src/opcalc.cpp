#include "clab/opcalc.hpp"

#include <cmath>

namespace clab {

namespace {

using JVec = Vec3<Jet1>;

JVec lower_grad(const Jet2& f) { return {partial(f, 0), partial(f, 1), partial(f, 2)}; }

JVec raise(const LocalMetric& lm, const JVec& a) {
  JVec r;
  for (int i = 0; i < kMaxDim; ++i) {
    r[i] = Jet1(0.0);
    for (int j = 0; j < lm.n; ++j) r[i] += lm.jet[i][j] * a[j];
  }
  return r;
}

Jet1 dot(const LocalMetric& lm, const JVec& a, const JVec& b) {
  Jet1 s(0.0);
  for (int i = 0; i < lm.n; ++i) s += a[i] * b[i];
  return s;
}

double div(const LocalMetric& lm, const JVec& V) {
  double s = 0.0;
  for (int i = 0; i < lm.n; ++i) s += V[i].d[i];
  return s;
}

Vec values(const JVec& a) { return {a[0].v, a[1].v, a[2].v}; }

// Jets at the point for the conjugation weight v.
struct WeightJets {
  Jet2 v;
  JVec dv;       // grad v
  JVec dv_up;    // g^{-1} grad v
  Jet1 q;        // |grad_g v|^2
  JVec B;        // v grad_g v / q
  double lap = 0.0;
  double F = 0.0;
};

WeightJets weight_jets(const ScalarField& v, const LocalMetric& lm, const Vec& x) {
  WeightJets w;
  w.v = v.jet2(x, lm.n);
  if (!(value(w.v) > 0.0)) throw SingularityError("conjugation weight must be positive");
  w.dv = lower_grad(w.v);
  w.dv_up = raise(lm, w.dv);
  w.q = dot(lm, w.dv, w.dv_up);
  if (!(w.q.v > 1e-300)) throw SingularityError("weighted gradient of the conjugation weight vanishes");
  const Jet1 vq = lower(w.v) / w.q;
  for (int i = 0; i < kMaxDim; ++i) w.B[i] = vq * w.dv_up[i];
  w.lap = laplace_g(w.v, lm);
  w.F = value(w.v) * w.lap / w.q.v - 1.0;
  return w;
}

// S^{ij} = 1/2 [ (div B - F) g^{ij} - d_k B^j g^{ki} - d_k B^i g^{kj} + B^k d_k g^{ij} ]
// together with the summed sizes of its four constituents.
Mat s_matrix(const WeightJets& w, const LocalMetric& lm, double* scale) {
  const int n = lm.n;
  const double divB = div(lm, w.B);
  Mat S = Mat::Zero();
  Mat t1 = Mat::Zero(), t2 = Mat::Zero(), t3 = Mat::Zero();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double a = 0.0, b = 0.0;
      for (int k = 0; k < n; ++k) {
        a += w.B[j].d[k] * lm.ginv(k, i) + w.B[i].d[k] * lm.ginv(k, j);
        b += w.B[k].v * lm.dg[k](i, j);
      }
      t1(i, j) = (divB - w.F) * lm.ginv(i, j);
      t2(i, j) = a;
      t3(i, j) = b;
      S(i, j) = 0.5 * (t1(i, j) - a + b);
    }
  if (scale != nullptr) *scale = 0.5 * (std::abs(divB) * lm.ginv.norm() + std::abs(w.F) * lm.ginv.norm() + t2.norm() + t3.norm());
  return S;
}

Mat lowered(const LocalMetric& lm) { return lm.g; }

}  // namespace

LocalMetric LocalMetric::at(const MetricField& m, const Vec& x) {
  LocalMetric lm;
  lm.n = m.dim();
  lm.ginv = m.eval(x);
  lm.dg = m.deriv(x);
  lm.jet = m.jet(x);
  lm.g = Mat::Identity();
  lm.g.topLeftCorner(lm.n, lm.n) = lm.ginv.topLeftCorner(lm.n, lm.n).inverse();
  return lm;
}

double laplace_g(const Jet2& f, const LocalMetric& lm) {
  double s = 0.0;
  for (int i = 0; i < lm.n; ++i)
    for (int j = 0; j < lm.n; ++j) s += lm.ginv(i, j) * f.d[i].d[j] + lm.dg[i](i, j) * f.v.d[j];
  return s;
}

Vec weighted_gradient(const ScalarField& f, const MetricField& m, const Vec& x) {
  return m.eval(x) * f.gradient(x, m.dim());
}

double laplace_g(const ScalarField& f, const MetricField& m, const Vec& x) {
  return laplace_g(f.jet2(x, m.dim()), LocalMetric::at(m, x));
}

ConjugatedParts conjugated_parts(const ConjugationContext& ctx, const ScalarField& f, const Vec& x) {
  const LocalMetric lm = LocalMetric::at(ctx.metric, x);
  const WeightJets w = weight_jets(ctx.v, lm, x);
  const Jet2 fj = f.jet2(x, lm.n);
  const double tau = ctx.tau;
  const double v = value(w.v);
  const double q = w.q.v;
  const double fv = value(fj);
  const Vec df = gradient(fj);

  ConjugatedParts r;
  r.v = v;
  r.grad_v_norm2 = q;
  r.F_v = w.F;
  r.B_v = values(w.B);
  r.A_v = v / q * values(w.dv_up).dot(df) + 0.5 * w.F * fv;
  r.P_s = laplace_g(fj, lm) + tau * tau * q / (v * v) * fv;
  r.P_decomposed = r.P_s + 2.0 * tau * q / (v * v) * r.A_v;

  // v^{-tau} lap_g(v^tau f) evaluated as lap_g((v / v(x))^tau f) at x.
  const Jet2 ratio = w.v * (1.0 / v);
  const Jet2 h = pow(ratio, tau) * fj;
  r.P_direct = laplace_g(h, lm);

  r.S_v = s_matrix(w, lm, nullptr);
  r.M_v = r.S_v * lowered(lm);
  return r;
}

Residual check_rellich(const VectorField& B, const PiecewiseCoefficient& gamma, const ScalarField& f,
                       const MetricField& m, const Vec& x, std::optional<Side> side) {
  const LocalMetric lm = LocalMetric::at(m, x);
  const int n = lm.n;
  const Side s = resolve_side(x, n, side);
  const Jet1 gam = gamma.on(s).jet1(x, n);
  const Jet2 fj = f.jet2(x, n);
  const JVec Bj = B.jet1(x, n);
  const JVec df = lower_grad(fj);
  const JVec df_up = raise(lm, df);
  const Jet1 Bdf = dot(lm, Bj, df);
  const Jet1 gf2 = dot(lm, df, df_up);

  const double lhs = 2.0 * gam.v * laplace_g(fj, lm) * Bdf.v;

  JVec V1, V2;
  for (int i = 0; i < kMaxDim; ++i) {
    V1[i] = gam * Bdf * df_up[i];
    V2[i] = gam * Bj[i] * gf2;
  }
  const double t1 = 2.0 * div(lm, V1);
  const double t2 = -div(lm, V2);

  double divB = div(lm, Bj);
  double c1 = divB * gf2.v;
  double c2 = 0.0, c3 = 0.0, t5 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        c2 += Bj[k].d[j] * lm.ginv(j, i) * df[i].v * df[k].v;
        c3 += Bj[k].v * lm.dg[k](i, j) * df[i].v * df[j].v;
        t5 += gam.d[j] * Bj[k].v * lm.ginv(i, j) * df[i].v * df[k].v;
      }
  c2 *= -2.0;
  t5 *= -2.0;
  double Bdg = 0.0;
  for (int k = 0; k < n; ++k) Bdg += Bj[k].v * gam.d[k];
  const double t4 = Bdg * gf2.v;
  const double t3 = gam.v * (c1 + c2 + c3);

  Residual r;
  r.residual = lhs - (t1 + t2 + t3 + t4 + t5);
  r.scale = std::abs(lhs) + std::abs(t1) + std::abs(t2) + std::abs(gam.v) * (std::abs(c1) + std::abs(c2) + std::abs(c3)) +
            std::abs(t4) + std::abs(t5);
  return r;
}

Residual check_conjugated_identity(const ConjugationContext& ctx, const ScalarField& f, const Vec& x, std::optional<Side> side) {
  const LocalMetric lm = LocalMetric::at(ctx.metric, x);
  const int n = lm.n;
  const Side s = resolve_side(x, n, side);
  const Jet1 gam = ctx.gamma.on(s).jet1(x, n);
  const WeightJets w = weight_jets(ctx.v, lm, x);
  const ConjugatedParts cp = conjugated_parts(ctx, f, x);
  const Jet2 fj = f.jet2(x, n);
  const JVec df = lower_grad(fj);
  const JVec df_up = raise(lm, df);
  const Jet1 gf2 = dot(lm, df, df_up);
  const double tau = ctx.tau;
  const double v = value(w.v), q = w.q.v, fv = value(fj);
  const Vec dfv = values(df);
  const Vec dgam{gam.d[0], gam.d[1], gam.d[2]};

  const double lhs = gam.v * v * v / q * cp.P_direct * cp.P_direct;
  const double r1 = gam.v * v * v / q * cp.P_s * cp.P_s;
  const double r2 = 4.0 * tau * tau * gam.v * q / (v * v) * cp.A_v * cp.A_v;
  const double r3 = 4.0 * tau * gam.v * dfv.dot(cp.S_v * dfv);
  const double r4 = 2.0 * tau * cp.B_v.dot(dgam) * gf2.v;
  double r5 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) r5 += dgam[j] * cp.B_v[k] * lm.ginv(i, j) * dfv[i] * dfv[k];
  r5 *= -4.0 * tau;
  const double lap_f2 = laplace_g(fj * fj, lm);
  const double r6 = tau * gam.v * cp.F_v * lap_f2;
  const double r7 = -2.0 * tau * tau * tau * lm.inner_lower(values(w.dv), dgam) / v * fv * fv;

  const Jet1 fl = lower(fj);
  const Jet1 Bdf = dot(lm, w.B, df);
  const Jet1 vl = lower(w.v);
  JVec V;
  for (int i = 0; i < kMaxDim; ++i) {
    V[i] = tau * tau * gam * fl * fl * w.dv_up[i] / vl + 2.0 * gam * Bdf * df_up[i] - gam * gf2 * w.B[i];
  }
  const double r8 = 2.0 * tau * div(lm, V);

  Residual r;
  r.residual = lhs - (r1 + r2 + r3 + r4 + r5 + r6 + r7 + r8);
  r.scale = std::abs(lhs) + std::abs(r1) + std::abs(r2) + std::abs(r3) + std::abs(r4) + std::abs(r5) +
            std::abs(r6) + std::abs(r7) + std::abs(r8);
  return r;
}

ScalarField compose_psi(const ScalarField& v, double eps) {
  return ScalarField([v, eps](const Vec3<double>& x) { return psi_of(v(x), eps); },
                     [v, eps](const JetPoint1& p) { return psi_of(v.jet1(p), eps); },
                     [v, eps](const JetPoint& p) { return psi_of(v.jet2(p), eps); }, "psi(" + v.name() + ")");
}

WeightIdentityResiduals check_weight_identities(const ScalarField& v, const MetricField& m, const Vec& x, const Vec& xi,
                               const Vec& eta, double eps) {
  const LocalMetric lm = LocalMetric::at(m, x);
  const int n = lm.n;
  WeightIdentityResiduals out;

  const WeightJets w = weight_jets(v, lm, x);
  double s_scale = 0.0;
  const Mat S = s_matrix(w, lm, &s_scale);
  const Vec dv = values(w.dv);
  out.le1.residual = (S * dv).norm();
  out.le1.scale = s_scale * dv.norm();

  const ScalarField pv = compose_psi(v, eps);
  const WeightJets wp = weight_jets(pv, lm, x);
  const double vv = value(w.v);
  const double ph = phi(vv, eps), php = phi_prime(vv, eps);
  out.le2.residual = wp.F - (ph * w.F - php * vv);
  out.le2.scale = std::abs(wp.F) + std::abs(ph * w.F) + std::abs(php * vv);

  const Mat G = lowered(lm);
  const Mat Mp = s_matrix(wp, lm, nullptr) * G;
  const Mat Mv = S * G;
  const double lhs3 = (G * Mp * xi).dot(eta);
  const double xe = (G * xi).dot(eta);
  const double proj = dv.dot(xi) * dv.dot(eta) / w.q.v;
  const double mv = (G * Mv * xi).dot(eta);
  out.le3.residual = lhs3 - (vv * php * (xe - proj) + ph * mv);
  out.le3.scale = std::abs(lhs3) + std::abs(vv * php * xe) + std::abs(vv * php * proj) + std::abs(ph * mv);

  const MetricField m0 = m.frozen(Vec::Zero());
  const LocalMetric l0 = LocalMetric::at(m0, x);
  const WeightJets ws = weight_jets(sigma_field(n), l0, x);
  double s0_scale = 0.0;
  const Mat S0 = s_matrix(ws, l0, &s0_scale);
  out.le4.residual = std::abs(ws.F - (n - 2)) + S0.norm();
  out.le4.scale = std::abs(ws.F) + (n - 2) + s0_scale;
  return out;
}

NormalTangential normal_tangential_split(const ScalarField& f, const MetricField& m, const Vec& x) {
  const int n = m.dim();
  if (x.head(n).norm() == 0.0) throw SingularityError("normal direction undefined at the origin");
  const LocalMetric lm = LocalMetric::at(m, x);
  const Vec ds = x / x.head(n).norm();
  const Vec df = f.gradient(x, n);
  const Vec gs = lm.ginv * ds;
  const Vec gf = lm.ginv * df;
  NormalTangential r;
  r.grad_N = ds.dot(gf) / ds.dot(gs) * gs;
  r.grad_T = gf - r.grad_N;
  const double nn = lm.inner_raised(r.grad_N, r.grad_N);
  const double tt = lm.inner_raised(r.grad_T, r.grad_T);
  const double ff = lm.inner_raised(gf, gf);
  r.pythagoras.residual = nn + tt - ff;
  r.pythagoras.scale = nn + tt + ff;
  return r;
}

namespace {

struct FluxJets {
  JVec G1, G2;
};

FluxJets flux_jets(const ConjugationContext& ctx, const WeightJets& w, const LocalMetric& lm, const Jet2& fj,
                   const Jet1& gam, const Jet1& phis) {
  const int n = lm.n;
  const double tau = ctx.tau;
  const JVec df = lower_grad(fj);
  const JVec df_up = raise(lm, df);
  const Jet1 gf2 = dot(lm, df, df_up);
  const Jet1 Bdf = dot(lm, w.B, df);
  const Jet1 fl = lower(fj);
  const Jet1 vl = lower(w.v);
  FluxJets r;
  for (int i = 0; i < kMaxDim; ++i) {
    r.G1[i] = tau * tau * gam * fl * fl * w.dv_up[i] / vl + 2.0 * gam * Bdf * df_up[i] - gam * gf2 * w.B[i];
    r.G2[i] = 2.0 * tau * r.G1[i] + tau * (n - 2) * gam * phis * (2.0 * fl * df_up[i]);
  }
  return r;
}

}  // namespace

FluxFields flux_fields(const ConjugationContext& ctx, const ScalarField& f, const Vec& x, const WeightParams& p,
                       std::optional<Side> side) {
  const LocalMetric lm = LocalMetric::at(ctx.metric, x);
  const int n = lm.n;
  const Side s = resolve_side(x, n, side);
  const Jet1 gam = ctx.gamma.on(s).jet1(x, n);
  const WeightJets w = weight_jets(ctx.v, lm, x);
  const Jet1 phis = phi_of(sigma_of(seed_jet1(x, n), n), p.eps);
  const FluxJets fx = flux_jets(ctx, w, lm, f.jet2(x, n), gam, phis);
  FluxFields r;
  r.G1 = values(fx.G1);
  r.G2 = values(fx.G2);
  r.div_G1 = div(lm, fx.G1);
  r.div_G2 = div(lm, fx.G2);
  return r;
}

PointwiseCarleman check_pointwise_carleman(const ConjugationContext& ctx, const ScalarField& f, const Vec& x,
                                           const WeightParams& p, std::optional<Side> side) {
  const LocalMetric lm = LocalMetric::at(ctx.metric, x);
  const int n = lm.n;
  const Side s = resolve_side(x, n, side);
  const Jet1 gam = ctx.gamma.on(s).jet1(x, n);
  const WeightJets w = weight_jets(ctx.v, lm, x);
  const Jet2 fj = f.jet2(x, n);
  const double sigma = x.head(n).norm();
  const Jet1 phis = phi_of(sigma_of(seed_jet1(x, n), n), p.eps);
  const FluxJets fx = flux_jets(ctx, w, lm, fj, gam, phis);
  const ConjugatedParts cp = conjugated_parts(ctx, f, x);
  const double tau = ctx.tau, eps = p.eps;
  const double v = value(w.v), q = w.q.v, fv = value(fj);
  const Vec df = gradient(fj);

  PointwiseCarleman r;
  r.lhs = gam.v * v * v / q * cp.P_direct * cp.P_direct;
  r.term_Ps = 0.5 * gam.v * v * v / q * cp.P_s * cp.P_s;
  r.term_A = 2.0 * tau * tau * gam.v * q / (v * v) * cp.A_v * cp.A_v;
  r.term_grad = 0.5 * tau * std::pow(sigma, eps) * gam.v * eps * lm.inner_lower(df, df);
  r.term_f2 = 0.25 * tau * tau * tau * gam.v / ctx.metric.lambda() * eps * std::pow(sigma, eps - 2.0) * fv * fv;
  r.div_G2 = div(lm, fx.G2);
  r.margin = r.lhs - (r.term_Ps + r.term_A + r.term_grad + r.term_f2 + r.div_G2);
  return r;
}

}  // namespace clab
