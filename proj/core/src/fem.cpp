#include "clab/fem.hpp"

#include <cmath>
#include <complex>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "clab/parallel.hpp"

namespace clab {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// Degree-5 rule on the reference triangle: barycentric points and weights
// summing to one.
struct TriRule {
  std::array<std::array<double, 3>, 7> bary;
  std::array<double, 7> w;
};

const TriRule& dunavant5() {
  static const TriRule rule = [] {
    TriRule r;
    const double a1 = 0.059715871789770, b1 = 0.470142064105115, w1 = 0.132394152788506;
    const double a2 = 0.797426985353087, b2 = 0.101286507323456, w2 = 0.125939180544827;
    r.bary = {{{1.0 / 3, 1.0 / 3, 1.0 / 3},
               {a1, b1, b1},
               {b1, a1, b1},
               {b1, b1, a1},
               {a2, b2, b2},
               {b2, a2, b2},
               {b2, b2, a2}}};
    r.w = {0.225, w1, w1, w1, w2, w2, w2};
    return r;
  }();
  return rule;
}

Point2 at_bary(const Mesh& m, std::size_t c, const std::array<double, 3>& l) {
  const auto& t = m.cells[c];
  return l[0] * m.nodes[t[0]] + l[1] * m.nodes[t[1]] + l[2] * m.nodes[t[2]];
}

// Gradients of the barycentric coordinates, one per row.
Eigen::Matrix<double, 3, 2> bary_gradients(const Mesh& m, std::size_t c) {
  const auto& t = m.cells[c];
  const double two_a = 2.0 * m.area(c);
  Eigen::Matrix<double, 3, 2> g;
  for (int i = 0; i < 3; ++i) {
    const Point2& p = m.nodes[t[(i + 1) % 3]];
    const Point2& q = m.nodes[t[(i + 2) % 3]];
    g(i, 0) = (p.y() - q.y()) / two_a;
    g(i, 1) = (q.x() - p.x()) / two_a;
  }
  return g;
}

Eigen::Matrix3d element_matrix(const TransmissionProblem& pb, const Mesh& m, std::size_t c) {
  const auto& t = m.cells[c];
  const Side s = m.side[c];
  const double k = pb.inclusion && pb.inclusion->mask[c] ? pb.inclusion->k : 1.0;
  Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
  for (int e = 0; e < 3; ++e) {
    const Point2 mid = 0.5 * (m.nodes[t[e]] + m.nodes[t[(e + 1) % 3]]);
    const Vec x(mid.x(), mid.y(), 0.0);
    const double a = pb.a(x, s);
    if (!(a > 0.0) || !std::isfinite(a)) throw ParameterError("coefficient must be positive on every cell");
    A += (a * k / 3.0) * pb.metric.eval(x).topLeftCorner<2, 2>();
  }
  const auto G = bary_gradients(m, c);
  return m.area(c) * G * A * G.transpose();
}

double rel_residual(const SpMat& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  const double nb = b.norm();
  const double r = (A * x - b).norm();
  return nb > 0.0 ? r / nb : r;
}

constexpr double kResidualTol = 1e-10;

}  // namespace

InclusionSpec disk_inclusion(const Mesh& mesh, double rho, double k) {
  if (!(k > 0.0) || k == 1.0) throw ParameterError("inclusion contrast must be positive and different from 1");
  if (!(rho >= 0.0 && rho < 1.0)) throw ParameterError("inclusion radius must lie in [0, 1)");
  InclusionSpec d;
  d.k = k;
  d.mask.resize(mesh.num_cells());
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) d.mask[c] = mesh.centroid(c).norm() < rho ? 1 : 0;
  return d;
}

Eigen::Vector2d SolutionField::cell_gradient(std::size_t c) const {
  const auto G = bary_gradients(mesh, c);
  const auto& t = mesh.cells[c];
  return G.transpose() * Eigen::Vector3d(values[t[0]], values[t[1]], values[t[2]]);
}

double SolutionField::eval_in_cell(std::size_t c, const Point2& x) const {
  const auto& t = mesh.cells[c];
  const double A = mesh.area(c);
  const double l0 = signed_area(x, mesh.nodes[t[1]], mesh.nodes[t[2]]) / A;
  const double l1 = signed_area(mesh.nodes[t[0]], x, mesh.nodes[t[2]]) / A;
  return l0 * values[t[0]] + l1 * values[t[1]] + (1.0 - l0 - l1) * values[t[2]];
}

SolutionField solve(const TransmissionProblem& pb, const Mesh& mesh, unsigned threads) {
  if (pb.metric.dim() != 2) throw DimensionError("the solver works in two dimensions");
  if (!pb.bc.data) throw ParameterError("boundary data missing");
  if (pb.inclusion && pb.inclusion->mask.size() != mesh.num_cells())
    throw ParameterError("inclusion mask does not match the mesh");
  const std::size_t nn = mesh.num_nodes(), nc = mesh.num_cells();

  std::vector<Eigen::Matrix3d> local(nc);
  parallel_for(nc, resolve_threads(threads), [&](std::size_t c) { local[c] = element_matrix(pb, mesh, c); });

  SolutionField out;
  out.mesh = mesh;
  out.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nn));

  if (pb.bc.kind == BoundaryCondition::Kind::Dirichlet) {
    std::vector<Eigen::Index> id(nn, -1);
    Eigen::Index ni = 0;
    for (std::size_t v = 0; v < nn; ++v)
      if (!mesh.on_boundary[v]) id[v] = ni++;
    for (std::size_t v = 0; v < nn; ++v)
      if (mesh.on_boundary[v]) {
        const Point2& p = mesh.nodes[v];
        out.values[v] = pb.bc.data(p, p.y() < 0.0 ? Side::Lower : Side::Upper);
      }
    std::vector<Triplet> trip;
    trip.reserve(9 * nc);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ni);
    for (std::size_t c = 0; c < nc; ++c) {
      const auto& t = mesh.cells[c];
      for (int i = 0; i < 3; ++i) {
        if (id[t[i]] < 0) continue;
        for (int j = 0; j < 3; ++j) {
          if (id[t[j]] >= 0)
            trip.emplace_back(id[t[i]], id[t[j]], local[c](i, j));
          else
            rhs[id[t[i]]] -= local[c](i, j) * out.values[t[j]];
        }
      }
    }
    SpMat K(ni, ni);
    K.setFromTriplets(trip.begin(), trip.end());
    Eigen::VectorXd x;
    Eigen::SimplicialLDLT<SpMat> ldlt(K);
    double res = 0.0;
    if (ldlt.info() == Eigen::Success) {
      x = ldlt.solve(rhs);
      res = rel_residual(K, x, rhs);
      out.stats.method = "ldlt";
    }
    if (ldlt.info() != Eigen::Success || !(res <= kResidualTol)) {
      Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper> cg(K);
      cg.setTolerance(1e-12);
      cg.setMaxIterations(20 * static_cast<int>(ni) + 100);
      x = cg.solve(rhs);
      res = rel_residual(K, x, rhs);
      out.stats.method = "cg";
    }
    if (!(res <= kResidualTol))
      throw SolverError("linear solve residual " + std::to_string(res) + " exceeds 1e-10");
    for (std::size_t v = 0; v < nn; ++v)
      if (id[v] >= 0) out.values[v] = x[id[v]];
    out.stats.unknowns = static_cast<std::size_t>(ni);
    out.stats.residual = res;
    return out;
  }

  // Neumann: [K c; c^T 0] [u; mu] = [b; 0] with c_i = int N_i
  const Eigen::Index n = static_cast<Eigen::Index>(nn);
  Eigen::VectorXd load = Eigen::VectorXd::Zero(n + 1);
  const double gx[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  double abs_sum = 0.0;
  for (const auto& e : mesh.boundary_edges) {
    const Point2& p = mesh.nodes[e[0]];
    const Point2& q = mesh.nodes[e[1]];
    const double len = (q - p).norm();
    for (int k = 0; k < 3; ++k) {
      const double s = 0.5 * (1.0 + gx[k]);
      const Point2 x = (1.0 - s) * p + s * q;
      const double phi = pb.bc.data(x, x.y() < 0.0 ? Side::Lower : Side::Upper);
      const double wq = 0.5 * gw[k] * len * phi;
      load[e[0]] += (1.0 - s) * wq;
      load[e[1]] += s * wq;
      abs_sum += std::abs(wq);
    }
  }
  const double total = load.head(n).sum();
  if (std::abs(total) > 1e-10 * std::max(abs_sum, 1e-300))
    throw ParameterError("Neumann data must have zero mean: integral " + std::to_string(total));
  std::vector<Triplet> trip;
  trip.reserve(9 * nc + 6 * nc);
  for (std::size_t c = 0; c < nc; ++c) {
    const auto& t = mesh.cells[c];
    const double third = mesh.area(c) / 3.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) trip.emplace_back(t[i], t[j], local[c](i, j));
      trip.emplace_back(t[i], n, third);
      trip.emplace_back(n, t[i], third);
    }
  }
  SpMat K(n + 1, n + 1);
  K.setFromTriplets(trip.begin(), trip.end());
  K.makeCompressed();
  Eigen::SparseLU<SpMat> lu;
  lu.analyzePattern(K);
  lu.factorize(K);
  if (lu.info() != Eigen::Success) throw SolverError("sparse LU factorization failed");
  Eigen::VectorXd x = lu.solve(load);
  double res = rel_residual(K, x, load);
  out.stats.method = "lu";
  if (!(res <= kResidualTol)) {
    // one step of iterative refinement
    x += lu.solve(load - K * x);
    res = rel_residual(K, x, load);
  }
  if (!(res <= kResidualTol))
    throw SolverError("linear solve residual " + std::to_string(res) + " exceeds 1e-10");
  out.values = x.head(n);
  out.stats.unknowns = nn + 1;
  out.stats.residual = res;
  return out;
}

SolutionField interpolate(const Mesh& mesh, const SidedFn& f) {
  SolutionField u;
  u.mesh = mesh;
  u.values.resize(static_cast<Eigen::Index>(mesh.num_nodes()));
  for (std::size_t v = 0; v < mesh.num_nodes(); ++v)
    u.values[v] = f(mesh.nodes[v], mesh.nodes[v].y() < 0.0 ? Side::Lower : Side::Upper);
  u.stats.method = "interpolation";
  return u;
}

double l2_error(const SolutionField& u, const SidedFn& exact) {
  const auto& rule = dunavant5();
  const auto& m = u.mesh;
  double s = 0.0;
  for (std::size_t c = 0; c < m.num_cells(); ++c) {
    const auto& t = m.cells[c];
    const double A = m.area(c);
    for (std::size_t q = 0; q < rule.w.size(); ++q) {
      const auto& l = rule.bary[q];
      const double uh = l[0] * u.values[t[0]] + l[1] * u.values[t[1]] + l[2] * u.values[t[2]];
      const double d = uh - exact(at_bary(m, c, l), m.side[c]);
      s += A * rule.w[q] * d * d;
    }
  }
  return std::sqrt(s);
}

double boundary_pairing(const SolutionField& u, const SidedFn& phi) {
  const double gx[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
  const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  double s = 0.0;
  for (const auto& e : u.mesh.boundary_edges) {
    const Point2& p = u.mesh.nodes[e[0]];
    const Point2& q = u.mesh.nodes[e[1]];
    const double len = (q - p).norm();
    for (int k = 0; k < 3; ++k) {
      const double t = 0.5 * (1.0 + gx[k]);
      const Point2 x = (1.0 - t) * p + t * q;
      const double uh = (1.0 - t) * u.values[e[0]] + t * u.values[e[1]];
      s += 0.5 * gw[k] * len * phi(x, x.y() < 0.0 ? Side::Lower : Side::Upper) * uh;
    }
  }
  return s;
}

SidedFn named_function(const std::string& name, double a_plus, double a_minus) {
  if (!(a_plus > 0.0) || !(a_minus > 0.0)) throw ParameterError("coefficients must be positive");
  if (name == "piecewise-linear")
    return [=](const Point2& x, Side s) { return x.y() / (s == Side::Upper ? a_plus : a_minus); };
  if (name == "piecewise-quadratic")
    return [=](const Point2& x, Side s) {
      return x.x() * x.x() - x.y() * x.y() + x.x() * x.y() / (s == Side::Upper ? a_plus : a_minus);
    };
  if (name == "cos")
    return [](const Point2& x, Side) {
      const double r = x.norm();
      return r > 0.0 ? x.x() / r : 0.0;
    };
  if (name.rfind("harmonic:", 0) == 0) {
    std::size_t used = 0;
    int k = -1;
    try {
      k = std::stoi(name.substr(9), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != name.size() - 9 || k < 0 || k > 32) throw ParameterError("harmonic degree must be in 0..32");
    return [k](const Point2& x, Side) {
      std::complex<double> z(1.0, 0.0);
      for (int i = 0; i < k; ++i) z *= std::complex<double>(x.x(), x.y());
      return z.real();
    };
  }
  throw ParameterError("unknown function '" + name + "'");
}

}  // namespace clab
