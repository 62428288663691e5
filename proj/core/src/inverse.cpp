#include "clab/inverse.hpp"

#include <cmath>
#include <numbers>

namespace clab {

EnergyReport energy_gap(const SidedFn& phi, const PiecewiseCoefficient& a, const InclusionSpec& incl,
                        const Mesh& mesh, unsigned threads) {
  if (incl.mask.size() != mesh.num_cells()) throw ParameterError("inclusion mask does not match the mesh");
  TransmissionProblem pb;
  pb.a = a;
  pb.bc.kind = BoundaryCondition::Kind::Neumann;
  pb.bc.data = phi;
  const SolutionField u0 = solve(pb, mesh, threads);
  EnergyReport r;
  r.W0 = boundary_pairing(u0, phi);
  r.residual = u0.stats.residual;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c)
    if (incl.mask[c]) r.inclusion_measure += mesh.area(c);
  pb.inclusion = incl;
  const SolutionField u = solve(pb, mesh, threads);
  r.W = boundary_pairing(u, phi);
  r.residual = std::max(r.residual, u.stats.residual);
  r.gap = r.W - r.W0;
  return r;
}

EnergyReport disk_inclusion_demo(double rho, double k, double h, unsigned threads) {
  if (!(rho > 0.0 && rho < 1.0)) throw ParameterError("inclusion radius must lie in (0, 1)");
  MeshOptions mo;
  mo.h = h;
  mo.radii = {rho};
  const Mesh mesh = disk_mesh(mo);
  return energy_gap(named_function("cos"), PiecewiseCoefficient::constant(1.0, 1.0), disk_inclusion(mesh, rho, k),
                    mesh, threads);
}

double disk_gap_closed_form(double rho, double k) {
  const double d = k - 1.0;
  return -2.0 * std::numbers::pi * d * rho * rho / ((k + 1.0) + d * rho * rho);
}

nlohmann::json to_json(const EnergyReport& r) {
  return {{"W", r.W},
          {"W0", r.W0},
          {"gap", r.gap},
          {"inclusion_measure", r.inclusion_measure},
          {"residual", r.residual}};
}

}  // namespace clab
