#pragma once

#include <nlohmann/json.hpp>

#include "clab/fem.hpp"

namespace clab {

struct EnergyReport {
  /// int_{boundary} phi u with the inclusion
  double W = 0.0;
  /// int_{boundary} phi u0 without it
  double W0 = 0.0;
  double gap = 0.0;
  /// Mesh measure of the inclusion mask.
  double inclusion_measure = 0.0;
  double residual = 0.0;
};

/// Solves the two Neumann problems on the same mesh (mean-zero normalization)
/// and compares the boundary pairings.
EnergyReport energy_gap(const SidedFn& phi, const PiecewiseCoefficient& a, const InclusionSpec& incl,
                        const Mesh& mesh, unsigned threads = 0);

/// Concentric disk of radius rho with contrast k in the unit disk, a = 1,
/// phi = cos(theta); the mesh fits the circle of radius rho.
EnergyReport disk_inclusion_demo(double rho, double k, double h, unsigned threads = 0);

/// Separation of variables for the same configuration:
/// W - W0 = -2 pi (k - 1) rho^2 / ((k + 1) + (k - 1) rho^2).
double disk_gap_closed_form(double rho, double k);

nlohmann::json to_json(const EnergyReport& r);

}  // namespace clab
