#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "clab/fem.hpp"

namespace clab {

/// A solve request read from problem.json (schema in docs/problem.schema.json).
struct ProblemConfig {
  TransmissionProblem problem;
  MeshOptions mesh;
  /// Inclusion disk, applied after the mesh is built; radius 0 means none.
  double inclusion_radius = 0.0;
  double inclusion_contrast = 1.0;
  nlohmann::json source;

  /// Builds the mesh and attaches the inclusion mask.
  std::pair<TransmissionProblem, Mesh> instantiate() const;
};

/// The schema text compiled into the library.
const std::string& problem_schema();

/// Validates against the schema (unknown keys are rejected) and builds the
/// problem. Throws ConfigError.
ProblemConfig parse_problem_config(const std::string& text);
ProblemConfig load_problem_config(const std::string& path);

}  // namespace clab
