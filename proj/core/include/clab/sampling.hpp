#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "clab/types.hpp"

namespace clab {

/// Radical inverse of `index` in the given prime base.
double radical_inverse(std::uint64_t index, int base);

/// First `count` points of the Halton sequence (bases 2, 3, 5) that fall in
/// the open ball of radius `radius`, skipping points with |x_n| < min_offset
/// and |x| < min_radius.
std::vector<Vec> halton_ball(int dim, std::size_t count, double radius, double min_offset = 0.0,
                             double min_radius = 0.0);

/// Halton points on the flat interface {x_n = 0} inside the ball.
std::vector<Vec> halton_interface(int dim, std::size_t count, double radius);

/// Seeded generator with platform-independent uniform draws (the standard
/// distributions are implementation-defined, the engine is not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  /// Standard normal by Box-Muller.
  double normal();
  /// Uniform point in the ball of radius r with |x_n| >= min_offset and |x| >= min_radius.
  Vec in_ball(int dim, double r, double min_offset = 0.0, double min_radius = 0.0);
  /// Uniform unit vector.
  Vec direction(int dim);
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace clab
