#include "clab/sampling.hpp"

#include <cmath>
#include <numbers>

namespace clab {

double radical_inverse(std::uint64_t index, int base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

std::vector<Vec> halton_ball(int dim, std::size_t count, double radius, double min_offset,
                             double min_radius) {
  require_dim(dim);
  static constexpr int kBases[kMaxDim] = {2, 3, 5};
  std::vector<Vec> pts;
  pts.reserve(count);
  for (std::uint64_t k = 1; pts.size() < count; ++k) {
    Vec x = Vec::Zero();
    for (int i = 0; i < dim; ++i) x[i] = radius * (2.0 * radical_inverse(k, kBases[i]) - 1.0);
    const double r = x.norm();
    if (r >= radius || r < min_radius || std::abs(x[dim - 1]) < min_offset) continue;
    if (x[dim - 1] == 0.0) continue;
    pts.push_back(x);
  }
  return pts;
}

std::vector<Vec> halton_interface(int dim, std::size_t count, double radius) {
  require_dim(dim);
  std::vector<Vec> pts;
  pts.reserve(count);
  for (std::uint64_t k = 1; pts.size() < count; ++k) {
    Vec x = Vec::Zero();
    x[0] = radius * (2.0 * radical_inverse(k, 2) - 1.0);
    if (dim == 3) x[1] = radius * (2.0 * radical_inverse(k, 3) - 1.0);
    if (x.norm() >= radius) continue;
    pts.push_back(x);
  }
  return pts;
}

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Vec Rng::in_ball(int dim, double r, double min_offset, double min_radius) {
  for (;;) {
    Vec x = Vec::Zero();
    for (int i = 0; i < dim; ++i) x[i] = uniform(-r, r);
    const double n = x.norm();
    if (n < r && n >= min_radius && std::abs(x[dim - 1]) >= min_offset && x[dim - 1] != 0.0) return x;
  }
}

Vec Rng::direction(int dim) {
  for (;;) {
    Vec x = Vec::Zero();
    for (int i = 0; i < dim; ++i) x[i] = normal();
    const double n = x.norm();
    if (n > 1e-12) return x / n;
  }
}

}  // namespace clab
