#pragma once

#include <Eigen/Dense>

#include "clab/errors.hpp"

namespace clab {

/// Points and vectors are stored with three slots; only the first `dim`
/// entries are meaningful, the rest stay zero.
inline constexpr int kMaxDim = 3;

using Vec = Eigen::Vector3d;
using Mat = Eigen::Matrix3d;

/// Which closed half-ball a one-sided quantity lives on.
enum class Side { Upper, Lower };

inline const char* to_string(Side s) { return s == Side::Upper ? "upper" : "lower"; }

/// Side of a point strictly off the interface {x_n = 0}.
inline Side side_of(const Vec& x, int dim) {
  const double xn = x[dim - 1];
  if (xn > 0.0) return Side::Upper;
  if (xn < 0.0) return Side::Lower;
  throw DomainError("point lies on the interface; pass an explicit side");
}

inline void require_dim(int dim) {
  if (dim < 2 || dim > kMaxDim) {
    throw DimensionError("dimension must be 2 or 3, got " + std::to_string(dim));
  }
}

}  // namespace clab
