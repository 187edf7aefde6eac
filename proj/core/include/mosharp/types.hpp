#pragma once

#include <array>
#include <cmath>
#include <limits>

namespace mosharp {

/// A point in R^n for n <= 3. Unused trailing coordinates are kept at zero.
using Point = std::array<double, 3>;

inline constexpr int kMaxDimension = 3;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline bool is_supported_dimension(int n) noexcept { return n >= 1 && n <= kMaxDimension; }

inline double euclidean_norm(const Point& x) noexcept {
  return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
}

inline double distance(const Point& a, const Point& b) noexcept {
  const Point d{a[0] - b[0], a[1] - b[1], a[2] - b[2]};
  return euclidean_norm(d);
}

inline double max_abs_coordinate(const Point& x) noexcept {
  return std::fmax(std::fabs(x[0]), std::fmax(std::fabs(x[1]), std::fabs(x[2])));
}

}  // namespace mosharp
