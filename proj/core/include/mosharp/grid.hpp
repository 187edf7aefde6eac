#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "mosharp/types.hpp"

namespace mosharp {

using Index = std::array<int, 3>;

/// Uniform Cartesian grid on [-L, L]^n with the same number of points per axis.
/// Grid points are cell centres for quadrature: every point carries measure h^n.
class Grid {
 public:
  Grid() = default;
  Grid(int dimension, double half_width, int points_per_axis);

  /// Grid whose spacing is exactly h. 2L/h must be an integer (within 1e-9).
  static Grid with_spacing(int dimension, double half_width, double h);

  int dimension() const { return dimension_; }
  double half_width() const { return half_width_; }
  int points() const { return points_; }
  double spacing() const { return h_; }
  double cell_measure() const { return cell_measure_; }
  std::size_t size() const { return size_; }

  /// Row-major: axis 0 varies slowest.
  std::size_t flat(const Index& idx) const {
    std::size_t k = 0;
    for (int a = 0; a < dimension_; ++a) k = k * static_cast<std::size_t>(points_) + static_cast<std::size_t>(idx[a]);
    return k;
  }
  Index index(std::size_t flat) const {
    Index idx{0, 0, 0};
    for (int a = dimension_ - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(flat % static_cast<std::size_t>(points_));
      flat /= static_cast<std::size_t>(points_);
    }
    return idx;
  }
  double coordinate(int i) const { return -half_width_ + h_ * i; }
  Point point(const Index& idx) const {
    Point x{0, 0, 0};
    for (int a = 0; a < dimension_; ++a) x[a] = coordinate(idx[a]);
    return x;
  }
  Point point(std::size_t flat) const { return point(index(flat)); }

  /// Flat-index step for a unit move along `axis`.
  std::ptrdiff_t stride(int axis) const;

  /// Index of the grid point nearest to x (clamped to the grid).
  Index nearest(const Point& x) const;

  /// Every `stride`-th point, aligned so that the centre point is kept.
  /// (points - 1) must be divisible by 2 * stride.
  Grid coarsened(int stride) const;

  bool operator==(const Grid& o) const {
    return dimension_ == o.dimension_ && points_ == o.points_ && half_width_ == o.half_width_;
  }

  std::string describe() const;

 private:
  int dimension_ = 1;
  double half_width_ = 1.0;
  int points_ = 9;
  double h_ = 0.25;
  double cell_measure_ = 0.25;
  std::size_t size_ = 9;
};

}  // namespace mosharp
