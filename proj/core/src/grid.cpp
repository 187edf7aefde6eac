#include "mosharp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mosharp/errors.hpp"

namespace mosharp {

Grid::Grid(int dimension, double half_width, int points_per_axis)
    : dimension_(dimension), half_width_(half_width), points_(points_per_axis) {
  if (!is_supported_dimension(dimension)) throw InvalidArgument("unsupported dimension " + std::to_string(dimension));
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw InvalidArgument("grid half-width must be positive");
  if (points_per_axis < 9) throw InvalidArgument("grid needs at least 9 points per axis");
  h_ = 2.0 * half_width / (points_per_axis - 1);
  cell_measure_ = std::pow(h_, dimension);
  size_ = 1;
  for (int a = 0; a < dimension; ++a) size_ *= static_cast<std::size_t>(points_per_axis);
}

Grid Grid::with_spacing(int dimension, double half_width, double h) {
  if (!(h > 0.0)) throw InvalidArgument("grid spacing must be positive");
  const double cells = 2.0 * half_width / h;
  const double rounded = std::round(cells);
  if (std::fabs(cells - rounded) > 1e-9 * rounded)
    throw InvalidArgument("2L/h must be an integer for an exact grid spacing");
  Grid g(dimension, half_width, static_cast<int>(rounded) + 1);
  g.h_ = h;
  g.cell_measure_ = std::pow(h, dimension);
  return g;
}

std::ptrdiff_t Grid::stride(int axis) const {
  std::ptrdiff_t s = 1;
  for (int a = dimension_ - 1; a > axis; --a) s *= points_;
  return s;
}

Index Grid::nearest(const Point& x) const {
  Index idx{0, 0, 0};
  for (int a = 0; a < dimension_; ++a) {
    const long i = std::lround((x[a] + half_width_) / h_);
    idx[a] = static_cast<int>(std::clamp(i, 0L, static_cast<long>(points_ - 1)));
  }
  return idx;
}

Grid Grid::coarsened(int stride) const {
  if (stride < 1) throw InvalidArgument("coarsening stride must be >= 1");
  if (stride == 1) return *this;
  if ((points_ - 1) % (2 * stride) != 0)
    throw InvalidArgument("grid cannot be coarsened by " + std::to_string(stride) + " around its centre");
  Grid g = with_spacing(dimension_, half_width_, h_ * stride);
  return g;
}

std::string Grid::describe() const {
  std::ostringstream os;
  os << dimension_ << "-D grid, L=" << half_width_ << ", h=" << h_ << ", " << points_ << " points/axis";
  return os.str();
}

}  // namespace mosharp
