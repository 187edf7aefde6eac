#pragma once

#include <array>
#include <string>
#include <vector>

#include "mosharp/grid.hpp"

namespace mosharp {

/// Scalar samples on a grid, row-major.
///
/// The support margin is measured from the values: it is the distance from the
/// box boundary to the nearest nonzero sample, so the zero band it certifies is
/// always true of the data.
class SampledField {
 public:
  SampledField() = default;
  explicit SampledField(Grid grid);
  SampledField(Grid grid, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }
  double at(const Index& idx) const { return values_[grid_.flat(idx)]; }

  /// Distance to the boundary of the nearest nonzero value (L for the zero field).
  double support_margin() const { return margin_cells_ * grid_.spacing(); }
  /// Same margin counted in whole cells.
  int support_margin_cells() const { return margin_cells_; }

  bool is_zero() const { return nonzero_lo_[0] > nonzero_hi_[0]; }
  /// Inclusive index box containing every nonzero value. Empty when is_zero().
  const Index& nonzero_lo() const { return nonzero_lo_; }
  const Index& nonzero_hi() const { return nonzero_hi_; }

  /// Throws PreconditionError unless the margin holds at least `cells` zero layers.
  void require_margin_cells(int cells, const std::string& operation) const;

  SampledField scaled(double factor) const;
  SampledField plus(const SampledField& other, double other_factor = 1.0) const;

  /// Keeps every `stride`-th sample (see Grid::coarsened).
  SampledField subsampled(int stride) const;

  /// Shifts the values by `cells` along `axis`. Vacated samples become zero;
  /// throws if a nonzero value would leave the grid.
  SampledField shifted(int axis, int cells) const;

 private:
  void measure();

  Grid grid_;
  std::vector<double> values_;
  int margin_cells_ = 0;
  Index nonzero_lo_{1, 1, 1};
  Index nonzero_hi_{0, 0, 0};
};

/// One component array per axis, all on the same grid.
struct VectorField {
  Grid grid;
  std::array<std::vector<double>, 3> components;

  /// Pointwise Euclidean length.
  std::vector<double> magnitude() const;
};

/// Second-order central differences on points at least one cell from the
/// boundary; the outer layer stays zero. Requires a margin of one cell.
VectorField gradient(const SampledField& f);

/// Flat binary format: "MOSF" magic, int32 dimension, int32 points per axis,
/// float64 L, float64 h, then the float64 values (host byte order).
void write_binary(const SampledField& f, const std::string& path);
SampledField read_binary(const std::string& path);

/// Debug CSV: index, x0[, x1[, x2]], value.
void write_csv(const SampledField& f, const std::string& path);

}  // namespace mosharp
