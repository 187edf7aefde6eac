#pragma once

#include <vector>

#include "mosharp/field.hpp"

namespace mosharp {

/// Integer offsets k with |k| h < r (grid points in the open ball), stored as
/// contiguous runs along the last axis for fast gathering.
class BallStencil {
 public:
  BallStencil(const Grid& grid, double radius);

  double radius() const { return radius_; }
  /// Largest |offset| along any axis, in cells.
  int reach() const { return reach_; }
  std::size_t count() const { return offsets_.size(); }
  const std::vector<Index>& offsets() const { return offsets_; }

  struct Run {
    std::ptrdiff_t start;
    int length;
  };
  const std::vector<Run>& runs() const { return runs_; }

  /// True when every offset from `centre` stays on the grid.
  bool fits(const Index& centre) const;

  /// Sum over the stencil of values[centre + offset], in a fixed order.
  double sum(const double* values, std::size_t centre) const;

 private:
  int points_ = 0;
  int dimension_ = 1;
  double radius_ = 0.0;
  int reach_ = 0;
  std::vector<Index> offsets_;
  std::vector<Run> runs_;
};

/// Smallest admissible ball radius, two cells.
inline double minimum_radius(const Grid& grid) { return 2.0 * grid.spacing(); }

/// Mean of f over the discrete ball (measure count * h^n).
double ball_mean(const SampledField& f, const Index& centre, double r);

/// Mean of |f - f_B| over the discrete ball.
double sharp_ball_average(const SampledField& f, const Index& centre, double r);

/// M#_{B(x,r)}(f) at every grid point. Requires r >= 2h and a support margin of
/// twice the stencil reach, so that every nonzero output uses a ball that fits.
SampledField sharp_average_field(const SampledField& f, double r);

/// Geometric ladder {2h * 2^k} up to r_max.
std::vector<double> radius_ladder(const Grid& grid, double r_max);

/// Centred maximal function: max over the given radii of ball means of |f|.
/// Radii whose ball does not fit at a point are skipped there; points where
/// no ball fits get 0.
SampledField maximal_function(const SampledField& f, const std::vector<double>& radii);

/// Uncentred 1-D maximal function at one grid index: max over all discrete
/// intervals of points containing it of the mean of |f|. Brute force.
double uncentered_maximal_1d(const SampledField& f, int index);

}  // namespace mosharp

namespace mosharp {

/// Volume of the unit ball in R^n.
double unit_ball_volume(int dimension);

/// A radius r whose open discrete ball has measure count * h^n = |B(0, r)|,
/// chosen nearest to `target` among such radii in [lo, hi]. In 1-D these are
/// the half-integer radii (m + 1/2) h. Returns `target` when none exists.
double measure_consistent_radius(const Grid& grid, double target, double lo, double hi);

}  // namespace mosharp
