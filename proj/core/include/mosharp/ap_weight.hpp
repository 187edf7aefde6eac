#pragma once

#include <vector>

#include "mosharp/exponent.hpp"

namespace mosharp {

struct BallSample {
  Point centre{};
  double radius = 0.0;
};

struct ApOptions {
  /// Lattice cells across the smallest sampled radius; one lattice serves all balls.
  int cells_per_min_radius = 64;
  std::size_t max_cells_per_ball = std::size_t{1} << 26;
};

struct ApReport {
  double constant = 0.0;
  BallSample worst{};
  std::size_t balls = 0;
  std::size_t skipped_cells = 0;
  double lattice_spacing = 0.0;
};

/// Sampled A_p characteristic: max over balls of
///   (mean omega) (mean omega^{-1/(p-1)})^{p-1}          for p > 1,
///   (mean omega) / min omega                          for p = 1.
/// Means are midpoint sums over lattice cells whose centres lie in the open
/// ball; cells containing a singular point of omega are skipped. A lower bound
/// on [omega]_{A_p}. Throws PreconditionError if a ball has no usable cell.
ApReport ap_constant(const Weight& omega, double p, const std::vector<BallSample>& balls, int dimension,
                     const ApOptions& options = {});

/// Balls centred at each centre with radii r_min 2^k up to r_max.
std::vector<BallSample> ball_ladder(const std::vector<Point>& centres, double r_min, double r_max);

}  // namespace mosharp
