#pragma once

#include <vector>

#include "mosharp/stencil.hpp"

namespace mosharp {

/// Discrete standard mollifier G_delta(y) = C1 delta^{-n} exp(-1/(1 - |y/delta|^2)).
/// C1 is fixed numerically so that the stencil weights sum to one on the grid.
class Mollifier {
 public:
  Mollifier(const Grid& grid, double delta);

  double delta() const { return delta_; }
  const BallStencil& stencil() const { return stencil_; }
  /// Quadrature weights G_delta(k h) h^n, in stencil offset order; they sum to 1.
  const std::vector<double>& weights() const { return weights_; }
  double normalization() const { return c1_; }

 private:
  double delta_;
  BallStencil stencil_;
  std::vector<double> weights_;
  double c1_ = 0.0;
};

/// Discrete convolution G_delta * f. Requires a margin of twice the stencil reach.
SampledField mollify(const SampledField& f, const Mollifier& g);

/// (G_delta * u)(x) at one grid point for an arbitrary field u.
double mollify_at(const SampledField& u, const Mollifier& g, const Index& centre);

}  // namespace mosharp
