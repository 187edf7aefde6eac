#pragma once

#include "mosharp/phi.hpp"

namespace mosharp {

enum class ConjugateMode { ClosedForm, NumericLegendre };

/// Log-spaced t-grid for the numeric Legendre transform. The grid is extended
/// by whole decades when the maximiser sits at either end, and the best cell is
/// polished by golden-section search, so the result stays a lower bound of the
/// true supremum.
struct LegendreGrid {
  double t_min = 1e-6;
  double t_max = 1e6;
  int nodes = 4096;
  int max_extensions = 64;  ///< decades added per side before giving up
};

/// Phi*(x, s) = sup_{t >= 0} { s t - Phi(x, t) }.
///
/// ClosedForm throws InvalidArgument when no closed form is known for the family.
/// NumericLegendre throws NumericalError when s t - Phi(x, t) keeps increasing
/// past the extended grid (sublinear Phi).
double complementary(const MusielakOrliczFunction& phi, const Point& x, double s, ConjugateMode mode,
                     const LegendreGrid& grid = {});

/// Binds a base function to a conjugation mode.
class ComplementaryFunction {
 public:
  ComplementaryFunction(MusielakOrliczFunction base, ConjugateMode mode, LegendreGrid grid = {});

  double operator()(const Point& x, double s) const;

  const MusielakOrliczFunction& base() const { return base_; }
  ConjugateMode mode() const { return mode_; }

 private:
  MusielakOrliczFunction base_;
  ConjugateMode mode_;
  LegendreGrid grid_;
  std::optional<MusielakOrliczFunction> closed_;
};

}  // namespace mosharp
