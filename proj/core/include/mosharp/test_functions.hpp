#pragma once

#include <string>
#include <vector>

#include "mosharp/field.hpp"
#include "mosharp/jet.hpp"

namespace mosharp {

/// Builtin compactly supported test functions with analytic derivatives.
///
/// The plateau cutoff chi_{a,b} equals 1 for |x| <= a, 0 for |x| >= b and is
/// C-infinity in between (exp(-1/u) transition in u = (|x|^2 - a^2)/(b^2 - a^2)).
class TestFunction {
 public:
  enum class Id {
    Zero,
    Bump,              ///< exp(-1/(1 - |x|^2/R^2)), R = radius
    AffinePlateau,     ///< (offset + slope . x) chi_{inner, radius}
    QuadraticPlateau,  ///< (sum_i curvature_i x_i^2) chi_{inner, radius}
    GaussianPlateau,   ///< exp(-|x|^2 / (2 sigma^2)) chi_{inner, radius}
    SinePlateau,       ///< sin(frequency x_0) chi_{inner, radius}
    PolynomialBump,    ///< (c0 + c1 x_0 + c2 x_0^2) bump_R
    TentBump,          ///< max(0, 1 - |x|/tent_width) bump_R; Lipschitz, not C^2
  };

  struct Params {
    double amplitude = 1.0;
    double radius = 1.0;
    double inner = 0.5;
    Point slope{1.0, 0.0, 0.0};
    double offset = 0.0;
    Point curvature{1.0, 0.0, 0.0};
    double sigma = 0.3;
    double frequency = 1.0;
    std::array<double, 3> poly{1.0, 0.5, 0.25};
    double tent_width = 0.5;
  };

  TestFunction(Id id, Params params, int dimension);
  static TestFunction from_name(const std::string& name, Params params, int dimension);
  static std::vector<std::string> names();

  Jet jet(const Point& x) const;
  double value(const Point& x) const { return jet(x).v; }
  Point gradient(const Point& x) const { return jet(x).g; }
  double gradient_norm(const Point& x) const;
  /// Frobenius norm of the Hessian, an upper bound of its operator norm.
  double hessian_norm(const Point& x) const;

  /// f vanishes for |x| >= support_radius().
  double support_radius() const;
  /// Radius of the ball on which the cutoff factor is identically one (0 for bump types).
  double plateau_radius() const;
  bool is_c2() const { return id_ != Id::TentBump; }

  Id id() const { return id_; }
  const Params& params() const { return params_; }
  int dimension() const { return dimension_; }
  std::string name() const;

 private:
  Id id_;
  Params params_;
  int dimension_;
};

/// Samples f on the grid. Throws PreconditionError when the support does not
/// leave a zero band of at least two cells.
SampledField build_field(const Grid& grid, const TestFunction& f);

/// Analytic gradient sampled on the grid (the oracle for sweep targets).
VectorField analytic_gradient(const Grid& grid, const TestFunction& f);

}  // namespace mosharp
