#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mosharp/types.hpp"

namespace mosharp {

/// A variable exponent p : R^n -> [1, inf).
///
/// Builtin shapes:
///  - Constant:   p(x) = base
///  - SmoothStep: p(x) = base + amplitude * S((|x| - r0) / (r1 - r0)), S(u) = 3u^2 - 2u^3 on [0, 1]
///  - LogDecay:   p(x) = base + amplitude / log(e + |x|)          (p_infty = base)
///  - Jump:       p(x) = base + amplitude * x_1 * 1_[r0, r1](x_1)   (not log-Hoelder at x_1 = r1)
class ExponentField {
 public:
  enum class Shape { Constant, SmoothStep, LogDecay, Jump };

  static ExponentField constant(double p);
  static ExponentField smooth_step(double base, double amplitude, double r0 = 0.0, double r1 = 1.0);
  static ExponentField log_decay(double base, double amplitude);
  static ExponentField jump(double base, double amplitude, double lo = 0.0, double hi = 1.0);

  double operator()(const Point& x) const;

  /// Limit of p(x) as |x| -> infinity.
  double p_infinity() const;

  Shape shape() const { return shape_; }
  bool is_constant() const { return shape_ == Shape::Constant; }
  double base() const { return base_; }
  double amplitude() const { return amplitude_; }
  double r0() const { return r0_; }
  double r1() const { return r1_; }

  std::string describe() const;

 private:
  ExponentField(Shape shape, double base, double amplitude, double r0, double r1);

  Shape shape_;
  double base_;
  double amplitude_;
  double r0_;
  double r1_;
};

/// Sample-essential bounds of an exponent over a box (max/min over lattice samples).
struct ExponentBounds {
  double p_minus = 0.0;
  double p_plus = 0.0;
  double p_infinity = 0.0;
};

ExponentBounds sample_exponent_bounds(const ExponentField& p, int dimension, double half_width,
                                      int points_per_axis = 65);

/// A nonnegative weight omega : R^n -> [0, inf].
///
/// Singular points (where omega is 0 or infinite) are stored explicitly; cell
/// quadratures skip cells containing them.
class Weight {
 public:
  enum class Shape { Constant, PowerOfNorm };

  static Weight constant(double c);
  /// omega(x) = |x|^alpha. The origin is flagged as singular when alpha != 0.
  static Weight power_of_norm(double alpha);

  /// Returns +inf at a singular point where omega blows up and 0 where it vanishes.
  double operator()(const Point& x) const;

  const std::vector<Point>& singular_points() const { return singular_; }
  bool is_singular(const Point& x) const;

  Shape shape() const { return shape_; }
  double parameter() const { return parameter_; }

  /// Exponent of the A_p class this weight is meant to exercise, when known.
  std::optional<double> target_p;

  std::string describe() const;

 private:
  Weight(Shape shape, double parameter);

  Shape shape_;
  double parameter_;
  std::vector<Point> singular_;
};

}  // namespace mosharp
