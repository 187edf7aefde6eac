#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mosharp/exponent.hpp"
#include "mosharp/types.hpp"

namespace mosharp {

/// Scalar Orlicz shapes phi(t) that do not depend on the space variable.
enum class OrliczShape {
  Power,        ///< t^p
  LogPower,     ///< t^p (|log t| + 1)
  Exponential,  ///< e^t - 1
  Sqrt,         ///< sqrt(t); not an Orlicz function, kept for checker tests
  Linear,       ///< t; not an Orlicz function, kept for checker tests
};

struct VariableExponentFamily {
  ExponentField p;
};

struct OrliczFamily {
  OrliczShape shape = OrliczShape::Power;
  double p = 2.0;
};

struct WeightedPowerFamily {
  Weight omega;
  double p;
};

struct DoublePhaseFamily {
  double p;
  double q;
  Weight omega;
};

/// Piecewise linear in t between samples, piecewise constant in x (nearest x node).
/// Beyond the last sample the final segment is extended linearly.
struct TabulatedFamily {
  std::vector<Point> x_nodes;
  std::vector<std::vector<double>> t;       ///< per x node, strictly increasing, positive
  std::vector<std::vector<double>> values;  ///< per x node, same length as t
};

/// Closed-form complementary function of omega(x) t^{p(x)}:
///   (1/q) (p omega)^{-q/p} s^q,  1/p + 1/q = 1.
struct PowerConjugateFamily {
  ExponentField p;
  std::optional<Weight> omega;
};

/// The same function with x frozen. Power-type families collapse to
/// c1 t^e1 + c2 t^e2, which keeps inner loops free of dispatch.
struct BoundPhi {
  double c1 = 0.0, e1 = 1.0;
  double c2 = 0.0, e2 = 1.0;
  bool singular = false;  ///< weight is infinite at x: value is +inf for t > 0
  const class MusielakOrliczFunction* generic = nullptr;
  Point x{};

  double operator()(double t) const;
};

/// A Musielak-Orlicz function Phi(x, t), Orlicz in t for every x.
class MusielakOrliczFunction {
 public:
  enum class Family { VariableExponent, Orlicz, WeightedPower, DoublePhase, Tabulated, PowerConjugate };

  static MusielakOrliczFunction variable_exponent(ExponentField p, int dimension = 1);
  static MusielakOrliczFunction power(double p, int dimension = 1);
  static MusielakOrliczFunction orlicz(OrliczShape shape, double p = 2.0, int dimension = 1);
  static MusielakOrliczFunction weighted_power(Weight omega, double p, int dimension = 1);
  static MusielakOrliczFunction double_phase(double p, double q, Weight omega, int dimension = 1);
  static MusielakOrliczFunction tabulated(TabulatedFamily table, int dimension = 1);
  static MusielakOrliczFunction power_conjugate(ExponentField p, std::optional<Weight> omega,
                                                int dimension = 1);

  /// Phi(x, t). Throws DomainError for t < 0 or x outside the configured box.
  /// Returns +inf where a weight singularity is hit exactly.
  double operator()(const Point& x, double t) const;

  BoundPhi bind(const Point& x) const;

  Family family() const;
  int dimension() const { return dimension_; }

  /// Restricts evaluation to the cube [-L, L]^n. Unbounded by default.
  MusielakOrliczFunction& set_domain_half_width(double half_width);
  double domain_half_width() const { return half_width_; }

  /// Weight singular points, empty when the family has no weight.
  std::vector<Point> singular_points() const;

  /// True when x enters the function (false for pure Orlicz shapes).
  bool depends_on_x() const;

  /// The closed-form complementary function, when one is known.
  std::optional<MusielakOrliczFunction> closed_form_conjugate() const;

  std::string describe() const;

  using Variant = std::variant<VariableExponentFamily, OrliczFamily, WeightedPowerFamily,
                               DoublePhaseFamily, TabulatedFamily, PowerConjugateFamily>;
  const Variant& data() const { return *data_; }

 private:
  MusielakOrliczFunction(Variant data, int dimension);
  double eval_unchecked(const Point& x, double t) const;

  friend struct BoundPhi;

  std::shared_ptr<const Variant> data_;
  int dimension_ = 1;
  double half_width_ = kInfinity;
};

/// Reads (x_index, t, value) triples. Header row optional.
TabulatedFamily read_tabulated_csv(const std::string& path, std::vector<Point> x_nodes);

}  // namespace mosharp
