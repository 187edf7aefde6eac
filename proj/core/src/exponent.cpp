#include "mosharp/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mosharp/errors.hpp"

namespace mosharp {
namespace {

double smoothstep(double u) {
  u = std::clamp(u, 0.0, 1.0);
  return u * u * (3.0 - 2.0 * u);
}

}  // namespace

ExponentField::ExponentField(Shape shape, double base, double amplitude, double r0, double r1)
    : shape_(shape), base_(base), amplitude_(amplitude), r0_(r0), r1_(r1) {}

ExponentField ExponentField::constant(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidArgument("exponent must lie in [1, inf)");
  return ExponentField(Shape::Constant, p, 0.0, 0.0, 0.0);
}

ExponentField ExponentField::smooth_step(double base, double amplitude, double r0, double r1) {
  if (!(r1 > r0)) throw InvalidArgument("smooth_step exponent needs r1 > r0");
  if (base < 1.0 || base + amplitude < 1.0) throw InvalidArgument("exponent must stay >= 1");
  return ExponentField(Shape::SmoothStep, base, amplitude, r0, r1);
}

ExponentField ExponentField::log_decay(double base, double amplitude) {
  if (base < 1.0 || base + std::min(0.0, amplitude) < 1.0)
    throw InvalidArgument("exponent must stay >= 1");
  return ExponentField(Shape::LogDecay, base, amplitude, 0.0, 0.0);
}

ExponentField ExponentField::jump(double base, double amplitude, double lo, double hi) {
  if (!(hi > lo)) throw InvalidArgument("jump exponent needs hi > lo");
  const double lowest = base + std::min({0.0, amplitude * lo, amplitude * hi});
  if (base < 1.0 || lowest < 1.0) throw InvalidArgument("exponent must stay >= 1");
  return ExponentField(Shape::Jump, base, amplitude, lo, hi);
}

double ExponentField::operator()(const Point& x) const {
  switch (shape_) {
    case Shape::Constant:
      return base_;
    case Shape::SmoothStep:
      return base_ + amplitude_ * smoothstep((euclidean_norm(x) - r0_) / (r1_ - r0_));
    case Shape::LogDecay:
      return base_ + amplitude_ / std::log(std::numbers::e + euclidean_norm(x));
    case Shape::Jump:
      return (x[0] >= r0_ && x[0] <= r1_) ? base_ + amplitude_ * x[0] : base_;
  }
  return base_;
}

double ExponentField::p_infinity() const {
  switch (shape_) {
    case Shape::SmoothStep:
      return base_ + amplitude_;
    case Shape::Constant:
    case Shape::LogDecay:
    case Shape::Jump:
      return base_;
  }
  return base_;
}

std::string ExponentField::describe() const {
  std::ostringstream os;
  switch (shape_) {
    case Shape::Constant:
      os << "p=" << base_;
      break;
    case Shape::SmoothStep:
      os << "p=" << base_ << "+" << amplitude_ << "*smoothstep(|x|;" << r0_ << "," << r1_ << ")";
      break;
    case Shape::LogDecay:
      os << "p=" << base_ << "+" << amplitude_ << "/log(e+|x|)";
      break;
    case Shape::Jump:
      os << "p=" << base_ << "+" << amplitude_ << "*x1*1[" << r0_ << "," << r1_ << "]";
      break;
  }
  return os.str();
}

ExponentBounds sample_exponent_bounds(const ExponentField& p, int dimension, double half_width,
                                      int points_per_axis) {
  if (!is_supported_dimension(dimension)) throw InvalidArgument("unsupported dimension");
  if (points_per_axis < 2) throw InvalidArgument("need at least two samples per axis");
  ExponentBounds b;
  b.p_minus = kInfinity;
  b.p_plus = -kInfinity;
  b.p_infinity = p.p_infinity();
  const double step = 2.0 * half_width / (points_per_axis - 1);
  const int ny = dimension >= 2 ? points_per_axis : 1;
  const int nz = dimension >= 3 ? points_per_axis : 1;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < points_per_axis; ++i) {
        Point x{-half_width + i * step, dimension >= 2 ? -half_width + j * step : 0.0,
                dimension >= 3 ? -half_width + k * step : 0.0};
        const double v = p(x);
        b.p_minus = std::min(b.p_minus, v);
        b.p_plus = std::max(b.p_plus, v);
      }
  return b;
}

Weight::Weight(Shape shape, double parameter) : shape_(shape), parameter_(parameter) {
  if (shape_ == Shape::PowerOfNorm && parameter_ != 0.0) singular_.push_back(Point{0.0, 0.0, 0.0});
}

Weight Weight::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument("constant weight must be positive");
  return Weight(Shape::Constant, c);
}

Weight Weight::power_of_norm(double alpha) {
  if (!std::isfinite(alpha)) throw InvalidArgument("weight exponent must be finite");
  return Weight(Shape::PowerOfNorm, alpha);
}

double Weight::operator()(const Point& x) const {
  if (shape_ == Shape::Constant) return parameter_;
  const double r = euclidean_norm(x);
  if (r == 0.0) {
    if (parameter_ == 0.0) return 1.0;
    return parameter_ < 0.0 ? kInfinity : 0.0;
  }
  if (parameter_ == 1.0) return r;
  if (parameter_ == 0.5) return std::sqrt(r);
  return std::pow(r, parameter_);
}

bool Weight::is_singular(const Point& x) const {
  return std::any_of(singular_.begin(), singular_.end(),
                     [&](const Point& s) { return distance(s, x) == 0.0; });
}

std::string Weight::describe() const {
  std::ostringstream os;
  if (shape_ == Shape::Constant)
    os << parameter_;
  else
    os << "|x|^" << parameter_;
  return os.str();
}

}  // namespace mosharp
