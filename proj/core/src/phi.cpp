#include "mosharp/phi.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "mosharp/errors.hpp"

namespace mosharp {
namespace {

inline double power_of(double t, double e) {
  if (e == 2.0) return t * t;
  if (e == 3.0) return t * t * t;
  if (e == 1.0) return t;
  return std::pow(t, e);
}

double orlicz_value(const OrliczFamily& f, double t) {
  switch (f.shape) {
    case OrliczShape::Power:
      return power_of(t, f.p);
    case OrliczShape::LogPower:
      return t == 0.0 ? 0.0 : power_of(t, f.p) * (std::fabs(std::log(t)) + 1.0);
    case OrliczShape::Exponential:
      return std::expm1(t);
    case OrliczShape::Sqrt:
      return std::sqrt(t);
    case OrliczShape::Linear:
      return t;
  }
  return 0.0;
}

double tabulated_value(const TabulatedFamily& tab, const Point& x, double t) {
  std::size_t best = 0;
  double best_d = kInfinity;
  for (std::size_t i = 0; i < tab.x_nodes.size(); ++i) {
    const double d = distance(tab.x_nodes[i], x);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  const auto& ts = tab.t[best];
  const auto& vs = tab.values[best];
  if (t == 0.0) return 0.0;
  if (t <= ts.front()) return vs.front() * (t / ts.front());
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  std::size_t hi = static_cast<std::size_t>(it - ts.begin());
  if (hi >= ts.size()) hi = ts.size() - 1;
  const std::size_t lo = hi - 1;
  const double slope = (vs[hi] - vs[lo]) / (ts[hi] - ts[lo]);
  return vs[lo] + slope * (t - ts[lo]);
}

// (1/q) (p w)^{-q/p} with q = p/(p-1).
double conjugate_coefficient(double p, double w) {
  const double q = p / (p - 1.0);
  if (w == 0.0) return kInfinity;
  if (std::isinf(w)) return 0.0;
  return std::pow(p * w, -q / p) / q;
}

void validate_tabulated(const TabulatedFamily& tab) {
  if (tab.x_nodes.empty()) throw InvalidArgument("tabulated family needs at least one x node");
  if (tab.t.size() != tab.x_nodes.size() || tab.values.size() != tab.x_nodes.size())
    throw InvalidArgument("tabulated family: one t/value series per x node required");
  for (std::size_t i = 0; i < tab.t.size(); ++i) {
    if (tab.t[i].size() < 2 || tab.t[i].size() != tab.values[i].size())
      throw InvalidArgument("tabulated family: each series needs >= 2 matching samples");
    for (std::size_t k = 0; k < tab.t[i].size(); ++k) {
      if (!(tab.t[i][k] > 0.0) || (k > 0 && !(tab.t[i][k] > tab.t[i][k - 1])))
        throw InvalidArgument("tabulated family: t samples must be positive and increasing");
      if (!(tab.values[i][k] >= 0.0)) throw InvalidArgument("tabulated family: negative value");
    }
  }
}

}  // namespace

double BoundPhi::operator()(double t) const {
  if (generic != nullptr) return generic->eval_unchecked(x, t);
  if (t == 0.0) return 0.0;
  if (singular) return kInfinity;
  double v = c1 * power_of(t, e1);
  if (c2 != 0.0) v += c2 * power_of(t, e2);
  return v;
}

MusielakOrliczFunction::MusielakOrliczFunction(Variant data, int dimension)
    : data_(std::make_shared<const Variant>(std::move(data))), dimension_(dimension) {
  if (!is_supported_dimension(dimension)) throw InvalidArgument("unsupported dimension");
}

MusielakOrliczFunction MusielakOrliczFunction::variable_exponent(ExponentField p, int dimension) {
  return MusielakOrliczFunction(VariableExponentFamily{std::move(p)}, dimension);
}

MusielakOrliczFunction MusielakOrliczFunction::power(double p, int dimension) {
  return orlicz(OrliczShape::Power, p, dimension);
}

MusielakOrliczFunction MusielakOrliczFunction::orlicz(OrliczShape shape, double p, int dimension) {
  if ((shape == OrliczShape::Power || shape == OrliczShape::LogPower) && !(p > 0.0))
    throw InvalidArgument("Orlicz exponent must be positive");
  return MusielakOrliczFunction(OrliczFamily{shape, p}, dimension);
}

MusielakOrliczFunction MusielakOrliczFunction::weighted_power(Weight omega, double p, int dimension) {
  if (!(p >= 1.0)) throw InvalidArgument("weighted power exponent must be >= 1");
  return MusielakOrliczFunction(WeightedPowerFamily{std::move(omega), p}, dimension);
}

MusielakOrliczFunction MusielakOrliczFunction::double_phase(double p, double q, Weight omega,
                                                            int dimension) {
  if (!(p > 1.0 && q > p)) throw InvalidArgument("double phase needs 1 < p < q");
  return MusielakOrliczFunction(DoublePhaseFamily{p, q, std::move(omega)}, dimension);
}

MusielakOrliczFunction MusielakOrliczFunction::tabulated(TabulatedFamily table, int dimension) {
  validate_tabulated(table);
  return MusielakOrliczFunction(std::move(table), dimension);
}

MusielakOrliczFunction MusielakOrliczFunction::power_conjugate(ExponentField p,
                                                               std::optional<Weight> omega,
                                                               int dimension) {
  return MusielakOrliczFunction(PowerConjugateFamily{std::move(p), std::move(omega)}, dimension);
}

MusielakOrliczFunction& MusielakOrliczFunction::set_domain_half_width(double half_width) {
  if (!(half_width > 0.0)) throw InvalidArgument("domain half width must be positive");
  half_width_ = half_width;
  return *this;
}

MusielakOrliczFunction::Family MusielakOrliczFunction::family() const {
  return static_cast<Family>(data_->index());
}

double MusielakOrliczFunction::operator()(const Point& x, double t) const {
  if (!(t >= 0.0)) throw DomainError("Phi(x, t) requires t >= 0");
  if (std::isfinite(half_width_)) {
    for (int i = 0; i < dimension_; ++i)
      if (std::fabs(x[i]) > half_width_ * (1.0 + 1e-12))
        throw DomainError("Phi(x, t): x outside the configured domain box");
  }
  return eval_unchecked(x, t);
}

double MusielakOrliczFunction::eval_unchecked(const Point& x, double t) const {
  return std::visit(
      [&](const auto& f) -> double {
        using F = std::decay_t<decltype(f)>;
        if (t == 0.0) return 0.0;
        if constexpr (std::is_same_v<F, VariableExponentFamily>) {
          return power_of(t, f.p(x));
        } else if constexpr (std::is_same_v<F, OrliczFamily>) {
          return orlicz_value(f, t);
        } else if constexpr (std::is_same_v<F, WeightedPowerFamily>) {
          const double w = f.omega(x);
          return std::isinf(w) ? kInfinity : w * power_of(t, f.p);
        } else if constexpr (std::is_same_v<F, DoublePhaseFamily>) {
          const double w = f.omega(x);
          if (std::isinf(w)) return kInfinity;
          return power_of(t, f.p) + w * power_of(t, f.q);
        } else if constexpr (std::is_same_v<F, TabulatedFamily>) {
          return tabulated_value(f, x, t);
        } else {
          const double p = f.p(x);
          const double w = f.omega ? (*f.omega)(x) : 1.0;
          const double c = conjugate_coefficient(p, w);
          return std::isinf(c) ? kInfinity : c * power_of(t, p / (p - 1.0));
        }
      },
      *data_);
}

BoundPhi MusielakOrliczFunction::bind(const Point& x) const {
  BoundPhi b;
  b.x = x;
  std::visit(
      [&](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, VariableExponentFamily>) {
          b.c1 = 1.0;
          b.e1 = f.p(x);
        } else if constexpr (std::is_same_v<F, OrliczFamily>) {
          if (f.shape == OrliczShape::Power) {
            b.c1 = 1.0;
            b.e1 = f.p;
          } else {
            b.generic = this;
          }
        } else if constexpr (std::is_same_v<F, WeightedPowerFamily>) {
          const double w = f.omega(x);
          b.singular = std::isinf(w);
          b.c1 = b.singular ? 0.0 : w;
          b.e1 = f.p;
        } else if constexpr (std::is_same_v<F, DoublePhaseFamily>) {
          const double w = f.omega(x);
          b.singular = std::isinf(w);
          b.c1 = 1.0;
          b.e1 = f.p;
          b.c2 = b.singular ? 0.0 : w;
          b.e2 = f.q;
        } else if constexpr (std::is_same_v<F, TabulatedFamily>) {
          b.generic = this;
        } else {
          const double p = f.p(x);
          const double w = f.omega ? (*f.omega)(x) : 1.0;
          const double c = conjugate_coefficient(p, w);
          b.singular = std::isinf(c);
          b.c1 = b.singular ? 0.0 : c;
          b.e1 = p / (p - 1.0);
        }
      },
      *data_);
  return b;
}

std::vector<Point> MusielakOrliczFunction::singular_points() const {
  return std::visit(
      [](const auto& f) -> std::vector<Point> {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, WeightedPowerFamily> || std::is_same_v<F, DoublePhaseFamily>) {
          return f.omega.singular_points();
        } else if constexpr (std::is_same_v<F, PowerConjugateFamily>) {
          return f.omega ? f.omega->singular_points() : std::vector<Point>{};
        } else {
          return {};
        }
      },
      *data_);
}

bool MusielakOrliczFunction::depends_on_x() const {
  return std::visit(
      [](const auto& f) -> bool {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, OrliczFamily>) {
          return false;
        } else if constexpr (std::is_same_v<F, VariableExponentFamily>) {
          return !f.p.is_constant();
        } else if constexpr (std::is_same_v<F, TabulatedFamily>) {
          return f.x_nodes.size() > 1;
        } else {
          return true;
        }
      },
      *data_);
}

std::optional<MusielakOrliczFunction> MusielakOrliczFunction::closed_form_conjugate() const {
  std::optional<MusielakOrliczFunction> out;
  std::visit(
      [&](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, VariableExponentFamily>) {
          const double box = std::isfinite(half_width_) ? half_width_ : 4.0;
          if (sample_exponent_bounds(f.p, dimension_, box, 33).p_minus > 1.0)
            out = power_conjugate(f.p, std::nullopt, dimension_);
        } else if constexpr (std::is_same_v<F, OrliczFamily>) {
          if (f.shape == OrliczShape::Power && f.p > 1.0)
            out = power_conjugate(ExponentField::constant(f.p), std::nullopt, dimension_);
        } else if constexpr (std::is_same_v<F, WeightedPowerFamily>) {
          if (f.p > 1.0) out = power_conjugate(ExponentField::constant(f.p), f.omega, dimension_);
        }
      },
      *data_);
  if (out && std::isfinite(half_width_)) out->set_domain_half_width(half_width_);
  return out;
}

std::string MusielakOrliczFunction::describe() const {
  std::ostringstream os;
  std::visit(
      [&](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, VariableExponentFamily>) {
          os << "t^p(x), " << f.p.describe();
        } else if constexpr (std::is_same_v<F, OrliczFamily>) {
          switch (f.shape) {
            case OrliczShape::Power: os << "t^" << f.p; break;
            case OrliczShape::LogPower: os << "t^" << f.p << "(|log t|+1)"; break;
            case OrliczShape::Exponential: os << "e^t-1"; break;
            case OrliczShape::Sqrt: os << "sqrt(t)"; break;
            case OrliczShape::Linear: os << "t"; break;
          }
        } else if constexpr (std::is_same_v<F, WeightedPowerFamily>) {
          os << f.omega.describe() << "*t^" << f.p;
        } else if constexpr (std::is_same_v<F, DoublePhaseFamily>) {
          os << "t^" << f.p << "+" << f.omega.describe() << "*t^" << f.q;
        } else if constexpr (std::is_same_v<F, TabulatedFamily>) {
          os << "tabulated(" << f.x_nodes.size() << " x nodes)";
        } else {
          os << "conjugate of " << (f.omega ? f.omega->describe() + "*" : std::string()) << "t^("
             << f.p.describe() << ")";
        }
      },
      *data_);
  return os.str();
}

TabulatedFamily read_tabulated_csv(const std::string& path, std::vector<Point> x_nodes) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open tabulated CSV: " + path);
  std::map<long, std::vector<std::pair<double, double>>> series;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    long idx = 0;
    double t = 0.0, v = 0.0;
    if (!(row >> idx >> t >> v)) {
      if (line_no == 1) continue;  // header
      throw ConfigError("tabulated CSV: malformed row " + std::to_string(line_no));
    }
    series[idx].emplace_back(t, v);
  }
  if (x_nodes.empty()) x_nodes.push_back(Point{0.0, 0.0, 0.0});
  TabulatedFamily tab;
  tab.x_nodes = std::move(x_nodes);
  for (std::size_t i = 0; i < tab.x_nodes.size(); ++i) {
    auto it = series.find(static_cast<long>(i));
    if (it == series.end())
      throw ConfigError("tabulated CSV: no samples for x index " + std::to_string(i));
    auto rows = it->second;
    std::sort(rows.begin(), rows.end());
    std::vector<double> ts, vs;
    for (const auto& [t, v] : rows) {
      ts.push_back(t);
      vs.push_back(v);
    }
    tab.t.push_back(std::move(ts));
    tab.values.push_back(std::move(vs));
  }
  if (series.size() != tab.x_nodes.size())
    throw ConfigError("tabulated CSV: x indices do not match the configured x nodes");
  return tab;
}

}  // namespace mosharp
