#include "mosharp/conjugate.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mosharp/errors.hpp"

namespace mosharp {
namespace {

constexpr double kGolden = 0.6180339887498949;

// Golden-section maximisation of g on [lo, hi]; returns the best value seen.
template <class G>
double golden_max(const G& g, double lo, double hi, double best) {
  double a = lo, b = hi;
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double gc = g(c), gd = g(d);
  best = std::max({best, gc, gd});
  for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(1.0, std::fabs(b)); ++it) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - kGolden * (b - a);
      gc = g(c);
      best = std::max(best, gc);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + kGolden * (b - a);
      gd = g(d);
      best = std::max(best, gd);
    }
  }
  return best;
}

double numeric_legendre(const MusielakOrliczFunction& phi, const Point& x, double s,
                        const LegendreGrid& grid) {
  if (!(grid.t_min > 0.0 && grid.t_max > grid.t_min && grid.nodes >= 4))
    throw InvalidArgument("Legendre grid must be positive, increasing, with >= 4 nodes");
  const BoundPhi bound = phi.bind(x);
  const auto g = [&](double t) { return s * t - bound(t); };

  const double log_ratio = std::log(grid.t_max / grid.t_min) / (grid.nodes - 1);
  std::vector<double> ts(static_cast<std::size_t>(grid.nodes));
  for (int i = 0; i < grid.nodes; ++i) ts[i] = grid.t_min * std::exp(log_ratio * i);

  std::vector<double> gs(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) gs[i] = g(ts[i]);
  auto best_it = std::max_element(gs.begin(), gs.end());
  std::size_t i_best = static_cast<std::size_t>(best_it - gs.begin());

  const double step = std::exp(log_ratio);
  const int per_decade = std::max(1, static_cast<int>(std::ceil(std::log(10.0) / log_ratio)));

  // Upper end: keep stepping while the objective still increases.
  if (i_best + 1 == ts.size()) {
    int added = 0;
    double t = ts.back();
    double prev = gs.back();
    while (true) {
      const double tn = t * step;
      const double gn = g(tn);
      if (!std::isfinite(tn) || std::isinf(gn) || std::isnan(gn) ||
          ++added > grid.max_extensions * per_decade)
        throw NumericalError("Legendre supremum unbounded: s*t - Phi(x,t) still increasing at t=" +
                             std::to_string(t) + " (sublinear Phi?)");
      ts.push_back(tn);
      gs.push_back(gn);
      if (gn <= prev) break;
      prev = gn;
      t = tn;
    }
    best_it = std::max_element(gs.begin(), gs.end());
    i_best = static_cast<std::size_t>(best_it - gs.begin());
  }
  // Lower end: the maximiser may sit below t_min for slowly growing Phi.
  if (i_best == 0) {
    std::vector<double> low_t, low_g;
    double t = ts.front();
    double prev = gs.front();
    int added = 0;
    while (++added <= grid.max_extensions * per_decade) {
      const double tn = t / step;
      if (!(tn > 0.0)) break;
      const double gn = g(tn);
      low_t.push_back(tn);
      low_g.push_back(gn);
      if (gn <= prev) break;
      prev = gn;
      t = tn;
    }
    std::reverse(low_t.begin(), low_t.end());
    std::reverse(low_g.begin(), low_g.end());
    ts.insert(ts.begin(), low_t.begin(), low_t.end());
    gs.insert(gs.begin(), low_g.begin(), low_g.end());
    best_it = std::max_element(gs.begin(), gs.end());
    i_best = static_cast<std::size_t>(best_it - gs.begin());
  }

  double best = std::max(0.0, gs[i_best]);
  if (gs[i_best] > 0.0) {
    const double lo = i_best > 0 ? ts[i_best - 1] : 0.0;
    const double hi = i_best + 1 < ts.size() ? ts[i_best + 1] : ts[i_best];
    best = golden_max(g, lo, hi, best);
  }
  return best;
}

}  // namespace

double complementary(const MusielakOrliczFunction& phi, const Point& x, double s, ConjugateMode mode,
                     const LegendreGrid& grid) {
  if (!(s >= 0.0)) throw DomainError("complementary function requires s >= 0");
  if (s == 0.0) return 0.0;
  if (mode == ConjugateMode::ClosedForm) {
    const auto closed = phi.closed_form_conjugate();
    if (!closed) throw InvalidArgument("no closed-form complementary function for " + phi.describe());
    return (*closed)(x, s);
  }
  return numeric_legendre(phi, x, s, grid);
}

ComplementaryFunction::ComplementaryFunction(MusielakOrliczFunction base, ConjugateMode mode,
                                             LegendreGrid grid)
    : base_(std::move(base)), mode_(mode), grid_(grid) {
  if (mode_ == ConjugateMode::ClosedForm) {
    closed_ = base_.closed_form_conjugate();
    if (!closed_) throw InvalidArgument("no closed-form complementary function for " + base_.describe());
  }
}

double ComplementaryFunction::operator()(const Point& x, double s) const {
  if (!(s >= 0.0)) throw DomainError("complementary function requires s >= 0");
  if (s == 0.0) return 0.0;
  if (closed_) return (*closed_)(x, s);
  return numeric_legendre(base_, x, s, grid_);
}

}  // namespace mosharp
