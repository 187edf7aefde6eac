#include "mosharp/ap_weight.hpp"

#include <algorithm>
#include <cmath>

#include "mosharp/errors.hpp"
#include "mosharp/grid.hpp"
#include "mosharp/parallel.hpp"

namespace mosharp {

ApReport ap_constant(const Weight& omega, double p, const std::vector<BallSample>& balls, int dimension,
                     const ApOptions& options) {
  if (!(p >= 1.0)) throw InvalidArgument("A_p constant needs p >= 1");
  if (!is_supported_dimension(dimension)) throw InvalidArgument("unsupported dimension");
  if (balls.empty()) throw InvalidArgument("A_p constant needs at least one ball");
  double r_min = kInfinity;
  for (const auto& b : balls) {
    if (!(b.radius > 0.0)) throw InvalidArgument("ball radii must be positive");
    r_min = std::min(r_min, b.radius);
  }
  const double dx = r_min / options.cells_per_min_radius;
  const auto& singular = omega.singular_points();

  ApReport report;
  report.lattice_spacing = dx;
  report.balls = balls.size();
  for (const auto& ball : balls) {
    Index lo{0, 0, 0}, hi{0, 0, 0};
    std::size_t total = 1;
    for (int a = 0; a < dimension; ++a) {
      lo[a] = static_cast<int>(std::floor((ball.centre[a] - ball.radius) / dx));
      hi[a] = static_cast<int>(std::ceil((ball.centre[a] + ball.radius) / dx));
      total *= static_cast<std::size_t>(hi[a] - lo[a] + 1);
    }
    if (total > options.max_cells_per_ball) throw InvalidArgument("A_p ball needs too many lattice cells");
    std::vector<double> w_vals, dual_vals;
    double w_min = kInfinity;
    std::size_t skipped = 0;
    for (std::size_t k = 0; k < total; ++k) {
      std::size_t rem = k;
      Point c{};
      Point cell_lo{};
      for (int a = dimension - 1; a >= 0; --a) {
        const std::size_t span = static_cast<std::size_t>(hi[a] - lo[a] + 1);
        const int i = lo[a] + static_cast<int>(rem % span);
        rem /= span;
        cell_lo[a] = i * dx;
        c[a] = (i + 0.5) * dx;
      }
      if (!(distance(c, ball.centre) < ball.radius)) continue;
      bool skip = false;
      for (const auto& s : singular) {
        bool inside = true;
        for (int a = 0; a < dimension; ++a) inside = inside && s[a] >= cell_lo[a] && s[a] <= cell_lo[a] + dx;
        skip = skip || inside;
      }
      if (skip) {
        ++skipped;
        continue;
      }
      const double w = omega(c);
      w_vals.push_back(w);
      w_min = std::min(w_min, w);
      if (p > 1.0) dual_vals.push_back(std::pow(w, -1.0 / (p - 1.0)));
    }
    report.skipped_cells += skipped;
    if (w_vals.empty()) throw PreconditionError("A_p ball contains no usable lattice cell");
    const double mean_w = pairwise_sum(w_vals) / static_cast<double>(w_vals.size());
    double value;
    if (p > 1.0) {
      const double mean_dual = pairwise_sum(dual_vals) / static_cast<double>(dual_vals.size());
      value = mean_w * std::pow(mean_dual, p - 1.0);
    } else {
      value = mean_w / w_min;
    }
    if (value > report.constant || std::isnan(value)) {
      report.constant = std::isnan(value) ? kInfinity : value;
      report.worst = ball;
    }
  }
  return report;
}

std::vector<BallSample> ball_ladder(const std::vector<Point>& centres, double r_min, double r_max) {
  if (!(r_min > 0.0 && r_max >= r_min)) throw InvalidArgument("ball ladder needs 0 < r_min <= r_max");
  std::vector<BallSample> out;
  for (const auto& c : centres)
    for (double r = r_min; r <= r_max * (1.0 + 1e-12); r *= 2.0) out.push_back({c, r});
  return out;
}

}  // namespace mosharp
