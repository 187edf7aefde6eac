#include "mosharp/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mosharp/errors.hpp"
#include "mosharp/parallel.hpp"

namespace mosharp {
namespace {

void require_resolved(const Grid& grid, double r) {
  if (!(r >= minimum_radius(grid) * (1.0 - 1e-12)))
    throw PreconditionError("under-resolved ball: r = " + std::to_string(r) + " is below 2h = " +
                            std::to_string(minimum_radius(grid)));
}

void require_fit(const BallStencil& s, const Index& centre) {
  if (!s.fits(centre)) throw PreconditionError("stencil overflow: ball of radius " + std::to_string(s.radius()) +
                                               " leaves the grid");
}

}  // namespace

BallStencil::BallStencil(const Grid& grid, double radius)
    : points_(grid.points()), dimension_(grid.dimension()), radius_(radius) {
  if (!(radius > 0.0)) throw InvalidArgument("ball radius must be positive");
  const double q = radius / grid.spacing();
  const double q2 = q * q * (1.0 - 1e-12);
  int reach = static_cast<int>(std::ceil(q));
  while (reach > 0 && static_cast<double>(reach) * reach >= q2) --reach;
  reach_ = reach;
  const int n = dimension_;
  const int rj = n > 1 ? reach : 0;
  const int rk = n > 2 ? reach : 0;
  // Offsets are enumerated with the last (contiguous) axis innermost; the
  // ball is convex, so each line along that axis is a single run.
  for (int i = -reach; i <= reach; ++i) {
    for (int j = -rj; j <= rj; ++j) {
      int first = 0, len = 0;
      for (int k = -rk; k <= rk; ++k) {
        const double k2 = double(i) * i + double(j) * j + double(k) * k;
        if (!(k2 < q2)) continue;
        if (len == 0) first = k;
        ++len;
        offsets_.push_back({i, j, k});
      }
      if (len == 0) continue;
      if (n == 1) continue;
      const Index start{i, n == 2 ? first : j, n == 3 ? first : 0};
      std::ptrdiff_t flat = 0;
      for (int a = 0; a < n; ++a) flat += start[a] * grid.stride(a);
      runs_.push_back({flat, len});
    }
  }
  if (n == 1) runs_ = {{-static_cast<std::ptrdiff_t>(reach), 2 * reach + 1}};
  if (n == 2) {
    // For n = 2 the contiguous axis is j: rebuild one run per i.
    runs_.clear();
    for (int i = -reach; i <= reach; ++i) {
      int first = 1, last = -1;
      for (int j = -reach; j <= reach; ++j)
        if (double(i) * i + double(j) * j < q2) {
          first = std::min(first, j);
          last = std::max(last, j);
        }
      if (last >= first) runs_.push_back({i * grid.stride(0) + first, last - first + 1});
    }
  }
}

bool BallStencil::fits(const Index& centre) const {
  for (int a = 0; a < dimension_; ++a)
    if (centre[a] - reach_ < 0 || centre[a] + reach_ > points_ - 1) return false;
  return true;
}

double BallStencil::sum(const double* values, std::size_t centre) const {
  double s = 0.0;
  for (const auto& run : runs_) {
    const double* p = values + static_cast<std::ptrdiff_t>(centre) + run.start;
    for (int m = 0; m < run.length; ++m) s += p[m];
  }
  return s;
}

double ball_mean(const SampledField& f, const Index& centre, double r) {
  require_resolved(f.grid(), r);
  const BallStencil s(f.grid(), r);
  require_fit(s, centre);
  return s.sum(f.values().data(), f.grid().flat(centre)) / static_cast<double>(s.count());
}

namespace {

// The mean is a true division so that constants reproduce exactly.
double sharp_at(const BallStencil& s, const double* v, std::size_t centre, double count) {
  const double mean = s.sum(v, centre) / count;
  double dev = 0.0;
  for (const auto& run : s.runs()) {
    const double* p = v + static_cast<std::ptrdiff_t>(centre) + run.start;
    for (int m = 0; m < run.length; ++m) dev += std::fabs(p[m] - mean);
  }
  return dev / count;
}

}  // namespace

double sharp_ball_average(const SampledField& f, const Index& centre, double r) {
  require_resolved(f.grid(), r);
  const BallStencil s(f.grid(), r);
  require_fit(s, centre);
  return sharp_at(s, f.values().data(), f.grid().flat(centre), static_cast<double>(s.count()));
}

SampledField sharp_average_field(const SampledField& f, double r) {
  const Grid& g = f.grid();
  require_resolved(g, r);
  const BallStencil s(g, r);
  if (f.is_zero()) return SampledField(g);
  f.require_margin_cells(2 * s.reach(), "sharp_average_field");

  const int n = g.dimension();
  Index lo{0, 0, 0}, ext{1, 1, 1};
  for (int a = 0; a < n; ++a) {
    lo[a] = f.nonzero_lo()[a] - s.reach();
    ext[a] = f.nonzero_hi()[a] + s.reach() - lo[a] + 1;
  }
  const std::size_t active = static_cast<std::size_t>(ext[0]) * ext[1] * ext[2];
  std::vector<double> out(g.size(), 0.0);
  const double* v = f.values().data();
  const double count = static_cast<double>(s.count());
  parallel_for(active, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      std::size_t rem = k;
      Index idx{0, 0, 0};
      for (int a = 2; a >= 0; --a) {
        idx[a] = lo[a] + static_cast<int>(rem % static_cast<std::size_t>(ext[a]));
        rem /= static_cast<std::size_t>(ext[a]);
      }
      const std::size_t c = g.flat(idx);
      out[c] = sharp_at(s, v, c, count);
    }
  });
  return SampledField(g, std::move(out));
}

std::vector<double> radius_ladder(const Grid& grid, double r_max) {
  std::vector<double> out;
  for (double r = minimum_radius(grid); r <= r_max * (1.0 + 1e-12); r *= 2.0) out.push_back(r);
  return out;
}

SampledField maximal_function(const SampledField& f, const std::vector<double>& radii) {
  if (radii.empty()) throw InvalidArgument("maximal_function needs at least one radius");
  const Grid& g = f.grid();
  std::vector<BallStencil> stencils;
  for (double r : radii) {
    require_resolved(g, r);
    stencils.emplace_back(g, r);
  }
  std::vector<double> absf(f.values());
  for (double& x : absf) x = std::fabs(x);
  std::vector<double> out(g.size(), 0.0);
  parallel_for(g.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const Index idx = g.index(k);
      double best = 0.0;
      for (const auto& s : stencils) {
        if (!s.fits(idx)) continue;
        best = std::max(best, s.sum(absf.data(), k) / static_cast<double>(s.count()));
      }
      out[k] = best;
    }
  });
  return SampledField(g, std::move(out));
}

double uncentered_maximal_1d(const SampledField& f, int index) {
  const Grid& g = f.grid();
  if (g.dimension() != 1) throw InvalidArgument("uncentered maximal function is 1-D only");
  if (index < 0 || index >= g.points()) throw InvalidArgument("index outside the grid");
  std::vector<double> prefix(static_cast<std::size_t>(g.points()) + 1, 0.0);
  for (int i = 0; i < g.points(); ++i) prefix[i + 1] = prefix[i] + std::fabs(f[static_cast<std::size_t>(i)]);
  double best = 0.0;
  for (int a = 0; a <= index; ++a)
    for (int b = index; b < g.points(); ++b)
      best = std::max(best, (prefix[b + 1] - prefix[a]) / static_cast<double>(b - a + 1));
  return best;
}

}  // namespace mosharp

namespace mosharp {

double unit_ball_volume(int dimension) {
  switch (dimension) {
    case 1: return 2.0;
    case 2: return std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi / 3.0;
    default: throw InvalidArgument("unsupported dimension");
  }
}

double measure_consistent_radius(const Grid& grid, double target, double lo, double hi) {
  if (!(lo > 0.0 && hi >= lo)) throw InvalidArgument("consistent radius needs 0 < lo <= hi");
  const double h = grid.spacing();
  const int n = grid.dimension();
  double best = target;
  double best_gap = kInfinity;
  if (n == 1) {
    const long m_lo = static_cast<long>(std::ceil(lo / h - 0.5 - 1e-12));
    const long m_hi = static_cast<long>(std::floor(hi / h - 0.5 + 1e-12));
    for (long m = std::max(0L, m_lo); m <= m_hi; ++m) {
      const double r = (static_cast<double>(m) + 0.5) * h;
      if (std::fabs(r - target) < best_gap) {
        best_gap = std::fabs(r - target);
        best = r;
      }
    }
    return best;
  }
  // Histogram of squared lattice norms |k|^2 up to (hi/h)^2, then cumulative counts.
  const int reach = static_cast<int>(std::ceil(hi / h)) + 1;
  const long qmax = static_cast<long>(reach) * reach;
  std::vector<long> hist(static_cast<std::size_t>(qmax) + 1, 0);
  const int rk = n == 3 ? reach : 0;
  for (int i = -reach; i <= reach; ++i)
    for (int j = -reach; j <= reach; ++j)
      for (int k = -rk; k <= rk; ++k) {
        const long q = long(i) * i + long(j) * j + long(k) * k;
        if (q <= qmax) ++hist[static_cast<std::size_t>(q)];
      }
  long cumulative = 0;
  long prev_q = -1;
  long prev_count = 0;
  const double vol = unit_ball_volume(n);
  // Radii in (sqrt(prev_q), sqrt(q)] h give the open ball with prev_count points.
  for (long q = 0; q <= qmax; ++q) {
    if (hist[static_cast<std::size_t>(q)] == 0) continue;
    if (prev_q >= 0) {
      const double r_eff = h * std::pow(static_cast<double>(prev_count) / vol, 1.0 / n);
      const double r2 = (r_eff / h) * (r_eff / h);
      if (r2 > static_cast<double>(prev_q) && r2 <= static_cast<double>(q) && r_eff >= lo && r_eff <= hi &&
          std::fabs(r_eff - target) < best_gap) {
        best_gap = std::fabs(r_eff - target);
        best = r_eff;
      }
    }
    cumulative += hist[static_cast<std::size_t>(q)];
    prev_q = q;
    prev_count = cumulative;
  }
  return best;
}

}  // namespace mosharp
