#include "mosharp/mollifier.hpp"

#include <cmath>

#include "mosharp/errors.hpp"
#include "mosharp/parallel.hpp"

namespace mosharp {

Mollifier::Mollifier(const Grid& grid, double delta) : delta_(delta), stencil_(grid, delta) {
  if (!(delta > 0.0)) throw InvalidArgument("mollifier radius must be positive");
  const double h = grid.spacing();
  const int n = grid.dimension();
  std::vector<double> raw;
  raw.reserve(stencil_.count());
  for (const auto& k : stencil_.offsets()) {
    double s = 0.0;
    for (int a = 0; a < n; ++a) s += (k[a] * h / delta) * (k[a] * h / delta);
    raw.push_back(s < 1.0 ? std::exp(-1.0 / (1.0 - s)) : 0.0);
  }
  const double total = pairwise_sum(raw);
  // sum_k C1 delta^{-n} G(k h/delta) h^n = 1.
  c1_ = std::pow(delta / h, n) / total;
  weights_.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) weights_[i] = raw[i] / total;
}

double mollify_at(const SampledField& u, const Mollifier& g, const Index& centre) {
  const Grid& grid = u.grid();
  if (!g.stencil().fits(centre)) throw PreconditionError("stencil overflow in mollification");
  const auto& offs = g.stencil().offsets();
  const auto& w = g.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < offs.size(); ++i) {
    Index idx = centre;
    for (int a = 0; a < grid.dimension(); ++a) idx[a] -= offs[i][a];
    s += w[i] * u.at(idx);
  }
  return s;
}

SampledField mollify(const SampledField& f, const Mollifier& g) {
  const Grid& grid = f.grid();
  if (f.is_zero()) return SampledField(grid);
  f.require_margin_cells(2 * g.stencil().reach(), "mollify");
  const int n = grid.dimension();
  std::vector<std::ptrdiff_t> flat;
  for (const auto& k : g.stencil().offsets()) {
    std::ptrdiff_t o = 0;
    for (int a = 0; a < n; ++a) o -= k[a] * grid.stride(a);
    flat.push_back(o);
  }
  const int reach = g.stencil().reach();
  Index lo{0, 0, 0}, ext{1, 1, 1};
  for (int a = 0; a < n; ++a) {
    lo[a] = f.nonzero_lo()[a] - reach;
    ext[a] = f.nonzero_hi()[a] + reach - lo[a] + 1;
  }
  const std::size_t active = static_cast<std::size_t>(ext[0]) * ext[1] * ext[2];
  const auto& w = g.weights();
  const double* v = f.values().data();
  std::vector<double> out(grid.size(), 0.0);
  parallel_for(active, [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      std::size_t rem = k;
      Index idx{0, 0, 0};
      for (int a = 2; a >= 0; --a) {
        idx[a] = lo[a] + static_cast<int>(rem % static_cast<std::size_t>(ext[a]));
        rem /= static_cast<std::size_t>(ext[a]);
      }
      const std::size_t c = grid.flat(idx);
      double s = 0.0;
      for (std::size_t i = 0; i < flat.size(); ++i) s += w[i] * v[static_cast<std::ptrdiff_t>(c) + flat[i]];
      out[c] = s;
    }
  });
  return SampledField(grid, std::move(out));
}

}  // namespace mosharp
