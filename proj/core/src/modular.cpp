#include "mosharp/modular.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "mosharp/errors.hpp"
#include "mosharp/parallel.hpp"

namespace mosharp {

double modular_of_values(const MusielakOrliczFunction& phi, const Grid& grid, const std::vector<double>& values,
                         const ModularOptions& options) {
  if (values.size() != grid.size()) throw InvalidArgument("modular: values do not match the grid");
  if (phi.dimension() != grid.dimension()) throw InvalidArgument("modular: Phi and grid dimensions differ");
  const auto singular = phi.singular_points();
  std::vector<double> terms(values.size(), 0.0);
  parallel_for(values.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const double t = std::fabs(values[k]);
      if (t == 0.0) continue;
      const Point x = grid.point(k);
      if (options.skip_singular) {
        bool hit = false;
        for (const auto& s : singular) hit = hit || distance(s, x) == 0.0;
        if (hit) continue;
      }
      terms[k] = phi.bind(x)(t);
    }
  });
  return pairwise_sum(terms) * grid.cell_measure();
}

double modular(const MusielakOrliczFunction& phi, const SampledField& f, const ModularOptions& options) {
  return modular_of_values(phi, f.grid(), f.values(), options);
}

double invert_modular(const std::function<double(double)>& rho_of_lambda, double lambda0,
                      const LuxemburgOptions& options) {
  if (!(lambda0 > 0.0) || !std::isfinite(lambda0)) lambda0 = 1.0;
  std::map<double, double> seen;
  const auto rho = [&](double lambda) {
    const double v = rho_of_lambda(lambda);
    if (std::isnan(v)) throw NumericalError("modular evaluated to NaN at lambda = " + std::to_string(lambda));
    seen[lambda] = v;
    return v;
  };

  double lo = 0.0, hi = 0.0;
  if (rho(lambda0) <= 1.0) {
    hi = lambda0;
    lo = lambda0;
    int steps = 0;
    while (true) {
      lo *= 0.5;
      if (++steps > options.max_doublings || !(lo > 0.0))
        throw NumericalError("Luxemburg bracket not found: modular stays <= 1 as lambda -> 0");
      if (rho(lo) > 1.0) break;
      hi = lo;
    }
  } else {
    lo = lambda0;
    hi = lambda0;
    int steps = 0;
    while (true) {
      hi *= 2.0;
      if (++steps > options.max_doublings || !std::isfinite(hi))
        throw NumericalError("Luxemburg bracket not found in " + std::to_string(options.max_doublings) +
                             " doublings");
      if (rho(hi) <= 1.0) break;
      lo = hi;
    }
  }
  for (int it = 0; it < options.max_bisections && (hi - lo) > options.rel_tol * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (rho(mid) <= 1.0) hi = mid;
    else lo = mid;
  }
  // Monotone nonincrease on every sampled lambda.
  double prev = kInfinity;
  for (const auto& [lambda, value] : seen) {
    if (value > prev * (1.0 + 1e-12) + 1e-300)
      throw NumericalError("modular is not monotone in lambda near " + std::to_string(lambda) +
                           " (Phi violates the Orlicz axioms?)");
    prev = value;
  }
  return hi;
}

double luxemburg_norm_of_values(const MusielakOrliczFunction& phi, const Grid& grid, const std::vector<double>& values,
                                const LuxemburgOptions& options) {
  if (std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; })) return 0.0;
  std::vector<double> scaled(values.size());
  const auto rho = [&](double lambda) {
    for (std::size_t k = 0; k < values.size(); ++k) scaled[k] = values[k] / lambda;
    return modular_of_values(phi, grid, scaled);
  };
  const double m = modular_of_values(phi, grid, values);
  return invert_modular(rho, std::isfinite(m) && m > 0.0 ? m : 1.0, options);
}

double luxemburg_norm(const MusielakOrliczFunction& phi, const SampledField& f, const LuxemburgOptions& options) {
  return luxemburg_norm_of_values(phi, f.grid(), f.values(), options);
}

}  // namespace mosharp
