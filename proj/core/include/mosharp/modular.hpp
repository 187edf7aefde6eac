#pragma once

#include <functional>
#include <vector>

#include "mosharp/field.hpp"
#include "mosharp/phi.hpp"

namespace mosharp {

struct ModularOptions {
  /// Grid points that coincide with a flagged weight singularity are left out
  /// of the sum (a measure-zero set). When false, +inf propagates.
  bool skip_singular = true;
};

/// rho_Phi(f) = sum_x Phi(x, |f(x)|) h^n.
double modular(const MusielakOrliczFunction& phi, const SampledField& f, const ModularOptions& options = {});

/// Same sum for an arbitrary nonnegative sample array living on `grid`.
double modular_of_values(const MusielakOrliczFunction& phi, const Grid& grid, const std::vector<double>& values,
                         const ModularOptions& options = {});

struct LuxemburgOptions {
  double rel_tol = 1e-8;
  int max_doublings = 200;
  int max_bisections = 200;
};

/// inf { lambda > 0 : rho(lambda) <= 1 } for a nonincreasing map lambda -> rho(lambda).
/// Returns the upper bracket end, so rho(result) <= 1 is certified. Throws
/// NumericalError when no bracket is found or the sampled map is not monotone.
double invert_modular(const std::function<double(double)>& rho_of_lambda, double lambda0,
                      const LuxemburgOptions& options = {});

/// Luxemburg norm; 0 for the zero field.
double luxemburg_norm(const MusielakOrliczFunction& phi, const SampledField& f, const LuxemburgOptions& options = {});
double luxemburg_norm_of_values(const MusielakOrliczFunction& phi, const Grid& grid, const std::vector<double>& values,
                                const LuxemburgOptions& options = {});

}  // namespace mosharp
