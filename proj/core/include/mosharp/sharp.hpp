#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mosharp/modular.hpp"
#include "mosharp/psi.hpp"

namespace mosharp {

/// How the psi mass of (0, r_min) enters the sharp modular.
enum class Closure {
  Omit,        ///< contributes nothing; the omitted mass is only reported
  Constant,    ///< inner integrand extended by its value at the first closure node
  Richardson,  ///< I(0+) extrapolated from both closure nodes assuming I(r) = I0 + c / r^2
};

Closure closure_from_name(const std::string& name);
std::string closure_name(Closure c);

/// M# samples of one field at one radius, kept only where they are nonzero.
struct SharpSamples {
  double radius = 0.0;
  int stride = 1;
  Grid lattice;                    ///< grid actually used (coarsened by stride)
  std::vector<std::uint32_t> index;  ///< flat indices on `lattice`
  std::vector<double> value;       ///< M#_{B(x, radius)}(f) at those indices
};

/// M# fields of f for every node of an r-quadrature. Built once, then reused
/// for any Phi and any lambda since M#(f / lambda) = M#(f) / lambda.
class SharpCache {
 public:
  SharpCache(const SampledField& f, const RQuadrature& rq);

  const RQuadrature& quadrature() const { return rq_; }
  const std::vector<SharpSamples>& nodes() const { return nodes_; }
  const std::vector<SharpSamples>& closure_nodes() const { return closure_; }

  /// sum_x Phi(x, M#(x) / (lambda r)) (stride h)^n for one cached node.
  static double inner_integral(const MusielakOrliczFunction& phi, const SharpSamples& s, double lambda = 1.0,
                               const ModularOptions& options = {});

 private:
  RQuadrature rq_;
  std::vector<SharpSamples> nodes_;
  std::vector<SharpSamples> closure_;
};

/// M# samples of f at radius r on the lattice coarsened by `stride`.
SharpSamples sharp_samples(const SampledField& f, double r, int stride = 1);

struct SharpModularResult {
  double value = 0.0;
  double truncated_mass = 0.0;
  double node_part = 0.0;          ///< sum_j w_j I(r_j)
  double closure_value = 0.0;      ///< estimate of I(0+) used for the truncated mass
  double closure_uncertainty = 0.0;  ///< truncated_mass times the spread of the closure estimate
  double max_inner = 0.0;          ///< max_j I(r_j) over nodes with positive weight
  std::vector<double> inner;       ///< I(r_j) per node (0 for zero-weight nodes)
};

struct SharpOptions {
  Closure closure = Closure::Omit;
  ModularOptions modular;
};

SharpModularResult sharp_modular(const MusielakOrliczFunction& phi, const SharpCache& cache, double lambda = 1.0,
                                 const SharpOptions& options = {});
SharpModularResult sharp_modular(const MusielakOrliczFunction& phi, const SampledField& f, const RQuadrature& rq,
                                 const SharpOptions& options = {});

double sharp_norm(const MusielakOrliczFunction& phi, const SharpCache& cache, const SharpOptions& options = {},
                  const LuxemburgOptions& lux = {});
double sharp_norm(const MusielakOrliczFunction& phi, const SampledField& f, const RQuadrature& rq,
                  const SharpOptions& options = {}, const LuxemburgOptions& lux = {});

}  // namespace mosharp
