#pragma once

#include <string>
#include <vector>

#include "mosharp/grid.hpp"

namespace mosharp {

/// Kernel families on (0, 1] with unit mass:
///   Power: psi(r) = eps r^{eps - 1}
///   Box:   psi(r) = (1/eps) 1_{(0, eps)}(r)   (eps <= 1)
struct PsiFamily {
  enum class Kind { Power, Box };
  Kind kind = Kind::Power;
  double epsilon = 0.5;

  static PsiFamily power(double eps);
  static PsiFamily box(double eps);
  static PsiFamily from_name(const std::string& name, double eps);

  double density(double r) const;
  std::string name() const;
};

/// Exact mass of psi on (a, b), 0 <= a < b <= 1.
double psi_mass(const PsiFamily& family, double a, double b);

/// One r-node: it represents the subinterval [lo, hi) and carries its exact mass.
struct RNode {
  double radius = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double weight = 0.0;
  int stride = 1;  ///< lattice coarsening used to evaluate this node
};

enum class NodePlacement {
  LeftEnd,            ///< radius = lo (the plain geometric ladder)
  MeasureConsistent,  ///< radius with count h^n = |B(0,r)|, nearest the geometric centre of [lo, hi)
};

struct RQuadratureOptions {
  double r_max = 1.0;
  NodePlacement placement = NodePlacement::MeasureConsistent;
  /// When > 0, nodes whose radius exceeds this many cells are evaluated on a
  /// coarsened lattice (power-of-two stride) so that r / (stride h) stays below it.
  int ball_cells_cap = 0;
  /// Radii (in cells) of the two extra nodes used to close (0, r_min).
  double closure_cells = 8.0;
};

/// Discretisation of the psi-weighted dr integral on [r_min, r_max] with r_min = 2h.
struct RQuadrature {
  PsiFamily family;
  double r_min = 0.0;
  std::vector<RNode> nodes;
  double truncated_mass = 0.0;  ///< psi mass of (0, r_min)
  double tail_mass = 0.0;       ///< psi mass of (r_max, 1), zero when r_max = 1
  std::vector<RNode> closure_nodes;

  /// Dyadic subintervals [r_min 2^j, r_min 2^{j+1}), the last one clipped at r_max.
  static RQuadrature dyadic(const PsiFamily& family, const Grid& grid, const RQuadratureOptions& options = {});

  double node_mass() const;
  double largest_radius() const;
};

}  // namespace mosharp
