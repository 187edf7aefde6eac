#include "mosharp/psi.hpp"

#include <algorithm>
#include <cmath>

#include "mosharp/errors.hpp"
#include "mosharp/parallel.hpp"
#include "mosharp/stencil.hpp"

namespace mosharp {

PsiFamily PsiFamily::power(double eps) {
  if (!(eps > 0.0)) throw InvalidArgument("psi epsilon must be positive");
  return {Kind::Power, eps};
}

PsiFamily PsiFamily::box(double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw InvalidArgument("box kernel needs 0 < epsilon <= 1");
  return {Kind::Box, eps};
}

PsiFamily PsiFamily::from_name(const std::string& name, double eps) {
  if (name == "power") return power(eps);
  if (name == "box") return box(eps);
  throw InvalidArgument("unknown psi family '" + name + "'");
}

double PsiFamily::density(double r) const {
  if (!(r > 0.0 && r <= 1.0)) return 0.0;
  if (kind == Kind::Power) return epsilon * std::pow(r, epsilon - 1.0);
  return r < epsilon ? 1.0 / epsilon : 0.0;
}

std::string PsiFamily::name() const { return kind == Kind::Power ? "power" : "box"; }

double psi_mass(const PsiFamily& family, double a, double b) {
  if (!(a >= 0.0 && b > a && b <= 1.0)) throw InvalidArgument("psi_mass needs 0 <= a < b <= 1");
  if (family.kind == PsiFamily::Kind::Power) {
    const double eps = family.epsilon;
    return std::pow(b, eps) - (a == 0.0 ? 0.0 : std::pow(a, eps));
  }
  const double overlap = std::max(0.0, std::min(b, family.epsilon) - a);
  return overlap / family.epsilon;
}

namespace {

int stride_for(const Grid& grid, double r, int cap) {
  if (cap <= 0) return 1;
  int stride = 1;
  while (r / (grid.spacing() * stride) > cap && (grid.points() - 1) % (4 * stride) == 0) stride *= 2;
  return stride;
}

RNode place(const Grid& grid, double lo, double hi, NodePlacement placement, int cap) {
  RNode node;
  node.lo = lo;
  node.hi = hi;
  const double centre = std::sqrt(lo * hi);
  node.stride = stride_for(grid, centre, cap);
  if (placement == NodePlacement::LeftEnd) {
    node.radius = lo;
  } else {
    const Grid lattice = grid.coarsened(node.stride);
    const double lo_ok = std::max(lo, minimum_radius(lattice));
    node.radius = measure_consistent_radius(lattice, centre, lo_ok, std::max(lo_ok, hi * (1.0 - 1e-12)));
  }
  return node;
}

}  // namespace

RQuadrature RQuadrature::dyadic(const PsiFamily& family, const Grid& grid, const RQuadratureOptions& options) {
  if (!(options.r_max > 0.0 && options.r_max <= 1.0)) throw InvalidArgument("r_max must lie in (0, 1]");
  RQuadrature q;
  q.family = family;
  q.r_min = minimum_radius(grid);
  if (q.r_min >= options.r_max) throw PreconditionError("under-resolved ball: 2h exceeds the largest radius");
  q.truncated_mass = psi_mass(family, 0.0, q.r_min);
  q.tail_mass = options.r_max < 1.0 ? psi_mass(family, options.r_max, 1.0) : 0.0;
  for (double lo = q.r_min; lo < options.r_max * (1.0 - 1e-12); lo *= 2.0) {
    const double hi = std::min(2.0 * lo, options.r_max);
    RNode node = place(grid, lo, hi, options.placement, options.ball_cells_cap);
    node.weight = psi_mass(family, lo, hi);
    q.nodes.push_back(node);
  }
  for (double cells : {options.closure_cells, 2.0 * options.closure_cells}) {
    const double r = cells * grid.spacing();
    RNode node;
    node.radius = measure_consistent_radius(grid, r, 0.75 * r, 1.25 * r);
    node.lo = node.hi = node.radius;
    q.closure_nodes.push_back(node);
  }
  return q;
}

double RQuadrature::node_mass() const {
  std::vector<double> w;
  for (const auto& n : nodes) w.push_back(n.weight);
  return pairwise_sum(w);
}

double RQuadrature::largest_radius() const {
  double r = 0.0;
  for (const auto& n : nodes)
    if (n.weight > 0.0) r = std::max(r, n.radius);
  for (const auto& n : closure_nodes) r = std::max(r, n.radius);
  return r;
}

}  // namespace mosharp
