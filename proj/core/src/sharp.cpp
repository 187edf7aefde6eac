#include "mosharp/sharp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mosharp/errors.hpp"
#include "mosharp/parallel.hpp"
#include "mosharp/stencil.hpp"

namespace mosharp {

Closure closure_from_name(const std::string& name) {
  if (name == "omit") return Closure::Omit;
  if (name == "constant") return Closure::Constant;
  if (name == "richardson") return Closure::Richardson;
  throw InvalidArgument("unknown closure '" + name + "'");
}

std::string closure_name(Closure c) {
  switch (c) {
    case Closure::Omit: return "omit";
    case Closure::Constant: return "constant";
    case Closure::Richardson: return "richardson";
  }
  return "omit";
}

SharpSamples sharp_samples(const SampledField& f, double r, int stride) {
  const SampledField coarse = f.subsampled(stride);
  const SampledField m = sharp_average_field(coarse, r);
  SharpSamples s;
  s.radius = r;
  s.stride = stride;
  s.lattice = coarse.grid();
  for (std::size_t k = 0; k < m.values().size(); ++k) {
    if (m[k] == 0.0) continue;
    s.index.push_back(static_cast<std::uint32_t>(k));
    s.value.push_back(m[k]);
  }
  return s;
}

SharpCache::SharpCache(const SampledField& f, const RQuadrature& rq) : rq_(rq) {
  if (rq.nodes.empty()) throw InvalidArgument("sharp modular needs at least one r-node");
  if (f.grid().size() > std::numeric_limits<std::uint32_t>::max()) throw InvalidArgument("grid too large");
  for (const auto& node : rq.nodes) {
    if (node.radius < rq.r_min * (1.0 - 1e-12)) throw PreconditionError("r-node below r_min = 2h");
    if (node.weight == 0.0) {
      SharpSamples empty;
      empty.radius = node.radius;
      empty.stride = node.stride;
      empty.lattice = f.grid().coarsened(node.stride);
      nodes_.push_back(std::move(empty));
      continue;
    }
    nodes_.push_back(sharp_samples(f, node.radius, node.stride));
  }
  for (const auto& node : rq.closure_nodes) closure_.push_back(sharp_samples(f, node.radius, 1));
}

double SharpCache::inner_integral(const MusielakOrliczFunction& phi, const SharpSamples& s, double lambda,
                                  const ModularOptions& options) {
  if (s.index.empty()) return 0.0;
  const auto singular = phi.singular_points();
  const double scale = 1.0 / (lambda * s.radius);
  std::vector<double> terms(s.index.size(), 0.0);
  parallel_for(terms.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Point x = s.lattice.point(static_cast<std::size_t>(s.index[i]));
      if (options.skip_singular && !singular.empty()) {
        bool hit = false;
        for (const auto& p : singular) hit = hit || distance(p, x) == 0.0;
        if (hit) continue;
      }
      terms[i] = phi.bind(x)(s.value[i] * scale);
    }
  });
  return pairwise_sum(terms) * s.lattice.cell_measure();
}

SharpModularResult sharp_modular(const MusielakOrliczFunction& phi, const SharpCache& cache, double lambda,
                                 const SharpOptions& options) {
  const RQuadrature& rq = cache.quadrature();
  SharpModularResult out;
  out.truncated_mass = rq.truncated_mass;
  std::vector<double> parts;
  for (std::size_t j = 0; j < rq.nodes.size(); ++j) {
    const double w = rq.nodes[j].weight;
    const double inner = w > 0.0 ? SharpCache::inner_integral(phi, cache.nodes()[j], lambda, options.modular) : 0.0;
    out.inner.push_back(inner);
    parts.push_back(w * inner);
    if (w > 0.0) out.max_inner = std::max(out.max_inner, inner);
  }
  out.node_part = pairwise_sum(parts);

  if (options.closure == Closure::Omit || rq.truncated_mass == 0.0 || cache.closure_nodes().size() < 2) {
    out.closure_value = 0.0;
    out.closure_uncertainty = rq.truncated_mass * out.max_inner;
  } else {
    const auto& c = cache.closure_nodes();
    const double i1 = SharpCache::inner_integral(phi, c[0], lambda, options.modular);
    const double i2 = SharpCache::inner_integral(phi, c[1], lambda, options.modular);
    if (options.closure == Closure::Constant) {
      out.closure_value = i1;
      out.closure_uncertainty = rq.truncated_mass * std::fabs(i1 - i2);
    } else {
      const double r1 = c[0].radius * c[0].radius, r2 = c[1].radius * c[1].radius;
      out.closure_value = (r2 * i2 - r1 * i1) / (r2 - r1);
      out.closure_uncertainty = rq.truncated_mass * std::fabs(out.closure_value - i2);
    }
  }
  out.value = out.node_part + rq.truncated_mass * out.closure_value;
  return out;
}

SharpModularResult sharp_modular(const MusielakOrliczFunction& phi, const SampledField& f, const RQuadrature& rq,
                                 const SharpOptions& options) {
  return sharp_modular(phi, SharpCache(f, rq), 1.0, options);
}

double sharp_norm(const MusielakOrliczFunction& phi, const SharpCache& cache, const SharpOptions& options,
                  const LuxemburgOptions& lux) {
  bool zero = true;
  for (const auto& n : cache.nodes()) zero = zero && n.index.empty();
  if (zero) return 0.0;
  const auto rho = [&](double lambda) { return sharp_modular(phi, cache, lambda, options).value; };
  const double m = rho(1.0);
  return invert_modular(rho, std::isfinite(m) && m > 0.0 ? m : 1.0, lux);
}

double sharp_norm(const MusielakOrliczFunction& phi, const SampledField& f, const RQuadrature& rq,
                  const SharpOptions& options, const LuxemburgOptions& lux) {
  return sharp_norm(phi, SharpCache(f, rq), options, lux);
}

}  // namespace mosharp
