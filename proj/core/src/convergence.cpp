#include "mosharp/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mosharp/errors.hpp"
#include "mosharp/modular.hpp"
#include "mosharp/parallel.hpp"
#include "mosharp/stencil.hpp"

namespace mosharp {

// ---------------------------------------------------------------------------
// c0

double c0_analytic(int dimension) {
  switch (dimension) {
    case 1: return 0.5;
    case 2: return 4.0 / (3.0 * std::numbers::pi);
    case 3: return 0.375;
    default: throw InvalidArgument("unsupported dimension " + std::to_string(dimension) + " for c0");
  }
}

C0Value c0(int dimension, double resolution) {
  C0Value out;
  out.dimension = dimension;
  out.analytic = c0_analytic(dimension);
  if (!(resolution > 0.0 && resolution <= 0.25)) throw InvalidArgument("c0 resolution must lie in (0, 1/4]");
  out.resolution = resolution;
  const int m = static_cast<int>(std::ceil(1.0 / resolution));
  const int side = 2 * m + 1;

  if (dimension == 1) {
    std::vector<double> xs;
    for (int k = -m; k <= m; ++k)
      if (std::fabs(k * resolution) < 1.0) xs.push_back(std::fabs(k * resolution));
    out.cross_check = pairwise_sum(xs) / static_cast<double>(xs.size());
  } else {
    // Columns over the first n - 1 axes; the chord along the last axis has
    // length 2 sqrt(1 - |x'|^2) and |x . e1| is constant on it.
    const std::size_t columns = dimension == 2 ? side : static_cast<std::size_t>(side) * side;
    std::vector<double> num(columns, 0.0), den(columns, 0.0);
    for (std::size_t c = 0; c < columns; ++c) {
      const double x1 = (static_cast<int>(c % side) - m) * resolution;
      const double x2 = dimension == 3 ? (static_cast<int>(c / side) - m) * resolution : 0.0;
      const double q = x1 * x1 + x2 * x2;
      if (q >= 1.0) continue;
      const double chord = std::sqrt(1.0 - q);
      num[c] = std::fabs(x1) * chord;
      den[c] = chord;
    }
    out.cross_check = pairwise_sum(num) / pairwise_sum(den);
  }
  out.discrepancy = std::fabs(out.cross_check - out.analytic);
  return out;
}

C0Value c0(int dimension) { return c0(dimension, dimension == 3 ? std::ldexp(1.0, -7) : std::ldexp(1.0, -10)); }

// ---------------------------------------------------------------------------
// Preflight

std::vector<Point> preflight_points(int dimension, double half_width) {
  std::vector<Point> out;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dimension));
  for (double s : {-0.9, -0.45, -0.1, 0.03, 0.2, 0.55, 0.95}) {
    Point x{};
    for (int a = 0; a < dimension; ++a) x[a] = s * half_width * scale;
    out.push_back(x);
  }
  return out;
}

AssumptionReport check_assumptions(const MusielakOrliczFunction& phi, int dimension, double half_width) {
  if (phi.dimension() != dimension) throw InvalidArgument("Phi dimension does not match the grid dimension");
  AssumptionReport out;
  const auto xs = preflight_points(dimension, half_width);
  const auto ts = log_grid(1e-4, 1e4, 81);

  out.axioms = check_orlicz_axioms(phi, xs, ts);
  if (!out.axioms.passed()) {
    for (const auto& c : out.axioms.checks)
      if (!c.passed) out.failures.push_back("Orlicz axiom '" + c.name + "'");
  }
  out.delta2 = check_delta2(phi, xs, ts);
  if (!out.delta2.passed) out.theorem_failures.push_back("Delta2 condition");
  if (const auto conj = phi.closed_form_conjugate()) {
    out.conjugate_delta2 = check_delta2(*conj, xs, ts);
    if (!out.conjugate_delta2->passed)
      out.theorem_failures.push_back("Delta2 condition of the complementary function");
  }

  Point lo{}, hi{};
  for (int a = 0; a < dimension; ++a) {
    lo[a] = -half_width;
    hi[a] = half_width;
  }
  A1Options a1;
  a1.base_cells = dimension == 3 ? 16 : 64;
  a1.levels = dimension == 3 ? 3 : 4;
  out.a1 = check_a1(phi, lo, hi, {1.0, 10.0}, a1);
  if (!out.a1.passed()) out.theorem_failures.push_back("local integrability (A1)");
  out.failures.insert(out.failures.end(), out.theorem_failures.begin(), out.theorem_failures.end());

  const auto& data = phi.data();
  if (const auto* ve = std::get_if<VariableExponentFamily>(&data); ve && !ve->p.is_constant()) {
    std::vector<std::pair<Point, Point>> pairs;
    for (const auto& x : xs)
      for (double d : {1e-1, 1e-2, 1e-3, 1e-4}) {
        Point y = x;
        y[0] += d;
        pairs.emplace_back(x, y);
      }
    std::vector<Point> far;
    for (double r : {2.0, 5.0, 10.0, 50.0, 100.0, 1000.0}) far.push_back(Point{r, 0.0, 0.0});
    out.log_holder = check_log_holder(ve->p, pairs, far);
    if (!out.log_holder->passed) out.failures.push_back("log-Hoelder continuity of the exponent");
  }
  if (const auto* wp = std::get_if<WeightedPowerFamily>(&data);
      wp && wp->p > 1.0 && wp->omega.shape() != Weight::Shape::Constant) {
    const double p = wp->omega.target_p.value_or(wp->p);
    const std::vector<Point> centres{Point{}, Point{0.25, 0.0, 0.0}, Point{1.0, 0.0, 0.0}};
    ApOptions opts;
    opts.cells_per_min_radius = dimension == 3 ? 4 : 16;
    out.ap_coarse = ap_constant(wp->omega, p, ball_ladder(centres, 1.0 / 16, 0.25), dimension, opts);
    out.ap_fine = ap_constant(wp->omega, p, ball_ladder(centres, 1.0 / 64, 0.25), dimension, opts);
    if (out.ap_fine->constant > 1.5 * out.ap_coarse->constant)
      out.failures.push_back("A_p constant of the weight (grows under ball refinement)");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sweeps

std::vector<ScheduleRow> coupled_schedule(double eps0, double h0, int rows) {
  if (!(eps0 > 0.0) || !(h0 > 0.0) || rows < 1) throw InvalidArgument("schedule needs eps0 > 0, h0 > 0, rows >= 1");
  if (!(2.0 * h0 < 1.0)) throw PreconditionError("under-resolved ball: r_min = 2h must be below 1");
  std::vector<ScheduleRow> out;
  for (int k = 0; k < rows; ++k) out.push_back({std::ldexp(eps0, -k), std::ldexp(h0, -k)});
  return out;
}

double relative_error(double value, double target) {
  return std::fabs(value - target) / std::max(std::fabs(target), kRelativeErrorFloor);
}

bool sweep_verdict(const std::vector<SweepRow>& rows, double bound, int k) {
  if (rows.empty()) return false;
  const std::size_t first = rows.size() > static_cast<std::size_t>(k) ? rows.size() - k : 0;
  for (std::size_t i = first + 1; i < rows.size(); ++i)
    if (rows[i].rel_error > rows[i - 1].rel_error) return false;
  return rows.back().rel_error <= bound;
}

namespace {

// Lattice of spacing h aligned with the sweep grids that covers the support of f.
Grid target_grid(const TestFunction& f, double h) {
  const int cells = std::max(4, static_cast<int>(std::ceil(f.support_radius() / h)) + 2);
  return Grid::with_spacing(f.dimension(), cells * h, h);
}

std::vector<double> scaled_gradient_magnitude(const TestFunction& f, const Grid& grid) {
  const double c = c0_analytic(f.dimension());
  std::vector<double> out(grid.size(), 0.0);
  parallel_for(out.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) out[k] = c * f.gradient_norm(grid.point(k));
  });
  return out;
}

void require_preconditions(const MusielakOrliczFunction& phi, const TestFunction& f, const SweepSettings& s) {
  if (phi.dimension() != f.dimension()) throw InvalidArgument("Phi and test function dimensions differ");
  if (!f.is_c2()) throw PreconditionError("sweeps need a C2 test function; '" + f.name() + "' is only Lipschitz");
  if (f.support_radius() + 2.0 > s.half_width + 1e-12)
    throw PreconditionError("domain half-width must leave a zero band of 2 around the support");
  if (s.preflight) {
    const auto report = check_assumptions(phi, f.dimension(), s.half_width);
    if (!report.theorem_failures.empty()) {
      std::string names;
      for (const auto& n : report.theorem_failures) names += (names.empty() ? "" : ", ") + n;
      throw PreconditionError("assumption failed: " + names);
    }
  }
}

template <class RowFn>
SweepReport run_sweep(const MusielakOrliczFunction& phi, const TestFunction& f, const SweepSettings& s, double target,
                      const RowFn& evaluate) {
  SweepReport report;
  report.bound = s.bound;
  for (const auto& step : coupled_schedule(s.eps0, s.h0, s.rows)) {
    const Grid grid = Grid::with_spacing(f.dimension(), s.half_width, step.h);
    const SampledField field = build_field(grid, f);
    RQuadratureOptions ro;
    ro.ball_cells_cap = s.ball_cells_cap;
    const PsiFamily family = s.family == PsiFamily::Kind::Power ? PsiFamily::power(step.epsilon)
                                                                 : PsiFamily::box(std::min(1.0, step.epsilon));
    const RQuadrature rq = RQuadrature::dyadic(family, grid, ro);
    const SharpCache cache(field, rq);
    SharpOptions so;
    so.closure = s.closure;
    const SharpModularResult at_one = sharp_modular(phi, cache, 1.0, so);

    SweepRow row;
    row.epsilon = step.epsilon;
    row.h = step.h;
    row.r_min = rq.r_min;
    row.truncated_mass = rq.truncated_mass;
    row.closure_uncertainty = at_one.closure_uncertainty;
    row.sharp_modular = at_one.value;
    row.sharp = evaluate(cache, so, at_one);
    row.target = target;
    row.rel_error = relative_error(row.sharp, target);
    report.rows.push_back(row);
  }
  report.verdict = sweep_verdict(report.rows, s.bound, s.verdict_rows);
  return report;
}

}  // namespace

double gradient_energy(const MusielakOrliczFunction& phi, const TestFunction& f, double h) {
  const Grid grid = target_grid(f, h);
  return modular_of_values(phi, grid, scaled_gradient_magnitude(f, grid));
}

double gradient_norm_target(const MusielakOrliczFunction& phi, const TestFunction& f, double h) {
  const Grid grid = target_grid(f, h);
  return luxemburg_norm_of_values(phi, grid, scaled_gradient_magnitude(f, grid));
}

SweepReport theorem_sweep(const MusielakOrliczFunction& phi, const TestFunction& f, const SweepSettings& s) {
  require_preconditions(phi, f, s);
  const double target = gradient_energy(phi, f, std::ldexp(s.h0, -(s.rows - 1)));
  return run_sweep(phi, f, s, target,
                   [](const SharpCache&, const SharpOptions&, const SharpModularResult& r) { return r.value; });
}

SweepReport norm_sweep(const MusielakOrliczFunction& phi, const TestFunction& f, const SweepSettings& s) {
  require_preconditions(phi, f, s);
  const double target = gradient_norm_target(phi, f, std::ldexp(s.h0, -(s.rows - 1)));
  return run_sweep(phi, f, s, target, [&](const SharpCache& cache, const SharpOptions& so, const SharpModularResult&) {
    return sharp_norm(phi, cache, so);
  });
}

// ---------------------------------------------------------------------------
// Probes

RemainderProbe remainder_probe(const TestFunction& f, const SampledField& samples, const Index& centre, double r) {
  const Grid& grid = samples.grid();
  if (grid.dimension() != f.dimension()) throw InvalidArgument("field and test function dimensions differ");
  const BallStencil ball(grid, r);
  if (!ball.fits(centre)) throw PreconditionError("stencil overflow: the ball leaves the grid");
  const Point x = grid.point(grid.flat(centre));
  const Jet jx = f.jet(x);
  const double grad_norm = f.gradient_norm(x);
  const int n = grid.dimension();
  const std::size_t count = ball.count();

  std::vector<double> affine(count), remainder(count), dist2(count);
  double hess = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const auto& k = ball.offsets()[i];
    Point y = x;
    double lin = 0.0, d2 = 0.0;
    for (int a = 0; a < n; ++a) {
      const double d = k[a] * grid.spacing();
      y[a] = x[a] + d;
      lin += jx.g[a] * d;
      d2 += d * d;
    }
    Index yi = centre;
    for (int a = 0; a < n; ++a) yi[a] += k[a];
    affine[i] = lin;
    remainder[i] = std::fabs(samples[grid.flat(yi)] - jx.v - lin);
    dist2[i] = d2;
    hess = std::max(hess, f.hessian_norm(y));
  }
  const double affine_mean = pairwise_sum(affine) / count;
  std::vector<double> affine_dev(count), quad(count);
  for (std::size_t i = 0; i < count; ++i) {
    affine_dev[i] = std::fabs(affine[i] - affine_mean);
    quad[i] = 0.5 * hess * dist2[i];
  }
  const double law = c0_analytic(n) * r * grad_norm;

  RemainderProbe out;
  out.x = x;
  out.r = r;
  out.lhs = std::fabs(sharp_ball_average(samples, centre, r) - law);
  out.remainder_mean = 2.0 * pairwise_sum(remainder) / count;
  out.defect = std::fabs(pairwise_sum(affine_dev) / count - law);
  out.rhs = out.remainder_mean + out.defect;
  out.hessian_rhs = 2.0 * pairwise_sum(quad) / count + out.defect;
  out.slack = out.rhs - out.lhs;
  return out;
}

std::vector<PoincareRow> poincare_probe(const TestFunction& f, const Grid& grid, const std::vector<double>& radii) {
  if (radii.empty()) throw InvalidArgument("Poincare probe needs at least one radius");
  const SampledField field = build_field(grid, f);
  const SampledField grad(grid, analytic_gradient(grid, f).magnitude());
  std::vector<PoincareRow> out;
  for (double r : radii) {
    const BallStencil ball(grid, r);
    const SampledField sharp = sharp_average_field(field, r);
    std::vector<double> ratio(grid.size(), 0.0);
    std::vector<char> used(grid.size(), 0);
    parallel_for(grid.size(), [&](std::size_t begin, std::size_t end) {
      for (std::size_t k = begin; k < end; ++k) {
        if (sharp[k] <= 0.0) continue;
        const Index idx = grid.index(k);
        if (!ball.fits(idx)) continue;
        const double mean_grad = ball.sum(grad.values().data(), k) / static_cast<double>(ball.count());
        if (!(mean_grad > 0.0)) continue;
        ratio[k] = sharp[k] / (r * mean_grad);
        used[k] = 1;
      }
    });
    PoincareRow row;
    row.r = r;
    for (std::size_t k = 0; k < ratio.size(); ++k) {
      row.points += used[k];
      if (ratio[k] > row.max_ratio) {
        row.max_ratio = ratio[k];
        row.worst = grid.point(k);
      }
    }
    out.push_back(row);
  }
  return out;
}

CommutationProbe commutation_probe(const SampledField& f, double r, const Mollifier& g) {
  const SampledField lhs = sharp_average_field(mollify(f, g), r);
  const SampledField rhs = mollify(sharp_average_field(f, r), g);
  const Grid& grid = f.grid();
  CommutationProbe out;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (lhs[k] == 0.0 && rhs[k] == 0.0) continue;
    ++out.points;
    const double slack = rhs[k] - lhs[k];
    if (slack < out.worst_slack) {
      out.worst_slack = slack;
      out.worst = grid.index(k);
    }
  }
  return out;
}

double MollifiedEnergyTable::required_constant() const {
  double k = 0.0;
  for (const auto& row : rows) k = std::max(k, row.energy / growth_base);
  return k;
}

MollifiedEnergyTable mollified_energy_probe(const MusielakOrliczFunction& phi, const TestFunction& f, const Grid& grid,
                                            const std::vector<double>& deltas, const PsiFamily& family,
                                            const RQuadratureOptions& rq_options) {
  if (deltas.empty()) throw InvalidArgument("mollified energy probe needs at least one delta");
  const int n = grid.dimension();
  const SampledField field = build_field(grid, f);
  MollifiedEnergyTable out;
  out.box_half_width = f.support_radius() + *std::max_element(deltas.begin(), deltas.end());

  const auto growth =
      estimate_gamma(phi, preflight_points(n, grid.half_width()), log_grid(1e-3, 1e3, 25), log_grid(1.0, 8.0, 7));
  out.gamma_hat = growth.gamma_hat;
  SharpOptions so;
  so.closure = Closure::Richardson;
  out.sharp_modular = sharp_modular(phi, field, RQuadrature::dyadic(family, grid, rq_options), so).value;
  out.growth_base = std::pow(out.sharp_modular + 1.0, out.gamma_hat);

  const double c = c0_analytic(n);
  for (double delta : deltas) {
    const SampledField u = mollify(field, Mollifier(grid, delta));
    const std::vector<double> mag = gradient(u).magnitude();
    std::vector<double> values(grid.size(), 0.0);
    for (std::size_t k = 0; k < grid.size(); ++k)
      if (max_abs_coordinate(grid.point(k)) <= out.box_half_width) values[k] = c * mag[k];
    out.rows.push_back({delta, modular_of_values(phi, grid, values)});
  }
  return out;
}

}  // namespace mosharp
