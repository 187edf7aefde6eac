#include "mosharp/checks.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "mosharp/errors.hpp"
#include "mosharp/parallel.hpp"

namespace mosharp {
namespace {

bool singular_at(const MusielakOrliczFunction& phi, const Point& x) {
  return std::isinf(phi(x, 1.0));
}

void record(AxiomCheck& c, double margin, const Point& x, double t0, double t1, double t2) {
  if (margin < c.worst || (c.passed && margin < 0.0)) {
    c.worst = std::min(c.worst, margin);
    c.worst_x = x;
    c.worst_t[0] = t0;
    c.worst_t[1] = t1;
    c.worst_t[2] = t2;
  }
  if (margin < 0.0) c.passed = false;
}

}  // namespace

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0 && hi > lo && count >= 2)) throw InvalidArgument("log_grid: need 0 < lo < hi and count >= 2");
  std::vector<double> out(static_cast<std::size_t>(count));
  const double step = std::log(hi / lo) / (count - 1);
  for (int i = 0; i < count; ++i) out[i] = lo * std::exp(step * i);
  out.front() = lo;
  out.back() = hi;
  return out;
}

bool AxiomReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.passed; });
}

const AxiomCheck& AxiomReport::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw InvalidArgument("no axiom check named " + name);
}

AxiomReport check_orlicz_axioms(const MusielakOrliczFunction& phi, const std::vector<Point>& x_samples,
                                const std::vector<double>& t_grid, const AxiomOptions& options) {
  if (t_grid.size() < 4) throw InvalidArgument("axiom check needs at least 4 t values");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0)) throw InvalidArgument("axiom check: t values must be positive");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw InvalidArgument("axiom check: t grid must be increasing");
  }
  if (t_grid.back() / t_grid.front() < 1e4 * (1.0 - 1e-12))
    throw InvalidArgument("axiom check: t grid must span at least 4 decades");
  if (x_samples.empty()) throw InvalidArgument("axiom check needs at least one x sample");

  AxiomCheck zero{"zero_at_origin"}, mono{"nondecreasing"}, convex{"convex"};
  AxiomCheck lim0{"ratio_to_zero_at_zero"}, liminf{"ratio_to_infinity_at_infinity"};

  const double t_lo = t_grid.front(), t_hi = t_grid.back();
  const double t_mid = std::sqrt(t_lo * t_hi);
  for (const auto& x : x_samples) {
    if (singular_at(phi, x)) continue;
    const double v0 = phi(x, 0.0);
    record(zero, -std::fabs(v0), x, 0.0, 0.0, 0.0);

    std::vector<double> v(t_grid.size());
    for (std::size_t i = 0; i < t_grid.size(); ++i) v[i] = phi(x, t_grid[i]);
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
      record(mono, v[i + 1] - v[i], x, t_grid[i], t_grid[i + 1], 0.0);
    for (std::size_t i = 0; i + 2 < v.size(); ++i) {
      const double a = t_grid[i], b = t_grid[i + 1], c = t_grid[i + 2];
      const double chord = ((c - b) * v[i] + (b - a) * v[i + 2]) / (c - a);
      const double margin = chord - v[i + 1] + options.convexity_rel_tol * std::fabs(chord);
      record(convex, margin, x, a, b, c);
    }
    const double r_lo = v.front() / t_lo;
    const double r_mid = phi(x, t_mid) / t_mid;
    const double r_hi = v.back() / t_hi;
    record(lim0, r_mid / options.ratio_factor - r_lo, x, t_lo, t_mid, 0.0);
    record(liminf, r_hi - options.ratio_factor * r_mid, x, t_mid, t_hi, 0.0);
  }
  AxiomReport report;
  report.checks = {zero, mono, convex, lim0, liminf};
  return report;
}

template <class PhiLike>
Delta2Report check_delta2_generic(const PhiLike& phi, const std::vector<Point>& x_samples,
                                  const std::vector<double>& s_grid, double cap) {
  for (double s : s_grid)
    if (!(s > 0.0)) throw InvalidArgument("check_delta2: s grid must be positive");
  Delta2Report report;
  report.cap = cap;
  bool any = false;
  for (const auto& x : x_samples) {
    for (double s : s_grid) {
      const double base = phi(x, s);
      if (base == 0.0 || std::isinf(base)) continue;
      const double ratio = phi(x, 2.0 * s) / base;
      if (!any || ratio > report.kappa_hat || std::isnan(ratio)) {
        report.kappa_hat = std::isnan(ratio) ? kInfinity : ratio;
        report.worst_x = x;
        report.worst_s = s;
      }
      any = true;
    }
  }
  if (!any) throw PreconditionError("check_delta2: Phi vanishes on every sample, doubling ratio undefined");
  report.passed = std::isfinite(report.kappa_hat) && report.kappa_hat <= cap;
  return report;
}

template Delta2Report check_delta2_generic<MusielakOrliczFunction>(const MusielakOrliczFunction&,
                                                                   const std::vector<Point>&,
                                                                   const std::vector<double>&, double);
template Delta2Report check_delta2_generic<ComplementaryFunction>(const ComplementaryFunction&,
                                                                  const std::vector<Point>&,
                                                                  const std::vector<double>&, double);

Delta2Report check_delta2(const MusielakOrliczFunction& phi, const std::vector<Point>& x_samples,
                          const std::vector<double>& s_grid, double cap) {
  return check_delta2_generic(phi, x_samples, s_grid, cap);
}

Delta2Report check_delta2(const ComplementaryFunction& phi, const std::vector<Point>& x_samples,
                          const std::vector<double>& s_grid, double cap) {
  return check_delta2_generic(phi, x_samples, s_grid, cap);
}

std::pair<int, double> lemma_iii_constant(double kappa, double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("lemma (iii) needs delta > 0");
  const int m = static_cast<int>(std::ceil(std::log2(1.0 + 1.0 / delta) - 1e-12));
  return {m, std::pow(kappa, m)};
}

GrowthReport estimate_gamma(const MusielakOrliczFunction& phi, const std::vector<Point>& x_samples,
                            const std::vector<double>& a_grid, std::vector<double> b_grid,
                            const GrowthOptions& options) {
  for (double a : a_grid)
    if (!(a > 0.0)) throw InvalidArgument("estimate_gamma: a grid must be positive");
  for (double b : b_grid)
    if (!(b >= 1.0)) throw InvalidArgument("estimate_gamma: b grid must lie in [1, inf)");
  for (double d : options.deltas)
    if (!(d > 0.0)) throw InvalidArgument("estimate_gamma: deltas must be positive");

  b_grid.push_back(2.0);
  for (double d : options.deltas) b_grid.push_back(1.0 + d);
  std::sort(b_grid.begin(), b_grid.end());
  b_grid.erase(std::unique(b_grid.begin(), b_grid.end()), b_grid.end());

  // The doubling constant feeding C_delta is needed at 2^k b for k < m, so the
  // a-grid is extended by those dyadic multiples before sampling gamma and kappa.
  int m_max = 1;
  for (double d : options.deltas) m_max = std::max(m_max, lemma_iii_constant(1.0, d).first);
  std::vector<double> extended(a_grid.begin(), a_grid.end());
  for (double a : a_grid)
    for (int k = 1; k < m_max; ++k) extended.push_back(std::ldexp(a, k));
  std::sort(extended.begin(), extended.end());
  extended.erase(std::unique(extended.begin(), extended.end()), extended.end());

  std::vector<Point> xs;
  for (const auto& x : x_samples)
    if (!singular_at(phi, x)) xs.push_back(x);

  GrowthReport report;
  bool any = false;
  for (const auto& x : xs) {
    for (double a : extended) {
      const double pa = phi(x, a);
      if (pa == 0.0 || std::isinf(pa)) continue;
      for (double b : b_grid) {
        if (b == 1.0) continue;
        const double g = std::log(phi(x, a * b) / pa) / std::log(b);
        if (!any || g > report.gamma_hat) {
          report.gamma_hat = g;
          report.worst_x = x;
          report.worst_a = a;
          report.worst_b = b;
        }
        any = true;
      }
    }
  }
  if (!any) throw PreconditionError("estimate_gamma: Phi vanishes on every sample");

  report.kappa_hat = options.kappa > 0.0 ? options.kappa : check_delta2(phi, xs, extended, kInfinity).kappa_hat;

  // (i) for b in (0, 1).
  for (const auto& x : xs) {
    for (double a : a_grid) {
      const double pa = phi(x, a);
      for (double b : options.shrink_factors) {
        if (!(b > 0.0 && b < 1.0)) throw InvalidArgument("estimate_gamma: shrink factors must lie in (0, 1)");
        const double slack = b * pa - phi(x, a * b);
        ++report.lemma_i.checked;
        report.lemma_i.worst_slack = std::min(report.lemma_i.worst_slack, slack);
        if (slack < -options.slack) ++report.lemma_i.violations;
      }
    }
  }

  // (iii) over all ordered pairs of the a-grid.
  for (double delta : options.deltas) {
    Lemma3Result res;
    res.delta = delta;
    std::tie(res.m, res.c_delta) = lemma_iii_constant(report.kappa_hat, delta);
    const double growth = std::pow(1.0 + delta, report.gamma_hat);
    for (const auto& x : xs) {
      for (double a : a_grid) {
        const double pa = phi(x, a);
        for (double b : a_grid) {
          const double slack = growth * pa + res.c_delta * phi(x, b) - phi(x, a + b);
          ++res.tally.checked;
          res.tally.worst_slack = std::min(res.tally.worst_slack, slack);
          if (slack < -options.slack) ++res.tally.violations;
        }
      }
    }
    report.lemma_iii.push_back(res);
  }
  return report;
}

YoungReport check_young(const ComplementaryFunction& conjugate, const std::vector<YoungSample>& samples,
                        double tolerance) {
  YoungReport report;
  const auto& phi = conjugate.base();
  for (const auto& smp : samples) {
    if (!(smp.s >= 0.0 && smp.t >= 0.0)) throw DomainError("check_young: s and t must be nonnegative");
    const double st = smp.s * smp.t;
    const double slack = phi(smp.x, smp.t) + conjugate(smp.x, smp.s) - st;
    ++report.checked;
    if (slack < report.worst_slack) {
      report.worst_slack = slack;
      report.worst = smp;
    }
    if (slack < -tolerance * (1.0 + st)) ++report.violations;
  }
  return report;
}

LogHolderReport check_log_holder(const ExponentField& p, const std::vector<std::pair<Point, Point>>& pairs,
                                 const std::vector<Point>& far_samples, const LogHolderCaps& caps) {
  LogHolderReport report;
  report.p_infinity = p.p_infinity();
  for (const auto& [x, y] : pairs) {
    const double d = distance(x, y);
    if (!(d > 0.0)) throw InvalidArgument("check_log_holder: pair points must be distinct");
    const double c = std::fabs(p(x) - p(y)) * std::log(std::exp(1.0) + 1.0 / d);
    if (c > report.c_local) {
      report.c_local = c;
      report.worst_pair = {x, y};
    }
  }
  for (const auto& x : far_samples) {
    const double c = std::fabs(p(x) - report.p_infinity) * std::log(std::exp(1.0) + euclidean_norm(x));
    if (c > report.c_decay) {
      report.c_decay = c;
      report.worst_far = x;
    }
  }
  report.passed = std::isfinite(report.c_local) && std::isfinite(report.c_decay) &&
                  report.c_local <= caps.local && report.c_decay <= caps.decay;
  return report;
}

bool A1Report::passed() const {
  return !entries.empty() &&
         std::all_of(entries.begin(), entries.end(), [](const A1Entry& e) { return e.finite && e.converged; });
}

A1Report check_a1(const MusielakOrliczFunction& phi, const Point& box_lo, const Point& box_hi,
                  const std::vector<double>& c_values, const A1Options& options) {
  const int n = phi.dimension();
  for (int i = 0; i < n; ++i)
    if (!(box_hi[i] > box_lo[i])) throw InvalidArgument("check_a1: box must have positive extent");
  if (options.base_cells < 1 || options.levels < 1) throw InvalidArgument("check_a1: bad refinement options");
  const auto singular = phi.singular_points();

  A1Report report;
  for (double c : c_values) {
    if (!(c >= 0.0)) throw DomainError("check_a1: c must be nonnegative");
    A1Entry entry;
    entry.c = c;
    for (int level = 0; level < options.levels; ++level) {
      const long cells = static_cast<long>(options.base_cells) << level;
      long total = 1;
      for (int i = 0; i < n; ++i) total *= cells;
      if (total > options.max_cells) break;

      Point h{};
      double volume = 1.0;
      for (int i = 0; i < n; ++i) {
        h[i] = (box_hi[i] - box_lo[i]) / static_cast<double>(cells);
        volume *= h[i];
      }
      std::vector<double> vals(static_cast<std::size_t>(total), 0.0);
      std::vector<char> skipped(vals.size(), 0);
      parallel_for(vals.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
          std::size_t rem = k;
          Point lo{}, centre{};
          for (int i = 0; i < n; ++i) {
            const long idx = static_cast<long>(rem % static_cast<std::size_t>(cells));
            rem /= static_cast<std::size_t>(cells);
            lo[i] = box_lo[i] + h[i] * static_cast<double>(idx);
            centre[i] = lo[i] + 0.5 * h[i];
          }
          bool skip = false;
          for (const auto& s : singular) {
            bool inside = true;
            for (int i = 0; i < n; ++i) inside = inside && s[i] >= lo[i] && s[i] <= lo[i] + h[i];
            if (inside) skip = true;
          }
          if (skip) {
            skipped[k] = 1;
            continue;
          }
          vals[k] = phi(centre, c) * volume;
        }
      });
      entry.skipped_cells = static_cast<std::size_t>(std::count(skipped.begin(), skipped.end(), 1));
      const double v = pairwise_sum(vals);
      if (!std::isfinite(v)) entry.finite = false;
      entry.values.push_back(v);
    }
    if (entry.values.size() >= 2 && entry.finite) {
      const double last = entry.values.back();
      const double prev = entry.values[entry.values.size() - 2];
      entry.converged = std::fabs(last - prev) <= options.rel_tol * std::fabs(last);
    }
    report.entries.push_back(entry);
  }
  return report;
}

GrowthConditionReport check_conjugate_doubling_condition(const MusielakOrliczFunction& phi,
                                                         const std::vector<double>& l_candidates,
                                                         const std::vector<double>& t_grid) {
  if (t_grid.size() < 2) throw InvalidArgument("growth condition check needs at least 2 t values");
  const Point origin{};
  GrowthConditionReport best;
  const std::size_t median = t_grid.size() / 2;
  for (double l : l_candidates) {
    if (!(l > 1.0)) throw InvalidArgument("growth condition check: l must exceed 1");
    // Longest suffix of the grid on which phi(l t) >= 2 l phi(t).
    std::size_t start = t_grid.size();
    while (start > 0) {
      const double t = t_grid[start - 1];
      if (phi(origin, l * t) < 2.0 * l * phi(origin, t)) break;
      --start;
    }
    if (start <= median && (!best.found || t_grid[start] < best.t0)) {
      best.found = true;
      best.l = l;
      best.t0 = t_grid[start];
    }
  }
  return best;
}

}  // namespace mosharp
