#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mosharp/conjugate.hpp"
#include "mosharp/exponent.hpp"
#include "mosharp/phi.hpp"

namespace mosharp {

// ---------------------------------------------------------------------------
// Orlicz axioms: Phi(x,0) = 0, nondecreasing, convex, Phi/t -> 0 at 0 and -> inf at inf.

struct AxiomCheck {
  std::string name;
  bool passed = true;
  double worst = 0.0;  ///< most negative margin seen (0 when passed)
  Point worst_x{};
  double worst_t[3] = {0.0, 0.0, 0.0};
};

struct AxiomReport {
  std::vector<AxiomCheck> checks;
  bool passed() const;
  const AxiomCheck& check(const std::string& name) const;
};

struct AxiomOptions {
  /// Phi(t_min)/t_min must be below ratio_factor^{-1} times the ratio at the
  /// geometric middle of the grid, and Phi(t_max)/t_max above ratio_factor times it.
  double ratio_factor = 10.0;
  double convexity_rel_tol = 1e-9;
};

/// Requires >= 4 strictly increasing positive t values spanning >= 4 decades.
AxiomReport check_orlicz_axioms(const MusielakOrliczFunction& phi, const std::vector<Point>& x_samples,
                                const std::vector<double>& t_grid, const AxiomOptions& options = {});

// ---------------------------------------------------------------------------
// Doubling condition Phi(x, 2s) <= kappa Phi(x, s).

inline constexpr double kDefaultKappaCap = 1e6;

struct Delta2Report {
  double kappa_hat = 0.0;
  Point worst_x{};
  double worst_s = 0.0;
  bool passed = false;
  double cap = kDefaultKappaCap;
};

template <class PhiLike>
Delta2Report check_delta2_generic(const PhiLike& phi, const std::vector<Point>& x_samples,
                                  const std::vector<double>& s_grid, double cap);

Delta2Report check_delta2(const MusielakOrliczFunction& phi, const std::vector<Point>& x_samples,
                          const std::vector<double>& s_grid, double cap = kDefaultKappaCap);
Delta2Report check_delta2(const ComplementaryFunction& phi, const std::vector<Point>& x_samples,
                          const std::vector<double>& s_grid, double cap = kDefaultKappaCap);

// ---------------------------------------------------------------------------
// Growth inequalities:
//   (i)   Phi(x, ab) <= b Phi(x, a),                          b in (0, 1)
//   (ii)  Phi(x, ab) <= b^gamma Phi(x, a),                    b >= 1
//   (iii) Phi(x, a+b) <= (1+delta)^gamma Phi(x, a) + C_delta Phi(x, b),
//         C_delta = kappa^m, m = ceil(log2(1 + 1/delta)).

struct InequalityTally {
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst_slack = kInfinity;  ///< min over samples of rhs - lhs
};

struct Lemma3Result {
  double delta = 0.0;
  int m = 0;
  double c_delta = 0.0;
  InequalityTally tally;
};

struct GrowthReport {
  double gamma_hat = 0.0;
  Point worst_x{};
  double worst_a = 0.0;
  double worst_b = 0.0;
  double kappa_hat = 0.0;
  InequalityTally lemma_i;
  std::vector<Lemma3Result> lemma_iii;
};

struct GrowthOptions {
  std::vector<double> deltas{0.1, 0.5, 1.0};
  std::vector<double> shrink_factors{0.001, 0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 0.999};
  double slack = 1e-12;
  /// Kappa used in C_delta. When <= 0 it is estimated with check_delta2 on the a-grid.
  double kappa = 0.0;
};

/// b_grid must lie in [1, inf). The values 2 and 1 + delta are added when
/// missing so that gamma_hat >= log2(kappa_hat) holds on the same sample set.
GrowthReport estimate_gamma(const MusielakOrliczFunction& phi, const std::vector<Point>& x_samples,
                            const std::vector<double>& a_grid, std::vector<double> b_grid,
                            const GrowthOptions& options = {});

/// m = ceil(log2(1 + 1/delta)) and C_delta = kappa^m.
std::pair<int, double> lemma_iii_constant(double kappa, double delta);

// ---------------------------------------------------------------------------
// Young inequality s t <= Phi(x, t) + Phi*(x, s).

struct YoungSample {
  Point x{};
  double s = 0.0;
  double t = 0.0;
};

struct YoungReport {
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst_slack = kInfinity;
  YoungSample worst{};
};

/// A sample violates when slack < -tolerance * (1 + s t).
YoungReport check_young(const ComplementaryFunction& conjugate, const std::vector<YoungSample>& samples,
                        double tolerance = 1e-12);

// ---------------------------------------------------------------------------
// Log-Hoelder continuity of a variable exponent.

struct LogHolderReport {
  double c_local = 0.0;
  double c_decay = 0.0;
  double p_infinity = 0.0;
  std::pair<Point, Point> worst_pair{};
  Point worst_far{};
  bool passed = false;
};

struct LogHolderCaps {
  double local = 10.0;
  double decay = 10.0;
};

LogHolderReport check_log_holder(const ExponentField& p, const std::vector<std::pair<Point, Point>>& pairs,
                                 const std::vector<Point>& far_samples, const LogHolderCaps& caps = {});

// ---------------------------------------------------------------------------
// Local integrability: integral over a compact box of Phi(x, c).

struct A1Entry {
  double c = 0.0;
  std::vector<double> values;  ///< one per refinement level
  std::size_t skipped_cells = 0;
  bool finite = true;
  bool converged = false;
};

struct A1Report {
  std::vector<A1Entry> entries;
  bool passed() const;
};

struct A1Options {
  int base_cells = 64;
  int levels = 4;
  double rel_tol = 1e-2;  ///< largest accepted relative change at the last refinement
  long max_cells = 1L << 22;
};

A1Report check_a1(const MusielakOrliczFunction& phi, const Point& box_lo, const Point& box_hi,
                  const std::vector<double>& c_values, const A1Options& options = {});

// ---------------------------------------------------------------------------
// Sufficient condition phi(l t) >= 2 l phi(t) for all sampled t >= t0.

struct GrowthConditionReport {
  bool found = false;
  double l = 0.0;
  double t0 = 0.0;
};

GrowthConditionReport check_conjugate_doubling_condition(const MusielakOrliczFunction& phi,
                                                         const std::vector<double>& l_candidates,
                                                         const std::vector<double>& t_grid);

/// Log-spaced grid with `count` values in [lo, hi].
std::vector<double> log_grid(double lo, double hi, int count);

}  // namespace mosharp
