#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mosharp/ap_weight.hpp"
#include "mosharp/checks.hpp"
#include "mosharp/mollifier.hpp"
#include "mosharp/sharp.hpp"
#include "mosharp/test_functions.hpp"

namespace mosharp {

// ---------------------------------------------------------------------------
// c0 = mean of |x . e1| over the unit ball.

struct C0Value {
  int dimension = 1;
  double analytic = 0.0;
  double cross_check = 0.0;  ///< lattice quadrature at `resolution`
  double discrepancy = 0.0;
  double resolution = 0.0;
};

/// 1/2, 4/(3 pi), 3/8 for n = 1, 2, 3. Throws InvalidArgument otherwise.
double c0_analytic(int dimension);

/// Quadrature over the open-ball lattice {k h : |k| h < 1}. For n >= 2 the
/// last axis is integrated exactly along each chord, so the lattice only
/// resolves the first n - 1 axes.
C0Value c0(int dimension, double resolution);
C0Value c0(int dimension);  ///< resolution 2^-10 for n <= 2, 2^-7 for n = 3

// ---------------------------------------------------------------------------
// Assumption preflight.

struct AssumptionReport {
  AxiomReport axioms;
  Delta2Report delta2;
  std::optional<Delta2Report> conjugate_delta2;
  A1Report a1;
  std::optional<LogHolderReport> log_holder;
  std::optional<ApReport> ap_coarse;
  std::optional<ApReport> ap_fine;
  std::vector<std::string> failures;          ///< names of every failed check
  std::vector<std::string> theorem_failures;  ///< the subset the sweeps require (A1, Delta2, conjugate Delta2)

  bool passed() const { return failures.empty(); }
};

/// Runs the checkers the convergence theorem relies on: Orlicz axioms,
/// doubling of Phi and of a closed-form conjugate, local integrability on
/// [-L, L]^n, log-Hoelder continuity of a variable exponent and, for weighted
/// powers, stability of the sampled A_p constant under ball refinement.
AssumptionReport check_assumptions(const MusielakOrliczFunction& phi, int dimension, double half_width);

/// Deterministic x samples used by the preflight: points on the main diagonal
/// at a few radii inside [-L, L]^n, avoiding the origin.
std::vector<Point> preflight_points(int dimension, double half_width);

// ---------------------------------------------------------------------------
// Coupled (epsilon, h) sweeps.

struct ScheduleRow {
  double epsilon = 0.0;
  double h = 0.0;
};

/// epsilon_k = eps0 2^-k and h_k = h0 2^-k, so r_min = 2 h_k halves with epsilon.
std::vector<ScheduleRow> coupled_schedule(double eps0, double h0, int rows);

struct SweepSettings {
  PsiFamily::Kind family = PsiFamily::Kind::Power;
  double eps0 = 0.5;
  double h0 = 1.0 / 256;
  int rows = 5;
  double half_width = 3.0;
  Closure closure = Closure::Richardson;
  int ball_cells_cap = 0;
  double bound = 0.05;
  int verdict_rows = 3;
  bool preflight = true;
};

struct SweepRow {
  double epsilon = 0.0;
  double h = 0.0;
  double r_min = 0.0;
  double sharp = 0.0;  ///< sharp modular (theorem sweep) or sharp norm (norm sweep)
  double truncated_mass = 0.0;
  double closure_uncertainty = 0.0;
  double target = 0.0;
  double rel_error = 0.0;
  double sharp_modular = 0.0;  ///< rho_sharp(f) at lambda = 1, also recorded by the norm sweep
};

struct SweepReport {
  std::vector<SweepRow> rows;
  bool verdict = false;
  double bound = 0.0;
  std::string config_hash;
};

inline constexpr double kRelativeErrorFloor = 1e-30;

double relative_error(double value, double target);

/// Error weakly decreasing over the last k rows and final error <= bound.
bool sweep_verdict(const std::vector<SweepRow>& rows, double bound, int k = 3);

/// rho_Phi(c0 |grad f|) from the analytic gradient on the lattice of spacing h.
double gradient_energy(const MusielakOrliczFunction& phi, const TestFunction& f, double h);
/// c0 || |grad f| ||_Phi from the analytic gradient on the lattice of spacing h.
double gradient_norm_target(const MusielakOrliczFunction& phi, const TestFunction& f, double h);

/// Sharp modular against rho_Phi(c0 |grad f|) along the coupled schedule.
/// Throws PreconditionError naming the failed assumption.
SweepReport theorem_sweep(const MusielakOrliczFunction& phi, const TestFunction& f, const SweepSettings& settings);

/// Sharp norm against c0 || |grad f| ||_Phi along the coupled schedule.
SweepReport norm_sweep(const MusielakOrliczFunction& phi, const TestFunction& f, const SweepSettings& settings);

// ---------------------------------------------------------------------------
// Probes.

/// |M#_{B(x,r)}(f) - c0 r |grad f(x)|| against the Taylor remainder bound
///   (2/N) sum_y |R(x, y)| + d,   R(x, y) = f(y) - f(x) - grad f(x) . (y - x),
/// where d = |M#(affine part) - c0 r |grad f(x)|| is the lattice defect of the
/// affine law. hessian_rhs replaces |R| by (1/2) H |y - x|^2 with H the largest
/// sampled Hessian norm on the ball.
struct RemainderProbe {
  Point x{};
  double r = 0.0;
  double lhs = 0.0;
  double remainder_mean = 0.0;  ///< (2/N) sum |R|
  double defect = 0.0;
  double rhs = 0.0;
  double hessian_rhs = 0.0;
  double slack = 0.0;  ///< rhs - lhs
};

RemainderProbe remainder_probe(const TestFunction& f, const SampledField& samples, const Index& centre, double r);

/// max over interior x of M#_{B(x,r)}(f) / (r * mean_B |grad f|).
struct PoincareRow {
  double r = 0.0;
  double max_ratio = 0.0;
  Point worst{};
  std::size_t points = 0;
};

std::vector<PoincareRow> poincare_probe(const TestFunction& f, const Grid& grid, const std::vector<double>& radii);

/// min over grid points of (G * M#(f)(., r))(x) - M#(G * f)(x, r).
struct CommutationProbe {
  double worst_slack = kInfinity;
  Index worst{};
  std::size_t points = 0;
};

CommutationProbe commutation_probe(const SampledField& f, double r, const Mollifier& g);

/// rho_Phi(c0 |grad(G_delta * f)|) over a fixed box for each delta, next to
/// the growth base (rho_sharp(f) + 1)^gamma_hat.
struct EnergyRow {
  double delta = 0.0;
  double energy = 0.0;
};

struct MollifiedEnergyTable {
  std::vector<EnergyRow> rows;
  double sharp_modular = 0.0;
  double gamma_hat = 0.0;
  double growth_base = 0.0;
  double box_half_width = 0.0;

  /// Smallest K with energy <= K growth_base on every row.
  double required_constant() const;
  bool bounded_by(double k) const { return required_constant() <= k; }
};

MollifiedEnergyTable mollified_energy_probe(const MusielakOrliczFunction& phi, const TestFunction& f, const Grid& grid,
                                            const std::vector<double>& deltas, const PsiFamily& family,
                                            const RQuadratureOptions& rq_options = {});

}  // namespace mosharp
