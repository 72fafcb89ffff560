#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coldplasma/diagnostics.hpp"

namespace coldplasma {

/// Tolerances and limits shared by every solver in the library.
struct SolverSettings {
  double root_tol = 1e-12;         ///< bracket width on t for root refinement
  double ode_rel_tol = 1e-10;
  double ode_abs_tol = 1e-12;
  double max_step = 0.05;
  double shoot_tol = 1e-9;         ///< boundary residual accepted by shooting
  int shoot_max_iter = 60;
  double event_refine_tol = 1e-12;
  double degeneracy_eps = 1e-9;
  int bracket_grid = 2048;         ///< bracketing subintervals per 2*pi of time

  /// Throws SolverError(InvalidInput) when a tolerance is not positive or the grid is too coarse.
  void validate() const;

  /// Number of uniform bracketing cells for a time span, scaled from bracket_grid.
  int grid_for(double span) const;
};

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  double f_lo = 0.0;
  double f_hi = 0.0;
};

using ScalarFunction = std::function<double(double)>;

struct BracketScan {
  std::vector<Bracket> brackets;
  std::size_t non_finite_nodes = 0;
  bool all_zero = false;  ///< every finite node evaluated to (numerical) zero
};

/// Scans a uniform grid of `grid` cells on (t0, t1) and returns every sign
/// change. Exact zeros at nodes count as positive so a root sitting on a node
/// is reported once; a zero on the last node is reported as a root at t1.
BracketScan bracket_roots(const ScalarFunction& f, double t0, double t1, int grid);

/// Shrinks a sign-change bracket to width <= tol.
double refine_root(const ScalarFunction& f, const Bracket& bracket, double tol);

// ---------------------------------------------------------------------------
// ODE integration

using State = std::vector<double>;
/// dydt = rhs(t, y); may throw SolverError to signal a degeneracy.
using OdeRhs = std::function<void(double t, const State& y, State& dydt)>;

struct EventFunction {
  std::string id;
  std::function<double(double t, const State& y)> g;
  bool terminal = true;
  int direction = 0;  ///< 0 any crossing, +1 rising only, -1 falling only
};

struct PathSample {
  double t = 0.0;
  State y;
};

struct EventHit {
  std::string id;
  double t = 0.0;
  State y;
};

struct IntegrationPath {
  std::vector<PathSample> samples;
  std::vector<EventHit> events;
  std::optional<EventHit> terminal_event;
  std::optional<Diagnostic> stall;  ///< set when integration could not reach the requested end

  bool reached_end() const { return !terminal_event && !stall; }
  const PathSample& back() const { return samples.back(); }
};

struct IntegrationOptions {
  std::vector<EventFunction> events;
  /// 0 records every accepted step; otherwise samples on a uniform grid of
  /// this many cells from the dense output (event and end points are added).
  std::size_t dense_samples = 0;
};

/// Adaptive Dormand-Prince 5(4) integration on [t0, t1] with event location.
/// Degeneracies (underflowing step size, non-finite rhs, SolverError thrown by
/// the rhs) end the path early with `stall` set; the path keeps every valid sample.
IntegrationPath integrate_ode(const OdeRhs& rhs, const State& y0, double t0, double t1,
                              const SolverSettings& settings,
                              const IntegrationOptions& options = {});

// ---------------------------------------------------------------------------
// Shooting

struct ShotOutcome {
  double residual = 0.0;
  bool reached = false;  ///< the trajectory reached the terminal time
};

using ShotFunction = std::function<ShotOutcome(double slope)>;

struct SlopeRange {
  double lo = 0.0;
  double hi = 0.0;
};

struct ShootingResult {
  std::vector<double> solutions;  ///< every converged slope, ascending
  double best_slope = 0.0;
  double best_residual = 0.0;
  std::optional<Diagnostic> diagnostic;

  bool converged() const { return !solutions.empty(); }
};

/// Finds initial slopes in `range` whose terminal residual is within shoot_tol.
/// The range is scanned on `scan_points` nodes (plus `guess`), each sign change
/// of the residual is refined by false position with bisection fallback.
/// Never throws for a missing solution: `diagnostic` carries NoSolution or NonConvergence.
ShootingResult shoot_bvp(const ShotFunction& shot, SlopeRange range, std::optional<double> guess,
                         const SolverSettings& settings, int scan_points = 24);

/// Shooting driven by an IVP builder and a residual of the terminal state.
ShootingResult shoot_bvp(const std::function<IntegrationPath(double slope)>& ivp,
                         const std::function<double(const PathSample& terminal)>& boundary_residual,
                         SlopeRange range, std::optional<double> guess,
                         const SolverSettings& settings);

}  // namespace coldplasma
