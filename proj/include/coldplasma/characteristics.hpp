#pragma once

#include <vector>

#include "coldplasma/numerics.hpp"

namespace coldplasma {

enum class Side { Minus, Plus };

/// One medium: constant background density and its initial constant state.
struct SideData {
  double n = 1.0;   ///< background density, > 0
  double V0 = 0.0;  ///< initial velocity
  double E0 = 0.0;  ///< initial electric field
  double x0 = 0.0;  ///< abscissa where the trajectory starts

  void validate() const;
  double frequency() const;  ///< sqrt(n)
};

/// Riemann data at the interface of two media. `left` is the x < Phi side.
struct RiemannProblem {
  SideData left;
  SideData right;
  double phi0 = 0.0;

  /// Builds a problem whose trajectories both start at phi0; validates the data.
  static RiemannProblem make(SideData left, SideData right, double phi0 = 0.0);

  const SideData& side(Side s) const { return s == Side::Minus ? left : right; }

  double jump_V() const { return right.V0 - left.V0; }
  double jump_E() const { return right.E0 - left.E0; }
  double alpha() const { return right.n - left.n; }  ///< [n] = n+ - n-
  double r() const;                                  ///< sqrt(n-)/sqrt(n+)
};

struct SideState {
  double V = 0.0;
  double E = 0.0;
};

struct CharacteristicState {
  double t = 0.0;
  double V = 0.0;
  double E = 0.0;
  double x = 0.0;
};

/// Constant state carried by the Lagrangian trajectory at time t.
SideState state_at(const SideData& side, double t);

/// Lagrangian trajectory x(t) from side.x0.
double trajectory_at(const SideData& side, double t);

/// K = [n V^2 + E^2]^0, the jump of n V^2 + E^2 which is conserved along the trajectories.
double jump_invariant_K(const RiemannProblem& problem);

/// K re-evaluated from the side states at time t (equal to the initial K).
double jump_invariant_at(const RiemannProblem& problem, double t);

/// Three full periods of the slower medium.
double default_horizon(const RiemannProblem& problem);

/// Smallest t > root_tol with x-(t) = x+(t).
/// Throws NotFound when no crossing exists below the horizon and Coincident
/// when the two trajectories agree on the whole grid.
double first_intersection(const RiemannProblem& problem, const SolverSettings& settings,
                          double horizon = 0.0);

/// Every crossing of x+ - x- in (0, horizon], ascending. Empty when none.
std::vector<double> intersection_times(const RiemannProblem& problem, double horizon,
                                       const SolverSettings& settings);

/// At an instant where sin(sqrt(n) T) = 0 and cos(sqrt(n) T) != 1 for some side,
/// the trajectories meet iff E+^0/n+ = E-^0/n-. Throws Inapplicable otherwise.
bool degenerate_intersection_check(const RiemannProblem& problem, double T,
                                   const SolverSettings& settings);

enum class InitialRegime { ShockFirst, RarefactionFirst };

/// ShockFirst iff V-^0 > V+^0; throws DegenerateData when the velocities coincide.
InitialRegime classify_initial_regime(const RiemannProblem& problem);

/// Which of the customary sign restrictions on the data hold. Input is never
/// rejected on their account.
struct SignAssumptions {
  bool v_minus_negative = false;
  bool jump_v_negative = false;
  bool e_minus_negative = false;
  bool jump_e_negative = false;

  bool all() const { return v_minus_negative && jump_v_negative && e_minus_negative && jump_e_negative; }
};

SignAssumptions sign_assumptions(const RiemannProblem& problem);

/// Fixed-step classical RK4 integration of dV/dt = -E, dE/dt = n V, dx/dt = V.
/// Test oracle for state_at / trajectory_at; independent of integrate_ode.
CharacteristicState oracle_characteristic(const SideData& side, double t, const SolverSettings& settings);

/// RK4 oracle sampled on a uniform grid of `cells` steps over [0, t_end].
std::vector<CharacteristicState> oracle_characteristic_path(const SideData& side, double t_end,
                                                            std::size_t cells);

}  // namespace coldplasma
