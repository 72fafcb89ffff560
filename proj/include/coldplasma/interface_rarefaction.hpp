#pragma once

#include <optional>
#include <vector>

#include "coldplasma/segment.hpp"

namespace coldplasma {

enum class InterfaceRegime {
  TwoSided,           ///< rarefaction waves on both sides of the interface
  OneSidedLeftWave,   ///< wave on the left, constant (+) state on the right
  OneSidedRightWave,  ///< constant (-) state on the left, wave on the right
};

SegmentKind segment_kind(InterfaceRegime regime);

struct RarefactionInterfaceState {
  double t = 0.0;
  double phi = 0.0;
  double dphi = 0.0;
  double e = 0.0;
  InterfaceRegime regime = InterfaceRegime::TwoSided;
};

struct InterfaceRates {
  double ddphi = 0.0;
  double de = 0.0;
};

/// Energy rate (e phi'^2)' between the two fans, from the jump form
/// -[(n-c)(a phi+b)^3] + [(n-c)(a phi+b)^2 + (c phi+d)^2] phi'.
double two_sided_energy_flux(const RiemannProblem& problem, const FanGeometry& fan, double t, double phi,
                             double dphi, const SolverSettings& settings);

/// The same rate written as a polynomial in phi (binomial expansion of the cube and square).
double two_sided_energy_flux_expanded(const RiemannProblem& problem, const FanGeometry& fan, double t, double phi,
                                      double dphi, const SolverSettings& settings);

/// Rates for the interface between the two fans. Throws Degeneracy when e or phi'
/// is below degeneracy_eps.
InterfaceRates two_sided_rhs(const RiemannProblem& problem, const FanGeometry& fan, double t, double phi,
                             double dphi, double e, const SolverSettings& settings);

/// Rates for an interface with a wave on `wave_side` and the other side's constant state.
InterfaceRates one_sided_rhs(const RiemannProblem& problem, const FanGeometry& fan, double t, double phi,
                             double dphi, double e, Side wave_side, const SolverSettings& settings);

InterfaceRates interface_rhs(const RiemannProblem& problem, const FanGeometry& fan, InterfaceRegime regime,
                             double t, double phi, double dphi, double e, const SolverSettings& settings);

struct ConditionCheck {
  bool holds = false;
  double margin = 0.0;      ///< signed slack of the regime inequality, >= 0 when it holds
  bool degenerate = false;  ///< both sides carry the same field: the inequality is an identity
};

/// TwoSided: (c- phi + d-) - (c+ phi + d+); OneSidedLeftWave: (c- phi + d-) - E+;
/// OneSidedRightWave: E- - (c+ phi + d+).
ConditionCheck condition_monitor(const RiemannProblem& problem, const FanGeometry& fan,
                                 const RarefactionInterfaceState& state, const SolverSettings& settings);

struct ConjugationInfo {
  double C = 0.0;
  double slope = 0.0;
  bool feasible = false;  ///< 0 <= C <= 1
};

/// Interface speed at a junction with the fan, assuming the interface is C^1 there.
/// TwoSided: V- + C [V] with C = 1/(1 - (B+/B-) r); one-sided: V- or V+.
/// Throws DegenerateB when B- = 0 (C undefined).
ConjugationInfo conjugation_slope(const RiemannProblem& problem, const FanGeometry& fan, double t_junction,
                                  InterfaceRegime regime, const SolverSettings& settings);

/// tan(sqrt(n+) T/2) / tan(sqrt(n-) T/2) <= 0. Throws DegenerateB when the ratio is undefined.
bool smoothness_feasible(const RiemannProblem& problem, double T_star, const SolverSettings& settings);

struct RarefactionBoundary {
  double phi_entry = 0.0;
  double e_entry = 0.0;
  double phi_exit = 0.0;              ///< target position at the end of the region
  std::optional<double> slope_guess;  ///< entry slope hint (conjugation slope when feasible)
};

/// Solves the interface across a rarefaction region split by switch points.
/// Sub-intervals alternate between the two-sided system and the one-sided system
/// matching each switch's host side; each is shot on its entry slope to hit the
/// position on the characteristic at its end. Never throws for a failed piece:
/// incomplete segments carry typed diagnostics with the last valid state.
std::vector<Segment> solve_rarefaction_interface(const RiemannProblem& problem, const FanGeometry& fan,
                                                 double t_lo, double t_hi,
                                                 const std::vector<SwitchPoint>& switch_points,
                                                 const RarefactionBoundary& bc, const SolverSettings& settings);

/// Regime of each sub-interval for the given switch points (first one two-sided).
std::vector<InterfaceRegime> regime_sequence(const std::vector<SwitchPoint>& switch_points);

}  // namespace coldplasma
