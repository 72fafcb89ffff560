#pragma once

#include <optional>
#include <vector>

#include "coldplasma/characteristics.hpp"

namespace coldplasma {

/// A rarefaction region opens at `t_open` (an intersection of x- and x+) and
/// closes `duration` later. Coefficients inside are computed in the local time
/// t - t_open; public functions take absolute times.
struct FanGeometry {
  double t_open = 0.0;
  double duration = 0.0;

  double t_close() const { return t_open + duration; }
};

/// In-fan affine solution V = a x + b, E = c x + d and regular density n - c.
struct RarefactionCoeffs {
  double t = 0.0;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double density = 0.0;
};

/// B = (1 - cos(sqrt(n) T)) / sin(sqrt(n) T) = tan(sqrt(n) T / 2); the limit 0
/// when sin = 0 and cos = 1. Throws DegenerateB at half-wave resonance (cos = -1).
double b_coefficient(double n, double T_star, const SolverSettings& settings);

/// The side's constant state at the fan opening, used as the fan's local initial data.
SideData side_at_opening(const SideData& side, double t_open);

/// Fan coefficients at absolute time t (requires t_open < t < t_close).
/// Throws BoundarySingularity when the common denominator vanishes.
RarefactionCoeffs coeffs_at(const SideData& side, double t, const FanGeometry& fan,
                            const SolverSettings& settings);

/// Interior instants (absolute) where the fan of this side collapses: all its
/// characteristics refocus and a, c diverge. Empty when the fan is regular.
std::vector<double> fan_singular_times(const SideData& side, const FanGeometry& fan);

/// Abscissa where c- x + d- = c+ x + d+. Throws UndefinedCurve when c+ = c-.
double psi1(const RiemannProblem& problem, double t, const FanGeometry& fan, const SolverSettings& settings);

/// Psi2+ = (E+(t) - d-)/c- for side Plus and Psi2- = (E-(t) - d+)/c+ for side Minus.
double psi2(const RiemannProblem& problem, Side side, double t, const FanGeometry& fan,
            const SolverSettings& settings);

struct SwitchPoint {
  double t = 0.0;
  Side side = Side::Plus;
};

struct SwitchSearch {
  std::vector<SwitchPoint> points;  ///< ascending
  std::vector<Side> host_sides;     ///< characteristics that were searched
  std::vector<double> psi1_roots;   ///< roots of Psi1 - x_side, all searched sides
  std::vector<double> psi2_roots;   ///< roots of Psi2 - x_side, all searched sides
  std::optional<Diagnostic> inconsistency;
};

/// Characteristics that can host a switch. A side whose fan collapses inside
/// the region cannot keep its wave across it and hosts the switches; when
/// both or neither fan collapses, both characteristics are searched.
std::vector<Side> switch_host_sides(const RiemannProblem& problem, const FanGeometry& fan);

/// Instants in (t_lo, t_hi) where Psi1 = Psi2 = x_side, ascending.
/// Equal background densities bypass the search (the fan is continuous).
SwitchSearch find_switch_points(const RiemannProblem& problem, double t_lo, double t_hi, const FanGeometry& fan,
                                const SolverSettings& settings);

/// -[E] at the switch, evaluated with the remaining wave's affine field at x_side.
double switch_amplitude(const RiemannProblem& problem, const SwitchPoint& point, const FanGeometry& fan,
                        const SolverSettings& settings);

// ---------------------------------------------------------------------------
// Values adjacent to the interface

enum class SideModel { Constant, Fan };

/// Regular density, velocity and field on one side of the interface at x.
struct SideProfile {
  double rho = 0.0;
  double V = 0.0;
  double E = 0.0;
};

SideProfile side_profile(const SideData& side, SideModel model, double t, double x, const FanGeometry* fan,
                         const SolverSettings& settings);

/// -[rho V] + [rho] dphi: the amplitude growth rate e'.
double mass_flux(const SideProfile& left, const SideProfile& right, double dphi);

/// -[rho V^3] + [rho V^2 + E^2] dphi: the rate (e dphi^2)'.
double energy_flux(const SideProfile& left, const SideProfile& right, double dphi);

}  // namespace coldplasma
