#pragma once

#include <optional>
#include <vector>

#include "coldplasma/segment.hpp"

namespace coldplasma {

/// Coefficients of the second-order interface equation between constant states.
/// The amplitude is e = alpha * phi + beta(t) along the shock.
struct ShockContext {
  double alpha = 0.0;  ///< n+ - n-
  double K = 0.0;
  double T0 = 0.0;
  double phi0 = 0.0;
  double e0 = 0.0;  ///< amplitude at T0

  /// e0 defaults to -[E(T0)], the amplitude created by the field jump.
  static ShockContext make(const RiemannProblem& problem, double T0, double phi0,
                           std::optional<double> e0 = std::nullopt);

  double beta(const RiemannProblem& problem, double t) const;   ///< -[E(t)] - alpha phi0 + offset
  double dbeta(const RiemannProblem& problem, double t) const;  ///< -[n V(t)]
  double sigma(const RiemannProblem& problem, double t) const;  ///< [n V(t)^3]
  double amplitude(const RiemannProblem& problem, double t, double phi) const;
};

/// e(t) = -[E(t)] + [n](phi - phi0), shifted so that e(T0) = e0 when e0 is given.
double e_on_shock(const RiemannProblem& problem, double t, double phi, double phi0, double T0,
                  std::optional<double> e0 = std::nullopt);

/// phi'' from phi' (2 e phi'' + alpha phi'^2 + beta' phi' - K) = -sigma.
/// Throws Degeneracy when phi' or e is below degeneracy_eps.
double shock_rhs(const RiemannProblem& problem, const ShockContext& ctx, double t, double phi, double dphi,
                 const SolverSettings& settings);

/// [min(V-, V+), max(V-, V+)] at t: the admissible interface speeds.
struct SpeedCone {
  double lo = 0.0;
  double hi = 0.0;
};
SpeedCone admissible_cone(const RiemannProblem& problem, double t);

/// Integrates the shock interface from (T0, phi0, dphi0) towards T_end,
/// stopping at an admissibility violation, e -> 0 or phi' -> 0.
Segment solve_shock_ivp(const RiemannProblem& problem, double T0, double T_end, double phi0, double dphi0,
                        const SolverSettings& settings, std::optional<double> e0 = std::nullopt);

struct ShockBvpSolution {
  Segment segment;
  std::vector<double> slopes;  ///< every accepted shooting slope
  bool ambiguous = false;      ///< more than one slope satisfies e >= 0 and admissibility
};

/// Shoots phi'(T0) over the admissible cone so that phi(T_end) = phi_target.
/// A failed search yields an incomplete segment carrying a NoSolution diagnostic.
ShockBvpSolution solve_shock_bvp(const RiemannProblem& problem, double T0, double T_end, double phi0,
                                 double phi_target, const SolverSettings& settings,
                                 std::optional<double> e0 = std::nullopt,
                                 std::optional<double> slope_guess = std::nullopt);

struct RhResidual {
  double r1_max = 0.0;  ///< mass balance e' + [rho V] - [rho] phi'
  double r2_max = 0.0;  ///< energy balance (e phi'^2/2)' + [rho V^3/2] - [(rho V^2 + E^2)/2] phi'
};

/// Central-difference residuals of both jump conditions over the segment samples.
RhResidual rh_residual(const RiemannProblem& problem, const Segment& segment, const SolverSettings& settings);

}  // namespace coldplasma
