#include "coldplasma/characteristics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace coldplasma {

void SideData::validate() const {
  if (!std::isfinite(n) || !std::isfinite(V0) || !std::isfinite(E0) || !std::isfinite(x0)) {
    throw SolverError(ErrorKind::InvalidInput, "side data must be finite");
  }
  if (!(n > 0.0)) throw SolverError(ErrorKind::InvalidInput, "background density must be positive");
}

double SideData::frequency() const { return std::sqrt(n); }

RiemannProblem RiemannProblem::make(SideData left, SideData right, double phi0) {
  if (!std::isfinite(phi0)) throw SolverError(ErrorKind::InvalidInput, "phi0 must be finite");
  left.x0 = phi0;
  right.x0 = phi0;
  left.validate();
  right.validate();
  return RiemannProblem{left, right, phi0};
}

double RiemannProblem::r() const { return std::sqrt(left.n) / std::sqrt(right.n); }

SideState state_at(const SideData& side, double t) {
  const double w = side.frequency();
  const double s = std::sin(w * t);
  const double c = std::cos(w * t);
  return {-(side.E0 / w) * s + side.V0 * c, side.V0 * w * s + side.E0 * c};
}

double trajectory_at(const SideData& side, double t) {
  const double w = side.frequency();
  return (side.V0 / w) * std::sin(w * t) + (side.E0 / side.n) * (std::cos(w * t) - 1.0) + side.x0;
}

double jump_invariant_K(const RiemannProblem& p) {
  const auto energy = [](const SideData& s) { return s.n * s.V0 * s.V0 + s.E0 * s.E0; };
  return energy(p.right) - energy(p.left);
}

double jump_invariant_at(const RiemannProblem& p, double t) {
  const auto energy = [t](const SideData& s) {
    const SideState st = state_at(s, t);
    return s.n * st.V * st.V + st.E * st.E;
  };
  return energy(p.right) - energy(p.left);
}

double default_horizon(const RiemannProblem& p) {
  const double slow = std::min(p.left.frequency(), p.right.frequency());
  return 3.0 * 2.0 * std::numbers::pi / slow;
}

namespace {

double gap(const RiemannProblem& p, double t) { return trajectory_at(p.right, t) - trajectory_at(p.left, t); }

std::vector<double> crossings(const RiemannProblem& p, double t_lo, double t_hi, const SolverSettings& settings) {
  const auto g = [&p](double t) { return gap(p, t); };
  const BracketScan scan = bracket_roots(g, t_lo, t_hi, settings.grid_for(t_hi - t_lo));
  if (scan.all_zero) {
    throw SolverError(ErrorKind::Coincident, "trajectories x- and x+ coincide; intersection set is not discrete");
  }
  std::vector<double> roots;
  roots.reserve(scan.brackets.size());
  for (const auto& b : scan.brackets) roots.push_back(refine_root(g, b, settings.root_tol));
  return roots;
}

}  // namespace

double first_intersection(const RiemannProblem& p, const SolverSettings& settings, double horizon) {
  if (horizon <= 0.0) horizon = default_horizon(p);
  const double eps = settings.root_tol;
  if (!(horizon > eps)) throw SolverError(ErrorKind::InvalidInput, "horizon must exceed root_tol");
  const auto roots = crossings(p, eps, horizon, settings);
  if (roots.empty()) {
    throw SolverError(ErrorKind::NotFound, "trajectories do not intersect before the horizon", horizon);
  }
  return roots.front();
}

std::vector<double> intersection_times(const RiemannProblem& p, double horizon, const SolverSettings& settings) {
  if (!(horizon > 0.0)) throw SolverError(ErrorKind::InvalidInput, "horizon must be positive");
  const double eps = settings.root_tol;
  if (horizon <= eps) return {};
  return crossings(p, eps, horizon, settings);
}

bool degenerate_intersection_check(const RiemannProblem& p, double T, const SolverSettings& settings) {
  const double eps = settings.degeneracy_eps;
  bool applicable = false;
  for (const SideData* s : {&p.left, &p.right}) {
    const double w = s->frequency();
    if (std::abs(std::sin(w * T)) <= eps && std::abs(std::cos(w * T) - 1.0) > eps) applicable = true;
  }
  if (!applicable) {
    throw SolverError(ErrorKind::Inapplicable,
                      "check requires sin(sqrt(n) T) = 0 and cos(sqrt(n) T) != 1 on at least one side", T);
  }
  return std::abs(p.right.E0 / p.right.n - p.left.E0 / p.left.n) <= eps;
}

InitialRegime classify_initial_regime(const RiemannProblem& p) {
  if (p.left.V0 == p.right.V0) {
    throw SolverError(ErrorKind::DegenerateData, "V-^0 = V+^0: neither a shock nor a rarefaction opens");
  }
  return p.left.V0 > p.right.V0 ? InitialRegime::ShockFirst : InitialRegime::RarefactionFirst;
}

SignAssumptions sign_assumptions(const RiemannProblem& p) {
  return {p.left.V0 < 0.0, p.jump_V() < 0.0, p.left.E0 < 0.0, p.jump_E() < 0.0};
}

namespace {

using Triple = std::array<double, 3>;  // V, E, x

Triple characteristic_rhs(double n, const Triple& y) { return {-y[1], n * y[0], y[0]}; }

Triple rk4_step(double n, const Triple& y, double h) {
  const auto axpy = [](const Triple& a, double s, const Triple& b) {
    return Triple{a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]};
  };
  const Triple k1 = characteristic_rhs(n, y);
  const Triple k2 = characteristic_rhs(n, axpy(y, 0.5 * h, k1));
  const Triple k3 = characteristic_rhs(n, axpy(y, 0.5 * h, k2));
  const Triple k4 = characteristic_rhs(n, axpy(y, h, k3));
  Triple out;
  for (int i = 0; i < 3; ++i) out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

constexpr double kOracleStep = 1e-3;

}  // namespace

CharacteristicState oracle_characteristic(const SideData& side, double t, const SolverSettings& settings) {
  const double h_max = std::min(kOracleStep, settings.max_step);
  const auto steps = static_cast<std::size_t>(std::ceil(std::abs(t) / h_max));
  Triple y{side.V0, side.E0, side.x0};
  if (steps == 0) return {t, y[0], y[1], y[2]};
  const double h = t / static_cast<double>(steps);
  for (std::size_t i = 0; i < steps; ++i) y = rk4_step(side.n, y, h);
  return {t, y[0], y[1], y[2]};
}

std::vector<CharacteristicState> oracle_characteristic_path(const SideData& side, double t_end, std::size_t cells) {
  std::vector<CharacteristicState> out;
  out.reserve(cells + 1);
  Triple y{side.V0, side.E0, side.x0};
  out.push_back({0.0, y[0], y[1], y[2]});
  const double h = t_end / static_cast<double>(cells);
  for (std::size_t i = 1; i <= cells; ++i) {
    y = rk4_step(side.n, y, h);
    out.push_back({h * static_cast<double>(i), y[0], y[1], y[2]});
  }
  return out;
}

}  // namespace coldplasma
