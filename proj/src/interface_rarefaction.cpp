#include "coldplasma/interface_rarefaction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace coldplasma {

SegmentKind segment_kind(InterfaceRegime regime) {
  switch (regime) {
    case InterfaceRegime::OneSidedLeftWave:
      return SegmentKind::RarefactionOneSidedLeftWave;
    case InterfaceRegime::OneSidedRightWave:
      return SegmentKind::RarefactionOneSidedRightWave;
    case InterfaceRegime::TwoSided:
      break;
  }
  return SegmentKind::RarefactionTwoSided;
}

namespace {

std::pair<SideProfile, SideProfile> regime_sides(const RiemannProblem& p, const FanGeometry& fan,
                                                 InterfaceRegime regime, double t, double phi,
                                                 const SolverSettings& settings) {
  const auto [ml, mr] = side_models(segment_kind(regime));
  return {side_profile(p.left, ml, t, phi, &fan, settings), side_profile(p.right, mr, t, phi, &fan, settings)};
}

InterfaceRates rates_from_sides(const SideProfile& l, const SideProfile& r, double t, double phi, double dphi,
                                double e, const SolverSettings& settings) {
  if (std::abs(dphi) <= settings.degeneracy_eps) {
    throw SolverError(ErrorKind::Degeneracy, "interface speed vanishes (Phi' = 0)", t, {phi, dphi, e});
  }
  if (std::abs(e) <= settings.degeneracy_eps) {
    throw SolverError(ErrorKind::Degeneracy, "interface amplitude vanishes (e = 0)", t, {phi, dphi, e});
  }
  InterfaceRates out;
  out.de = mass_flux(l, r, dphi);
  out.ddphi = (energy_flux(l, r, dphi) - out.de * dphi * dphi) / (2.0 * e * dphi);
  return out;
}

}  // namespace

double two_sided_energy_flux(const RiemannProblem& p, const FanGeometry& fan, double t, double phi, double dphi,
                             const SolverSettings& settings) {
  const auto [l, r] = regime_sides(p, fan, InterfaceRegime::TwoSided, t, phi, settings);
  return energy_flux(l, r, dphi);
}

double two_sided_energy_flux_expanded(const RiemannProblem& p, const FanGeometry& fan, double t, double phi,
                                      double dphi, const SolverSettings& settings) {
  const RarefactionCoeffs m = coeffs_at(p.left, t, fan, settings);
  const RarefactionCoeffs q = coeffs_at(p.right, t, fan, settings);
  // The cubic cancels heavily near a collapse; accumulate in extended precision.
  using ld = long double;
  const auto jump = [&](auto f) { return f(q) - f(m); };
  const ld r3 = jump([](const RarefactionCoeffs& k) { return ld(k.density) * k.a * k.a * k.a; });
  const ld r2 = jump([](const RarefactionCoeffs& k) { return ld(k.density) * k.a * k.a * k.b; });
  const ld r1 = jump([](const RarefactionCoeffs& k) { return ld(k.density) * k.a * k.b * k.b; });
  const ld r0 = jump([](const RarefactionCoeffs& k) { return ld(k.density) * k.b * k.b * k.b; });
  const ld s2 = jump([](const RarefactionCoeffs& k) { return ld(k.density) * k.a * k.a + ld(k.c) * k.c; });
  const ld s1 = jump([](const RarefactionCoeffs& k) { return ld(k.density) * k.a * k.b + ld(k.c) * k.d; });
  const ld s0 = jump([](const RarefactionCoeffs& k) { return ld(k.density) * k.b * k.b + ld(k.d) * k.d; });
  const ld x = phi;
  const ld cubic = ((r3 * x + 3 * r2) * x + 3 * r1) * x + r0;
  const ld quad = (s2 * x + 2 * s1) * x + s0;
  return static_cast<double>(-cubic + quad * ld(dphi));
}

InterfaceRates two_sided_rhs(const RiemannProblem& p, const FanGeometry& fan, double t, double phi, double dphi,
                             double e, const SolverSettings& settings) {
  const auto [l, r] = regime_sides(p, fan, InterfaceRegime::TwoSided, t, phi, settings);
  return rates_from_sides(l, r, t, phi, dphi, e, settings);
}

InterfaceRates one_sided_rhs(const RiemannProblem& p, const FanGeometry& fan, double t, double phi, double dphi,
                             double e, Side wave_side, const SolverSettings& settings) {
  const InterfaceRegime regime =
      wave_side == Side::Minus ? InterfaceRegime::OneSidedLeftWave : InterfaceRegime::OneSidedRightWave;
  const auto [l, r] = regime_sides(p, fan, regime, t, phi, settings);
  return rates_from_sides(l, r, t, phi, dphi, e, settings);
}

InterfaceRates interface_rhs(const RiemannProblem& p, const FanGeometry& fan, InterfaceRegime regime, double t,
                             double phi, double dphi, double e, const SolverSettings& settings) {
  const auto [l, r] = regime_sides(p, fan, regime, t, phi, settings);
  return rates_from_sides(l, r, t, phi, dphi, e, settings);
}

ConditionCheck condition_monitor(const RiemannProblem& p, const FanGeometry& fan,
                                 const RarefactionInterfaceState& s, const SolverSettings& settings) {
  const auto [l, r] = regime_sides(p, fan, s.regime, s.t, s.phi, settings);
  ConditionCheck out;
  out.margin = l.E - r.E;
  out.holds = out.margin >= 0.0;
  if (s.regime == InterfaceRegime::TwoSided) {
    const RarefactionCoeffs m = coeffs_at(p.left, s.t, fan, settings);
    const RarefactionCoeffs q = coeffs_at(p.right, s.t, fan, settings);
    out.degenerate = std::abs(m.c - q.c) <= settings.degeneracy_eps && std::abs(m.d - q.d) <= settings.degeneracy_eps;
  }
  return out;
}

ConjugationInfo conjugation_slope(const RiemannProblem& p, const FanGeometry& fan, double t_junction,
                                  InterfaceRegime regime, const SolverSettings& settings) {
  const double vm = state_at(p.left, t_junction).V;
  const double vp = state_at(p.right, t_junction).V;
  ConjugationInfo out;
  if (regime == InterfaceRegime::OneSidedLeftWave) {
    out = {0.0, vm, true};
    return out;
  }
  if (regime == InterfaceRegime::OneSidedRightWave) {
    out = {1.0, vp, true};
    return out;
  }
  const double bm = b_coefficient(p.left.n, fan.duration, settings);
  const double bp = b_coefficient(p.right.n, fan.duration, settings);
  if (std::abs(bm) <= settings.degeneracy_eps) {
    throw SolverError(ErrorKind::DegenerateB, "conjugation constant undefined: B- = 0", t_junction);
  }
  const double denom = 1.0 - (bp / bm) * p.r();
  out.C = denom == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / denom;
  out.slope = vm + out.C * (vp - vm);
  out.feasible = out.C >= 0.0 && out.C <= 1.0;
  return out;
}

bool smoothness_feasible(const RiemannProblem& p, double T_star, const SolverSettings& settings) {
  const double bm = b_coefficient(p.left.n, T_star, settings);
  const double bp = b_coefficient(p.right.n, T_star, settings);
  if (std::abs(bm) <= settings.degeneracy_eps) {
    throw SolverError(ErrorKind::DegenerateB, "tangent ratio undefined: tan(sqrt(n-) T/2) = 0", T_star);
  }
  return bp / bm <= 0.0;
}

std::vector<InterfaceRegime> regime_sequence(const std::vector<SwitchPoint>& switch_points) {
  std::vector<InterfaceRegime> out{InterfaceRegime::TwoSided};
  for (const SwitchPoint& sp : switch_points) {
    if (out.back() != InterfaceRegime::TwoSided) {
      out.push_back(InterfaceRegime::TwoSided);
    } else {
      // The host side loses its wave.
      out.push_back(sp.side == Side::Plus ? InterfaceRegime::OneSidedLeftWave : InterfaceRegime::OneSidedRightWave);
    }
  }
  return out;
}

namespace {

constexpr double kEntryOffset = 1e-6;
constexpr double kSpeedFloor = 1e-6;
constexpr double kMarginTol = 1e-8;
constexpr double kSwitchAmplitudeTol = 1e-4;

struct Piece {
  double ta = 0.0;
  double tb = 0.0;
  InterfaceRegime regime = InterfaceRegime::TwoSided;
  double phi_a = 0.0;
  double e_a = 0.0;
  double target = 0.0;
  bool ends_at_switch = false;
  std::optional<double> guess;
  std::string entry_event;
  std::string exit_event;
};

struct PieceRun {
  Segment segment;
  double reach = -std::numeric_limits<double>::infinity();  ///< last time integrated
};

PieceRun run_piece(const RiemannProblem& p, const FanGeometry& fan, const Piece& pc, double slope,
                   const SolverSettings& settings, std::size_t samples) {
  PieceRun out;
  Segment& seg = out.segment;
  seg.kind = segment_kind(pc.regime);
  seg.t_start = pc.ta;
  seg.t_end = pc.tb;
  seg.entry_event = pc.entry_event;
  seg.fan = fan;
  seg.entry_slope = slope;
  seg.points.push_back({pc.ta, pc.phi_a, slope, pc.e_a});
  out.reach = pc.ta;

  // The fan coefficients are singular on its boundary and e may start at zero:
  // step off the entry point along the entry slope and the mass balance.
  const double t0 = pc.ta + kEntryOffset;
  const double phi_s = pc.phi_a + slope * kEntryOffset;
  double e_s = pc.e_a;
  try {
    const auto [l, r] = regime_sides(p, fan, pc.regime, t0, phi_s, settings);
    e_s += kEntryOffset * mass_flux(l, r, slope);
    const double margin = l.E - r.E;
    if (margin < -kMarginTol) {
      std::ostringstream msg;
      msg << "regime condition violated at entry (margin " << margin << ")";
      seg.diagnostics.push_back({ErrorKind::ConditionViolated, msg.str(), pc.ta, {pc.phi_a, slope, pc.e_a}});
      seg.exit_event = "condition";
      return out;
    }
  } catch (const SolverError& err) {
    seg.diagnostics.push_back({err.kind(), err.what(), pc.ta, {pc.phi_a, slope, pc.e_a}});
    seg.exit_event = "stall";
    return out;
  }
  if (e_s <= settings.degeneracy_eps) {
    seg.diagnostics.push_back({ErrorKind::Degeneracy, "amplitude does not grow from its entry value", pc.ta,
                               {pc.phi_a, slope, pc.e_a}});
    seg.exit_event = "amplitude_zero";
    return out;
  }

  const OdeRhs rhs = [&](double t, const State& y, State& dy) {
    const InterfaceRates k = interface_rhs(p, fan, pc.regime, t, y[0], y[1], y[2], settings);
    dy[0] = y[1];
    dy[1] = k.ddphi;
    dy[2] = k.de;
  };
  IntegrationOptions opts;
  opts.dense_samples = samples;
  opts.events.push_back({"amplitude_zero", [](double, const State& y) { return y[2]; }, true, -1});
  opts.events.push_back({"speed_zero", [](double, const State& y) { return std::abs(y[1]) - kSpeedFloor; }, true,
                         -1});
  opts.events.push_back({"condition",
                         [&](double t, const State& y) {
                           const auto [l, r] = regime_sides(p, fan, pc.regime, t, y[0], settings);
                           return (l.E - r.E) + kMarginTol;
                         },
                         true, -1});
  if (pc.regime == InterfaceRegime::TwoSided) {
    // Between two waves the interface cannot leave the fan.
    opts.events.push_back({"fan_exit",
                           [&](double t, const State& y) {
                             const double xm = trajectory_at(p.left, t);
                             const double xp = trajectory_at(p.right, t);
                             const double width = std::abs(xp - xm);
                             return std::min(y[0] - std::min(xm, xp), std::max(xm, xp) - y[0]) + 1e-6 * (1.0 + width);
                           },
                           true, -1});
  }

  const IntegrationPath path = integrate_ode(rhs, {phi_s, slope, e_s}, t0, pc.tb, settings, opts);
  for (const PathSample& s : path.samples) {
    if (s.t - seg.points.back().t < 1e-13) continue;
    seg.points.push_back({s.t, s.y[0], s.y[1], s.y[2]});
  }
  out.reach = seg.points.back().t;
  if (path.stall) {
    const Diagnostic& d = *path.stall;
    if (d.state.size() == 3 && d.t > seg.points.back().t + 1e-13) {
      seg.points.push_back({d.t, d.state[0], d.state[1], d.state[2]});
      out.reach = d.t;
    }
    seg.diagnostics.push_back(d);
    seg.exit_event = "stall";
  } else if (path.terminal_event) {
    const EventHit& ev = *path.terminal_event;
    // An amplitude zero right at a switch is the expected arrival.
    if (ev.id == "amplitude_zero" && pc.ends_at_switch && pc.tb - ev.t <= 1e-6) {
      seg.complete = true;
      seg.exit_event = pc.exit_event;
      return out;
    }
    seg.exit_event = ev.id;
    const ErrorKind kind =
        ev.id == "condition" || ev.id == "fan_exit" ? ErrorKind::ConditionViolated : ErrorKind::Degeneracy;
    seg.diagnostics.push_back({kind, "interface integration stopped by event " + ev.id, ev.t, ev.y});
  } else {
    seg.complete = true;
    seg.exit_event = pc.exit_event;
  }
  return out;
}

double surrogate(const Segment& seg, double tb, double target) {
  const InterfacePoint& last = seg.points.back();
  return last.phi + last.dphi * (tb - last.t) - target;
}

Segment solve_piece(const RiemannProblem& p, const FanGeometry& fan, const Piece& pc,
                    const SolverSettings& settings) {
  const double vm = state_at(p.left, pc.ta).V;
  const double vp = state_at(p.right, pc.ta).V;
  SlopeRange range{std::min(vm, vp), std::max(vm, vp)};
  if (!(range.hi - range.lo > settings.degeneracy_eps)) {
    const double pad = std::max(1e-3, 1e-3 * std::abs(range.lo));
    range = {range.lo - pad, range.hi + pad};
  }

  double furthest_slope = 0.5 * (range.lo + range.hi);
  double furthest_reach = -std::numeric_limits<double>::infinity();
  const ShotFunction shot = [&](double slope) {
    const PieceRun run = run_piece(p, fan, pc, slope, settings, 0);
    if (run.reach > furthest_reach) {
      furthest_reach = run.reach;
      furthest_slope = slope;
    }
    return ShotOutcome{surrogate(run.segment, pc.tb, pc.target), run.segment.complete};
  };
  const ShootingResult shooting = shoot_bvp(shot, range, pc.guess, settings);

  if (shooting.converged()) {
    std::size_t pick = 0;
    if (pc.guess) {
      for (std::size_t i = 1; i < shooting.solutions.size(); ++i) {
        if (std::abs(shooting.solutions[i] - *pc.guess) < std::abs(shooting.solutions[pick] - *pc.guess)) pick = i;
      }
    }
    Segment seg = run_piece(p, fan, pc, shooting.solutions[pick], settings, kSegmentSamples).segment;
    if (shooting.solutions.size() > 1) {
      std::ostringstream msg;
      msg << shooting.solutions.size() << " entry slopes reach the target; kept " << seg.entry_slope;
      seg.diagnostics.push_back({ErrorKind::Inconsistency, msg.str(), pc.ta, shooting.solutions});
    }
    if (seg.complete && pc.ends_at_switch) {
      const InterfacePoint& last = seg.points.back();
      if (std::abs(last.e) > kSwitchAmplitudeTol) {
        std::ostringstream msg;
        msg << "amplitude at the switch is " << last.e << ", not zero";
        seg.complete = false;
        seg.diagnostics.push_back({ErrorKind::NoSolution, msg.str(), last.t, {last.phi, last.dphi, last.e}});
      }
    }
    return seg;
  }

  const double slope = shooting.best_residual < std::numeric_limits<double>::infinity() ? shooting.best_slope
                                                                                         : furthest_slope;
  Segment seg = run_piece(p, fan, pc, slope, settings, kSegmentSamples).segment;
  seg.complete = false;
  Diagnostic d = shooting.diagnostic.value_or(Diagnostic{ErrorKind::NoSolution, "no entry slope reaches the target",
                                                         pc.ta, {}});
  const InterfacePoint& last = seg.points.back();
  std::ostringstream msg;
  msg << d.message << " (target " << pc.target << " at t = " << pc.tb << ", kept slope " << slope << ")";
  seg.diagnostics.push_back({d.kind, msg.str(), last.t, {last.phi, last.dphi, last.e}});
  return seg;
}

}  // namespace

std::vector<Segment> solve_rarefaction_interface(const RiemannProblem& p, const FanGeometry& fan, double t_lo,
                                                 double t_hi, const std::vector<SwitchPoint>& switch_points,
                                                 const RarefactionBoundary& bc, const SolverSettings& settings) {
  if (!(t_hi > t_lo)) throw SolverError(ErrorKind::InvalidInput, "rarefaction region needs t_hi > t_lo", t_lo);
  std::vector<SwitchPoint> inner;
  for (const SwitchPoint& sp : switch_points) {
    if (sp.t > t_lo && sp.t < t_hi) inner.push_back(sp);
  }
  std::sort(inner.begin(), inner.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
  const std::vector<InterfaceRegime> regimes = regime_sequence(inner);

  std::vector<Segment> out;
  for (std::size_t i = 0; i < regimes.size(); ++i) {
    Piece pc;
    pc.regime = regimes[i];
    pc.ta = i == 0 ? t_lo : inner[i - 1].t;
    pc.tb = i < inner.size() ? inner[i].t : t_hi;
    pc.ends_at_switch = i < inner.size();
    if (i == 0) {
      pc.phi_a = bc.phi_entry;
      pc.e_a = bc.e_entry;
      pc.guess = bc.slope_guess;
      pc.entry_event = "intersection";
    } else {
      // A switch fixes both position (on the host characteristic) and e = 0.
      pc.phi_a = trajectory_at(p.side(inner[i - 1].side), pc.ta);
      pc.e_a = 0.0;
      pc.entry_event = "switch";
      if (pc.regime != InterfaceRegime::TwoSided) pc.guess = conjugation_slope(p, fan, pc.ta, pc.regime, settings).slope;
    }
    pc.target = pc.ends_at_switch ? trajectory_at(p.side(inner[i].side), pc.tb) : bc.phi_exit;
    pc.exit_event = pc.ends_at_switch ? "switch" : "intersection";
    out.push_back(solve_piece(p, fan, pc, settings));
  }
  return out;
}

}  // namespace coldplasma
