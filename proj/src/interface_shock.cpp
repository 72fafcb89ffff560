#include "coldplasma/interface_shock.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace coldplasma {

ShockContext ShockContext::make(const RiemannProblem& p, double T0, double phi0, std::optional<double> e0) {
  ShockContext ctx;
  ctx.alpha = p.alpha();
  ctx.K = jump_invariant_K(p);
  ctx.T0 = T0;
  ctx.phi0 = phi0;
  ctx.e0 = e0 ? *e0 : -(state_at(p.right, T0).E - state_at(p.left, T0).E);
  return ctx;
}

double ShockContext::beta(const RiemannProblem& p, double t) const {
  const double jump_E = state_at(p.right, t).E - state_at(p.left, t).E;
  const double jump_E0 = state_at(p.right, T0).E - state_at(p.left, T0).E;
  return -jump_E - alpha * phi0 + (e0 + jump_E0);
}

double ShockContext::dbeta(const RiemannProblem& p, double t) const {
  return -(p.right.n * state_at(p.right, t).V - p.left.n * state_at(p.left, t).V);
}

double ShockContext::sigma(const RiemannProblem& p, double t) const {
  const double vp = state_at(p.right, t).V;
  const double vm = state_at(p.left, t).V;
  return p.right.n * vp * vp * vp - p.left.n * vm * vm * vm;
}

double ShockContext::amplitude(const RiemannProblem& p, double t, double phi) const {
  return alpha * phi + beta(p, t);
}

double e_on_shock(const RiemannProblem& p, double t, double phi, double phi0, double T0, std::optional<double> e0) {
  return ShockContext::make(p, T0, phi0, e0).amplitude(p, t, phi);
}

double shock_rhs(const RiemannProblem& p, const ShockContext& ctx, double t, double phi, double dphi,
                 const SolverSettings& settings) {
  if (std::abs(dphi) <= settings.degeneracy_eps) {
    throw SolverError(ErrorKind::Degeneracy, "interface speed vanishes (Phi' = 0)", t, {phi, dphi});
  }
  const double e = ctx.amplitude(p, t, phi);
  if (std::abs(e) <= settings.degeneracy_eps) {
    throw SolverError(ErrorKind::Degeneracy, "shock amplitude vanishes (e = 0)", t, {phi, dphi});
  }
  const double num = ctx.K - ctx.alpha * dphi * dphi - ctx.dbeta(p, t) * dphi - ctx.sigma(p, t) / dphi;
  return num / (2.0 * e);
}

SpeedCone admissible_cone(const RiemannProblem& p, double t) {
  const double vm = state_at(p.left, t).V;
  const double vp = state_at(p.right, t).V;
  return {std::min(vm, vp), std::max(vm, vp)};
}

namespace {

constexpr double kSpeedFloor = 1e-6;

Segment run_shock(const RiemannProblem& p, double T0, double T_end, double phi0, double dphi0,
                  const SolverSettings& settings, std::optional<double> e0, std::size_t samples) {
  const ShockContext ctx = ShockContext::make(p, T0, phi0, e0);
  Segment seg;
  seg.kind = SegmentKind::SingularShock;
  seg.t_start = T0;
  seg.t_end = T_end;
  seg.entry_slope = dphi0;

  const double eps = settings.degeneracy_eps;
  const SpeedCone cone0 = admissible_cone(p, T0);
  if (dphi0 < cone0.lo - eps || dphi0 > cone0.hi + eps) {
    seg.points.push_back({T0, phi0, dphi0, ctx.e0});
    seg.exit_event = "admissibility";
    std::ostringstream msg;
    msg << "initial speed " << dphi0 << " outside the admissible cone [" << cone0.lo << ", " << cone0.hi << "]";
    seg.diagnostics.push_back({ErrorKind::ConditionViolated, msg.str(), T0, {phi0, dphi0}});
    return seg;
  }

  const OdeRhs rhs = [&](double t, const State& y, State& dy) {
    dy[0] = y[1];
    dy[1] = shock_rhs(p, ctx, t, y[0], y[1], settings);
  };
  IntegrationOptions opts;
  opts.dense_samples = samples;
  opts.events.push_back({"admissibility",
                         [&](double t, const State& y) {
                           const SpeedCone c = admissible_cone(p, t);
                           return std::min(y[1] - c.lo, c.hi - y[1]) + eps;
                         },
                         false, 0});
  opts.events.push_back({"amplitude_zero", [&](double t, const State& y) { return ctx.amplitude(p, t, y[0]); },
                         true, -1});
  opts.events.push_back({"speed_zero", [](double, const State& y) { return std::abs(y[1]) - kSpeedFloor; }, true,
                         -1});

  const IntegrationPath path = integrate_ode(rhs, {phi0, dphi0}, T0, T_end, settings, opts);
  for (const PathSample& s : path.samples) {
    if (!seg.points.empty() && s.t - seg.points.back().t < 1e-13) continue;
    seg.points.push_back({s.t, s.y[0], s.y[1], ctx.amplitude(p, s.t, s.y[0])});
  }
  if (path.stall) {
    const Diagnostic& d = *path.stall;
    if (d.state.size() == 2 && d.t > seg.points.back().t + 1e-13) {
      seg.points.push_back({d.t, d.state[0], d.state[1], ctx.amplitude(p, d.t, d.state[0])});
    }
    seg.diagnostics.push_back(d);
    seg.exit_event = "stall";
  } else if (path.terminal_event) {
    const EventHit& ev = *path.terminal_event;
    seg.exit_event = ev.id;
    const ErrorKind kind = ev.id == "admissibility" ? ErrorKind::ConditionViolated : ErrorKind::Degeneracy;
    seg.diagnostics.push_back({kind, "shock integration stopped by event " + ev.id, ev.t, ev.y});
  } else {
    seg.complete = true;
  }

  // The cone collapses wherever V- = V+; a smooth interface can only pass
  // through such an instant tangentially, so violations are reported, not fatal.
  double worst = 0.0;
  double worst_t = T0;
  for (const InterfacePoint& q : seg.points) {
    const SpeedCone c = admissible_cone(p, q.t);
    const double excess = std::max(c.lo - q.dphi, q.dphi - c.hi);
    if (excess > worst) {
      worst = excess;
      worst_t = q.t;
    }
  }
  if (worst > eps) {
    std::ostringstream msg;
    msg << "interface speed leaves the admissible cone by up to " << worst << " at t = " << worst_t;
    std::vector<double> crossings;
    for (const EventHit& ev : path.events) {
      if (ev.id == "admissibility") crossings.push_back(ev.t);
    }
    if (!crossings.empty()) {
      msg << "; cone boundary crossed at";
      for (double tc : crossings) msg << ' ' << tc;
    }
    seg.diagnostics.push_back({ErrorKind::ConditionViolated, msg.str(), worst_t, crossings});
  }
  return seg;
}

double terminal_residual(const Segment& seg, double T_end, double target) {
  const InterfacePoint& last = seg.points.back();
  return last.phi + last.dphi * (T_end - last.t) - target;
}

bool amplitude_nonnegative(const Segment& seg, const SolverSettings& settings) {
  return std::all_of(seg.points.begin(), seg.points.end(),
                     [&](const InterfacePoint& q) { return q.e >= -settings.degeneracy_eps; });
}

bool admissible(const RiemannProblem& p, const Segment& seg, const SolverSettings& settings) {
  return std::all_of(seg.points.begin(), seg.points.end(), [&](const InterfacePoint& q) {
    const SpeedCone c = admissible_cone(p, q.t);
    return q.dphi >= c.lo - settings.degeneracy_eps && q.dphi <= c.hi + settings.degeneracy_eps;
  });
}

}  // namespace

Segment solve_shock_ivp(const RiemannProblem& p, double T0, double T_end, double phi0, double dphi0,
                        const SolverSettings& settings, std::optional<double> e0) {
  if (!(T_end > T0)) throw SolverError(ErrorKind::InvalidInput, "shock segment needs T_end > T0", T0);
  return run_shock(p, T0, T_end, phi0, dphi0, settings, e0, kSegmentSamples);
}

ShockBvpSolution solve_shock_bvp(const RiemannProblem& p, double T0, double T_end, double phi0, double phi_target,
                                 const SolverSettings& settings, std::optional<double> e0,
                                 std::optional<double> slope_guess) {
  if (!(T_end > T0)) throw SolverError(ErrorKind::InvalidInput, "shock segment needs T_end > T0", T0);
  const SpeedCone cone = admissible_cone(p, T0);

  const ShotFunction shot = [&](double slope) {
    // Cheap shots: no dense sampling. Failed shots are extrapolated linearly
    // from the last state so the scan still sees a sign structure.
    const Segment s = run_shock(p, T0, T_end, phi0, slope, settings, e0, 0);
    return ShotOutcome{terminal_residual(s, T_end, phi_target), s.complete};
  };
  const ShootingResult shooting = shoot_bvp(shot, {cone.lo, cone.hi}, slope_guess, settings);

  ShockBvpSolution out;
  out.slopes = shooting.solutions;
  std::vector<Segment> qualified;
  std::vector<Segment> negative;
  for (double slope : shooting.solutions) {
    Segment s = run_shock(p, T0, T_end, phi0, slope, settings, e0, kSegmentSamples);
    if (!s.complete) continue;
    (amplitude_nonnegative(s, settings) ? qualified : negative).push_back(std::move(s));
  }
  // Fully admissible candidates first, then by distance to the guess.
  std::stable_sort(qualified.begin(), qualified.end(), [&](const Segment& a, const Segment& b) {
    const bool ia = admissible(p, a, settings);
    const bool ib = admissible(p, b, settings);
    if (ia != ib) return ia;
    if (!slope_guess) return false;
    return std::abs(a.entry_slope - *slope_guess) < std::abs(b.entry_slope - *slope_guess);
  });

  if (!qualified.empty()) {
    out.ambiguous = qualified.size() > 1;
    const std::size_t count = qualified.size();
    out.segment = std::move(qualified.front());
    if (out.ambiguous) {
      std::ostringstream msg;
      msg << count << " shooting slopes reach the target with e >= 0; kept " << out.segment.entry_slope;
      out.segment.diagnostics.push_back({ErrorKind::Inconsistency, msg.str(), T0, out.slopes});
    }
    return out;
  }

  if (!negative.empty()) {
    out.segment = std::move(negative.front());
    out.segment.complete = false;
    out.segment.diagnostics.push_back(
        {ErrorKind::ConditionViolated, "every slope reaching the target drives e below zero", T0, out.slopes});
    return out;
  }

  out.segment = run_shock(p, T0, T_end, phi0, shooting.best_slope, settings, e0, kSegmentSamples);
  out.segment.complete = false;
  Diagnostic d = shooting.diagnostic.value_or(
      Diagnostic{ErrorKind::NoSolution, "no admissible slope reaches the target", T0, {}});
  std::ostringstream msg;
  msg << d.message << " (target " << phi_target << ", best slope " << shooting.best_slope << ", residual "
      << shooting.best_residual << ")";
  d.message = msg.str();
  out.segment.diagnostics.push_back(std::move(d));
  return out;
}

RhResidual rh_residual(const RiemannProblem& p, const Segment& seg, const SolverSettings& settings) {
  const auto& q = seg.points;
  if (q.size() < 3) throw SolverError(ErrorKind::InvalidInput, "residual needs at least three samples");
  RhResidual out;
  for (std::size_t i = 1; i + 1 < q.size(); ++i) {
    const double h1 = q[i].t - q[i - 1].t;
    const double h2 = q[i + 1].t - q[i].t;
    if (!(h1 > 0.0 && h2 > 0.0)) continue;
    // Three-point derivative on a nonuniform grid.
    const auto deriv = [&](double fm, double f0, double fp) {
      return -h2 / (h1 * (h1 + h2)) * fm + (h2 - h1) / (h1 * h2) * f0 + h1 / (h2 * (h1 + h2)) * fp;
    };
    const auto energy = [](const InterfacePoint& s) { return 0.5 * s.e * s.dphi * s.dphi; };
    const auto [l, r] = interface_sides(p, seg, q[i].t, q[i].phi, settings);
    const double de = deriv(q[i - 1].e, q[i].e, q[i + 1].e);
    const double dw = deriv(energy(q[i - 1]), energy(q[i]), energy(q[i + 1]));
    out.r1_max = std::max(out.r1_max, std::abs(de - mass_flux(l, r, q[i].dphi)));
    out.r2_max = std::max(out.r2_max, std::abs(dw - 0.5 * energy_flux(l, r, q[i].dphi)));
  }
  return out;
}

}  // namespace coldplasma
