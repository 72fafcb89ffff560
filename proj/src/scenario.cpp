#include "coldplasma/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace coldplasma {

std::optional<double> detect_period(const RiemannProblem& p, double tol, int max_denominator) {
  const double r = p.r();
  // Continued-fraction convergents h/k of r.
  double x = r;
  long long h_prev = 1, h = static_cast<long long>(std::floor(x));
  long long k_prev = 0, k = 1;
  for (int iter = 0; iter < 64; ++iter) {
    if (std::abs(r - static_cast<double>(h) / static_cast<double>(k)) <= tol) {
      if (h <= 0) return std::nullopt;
      return static_cast<double>(h) * 2.0 * std::numbers::pi / p.left.frequency();
    }
    const double frac = x - std::floor(x);
    if (frac < 1e-15) break;
    x = 1.0 / frac;
    const auto a = static_cast<long long>(std::floor(x));
    const long long h_next = a * h + h_prev;
    const long long k_next = a * k + k_prev;
    if (k_next > max_denominator) break;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
  }
  return std::nullopt;
}

std::string_view to_string(EventKind kind) { return kind == EventKind::Switch ? "switch" : "intersection"; }

std::string_view to_string(IntervalKind kind) { return kind == IntervalKind::Shock ? "shock" : "rarefaction"; }

bool Timeline::partial() const {
  return std::any_of(segments.begin(), segments.end(), [](const Segment& s) { return !s.complete; });
}

namespace {

double jump_E(const RiemannProblem& p, double t) { return state_at(p.right, t).E - state_at(p.left, t).E; }

IntervalKind classify(const RiemannProblem& p, double t0, double t1) {
  const double vm = state_at(p.left, t0).V;
  const double vp = state_at(p.right, t0).V;
  if (vm != vp) return vm > vp ? IntervalKind::Shock : IntervalKind::Rarefaction;
  // Tangential entry: fall back on the ordering of the trajectories.
  const double mid = 0.5 * (t0 + t1);
  return trajectory_at(p.left, mid) > trajectory_at(p.right, mid) ? IntervalKind::Shock : IntervalKind::Rarefaction;
}

/// Drops samples beyond the horizon, closing the segment with an interpolated point.
void clip(Segment& seg, double horizon) {
  if (seg.t_end <= horizon + 1e-9 * std::max(1.0, horizon)) return;
  seg.t_end = horizon;
  auto& q = seg.points;
  const auto beyond = std::find_if(q.begin(), q.end(), [&](const InterfacePoint& s) { return s.t > horizon; });
  if (beyond == q.end()) return;
  if (beyond != q.begin()) {
    const InterfacePoint a = *(beyond - 1);
    const InterfacePoint b = *beyond;
    const double w = (horizon - a.t) / (b.t - a.t);
    const auto lerp = [w](double u, double v) { return u + w * (v - u); };
    q.erase(beyond, q.end());
    if (horizon - a.t > 1e-13) q.push_back({horizon, lerp(a.phi, b.phi), lerp(a.dphi, b.dphi), lerp(a.e, b.e)});
  } else {
    q.erase(beyond, q.end());
  }
  seg.complete = seg.complete || (!q.empty() && q.back().t >= horizon - 1e-13);
  if (seg.complete) seg.exit_event = "horizon";
}

/// Amplitude handed over to the next interval, if the last segment reached its end.
std::optional<double> delivered_amplitude(const std::vector<Segment>& segs, double t) {
  if (segs.empty()) return std::nullopt;
  const Segment& last = segs.back();
  if (!last.complete || last.points.empty() || std::abs(last.points.back().t - t) > 1e-9) return std::nullopt;
  return last.points.back().e;
}

}  // namespace

Timeline build_timeline(const RiemannProblem& p, const SolverSettings& settings, double horizon) {
  settings.validate();
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw SolverError(ErrorKind::InvalidInput, "horizon must be positive");
  classify_initial_regime(p);

  Timeline tl;
  tl.problem = p;
  tl.horizon = horizon;
  tl.period = detect_period(p);

  // Look one slow period past the horizon for the intersection closing the last interval.
  const double lookahead = horizon + default_horizon(p) / 3.0;
  std::vector<double> cuts{0.0};
  for (double t : intersection_times(p, lookahead, settings)) cuts.push_back(t);
  // Intersections within root tolerance of the horizon count as inside it.
  const double slack = 1e-9 * std::max(1.0, horizon);
  std::size_t n_intervals = 0;
  while (n_intervals + 1 < cuts.size() && cuts[n_intervals] < horizon - slack) ++n_intervals;

  for (std::size_t i = 0; i < n_intervals; ++i) {
    tl.intervals.push_back({cuts[i], cuts[i + 1], classify(p, cuts[i], cuts[i + 1])});
  }
  if (n_intervals == 0 || cuts[n_intervals] < horizon - slack) {
    const double t0 = cuts.back();
    tl.intervals.push_back({t0, lookahead, classify(p, t0, lookahead)});
    tl.notes.push_back({ErrorKind::NotFound, "no closing intersection before the lookahead; last interval left open",
                        t0, {}});
  }

  for (double t : cuts) {
    if (t > 0.0 && t <= horizon + slack) tl.events.push_back({t, EventKind::Intersection, std::nullopt});
  }

  std::optional<FanGeometry> previous_fan;
  InterfaceRegime previous_regime = InterfaceRegime::TwoSided;
  for (const Interval& iv : tl.intervals) {
    const double phi0 = trajectory_at(p.left, iv.t_start);
    const double phi1 = trajectory_at(p.left, iv.t_end);
    const double stated_e = -jump_E(p, iv.t_start);
    std::optional<double> e_in = delivered_amplitude(tl.segments, iv.t_start);
    if (iv.t_start > 0.0) {
      if (!e_in) {
        tl.notes.push_back({ErrorKind::Inconsistency,
                            "preceding segment did not reach the intersection; entry amplitude set to -[E]",
                            iv.t_start, {stated_e}});
      } else if (std::abs(*e_in - stated_e) > 1e-8) {
        std::ostringstream msg;
        msg << "delivered amplitude " << *e_in << " differs from -[E] = " << stated_e << " at the intersection";
        tl.notes.push_back({ErrorKind::Inconsistency, msg.str(), iv.t_start, {*e_in, stated_e}});
      }
    }
    const double e_entry = e_in.value_or(stated_e);

    std::vector<Segment> produced;
    if (iv.kind == IntervalKind::Shock) {
      std::optional<double> guess;
      if (previous_fan) {
        try {
          const ConjugationInfo c = conjugation_slope(p, *previous_fan, iv.t_start, previous_regime, settings);
          if (c.feasible) guess = c.slope;
        } catch (const SolverError&) {
        }
      }
      ShockBvpSolution sol = solve_shock_bvp(p, iv.t_start, iv.t_end, phi0, phi1, settings, e_entry, guess);
      sol.segment.entry_event = iv.t_start > 0.0 ? "intersection" : "initial";
      if (sol.segment.complete) sol.segment.exit_event = "intersection";
      produced.push_back(std::move(sol.segment));
      previous_fan.reset();
    } else {
      const FanGeometry fan{iv.t_start, iv.t_end - iv.t_start};
      previous_regime = InterfaceRegime::TwoSided;
      if (std::abs(p.alpha()) <= settings.degeneracy_eps) {
        Segment s;
        s.kind = SegmentKind::ContinuousFan;
        s.t_start = iv.t_start;
        s.t_end = iv.t_end;
        s.fan = fan;
        s.complete = true;
        s.entry_event = "intersection";
        s.exit_event = "intersection";
        produced.push_back(std::move(s));
      } else {
        SwitchSearch search;
        try {
          search = find_switch_points(p, iv.t_start, iv.t_end, fan, settings);
        } catch (const SolverError& err) {
          tl.notes.push_back(err.diagnostic());
        }
        if (search.inconsistency) tl.notes.push_back(*search.inconsistency);
        for (const SwitchPoint& sp : search.points) {
          if (sp.t <= horizon + slack) tl.events.push_back({sp.t, EventKind::Switch, sp.side});
        }
        RarefactionBoundary bc{phi0, e_entry, phi1, std::nullopt};
        try {
          const ConjugationInfo c = conjugation_slope(p, fan, iv.t_start, InterfaceRegime::TwoSided, settings);
          if (c.feasible) bc.slope_guess = c.slope;
        } catch (const SolverError& err) {
          tl.notes.push_back(err.diagnostic());
        }
        produced = solve_rarefaction_interface(p, fan, iv.t_start, iv.t_end, search.points, bc, settings);
        previous_regime = regime_sequence(search.points).back();
      }
      previous_fan = fan;
    }
    for (Segment& s : produced) {
      if (s.t_start >= horizon - slack) continue;
      clip(s, horizon);
      tl.segments.push_back(std::move(s));
    }
  }

  std::sort(tl.events.begin(), tl.events.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
  tl.events.erase(std::unique(tl.events.begin(), tl.events.end(),
                              [](const auto& a, const auto& b) { return std::abs(a.t - b.t) <= 1e-12; }),
                  tl.events.end());
  return tl;
}

std::optional<double> interface_position(const Timeline& tl, double t) {
  for (const Segment& s : tl.segments) {
    const auto& q = s.points;
    if (q.size() < 2 || t < q.front().t || t > q.back().t) continue;
    const auto hi = std::lower_bound(q.begin(), q.end(), t, [](const InterfacePoint& a, double v) { return a.t < v; });
    if (hi == q.begin()) return hi->phi;
    const auto lo = hi - 1;
    const double w = (t - lo->t) / (hi->t - lo->t);
    return lo->phi + w * (hi->phi - lo->phi);
  }
  return std::nullopt;
}

namespace {

constexpr double kResidualTol = 1e-5;
constexpr double kMarginTol = 1e-8;
constexpr double kGapTol = 1e-6;
constexpr double kSwitchTol = 1e-4;
constexpr double kPeriodTol = 1e-5;

bool is_rarefaction(SegmentKind k) {
  return k == SegmentKind::RarefactionTwoSided || k == SegmentKind::RarefactionOneSidedLeftWave ||
         k == SegmentKind::RarefactionOneSidedRightWave;
}

InterfaceRegime regime_of(SegmentKind k) {
  if (k == SegmentKind::RarefactionOneSidedLeftWave) return InterfaceRegime::OneSidedLeftWave;
  if (k == SegmentKind::RarefactionOneSidedRightWave) return InterfaceRegime::OneSidedRightWave;
  return InterfaceRegime::TwoSided;
}

}  // namespace

ValidationReport validate_timeline(const Timeline& tl, const SolverSettings& settings) {
  const RiemannProblem& p = tl.problem;
  ValidationReport rep;
  const auto flag = [&rep](std::size_t i, const std::string& what) {
    rep.violations.push_back("segment " + std::to_string(i) + ": " + what);
  };

  for (std::size_t i = 0; i < tl.segments.size(); ++i) {
    const Segment& s = tl.segments[i];
    SegmentReport r;
    r.index = i;
    r.kind = s.kind;
    r.complete = s.complete;
    if (s.kind == SegmentKind::ContinuousFan) {
      rep.segments.push_back(r);
      continue;
    }
    if (!s.complete) {
      std::ostringstream msg;
      msg << to_string(s.kind) << " stopped at t = " << (s.points.empty() ? s.t_start : s.points.back().t);
      if (!s.diagnostics.empty()) msg << " (" << s.diagnostics.front().message << ")";
      flag(i, msg.str());
    }

    r.min_e = std::numeric_limits<double>::infinity();
    r.min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < s.points.size(); ++k) {
      const InterfacePoint& q = s.points[k];
      r.min_e = std::min(r.min_e, q.e);
      if (q.e < -settings.degeneracy_eps) ++r.negative_e;
      if (s.kind == SegmentKind::SingularShock) {
        const SpeedCone c = admissible_cone(p, q.t);
        const double excess = std::max(c.lo - q.dphi, q.dphi - c.hi);
        r.max_cone_excess = std::max(r.max_cone_excess, excess);
        if (excess > settings.degeneracy_eps) ++r.admissibility_violations;
      } else if (s.fan && k > 0) {
        try {
          const ConditionCheck cc =
              condition_monitor(p, *s.fan, {q.t, q.phi, q.dphi, q.e, regime_of(s.kind)}, settings);
          r.min_margin = std::min(r.min_margin, cc.margin);
        } catch (const SolverError&) {
        }
      }
    }
    if (!std::isfinite(r.min_margin)) r.min_margin = 0.0;
    if (!std::isfinite(r.min_e)) r.min_e = 0.0;

    // The entry sample of a rarefaction piece sits on the fan boundary.
    Segment body = s;
    if (is_rarefaction(s.kind) && !body.points.empty()) body.points.erase(body.points.begin());
    if (body.points.size() >= 3) {
      try {
        const RhResidual rh = rh_residual(p, body, settings);
        r.r1_max = rh.r1_max;
        r.r2_max = rh.r2_max;
      } catch (const SolverError&) {
        r.r1_max = r.r2_max = std::numeric_limits<double>::quiet_NaN();
      }
    }

    std::ostringstream msg;
    if (s.complete && !(r.r1_max <= kResidualTol && r.r2_max <= kResidualTol)) {
      msg.str("");
      msg << "jump-condition residuals " << r.r1_max << ", " << r.r2_max;
      flag(i, msg.str());
    }
    if (r.admissibility_violations > 0) {
      msg.str("");
      msg << r.admissibility_violations << " samples outside the admissible cone (max excess " << r.max_cone_excess
          << ")";
      flag(i, msg.str());
    }
    if (r.negative_e > 0) {
      msg.str("");
      msg << r.negative_e << " samples with e < 0 (min " << r.min_e << ")";
      flag(i, msg.str());
    }
    if (is_rarefaction(s.kind) && r.min_margin < -kMarginTol) {
      msg.str("");
      msg << "regime condition margin " << r.min_margin;
      flag(i, msg.str());
    }
    rep.segments.push_back(r);
  }

  for (std::size_t i = 0; i + 1 < tl.segments.size(); ++i) {
    const Segment& a = tl.segments[i];
    const Segment& b = tl.segments[i + 1];
    if (a.points.empty() || b.points.empty() || !a.complete) continue;
    const double gap = std::abs(a.points.back().phi - b.points.front().phi);
    const double tgap = std::abs(a.points.back().t - b.points.front().t);
    rep.abutment_gaps.push_back(gap);
    if (gap > kGapTol || tgap > kGapTol) {
      std::ostringstream msg;
      msg << "junction " << i << "/" << i + 1 << ": interface gap " << gap << " (time gap " << tgap << ")";
      rep.violations.push_back(msg.str());
    }
  }

  for (const TimelineEvent& ev : tl.events) {
    if (ev.kind != EventKind::Switch || !ev.side) continue;
    SwitchAmplitude sa{ev.t, std::numeric_limits<double>::quiet_NaN(), 0.0};
    for (const Segment& s : tl.segments) {
      if (s.fan && ev.t > s.fan->t_open && ev.t < s.fan->t_close()) {
        try {
          sa.jump = switch_amplitude(p, {ev.t, *ev.side}, *s.fan, settings);
        } catch (const SolverError&) {
          sa.jump = std::numeric_limits<double>::quiet_NaN();
        }
      }
      if (s.complete && !s.points.empty() && std::abs(s.points.back().t - ev.t) <= 1e-9) sa.e = s.points.back().e;
    }
    if (std::isfinite(sa.e) && std::abs(sa.e) > kSwitchTol) {
      std::ostringstream msg;
      msg << "amplitude " << sa.e << " at switch t = " << ev.t;
      rep.violations.push_back(msg.str());
    }
    rep.switches.push_back(sa);
  }

  if (tl.period) {
    const double L = *tl.period;
    double worst = 0.0;
    for (const Segment& s : tl.segments) {
      for (std::size_t k = 0; k < s.points.size(); k += 10) {
        const double t = s.points[k].t;
        if (t + L > tl.horizon) break;
        const auto later = interface_position(tl, t + L);
        if (!later) continue;
        const double d = std::abs(*later - s.points[k].phi);
        rep.periodic_mismatch.push_back(d);
        worst = std::max(worst, d);
      }
    }
    if (worst > kPeriodTol) {
      std::ostringstream msg;
      msg << "interface not periodic: |Phi(t + L) - Phi(t)| up to " << worst;
      rep.violations.push_back(msg.str());
    }
  }
  return rep;
}

}  // namespace coldplasma
