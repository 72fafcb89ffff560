#include "coldplasma/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include <boost/math/tools/toms748_solve.hpp>
#include <boost/numeric/odeint.hpp>

namespace coldplasma {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EvaluationFailure: return "evaluation-failure";
    case ErrorKind::Degeneracy: return "degeneracy";
    case ErrorKind::NoSolution: return "no-solution";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::NotFound: return "not-found";
    case ErrorKind::Coincident: return "degenerate-coincident";
    case ErrorKind::Inapplicable: return "inapplicable";
    case ErrorKind::DegenerateData: return "degenerate-data";
    case ErrorKind::UndefinedCurve: return "undefined-curve";
    case ErrorKind::DegenerateB: return "degenerate-B";
    case ErrorKind::BoundarySingularity: return "boundary-singularity";
    case ErrorKind::Inconsistency: return "inconsistency";
    case ErrorKind::ConditionViolated: return "condition-violated";
    case ErrorKind::InvalidInput: return "invalid-input";
  }
  return "unknown";
}

void SolverSettings::validate() const {
  const auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw SolverError(ErrorKind::InvalidInput, std::string(name) + " must be a positive finite number");
    }
  };
  positive(root_tol, "root_tol");
  positive(ode_rel_tol, "ode_rel_tol");
  positive(ode_abs_tol, "ode_abs_tol");
  positive(max_step, "max_step");
  positive(shoot_tol, "shoot_tol");
  positive(event_refine_tol, "event_refine_tol");
  positive(degeneracy_eps, "degeneracy_eps");
  if (shoot_max_iter <= 0) throw SolverError(ErrorKind::InvalidInput, "shoot_max_iter must be positive");
  if (bracket_grid < 16) throw SolverError(ErrorKind::InvalidInput, "bracket_grid must be at least 16");
}

int SolverSettings::grid_for(double span) const {
  const double cells = std::ceil(bracket_grid * std::abs(span) / (2.0 * std::numbers::pi));
  return std::max(16, static_cast<int>(std::min(cells, 1e8)));
}

// ---------------------------------------------------------------------------

BracketScan bracket_roots(const ScalarFunction& f, double t0, double t1, int grid) {
  if (!(t0 < t1)) throw SolverError(ErrorKind::InvalidInput, "bracket_roots requires t0 < t1");
  if (grid < 1) throw SolverError(ErrorKind::InvalidInput, "bracket_roots requires a positive grid");

  BracketScan scan;
  const double h = (t1 - t0) / grid;
  std::vector<double> ts(static_cast<std::size_t>(grid) + 1);
  std::vector<double> fs(ts.size());
  double scale = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    ts[i] = (i + 1 == ts.size()) ? t1 : t0 + h * static_cast<double>(i);
    fs[i] = f(ts[i]);
    if (std::isfinite(fs[i])) {
      scale = std::max(scale, std::abs(fs[i]));
    } else {
      ++scan.non_finite_nodes;
    }
  }
  if (2 * scan.non_finite_nodes > ts.size()) {
    throw SolverError(ErrorKind::EvaluationFailure, "function is non-finite on more than half of the grid");
  }

  // Values at rounding level relative to the sampled scale are treated as exact zeros.
  const double zero_tol = 64.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300);
  scan.all_zero = scale <= 1e-13;
  if (scan.all_zero) return scan;

  const auto positive = [&](double v) { return !(v < 0.0); };
  std::size_t prev = ts.size();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!std::isfinite(fs[i])) {
      prev = ts.size();  // never bracket across a hole
      continue;
    }
    if (std::abs(fs[i]) <= zero_tol) fs[i] = 0.0;
    if (prev != ts.size()) {
      const bool last = (i + 1 == ts.size());
      if (positive(fs[prev]) != positive(fs[i]) || (last && fs[i] == 0.0 && fs[prev] != 0.0)) {
        scan.brackets.push_back({ts[prev], ts[i], fs[prev], fs[i]});
      }
    }
    prev = i;
  }
  return scan;
}

double refine_root(const ScalarFunction& f, const Bracket& bracket, double tol) {
  if (!(bracket.lo < bracket.hi)) throw SolverError(ErrorKind::InvalidInput, "bracket must satisfy lo < hi");
  if (bracket.f_lo == 0.0) return bracket.lo;
  if (bracket.f_hi == 0.0) return bracket.hi;
  if (bracket.f_lo * bracket.f_hi > 0.0) {
    throw SolverError(ErrorKind::InvalidInput, "bracket endpoints do not change sign");
  }
  const auto checked = [&](double t) {
    const double v = f(t);
    if (!std::isfinite(v)) {
      throw SolverError(ErrorKind::EvaluationFailure, "non-finite function value inside bracket", t);
    }
    return v;
  };
  const auto width_ok = [tol](double a, double b) { return std::abs(b - a) <= tol; };
  std::uintmax_t max_iter = 400;
  const auto [a, b] = boost::math::tools::toms748_solve(checked, bracket.lo, bracket.hi, bracket.f_lo,
                                                        bracket.f_hi, width_ok, max_iter);
  if (!width_ok(a, b)) {
    // toms748 stalls only in pathological cases; finish by plain bisection.
    double lo = a, hi = b, flo = checked(lo);
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      const double fm = checked(mid);
      if (fm == 0.0) return mid;
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }
  const double fa = checked(a);
  const double fb = checked(b);
  return std::abs(fa) <= std::abs(fb) ? a : b;
}

// ---------------------------------------------------------------------------

namespace {

namespace odeint = boost::numeric::odeint;

bool crossed(double before, double after, int direction) {
  const bool rising = before < 0.0 && after >= 0.0;
  const bool falling = before > 0.0 && after <= 0.0;
  if (direction > 0) return rising;
  if (direction < 0) return falling;
  return rising || falling;
}

}  // namespace

IntegrationPath integrate_ode(const OdeRhs& rhs, const State& y0, double t0, double t1,
                              const SolverSettings& settings, const IntegrationOptions& options) {
  if (!(t1 > t0)) throw SolverError(ErrorKind::InvalidInput, "integrate_ode requires t1 > t0");

  IntegrationPath path;
  path.samples.push_back({t0, y0});

  auto system = [&rhs](const State& y, State& dydt, double t) {
    rhs(t, y, dydt);
    for (double v : dydt) {
      if (!std::isfinite(v)) throw SolverError(ErrorKind::Degeneracy, "non-finite right-hand side", t, y);
    }
  };

  {
    State probe(y0.size());
    try {
      system(y0, probe, t0);
    } catch (const SolverError& err) {
      path.stall = Diagnostic{err.kind(), err.what(), t0, y0};
      return path;
    }
  }

  const auto& events = options.events;
  std::vector<double> g_prev(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) g_prev[i] = events[i].g(t0, y0);

  const double span = t1 - t0;
  const std::size_t n_dense = options.dense_samples;
  std::size_t next_dense = 1;
  const auto dense_time = [&](std::size_t k) {
    return k == n_dense ? t1 : t0 + span * static_cast<double>(k) / static_cast<double>(n_dense);
  };

  auto stepper = odeint::make_dense_output(settings.ode_abs_tol, settings.ode_rel_tol, settings.max_step,
                                           odeint::runge_kutta_dopri5<State>());
  const double dt0 = std::min({settings.max_step, 1e-3 * span, 1e-2});
  stepper.initialize(y0, t0, dt0);

  double t = t0;
  State y = y0;
  State scratch(y0.size());
  const double end_slack = 1e-14 * std::max(1.0, std::abs(t1));
  constexpr std::size_t kMaxSteps = 2'000'000;

  for (std::size_t step = 0; t1 - t > end_slack; ++step) {
    if (step == kMaxSteps) {
      path.stall = Diagnostic{ErrorKind::NonConvergence, "step budget exhausted", t, y};
      break;
    }
    if (t + stepper.current_time_step() > t1) stepper.initialize(y, t, t1 - t);

    std::pair<double, double> interval;
    try {
      interval = stepper.do_step(system);
    } catch (const SolverError& err) {
      path.stall = Diagnostic{err.kind(), err.what(), t, y};
      break;
    } catch (const std::exception& err) {
      path.stall = Diagnostic{ErrorKind::Degeneracy, std::string("step size underflow: ") + err.what(), t, y};
      break;
    }
    const double ta = interval.first;
    double tb = interval.second;
    if (tb - ta < 1e-14 * std::max(1.0, std::abs(ta))) {
      path.stall = Diagnostic{ErrorKind::Degeneracy, "step size underflow near a singularity", t, y};
      break;
    }
    if (t1 - tb <= end_slack) tb = t1;
    const State yb = stepper.current_state();

    // Earliest terminal event inside (ta, tb]; non-terminal ones are logged.
    std::optional<EventHit> terminal;
    std::vector<EventHit> passing;
    std::vector<double> g_now(events.size());
    try {
      for (std::size_t i = 0; i < events.size(); ++i) {
        g_now[i] = events[i].g(tb, yb);
        if (!crossed(g_prev[i], g_now[i], events[i].direction)) continue;
        double te = tb;
        if (g_now[i] != 0.0) {
          const auto& ev = events[i];
          te = refine_root(
              [&](double tau) {
                stepper.calc_state(tau, scratch);
                return ev.g(tau, scratch);
              },
              Bracket{ta, tb, g_prev[i], g_now[i]}, settings.event_refine_tol);
        }
        State ye(yb.size());
        stepper.calc_state(te, ye);
        EventHit hit{events[i].id, te, std::move(ye)};
        if (events[i].terminal) {
          if (!terminal || te < terminal->t) terminal = hit;
        } else {
          passing.push_back(std::move(hit));
        }
      }
    } catch (const SolverError& err) {
      path.stall = Diagnostic{err.kind(), std::string("event evaluation failed: ") + err.what(), t, y};
      break;
    }

    const double t_stop = terminal ? terminal->t : tb;
    std::sort(passing.begin(), passing.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
    for (auto& hit : passing) {
      if (hit.t <= t_stop) path.events.push_back(std::move(hit));
    }

    if (n_dense > 0) {
      while (next_dense <= n_dense && dense_time(next_dense) <= t_stop) {
        const double td = dense_time(next_dense++);
        if (td <= path.samples.back().t) continue;
        State yd(yb.size());
        if (td == tb) {
          yd = yb;
        } else {
          stepper.calc_state(td, yd);
        }
        path.samples.push_back({td, std::move(yd)});
      }
    }

    if (terminal) {
      if (terminal->t > path.samples.back().t) path.samples.push_back({terminal->t, terminal->y});
      path.events.push_back(*terminal);
      path.terminal_event = std::move(terminal);
      break;
    }
    if (n_dense == 0) path.samples.push_back({tb, yb});
    t = tb;
    y = yb;
    g_prev = std::move(g_now);
  }

  if (path.reached_end() && path.samples.back().t < t1) path.samples.push_back({t1, y});
  return path;
}

// ---------------------------------------------------------------------------

namespace {

struct Node {
  double slope;
  ShotOutcome outcome;
};

}  // namespace

ShootingResult shoot_bvp(const ShotFunction& shot, SlopeRange range, std::optional<double> guess,
                         const SolverSettings& settings, int scan_points) {
  if (!(range.lo < range.hi)) throw SolverError(ErrorKind::InvalidInput, "slope range must satisfy lo < hi");
  scan_points = std::max(scan_points, 2);

  ShootingResult result;
  result.best_residual = std::numeric_limits<double>::infinity();
  bool any_reached = false;

  auto run = [&](double slope) {
    ShotOutcome out = shot(slope);
    if (out.reached && std::isfinite(out.residual)) {
      any_reached = true;
      if (std::abs(out.residual) < std::abs(result.best_residual)) {
        result.best_residual = out.residual;
        result.best_slope = slope;
      }
      if (std::abs(out.residual) <= settings.shoot_tol) result.solutions.push_back(slope);
    }
    return out;
  };

  std::vector<Node> nodes;
  for (int k = 0; k < scan_points; ++k) {
    const double s = range.lo + (range.hi - range.lo) * k / (scan_points - 1);
    nodes.push_back({s, {}});
  }
  if (guess && *guess > range.lo && *guess < range.hi) nodes.push_back({*guess, {}});
  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.slope < b.slope; });
  for (auto& node : nodes) node.outcome = run(node.slope);

  bool any_bracket = false;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    Node a = nodes[i];
    Node b = nodes[i + 1];
    const double fa0 = a.outcome.residual;
    const double fb0 = b.outcome.residual;
    if (!std::isfinite(fa0) || !std::isfinite(fb0)) continue;
    if (!(fa0 * fb0 < 0.0)) continue;
    if (!a.outcome.reached && !b.outcome.reached) continue;
    any_bracket = true;

    // False position with the Illinois weighting; bisection when the
    // interpolated point falls outside the middle of the bracket.
    double fa = fa0;
    double fb = fb0;
    int retained = 0;
    for (int iter = 0; iter < settings.shoot_max_iter; ++iter) {
      const double width = b.slope - a.slope;
      double s = b.slope - fb * width / (fb - fa);
      const double guard = 0.01 * width;
      if (!std::isfinite(s) || s <= a.slope + guard || s >= b.slope - guard || iter % 4 == 3) {
        s = 0.5 * (a.slope + b.slope);
      }
      const ShotOutcome out = run(s);
      if (out.reached && std::abs(out.residual) <= settings.shoot_tol) {
        break;
      }
      if (!std::isfinite(out.residual)) break;
      if ((out.residual < 0.0) == (fa < 0.0)) {
        a = {s, out};
        fa = out.residual;
        if (retained == +1) fb *= 0.5;
        retained = +1;
      } else {
        b = {s, out};
        fb = out.residual;
        if (retained == -1) fa *= 0.5;
        retained = -1;
      }
      if (b.slope - a.slope <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(a.slope))) break;
    }
  }

  std::sort(result.solutions.begin(), result.solutions.end());
  result.solutions.erase(std::unique(result.solutions.begin(), result.solutions.end(),
                                     [](double x, double y) { return std::abs(x - y) <= 1e-9; }),
                         result.solutions.end());

  if (result.solutions.empty()) {
    if (!any_reached) {
      result.diagnostic = Diagnostic{ErrorKind::NoSolution, "no shot reached the terminal time", 0.0, {}};
    } else if (!any_bracket) {
      result.diagnostic = Diagnostic{ErrorKind::NoSolution,
                                     "boundary residual does not change sign over the admissible slopes",
                                     result.best_slope, {result.best_residual}};
    } else {
      result.diagnostic = Diagnostic{ErrorKind::NonConvergence,
                                     "shooting did not converge; best residual recorded",
                                     result.best_slope, {result.best_residual}};
    }
  } else if (!std::isfinite(result.best_residual)) {
    result.best_residual = 0.0;
  }
  return result;
}

ShootingResult shoot_bvp(const std::function<IntegrationPath(double slope)>& ivp,
                         const std::function<double(const PathSample& terminal)>& boundary_residual,
                         SlopeRange range, std::optional<double> guess, const SolverSettings& settings) {
  return shoot_bvp(
      [&](double slope) {
        const IntegrationPath path = ivp(slope);
        return ShotOutcome{boundary_residual(path.back()), path.reached_end()};
      },
      range, guess, settings);
}

}  // namespace coldplasma
