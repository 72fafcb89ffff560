#include "coldplasma/rarefaction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace coldplasma {

double b_coefficient(double n, double T_star, const SolverSettings& settings) {
  if (!(T_star > 0.0)) throw SolverError(ErrorKind::InvalidInput, "fan duration must be positive");
  if (!(n > 0.0)) throw SolverError(ErrorKind::InvalidInput, "background density must be positive");
  const double w = std::sqrt(n) * T_star;
  const double s = std::sin(w);
  const double c = std::cos(w);
  if (std::abs(s) > settings.degeneracy_eps) return (1.0 - c) / s;
  if (c > 0.0) return 0.0;
  throw SolverError(ErrorKind::DegenerateB, "B diverges: sqrt(n) T is an odd multiple of pi", T_star);
}

SideData side_at_opening(const SideData& side, double t_open) {
  const SideState st = state_at(side, t_open);
  return {side.n, st.V, st.E, trajectory_at(side, t_open)};
}

RarefactionCoeffs coeffs_at(const SideData& side, double t, const FanGeometry& fan, const SolverSettings& settings) {
  const double tau = t - fan.t_open;
  if (!(tau > 0.0 && tau < fan.duration)) {
    throw SolverError(ErrorKind::InvalidInput, "fan coefficients requested outside the open fan interval", t);
  }
  const SideData local = side_at_opening(side, fan.t_open);
  const double B = b_coefficient(side.n, fan.duration, settings);
  const double w = std::sqrt(side.n);
  const double sn = std::sin(w * tau);
  const double cs = std::cos(w * tau);
  const double D = B * sn + cs - 1.0;
  if (std::abs(D) < settings.degeneracy_eps) {
    throw SolverError(ErrorKind::BoundarySingularity, "fan coefficients singular (denominator vanishes)", t);
  }
  RarefactionCoeffs k;
  k.t = t;
  k.a = w * (B * cs - sn) / D;
  k.c = side.n * (B * sn + cs) / D;
  const double amp = B * local.E0 - w * local.V0;
  // Closed forms assume the opening at the origin; shift by the opening abscissa.
  k.b = amp * (cs - 1.0) / (w * D) - k.a * local.x0;
  k.d = amp * sn / D - k.c * local.x0;
  k.density = side.n - k.c;
  return k;
}

std::vector<double> fan_singular_times(const SideData& side, const FanGeometry& fan) {
  // D(tau) = 0  <=>  sqrt(n) tau = 2 pi k  or  sqrt(n) (L - tau) = 2 pi k.
  const double w = std::sqrt(side.n);
  const double period = 2.0 * std::numbers::pi / w;
  const double L = fan.duration;
  const double margin = 1e-9 * std::max(1.0, L);
  std::vector<double> out;
  for (double k = 1.0; k * period < L; k += 1.0) {
    for (double tau : {k * period, L - k * period}) {
      if (tau > margin && tau < L - margin) out.push_back(fan.t_open + tau);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
            out.end());
  return out;
}

double psi1(const RiemannProblem& p, double t, const FanGeometry& fan, const SolverSettings& settings) {
  const RarefactionCoeffs m = coeffs_at(p.left, t, fan, settings);
  const RarefactionCoeffs q = coeffs_at(p.right, t, fan, settings);
  const double dc = q.c - m.c;
  if (std::abs(dc) <= settings.degeneracy_eps) {
    throw SolverError(ErrorKind::UndefinedCurve, "Psi1 undefined: c+ = c-", t);
  }
  return -(q.d - m.d) / dc;
}

double psi2(const RiemannProblem& p, Side side, double t, const FanGeometry& fan, const SolverSettings& settings) {
  // The curve on side s uses the other side's wave against this side's constant field.
  const SideData& wave = side == Side::Plus ? p.left : p.right;
  const SideData& constant = p.side(side);
  const RarefactionCoeffs k = coeffs_at(wave, t, fan, settings);
  if (std::abs(k.c) <= settings.degeneracy_eps) {
    throw SolverError(ErrorKind::UndefinedCurve, "Psi2 undefined: wave field slope vanishes", t);
  }
  return (state_at(constant, t).E - k.d) / k.c;
}

std::vector<Side> switch_host_sides(const RiemannProblem& p, const FanGeometry& fan) {
  const bool minus_collapses = !fan_singular_times(p.left, fan).empty();
  const bool plus_collapses = !fan_singular_times(p.right, fan).empty();
  if (minus_collapses == plus_collapses) return {Side::Minus, Side::Plus};
  return {plus_collapses ? Side::Plus : Side::Minus};
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Roots of h on the region grid, with poles and fan collapses removed.
std::vector<double> curve_roots(const ScalarFunction& h, const ScalarFunction& x_side, double lo, double hi,
                                const std::vector<double>& excluded, const SolverSettings& settings) {
  std::vector<double> roots;
  const BracketScan scan = bracket_roots(h, lo, hi, settings.grid_for(hi - lo));
  for (const Bracket& b : scan.brackets) {
    double r = 0.0;
    try {
      r = refine_root(h, b, settings.root_tol);
    } catch (const SolverError&) {
      continue;  // the bracket straddles a singularity
    }
    const double v = h(r);
    if (!std::isfinite(v) || std::abs(v) > 1e-6 * (1.0 + std::abs(x_side(r)))) continue;  // pole
    const bool near_collapse = std::any_of(excluded.begin(), excluded.end(),
                                           [r](double s) { return std::abs(r - s) < 1e-6; });
    if (!near_collapse) roots.push_back(r);
  }
  return roots;
}

bool defined_at(const ScalarFunction& f, double t) { return std::isfinite(f(t)); }

}  // namespace

SwitchSearch find_switch_points(const RiemannProblem& p, double t_lo, double t_hi, const FanGeometry& fan,
                                const SolverSettings& settings) {
  SwitchSearch out;
  if (std::abs(p.alpha()) <= settings.degeneracy_eps) return out;
  if (!(t_hi - t_lo > settings.root_tol)) return out;

  const double lo = std::max(t_lo, fan.t_open);
  const double hi = std::min(t_hi, fan.t_close());
  if (!(hi - lo > settings.root_tol)) return out;

  std::vector<double> excluded = fan_singular_times(p.left, fan);
  const auto plus_sing = fan_singular_times(p.right, fan);
  excluded.insert(excluded.end(), plus_sing.begin(), plus_sing.end());

  out.host_sides = switch_host_sides(p, fan);
  const double window = 10.0 * settings.root_tol;
  std::vector<std::string> unmatched;

  for (Side side : out.host_sides) {
    const SideData& host = p.side(side);
    const ScalarFunction x_side = [&host](double t) { return trajectory_at(host, t); };
    const ScalarFunction h1 = [&](double t) {
      try {
        return psi1(p, t, fan, settings) - x_side(t);
      } catch (const SolverError&) {
        return kNaN;
      }
    };
    const ScalarFunction h2 = [&](double t) {
      try {
        return psi2(p, side, t, fan, settings) - x_side(t);
      } catch (const SolverError&) {
        return kNaN;
      }
    };
    const auto r1 = curve_roots(h1, x_side, lo, hi, excluded, settings);
    const auto r2 = curve_roots(h2, x_side, lo, hi, excluded, settings);
    out.psi1_roots.insert(out.psi1_roots.end(), r1.begin(), r1.end());
    out.psi2_roots.insert(out.psi2_roots.end(), r2.begin(), r2.end());

    std::vector<bool> used(r2.size(), false);
    for (double a : r1) {
      std::size_t best = r2.size();
      for (std::size_t j = 0; j < r2.size(); ++j) {
        if (!used[j] && std::abs(r2[j] - a) <= window && (best == r2.size() || std::abs(r2[j] - a) < std::abs(r2[best] - a))) {
          best = j;
        }
      }
      if (best != r2.size()) {
        used[best] = true;
        out.points.push_back({0.5 * (a + r2[best]), side});
      } else if (defined_at(h2, a)) {
        unmatched.push_back("Psi1 root " + std::to_string(a));
      }
    }
    for (std::size_t j = 0; j < r2.size(); ++j) {
      if (!used[j] && defined_at(h1, r2[j])) unmatched.push_back("Psi2 root " + std::to_string(r2[j]));
    }
  }

  std::sort(out.points.begin(), out.points.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
  if (!unmatched.empty()) {
    std::ostringstream msg;
    msg << "Psi1/Psi2 roots do not pair within " << window << ":";
    for (const auto& u : unmatched) msg << ' ' << u << ';';
    std::vector<double> both = out.psi1_roots;
    both.push_back(kNaN);  // separator between the two root sets
    both.insert(both.end(), out.psi2_roots.begin(), out.psi2_roots.end());
    out.inconsistency = Diagnostic{ErrorKind::Inconsistency, msg.str(), lo, std::move(both)};
  }
  return out;
}

double switch_amplitude(const RiemannProblem& p, const SwitchPoint& sp, const FanGeometry& fan,
                        const SolverSettings& settings) {
  const double x = trajectory_at(p.side(sp.side), sp.t);
  if (sp.side == Side::Plus) {
    const RarefactionCoeffs m = coeffs_at(p.left, sp.t, fan, settings);
    return (m.c * x + m.d) - state_at(p.right, sp.t).E;
  }
  const RarefactionCoeffs q = coeffs_at(p.right, sp.t, fan, settings);
  return state_at(p.left, sp.t).E - (q.c * x + q.d);
}

SideProfile side_profile(const SideData& side, SideModel model, double t, double x, const FanGeometry* fan,
                         const SolverSettings& settings) {
  if (model == SideModel::Constant) {
    const SideState st = state_at(side, t);
    return {side.n, st.V, st.E};
  }
  if (fan == nullptr) throw SolverError(ErrorKind::InvalidInput, "fan side profile requires a fan geometry");
  const RarefactionCoeffs k = coeffs_at(side, t, *fan, settings);
  return {k.density, k.a * x + k.b, k.c * x + k.d};
}

double mass_flux(const SideProfile& l, const SideProfile& r, double dphi) {
  return -(r.rho * r.V - l.rho * l.V) + (r.rho - l.rho) * dphi;
}

double energy_flux(const SideProfile& l, const SideProfile& r, double dphi) {
  const double cubic = r.rho * r.V * r.V * r.V - l.rho * l.V * l.V * l.V;
  const double energy = (r.rho * r.V * r.V + r.E * r.E) - (l.rho * l.V * l.V + l.E * l.E);
  return -cubic + energy * dphi;
}

}  // namespace coldplasma
