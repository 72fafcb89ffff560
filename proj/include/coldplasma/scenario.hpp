#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coldplasma/interface_rarefaction.hpp"
#include "coldplasma/interface_shock.hpp"

namespace coldplasma {

/// Common period of both media when r = sqrt(n-)/sqrt(n+) is rational p/q
/// (denominator <= max_denominator, |r - p/q| <= tol): L = p 2pi/sqrt(n-) = q 2pi/sqrt(n+).
std::optional<double> detect_period(const RiemannProblem& problem, double tol = 1e-9, int max_denominator = 64);

enum class IntervalKind { Shock, Rarefaction };

/// Time between two consecutive intersections of x- and x+.
struct Interval {
  double t_start = 0.0;
  double t_end = 0.0;  ///< next intersection, may lie beyond the horizon
  IntervalKind kind = IntervalKind::Shock;
};

enum class EventKind { Intersection, Switch };

struct TimelineEvent {
  double t = 0.0;
  EventKind kind = EventKind::Intersection;
  std::optional<Side> side;  ///< host characteristic of a switch
};

std::string_view to_string(EventKind kind);
std::string_view to_string(IntervalKind kind);

struct Timeline {
  RiemannProblem problem;
  double horizon = 0.0;
  std::vector<Interval> intervals;
  std::vector<Segment> segments;
  std::vector<TimelineEvent> events;  ///< strictly increasing in t
  std::optional<double> period;
  std::vector<Diagnostic> notes;  ///< timeline-level findings (entry data discrepancies, switch inconsistencies)

  /// True when some segment stopped before its planned end.
  bool partial() const;
};

/// Alternating shock / rarefaction construction on (0, horizon]. Solver failures
/// never abort the build: they end up as segment diagnostics.
/// Throws DegenerateData when V-^0 = V+^0.
Timeline build_timeline(const RiemannProblem& problem, const SolverSettings& settings, double horizon);

/// Interface position at t from the segment samples (linear interpolation);
/// empty when no computed segment covers t.
std::optional<double> interface_position(const Timeline& timeline, double t);

struct SegmentReport {
  std::size_t index = 0;
  SegmentKind kind = SegmentKind::SingularShock;
  bool complete = false;
  double r1_max = 0.0;
  double r2_max = 0.0;
  std::size_t admissibility_violations = 0;  ///< shock samples outside the speed cone
  double max_cone_excess = 0.0;
  std::size_t negative_e = 0;  ///< samples with e < -degeneracy_eps
  double min_e = 0.0;
  double min_margin = 0.0;  ///< smallest regime-condition slack (rarefaction segments)
};

struct SwitchAmplitude {
  double t = 0.0;
  double e = 0.0;     ///< interface amplitude arriving at the switch (NaN when not computed)
  double jump = 0.0;  ///< -[E] reconstructed from the fields at the switch
};

struct ValidationReport {
  std::vector<SegmentReport> segments;
  std::vector<double> abutment_gaps;  ///< |Phi| jump at each junction where both sides are computed
  std::vector<SwitchAmplitude> switches;
  std::vector<double> periodic_mismatch;  ///< |Phi(t + L) - Phi(t)| samples
  std::vector<std::string> violations;

  bool hard_violation() const { return !violations.empty(); }
};

ValidationReport validate_timeline(const Timeline& timeline, const SolverSettings& settings);

}  // namespace coldplasma
