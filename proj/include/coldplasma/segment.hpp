#pragma once

#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coldplasma/rarefaction.hpp"

namespace coldplasma {

enum class SegmentKind {
  SingularShock,
  RarefactionTwoSided,
  RarefactionOneSidedLeftWave,   ///< wave on the left, constant state on the right
  RarefactionOneSidedRightWave,  ///< constant state on the left, wave on the right
  ContinuousFan,                 ///< equal densities: no interface inside the fan
};

std::string_view to_string(SegmentKind kind);
std::optional<SegmentKind> segment_kind_from_string(std::string_view label);

/// Models adjacent to the interface for a segment kind (left, right).
std::pair<SideModel, SideModel> side_models(SegmentKind kind);

/// Number of uniform samples stored for a solved segment.
inline constexpr std::size_t kSegmentSamples = 1000;

struct InterfacePoint {
  double t = 0.0;
  double phi = 0.0;
  double dphi = 0.0;
  double e = 0.0;
};

/// A piece of the interface between two events. `t_start`/`t_end` are the
/// planned span; `points` may stop early when `complete` is false, in which
/// case `diagnostics` says why.
struct Segment {
  SegmentKind kind = SegmentKind::SingularShock;
  double t_start = 0.0;
  double t_end = 0.0;
  std::vector<InterfacePoint> points;
  std::string entry_event;
  std::string exit_event;
  std::vector<Diagnostic> diagnostics;
  bool complete = false;
  std::optional<FanGeometry> fan;
  double entry_slope = std::numeric_limits<double>::quiet_NaN();
};

/// Regular side values on both sides of the interface at a sample of a segment.
std::pair<SideProfile, SideProfile> interface_sides(const RiemannProblem& problem, const Segment& segment,
                                                    double t, double phi, const SolverSettings& settings);

}  // namespace coldplasma
