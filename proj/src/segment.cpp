#include "coldplasma/segment.hpp"

#include <array>
#include <utility>

namespace coldplasma {

namespace {

constexpr std::array<std::pair<SegmentKind, std::string_view>, 5> kLabels{{
    {SegmentKind::SingularShock, "singular_shock"},
    {SegmentKind::RarefactionTwoSided, "rarefaction_two_sided"},
    {SegmentKind::RarefactionOneSidedLeftWave, "rarefaction_one_sided_left_wave"},
    {SegmentKind::RarefactionOneSidedRightWave, "rarefaction_one_sided_right_wave"},
    {SegmentKind::ContinuousFan, "continuous_fan"},
}};

}  // namespace

std::string_view to_string(SegmentKind kind) {
  for (const auto& [k, label] : kLabels) {
    if (k == kind) return label;
  }
  return "unknown";
}

std::optional<SegmentKind> segment_kind_from_string(std::string_view label) {
  for (const auto& [k, l] : kLabels) {
    if (l == label) return k;
  }
  return std::nullopt;
}

std::pair<SideModel, SideModel> side_models(SegmentKind kind) {
  switch (kind) {
    case SegmentKind::SingularShock:
      return {SideModel::Constant, SideModel::Constant};
    case SegmentKind::RarefactionOneSidedLeftWave:
      return {SideModel::Fan, SideModel::Constant};
    case SegmentKind::RarefactionOneSidedRightWave:
      return {SideModel::Constant, SideModel::Fan};
    case SegmentKind::RarefactionTwoSided:
    case SegmentKind::ContinuousFan:
      break;
  }
  return {SideModel::Fan, SideModel::Fan};
}

std::pair<SideProfile, SideProfile> interface_sides(const RiemannProblem& p, const Segment& segment, double t,
                                                    double phi, const SolverSettings& settings) {
  const auto [ml, mr] = side_models(segment.kind);
  const FanGeometry* fan = segment.fan ? &*segment.fan : nullptr;
  return {side_profile(p.left, ml, t, phi, fan, settings), side_profile(p.right, mr, t, phi, fan, settings)};
}

}  // namespace coldplasma
