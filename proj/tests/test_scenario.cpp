#include <gtest/gtest.h>

#include <cmath>

#include "coldplasma/scenario.hpp"
#include "problems.hpp"

using namespace coldplasma;
using namespace coldplasma::testing;

namespace {

std::vector<double> event_times(const Timeline& tl) {
  std::vector<double> out;
  for (const auto& e : tl.events) out.push_back(e.t);
  return out;
}

}  // namespace

TEST(DetectPeriod, CommensurateAndIncommensurate) {
  ASSERT_TRUE(detect_period(example3()));
  EXPECT_NEAR(*detect_period(example3()), 2 * kPi, 1e-12);
  ASSERT_TRUE(detect_period(example1()));
  EXPECT_NEAR(*detect_period(example1()), 2 * kPi, 1e-12);
  EXPECT_FALSE(detect_period(example2()));
}

TEST(DetectPeriod, GeneralRatio) {
  // r = sqrt(4/9) = 2/3: L = 2 * 2pi/sqrt(4) = 3 * 2pi/sqrt(9) = 2pi.
  const auto p = RiemannProblem::make({4.0, 1.0, 0.0, 0.0}, {9.0, 0.0, 0.0, 0.0});
  ASSERT_TRUE(detect_period(p));
  EXPECT_NEAR(*detect_period(p), 2 * kPi, 1e-12);
  const auto q = RiemannProblem::make({1.0, 1.0, 0.0, 0.0}, {2.25, 0.0, 0.0, 0.0});
  ASSERT_TRUE(detect_period(q));
  EXPECT_NEAR(*detect_period(q), 4 * kPi, 1e-12);
}

TEST(BuildTimeline, Example1Structure) {
  SolverSettings s;
  const auto tl = build_timeline(example1(), s, 2 * kPi);
  ASSERT_EQ(tl.segments.size(), 2u);
  EXPECT_EQ(tl.segments[0].kind, SegmentKind::SingularShock);
  EXPECT_EQ(tl.segments[1].kind, SegmentKind::ContinuousFan);
  EXPECT_TRUE(tl.segments[0].complete);
  ASSERT_EQ(tl.intervals.size(), 2u);
  EXPECT_EQ(tl.intervals[0].kind, IntervalKind::Shock);
  EXPECT_EQ(tl.intervals[1].kind, IntervalKind::Rarefaction);
  const auto ts = event_times(tl);
  ASSERT_EQ(ts.size(), 2u);
  EXPECT_NEAR(ts[0], kPi / 2, 1e-9);
  EXPECT_NEAR(ts[1], 2 * kPi, 1e-9);
  for (const auto& e : tl.events) EXPECT_EQ(e.kind, EventKind::Intersection);
  ASSERT_TRUE(tl.period);
  EXPECT_NEAR(*tl.period, 2 * kPi, 1e-12);
}

TEST(BuildTimeline, Example1AmplitudeIsFieldJump) {
  SolverSettings s;
  const auto p = example1();
  const auto tl = build_timeline(p, s, 2 * kPi);
  for (const auto& pt : tl.segments[0].points) {
    EXPECT_NEAR(pt.e, -(state_at(p.right, pt.t).E - state_at(p.left, pt.t).E), 1e-8);
  }
}

TEST(BuildTimeline, Example3EventsRepeatWithPeriod) {
  SolverSettings s;
  const auto tl = build_timeline(example3(), s, 4 * kPi);
  std::vector<double> first, second;
  for (double t : event_times(tl)) (t <= 2 * kPi + 1e-9 ? first : second).push_back(t);
  ASSERT_EQ(first.size(), 5u);  // T*, three switches, 2pi
  ASSERT_EQ(first.size(), second.size());
  for (std::size_t k = 0; k < first.size(); ++k) EXPECT_NEAR(second[k], first[k] + 2 * kPi, 1e-5);
  std::size_t switches = 0;
  for (const auto& e : tl.events) {
    if (e.kind != EventKind::Switch) continue;
    ++switches;
    ASSERT_TRUE(e.side);
    EXPECT_EQ(*e.side, Side::Plus);
  }
  EXPECT_EQ(switches, 6u);
}

TEST(BuildTimeline, Example3SegmentsTileEachPeriod) {
  SolverSettings s;
  const auto tl = build_timeline(example3(), s, 2 * kPi);
  ASSERT_EQ(tl.segments.size(), 5u);
  EXPECT_EQ(tl.segments[0].kind, SegmentKind::SingularShock);
  for (std::size_t k = 1; k < tl.segments.size(); ++k) {
    EXPECT_NEAR(tl.segments[k].t_start, tl.segments[k - 1].t_end, 1e-12);
    EXPECT_NE(tl.segments[k].kind, SegmentKind::SingularShock);
  }
  EXPECT_NEAR(tl.segments.back().t_end, 2 * kPi, 1e-9);
  // Incomplete rarefaction pieces explain themselves.
  for (const auto& seg : tl.segments) {
    if (!seg.complete) EXPECT_FALSE(seg.diagnostics.empty());
  }
}

TEST(BuildTimeline, HorizonBeforeFirstIntersection) {
  SolverSettings s;
  const auto tl = build_timeline(example3(), s, 0.5);
  ASSERT_EQ(tl.segments.size(), 1u);
  EXPECT_TRUE(tl.events.empty());
  EXPECT_LE(tl.segments[0].points.back().t, 0.5 + 1e-12);
  EXPECT_TRUE(tl.segments[0].complete);
  const auto x = interface_position(tl, 0.25);
  ASSERT_TRUE(x);
  EXPECT_TRUE(std::isfinite(*x));
  EXPECT_FALSE(interface_position(tl, 0.75));
}

TEST(BuildTimeline, Example2ReportsNoPeriodAndDiagnosedShock) {
  SolverSettings s;
  const auto tl = build_timeline(example2(), s, 3.0);
  EXPECT_FALSE(tl.period);
  ASSERT_FALSE(tl.segments.empty());
  const auto& shock = tl.segments[0];
  EXPECT_EQ(shock.kind, SegmentKind::SingularShock);
  if (!shock.complete) {
    ASSERT_FALSE(shock.diagnostics.empty());
    EXPECT_TRUE(tl.partial());
  }
}

TEST(BuildTimeline, EqualVelocitiesRejected) {
  SolverSettings s;
  const auto p = RiemannProblem::make({1.0, 0.3, 1.0, 0.0}, {2.0, 0.3, 0.0, 0.0});
  try {
    build_timeline(p, s, 5.0);
    FAIL();
  } catch (const SolverError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateData);
  }
}

TEST(ValidateTimeline, Example3PeriodicAndAbutting) {
  SolverSettings s;
  const auto tl = build_timeline(example3(), s, 4 * kPi);
  const auto rep = validate_timeline(tl, s);
  ASSERT_FALSE(rep.periodic_mismatch.empty());
  for (double m : rep.periodic_mismatch) EXPECT_LE(m, 1e-5);
  for (double g : rep.abutment_gaps) EXPECT_LE(g, 1e-6);
  ASSERT_EQ(rep.switches.size(), 6u);
  for (const auto& sw : rep.switches) EXPECT_LE(std::abs(sw.jump), 1e-4);
  ASSERT_EQ(rep.segments.size(), tl.segments.size());
  EXPECT_LE(rep.segments[0].r1_max, 1e-5);
  EXPECT_LE(rep.segments[0].r2_max, 1e-5);
}

TEST(ValidateTimeline, FlagsInjectedShift) {
  SolverSettings s;
  auto tl = build_timeline(example3(), s, 4 * kPi);
  const auto clean = validate_timeline(tl, s);
  for (auto& seg : tl.segments) {
    if (seg.kind == SegmentKind::SingularShock && seg.t_start > kPi) {
      for (auto& pt : seg.points) pt.phi += 1e-3;
    }
  }
  const auto rep = validate_timeline(tl, s);
  double worst = 0.0;
  for (double m : rep.periodic_mismatch) worst = std::max(worst, m);
  EXPECT_GT(worst, 1e-4);
  EXPECT_GT(rep.violations.size(), clean.violations.size());
}

TEST(Timeline, ToStringLabels) {
  EXPECT_EQ(to_string(EventKind::Switch), "switch");
  EXPECT_EQ(to_string(EventKind::Intersection), "intersection");
  EXPECT_EQ(to_string(IntervalKind::Shock), "shock");
}
