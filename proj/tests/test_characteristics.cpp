#include <gtest/gtest.h>

#include <cmath>

#include "coldplasma/characteristics.hpp"
#include "problems.hpp"

using namespace coldplasma;
using namespace coldplasma::testing;

namespace {

std::vector<RiemannProblem> all_examples() { return {example1(), example2(), example3()}; }

}  // namespace

TEST(SideData, RejectsNonPositiveDensity) {
  EXPECT_THROW(RiemannProblem::make({0.0, 1.0, 0.0, 0.0}, {1.0, 0.0, 0.0, 0.0}), SolverError);
  EXPECT_THROW(RiemannProblem::make({1.0, 1.0, 0.0, 0.0}, {-2.0, 0.0, 0.0, 0.0}), SolverError);
  EXPECT_THROW(RiemannProblem::make({1.0, NAN, 0.0, 0.0}, {1.0, 0.0, 0.0, 0.0}), SolverError);
}

TEST(StateAt, InitialValues) {
  const auto p = example3();
  const auto s = state_at(p.right, 0.0);
  EXPECT_DOUBLE_EQ(s.V, 0.0);
  EXPECT_DOUBLE_EQ(s.E, -1.0);
  EXPECT_DOUBLE_EQ(trajectory_at(p.right, 0.0), 0.0);
}

TEST(StateAt, ClosedFormsMatchRk4Oracle) {
  SolverSettings s;
  for (const auto& p : all_examples()) {
    for (const auto* side : {&p.left, &p.right}) {
      const auto path = oracle_characteristic_path(*side, 4 * kPi, 20000);
      double worst = 0.0;
      for (const auto& o : path) {
        const auto c = state_at(*side, o.t);
        worst = std::max({worst, std::abs(c.V - o.V), std::abs(c.E - o.E), std::abs(trajectory_at(*side, o.t) - o.x)});
      }
      EXPECT_LE(worst, 1e-8);
      const auto single = oracle_characteristic(*side, 3.3, s);
      EXPECT_NEAR(single.x, trajectory_at(*side, 3.3), 1e-8);
    }
  }
}

TEST(StateAt, OscillatorEnergyConserved) {
  for (const auto& p : all_examples()) {
    for (const auto* side : {&p.left, &p.right}) {
      const double w0 = side->n * side->V0 * side->V0 + side->E0 * side->E0;
      for (int k = 0; k <= 400; ++k) {
        const auto st = state_at(*side, 4 * kPi * k / 400);
        EXPECT_NEAR(side->n * st.V * st.V + st.E * st.E, w0, 1e-10);
      }
    }
  }
}

TEST(JumpInvariant, ConstantInTime) {
  for (const auto& p : all_examples()) {
    const double K = jump_invariant_K(p);
    for (int k = 0; k <= 100; ++k) EXPECT_NEAR(jump_invariant_at(p, 0.1 * k), K, 1e-10);
  }
  // Example 3: [n V^2 + E^2] = (0 + 1) - (1 + 1).
  EXPECT_DOUBLE_EQ(jump_invariant_K(example3()), -1.0);
}

TEST(FirstIntersection, EqualDensitiesQuarterPeriod) {
  SolverSettings s;
  EXPECT_NEAR(first_intersection(example1(), s), kPi / 2, 1e-9);
}

TEST(FirstIntersection, CommensurateExample) {
  SolverSettings s;
  const double T = first_intersection(example3(), s);
  EXPECT_NEAR(T, kEx3Tstar, 1e-6);
  EXPECT_NEAR(trajectory_at(example3().left, T), trajectory_at(example3().right, T), 1e-12);
}

TEST(FirstIntersection, ParallelTrajectoriesThrowCoincident) {
  SolverSettings s;
  const auto p = RiemannProblem::make({1.0, 1.0, 0.0, 0.0}, {1.0, 1.0, 0.0, 0.0});
  try {
    first_intersection(p, s);
    FAIL();
  } catch (const SolverError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Coincident);
  }
}

TEST(FirstIntersection, NoCrossingThrowsNotFound) {
  SolverSettings s;
  // x- = sin t, x+ = 2 + sin t never meet.
  auto p = RiemannProblem::make({1.0, 1.0, 0.0, 0.0}, {1.0, 1.0, 0.0, 0.0});
  p.right.x0 = 2.0;
  try {
    first_intersection(p, s, 10.0);
    FAIL();
  } catch (const SolverError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotFound);
  }
}

TEST(IntersectionTimes, Example3OverTwoPeriods) {
  SolverSettings s;
  const auto ts = intersection_times(example3(), 4 * kPi, s);
  ASSERT_EQ(ts.size(), 4u);
  EXPECT_NEAR(ts[0], kEx3Tstar, 1e-6);
  EXPECT_NEAR(ts[1], 2 * kPi, 1e-9);
  EXPECT_NEAR(ts[2], 2 * kPi + kEx3Tstar, 1e-6);
  EXPECT_NEAR(ts[3], 4 * kPi, 1e-9);
}

TEST(IntersectionTimes, Example1) {
  SolverSettings s;
  const auto ts = intersection_times(example1(), 2 * kPi, s);
  ASSERT_EQ(ts.size(), 2u);
  EXPECT_NEAR(ts[0], kPi / 2, 1e-9);
  EXPECT_NEAR(ts[1], 2 * kPi, 1e-9);
}

TEST(DegenerateIntersection, FieldRatioDecides) {
  SolverSettings s;
  // n = 1 both sides, sin(T) = 0 with cos(T) = -1 at T = pi.
  const auto meet = RiemannProblem::make({1.0, 1.0, 2.0, 0.0}, {1.0, 0.0, 2.0, 0.0});
  EXPECT_TRUE(degenerate_intersection_check(meet, kPi, s));
  EXPECT_FALSE(degenerate_intersection_check(example1(), kPi, s));
  EXPECT_THROW(degenerate_intersection_check(example1(), 1.0, s), SolverError);
}

TEST(ClassifyInitialRegime, ByVelocityOrder) {
  EXPECT_EQ(classify_initial_regime(example3()), InitialRegime::ShockFirst);
  const auto rar = RiemannProblem::make({1.0, -1.0, 0.0, 0.0}, {1.0, 1.0, 0.0, 0.0});
  EXPECT_EQ(classify_initial_regime(rar), InitialRegime::RarefactionFirst);
  const auto flat = RiemannProblem::make({1.0, 0.5, 0.0, 0.0}, {2.0, 0.5, 0.0, 0.0});
  try {
    classify_initial_regime(flat);
    FAIL();
  } catch (const SolverError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateData);
  }
}

TEST(SignAssumptions, ReportedNotEnforced) {
  const auto a = sign_assumptions(example3());
  EXPECT_FALSE(a.v_minus_negative);
  EXPECT_TRUE(a.jump_v_negative);
  EXPECT_FALSE(a.e_minus_negative);
  EXPECT_TRUE(a.jump_e_negative);
  EXPECT_FALSE(a.all());
  const auto all = RiemannProblem::make({1.0, -1.0, -1.0, 0.0}, {2.0, -2.0, -3.0, 0.0});
  EXPECT_TRUE(sign_assumptions(all).all());
}

TEST(DefaultHorizon, ThreePeriodsOfSlowerMedium) {
  EXPECT_NEAR(default_horizon(example3()), 6 * kPi, 1e-12);
  EXPECT_NEAR(default_horizon(example1()), 6 * kPi, 1e-12);
}
