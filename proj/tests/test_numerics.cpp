#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "coldplasma/numerics.hpp"

using namespace coldplasma;

TEST(SolverSettings, RejectsNonPositiveTolerances) {
  SolverSettings s;
  EXPECT_NO_THROW(s.validate());
  s.root_tol = 0.0;
  EXPECT_THROW(s.validate(), SolverError);
  s = {};
  s.bracket_grid = 1;
  EXPECT_THROW(s.validate(), SolverError);
}

TEST(BracketRoots, FindsEverySignChangeOfSine) {
  const auto scan = bracket_roots([](double t) { return std::sin(t); }, 0.5, 10.0, 256);
  ASSERT_EQ(scan.brackets.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    const double root = (k + 1) * std::numbers::pi;
    EXPECT_LE(scan.brackets[k].lo, root);
    EXPECT_GE(scan.brackets[k].hi, root);
  }
}

TEST(BracketRoots, RootOnNodeReportedOnce) {
  // grid of 4 cells on (0, 4): node 2 is an exact root.
  const auto scan = bracket_roots([](double t) { return t - 2.0; }, 0.0, 4.0, 4);
  ASSERT_EQ(scan.brackets.size(), 1u);
}

TEST(BracketRoots, RootOnLastNodeCounts) {
  const auto scan = bracket_roots([](double t) { return t - 1.0; }, 0.0, 1.0, 8);
  ASSERT_EQ(scan.brackets.size(), 1u);
  EXPECT_DOUBLE_EQ(scan.brackets[0].hi, 1.0);
}

TEST(BracketRoots, IdenticallyZeroFlagged) {
  const auto scan = bracket_roots([](double) { return 0.0; }, 0.0, 1.0, 16);
  EXPECT_TRUE(scan.all_zero);
  EXPECT_TRUE(scan.brackets.empty());
}

TEST(BracketRoots, DoesNotBracketAcrossPoles) {
  // tan changes sign across pi/2 through infinity, not through a root.
  const auto f = [](double t) { return std::abs(t - 1.5) < 0.05 ? std::nan("") : 1.0 / (t - 1.5); };
  const auto scan = bracket_roots(f, 1.0, 2.0, 40);
  EXPECT_TRUE(scan.brackets.empty());
  EXPECT_GT(scan.non_finite_nodes, 0u);
}

TEST(RefineRoot, ReachesBracketTolerance) {
  const auto f = [](double t) { return std::cos(t) - t; };
  const double r = refine_root(f, {0.0, 1.0, f(0.0), f(1.0)}, 1e-13);
  EXPECT_NEAR(r, 0.7390851332151607, 1e-12);
}

TEST(RefineRoot, NonFiniteValuesThrow) {
  const auto f = [](double t) { return t > 0.3 ? std::nan("") : -1.0; };
  EXPECT_THROW(refine_root(f, {0.0, 1.0, -1.0, 1.0}, 1e-12), SolverError);
}

TEST(IntegrateOde, HarmonicOscillatorMatchesClosedForm) {
  SolverSettings s;
  const OdeRhs rhs = [](double, const State& y, State& dy) {
    dy[0] = y[1];
    dy[1] = -4.0 * y[0];
  };
  IntegrationOptions opts;
  opts.dense_samples = 100;
  const auto path = integrate_ode(rhs, {1.0, 0.0}, 0.0, 5.0, s, opts);
  ASSERT_TRUE(path.reached_end());
  ASSERT_EQ(path.samples.size(), 101u);
  for (const auto& p : path.samples) EXPECT_NEAR(p.y[0], std::cos(2.0 * p.t), 1e-8);
  EXPECT_DOUBLE_EQ(path.back().t, 5.0);
}

TEST(IntegrateOde, TerminalEventStopsAtCrossing) {
  SolverSettings s;
  const OdeRhs rhs = [](double, const State& y, State& dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
  };
  IntegrationOptions opts;
  opts.events.push_back({"zero", [](double, const State& y) { return y[0]; }, true, -1});
  const auto path = integrate_ode(rhs, {1.0, 0.0}, 0.0, 10.0, s, opts);
  ASSERT_TRUE(path.terminal_event);
  EXPECT_NEAR(path.terminal_event->t, std::numbers::pi / 2, 1e-10);
  EXPECT_FALSE(path.reached_end());
}

TEST(IntegrateOde, DirectionFilterAndPassiveEvents) {
  SolverSettings s;
  const OdeRhs rhs = [](double, const State& y, State& dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
  };
  IntegrationOptions opts;
  opts.events.push_back({"rising", [](double, const State& y) { return y[0]; }, false, +1});
  const auto path = integrate_ode(rhs, {1.0, 0.0}, 0.0, 10.0, s, opts);
  ASSERT_TRUE(path.reached_end());
  // cos t rises through zero at 3pi/2 only, inside (0, 10).
  ASSERT_EQ(path.events.size(), 1u);
  EXPECT_NEAR(path.events[0].t, 1.5 * std::numbers::pi, 1e-10);
}

TEST(IntegrateOde, ThrowingRhsBecomesStallWithLastState) {
  SolverSettings s;
  const OdeRhs rhs = [](double t, const State& y, State& dy) {
    if (t > 0.5) throw SolverError(ErrorKind::Degeneracy, "boom", t, y);
    dy[0] = 1.0;
  };
  const auto path = integrate_ode(rhs, {0.0}, 0.0, 1.0, s);
  ASSERT_TRUE(path.stall);
  EXPECT_EQ(path.stall->kind, ErrorKind::Degeneracy);
  EXPECT_LE(path.stall->t, 0.5 + 1e-12);
  ASSERT_EQ(path.stall->state.size(), 1u);
  EXPECT_NEAR(path.stall->state[0], path.stall->t, 1e-12);
}

TEST(IntegrateOde, BlowUpReportedAsStall) {
  SolverSettings s;
  // y' = y^2 from y(0) = 1 blows up at t = 1.
  const OdeRhs rhs = [](double, const State& y, State& dy) { dy[0] = y[0] * y[0]; };
  const auto path = integrate_ode(rhs, {1.0}, 0.0, 2.0, s);
  EXPECT_FALSE(path.reached_end());
  ASSERT_TRUE(path.stall);
  EXPECT_LT(path.back().t, 1.0);
}

TEST(ShootBvp, LinearProblemRecoversSlope) {
  // y'' = -y, y(0) = 0, y(1) = sin(1)  ->  y'(0) = 1.
  SolverSettings s;
  const auto ivp = [&](double slope) {
    const OdeRhs rhs = [](double, const State& y, State& dy) {
      dy[0] = y[1];
      dy[1] = -y[0];
    };
    return integrate_ode(rhs, {0.0, slope}, 0.0, 1.0, s);
  };
  const auto res = shoot_bvp(ivp, [](const PathSample& end) { return end.y[0] - std::sin(1.0); }, {-3.0, 3.0},
                             std::nullopt, s);
  ASSERT_TRUE(res.converged());
  ASSERT_EQ(res.solutions.size(), 1u);
  EXPECT_NEAR(res.solutions[0], 1.0, 1e-8);
}

TEST(ShootBvp, ReportsAllRootsOfMultiSolutionProblem) {
  SolverSettings s;
  const ShotFunction shot = [](double k) { return ShotOutcome{(k - 1.0) * (k + 2.0), true}; };
  const auto res = shoot_bvp(shot, {-5.0, 5.0}, std::nullopt, s);
  ASSERT_EQ(res.solutions.size(), 2u);
  EXPECT_NEAR(res.solutions[0], -2.0, 1e-9);
  EXPECT_NEAR(res.solutions[1], 1.0, 1e-9);
}

TEST(ShootBvp, UnreachableTargetGivesNoSolution) {
  SolverSettings s;
  const ShotFunction shot = [](double k) { return ShotOutcome{k * k + 1.0, true}; };
  const auto res = shoot_bvp(shot, {-1.0, 1.0}, std::nullopt, s);
  EXPECT_FALSE(res.converged());
  ASSERT_TRUE(res.diagnostic);
  EXPECT_EQ(res.diagnostic->kind, ErrorKind::NoSolution);
}

TEST(ShootBvp, FailedShotsAreNeverSolutions) {
  SolverSettings s;
  // Residual crosses zero only where the shot does not reach.
  const ShotFunction shot = [](double k) { return ShotOutcome{k, k > 0.5}; };
  const auto res = shoot_bvp(shot, {-1.0, 1.0}, std::nullopt, s);
  EXPECT_FALSE(res.converged());
}
