#include <gtest/gtest.h>

#include <cmath>

#include "coldplasma/rarefaction.hpp"
#include "problems.hpp"

using namespace coldplasma;
using namespace coldplasma::testing;

namespace {

FanGeometry ex3_fan() { return {kEx3TstarExact, 2 * kPi - kEx3TstarExact}; }

double distance_to(const std::vector<double>& ts, double t) {
  double d = 1e300;
  for (double s : ts) d = std::min(d, std::abs(t - s));
  return d;
}

}  // namespace

TEST(BCoefficient, EqualsHalfAngleTangent) {
  SolverSettings s;
  for (double n : {0.3, 1.0, 2.0, 4.0, 7.5}) {
    for (double T : {0.2, 0.9, 1.7, 2.4}) {
      const double w = std::sqrt(n) * T;
      if (std::abs(std::cos(w) + 1.0) < 1e-3) continue;
      EXPECT_NEAR(b_coefficient(n, T, s), std::tan(w / 2), 1e-10 * (1 + std::abs(std::tan(w / 2))));
    }
  }
}

TEST(BCoefficient, Example3FrozenValues) {
  SolverSettings s;
  // tan(T*/2) and tan(T*) at T* = 1.0358959519612749.
  EXPECT_NEAR(b_coefficient(1.0, 1.0358959519612749, s), 0.5698402909980532, 1e-12);
  EXPECT_NEAR(b_coefficient(4.0, 1.0358959519612749, s), 1.687710482195018, 1e-12);
}

TEST(BCoefficient, FullPeriodLimitAndResonance) {
  SolverSettings s;
  EXPECT_DOUBLE_EQ(b_coefficient(1.0, 2 * kPi, s), 0.0);
  try {
    b_coefficient(1.0, kPi, s);
    FAIL();
  } catch (const SolverError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateB);
  }
  EXPECT_THROW(b_coefficient(1.0, -1.0, s), SolverError);
}

TEST(CoeffsAt, BoundaryContinuityWithOuterState) {
  SolverSettings s;
  const auto p = example3();
  for (const FanGeometry fan : {ex3_fan(), FanGeometry{2 * kPi + kEx3Tstar, 2 * kPi - kEx3Tstar}}) {
    for (const SideData* side : {&p.left, &p.right}) {
      const auto sing = fan_singular_times(*side, fan);
      for (int k = 1; k < 200; ++k) {
        const double t = fan.t_open + fan.duration * k / 200.0;
        if (distance_to(sing, t) < 1e-3) continue;
        const auto c = coeffs_at(*side, t, fan, s);
        const double x = trajectory_at(*side, t);
        const auto st = state_at(*side, t);
        EXPECT_NEAR(c.a * x + c.b, st.V, 1e-10 * (1 + std::abs(c.a)));
        EXPECT_NEAR(c.c * x + c.d, st.E, 1e-10 * (1 + std::abs(c.c)));
        EXPECT_DOUBLE_EQ(c.density, side->n - c.c);
      }
    }
  }
}

TEST(CoeffsAt, SatisfyCoefficientOdes) {
  SolverSettings s;
  const auto p = example3();
  const auto fan = ex3_fan();
  const double h = 1e-5;
  for (const SideData* side : {&p.left, &p.right}) {
    const auto sing = fan_singular_times(*side, fan);
    int checked = 0;
    for (int k = 1; k <= 400 && checked < 100; ++k) {
      const double t = fan.t_open + fan.duration * k / 401.0;
      if (distance_to(sing, t) < 0.15 || t - fan.t_open < 0.15 || fan.t_close() - t < 0.15) continue;
      const auto m = coeffs_at(*side, t - h, fan, s);
      const auto c = coeffs_at(*side, t, fan, s);
      const auto q = coeffs_at(*side, t + h, fan, s);
      const double da = (q.a - m.a) / (2 * h);
      const double dc = (q.c - m.c) / (2 * h);
      EXPECT_LE(std::abs(da + c.a * c.a + c.c), 1e-6) << "t=" << t;
      EXPECT_LE(std::abs(dc - c.a * (side->n - c.c)), 1e-6) << "t=" << t;
      ++checked;
    }
    EXPECT_GE(checked, 100);
  }
}

TEST(CoeffsAt, OutsideFanRejected) {
  SolverSettings s;
  const auto p = example3();
  EXPECT_THROW(coeffs_at(p.left, 0.5, ex3_fan(), s), SolverError);
  EXPECT_THROW(coeffs_at(p.left, kEx3Tstar, ex3_fan(), s), SolverError);
}

TEST(CoeffsAt, CollapseIsBoundarySingularity) {
  SolverSettings s;
  const auto p = example3();
  const auto sing = fan_singular_times(p.right, ex3_fan());
  ASSERT_EQ(sing.size(), 2u);
  EXPECT_NEAR(sing[0], kPi, 1e-12);
  EXPECT_NEAR(sing[1], kEx3Tstar + kPi, 1e-6);
  try {
    coeffs_at(p.right, sing[0], ex3_fan(), s);
    FAIL();
  } catch (const SolverError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BoundarySingularity);
  }
  EXPECT_TRUE(fan_singular_times(p.left, ex3_fan()).empty());
}

TEST(SwitchPoints, Example3AllOnPlusCharacteristic) {
  SolverSettings s;
  const auto p = example3();
  const auto fan = ex3_fan();
  const auto res = find_switch_points(p, fan.t_open, fan.t_close(), fan, s);
  ASSERT_EQ(res.points.size(), 3u);
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(res.points[k].t, kEx3Switch[k], 1e-5);
    EXPECT_EQ(res.points[k].side, Side::Plus);
    EXPECT_LE(std::abs(switch_amplitude(p, res.points[k], fan, s)), 1e-4);
    // Both switching curves pass through x+ there.
    const double x = trajectory_at(p.right, res.points[k].t);
    EXPECT_NEAR(psi1(p, res.points[k].t, fan, s), x, 1e-6);
    EXPECT_NEAR(psi2(p, Side::Plus, res.points[k].t, fan, s), x, 1e-6);
  }
  EXPECT_FALSE(res.inconsistency);
  ASSERT_EQ(res.host_sides.size(), 1u);
  EXPECT_EQ(res.host_sides[0], Side::Plus);
}

TEST(SwitchPoints, EqualDensitiesHaveNone) {
  SolverSettings s;
  const auto p = example1();
  const FanGeometry fan{kPi / 2, 1.5 * kPi};
  EXPECT_TRUE(find_switch_points(p, fan.t_open, fan.t_close(), fan, s).points.empty());
}

TEST(SwitchPoints, EmptyWindow) {
  SolverSettings s;
  const auto fan = ex3_fan();
  EXPECT_TRUE(find_switch_points(example3(), 3.0, 3.0, fan, s).points.empty());
}

TEST(Psi1, UndefinedWhenFieldSlopesAgree) {
  SolverSettings s;
  const auto p = example1();
  const FanGeometry fan{kPi / 2, 1.5 * kPi};
  try {
    psi1(p, 2.0, fan, s);
    FAIL();
  } catch (const SolverError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UndefinedCurve);
  }
}

TEST(SideProfile, ConstantModelIsOuterState) {
  SolverSettings s;
  const auto p = example3();
  const auto prof = side_profile(p.right, SideModel::Constant, 0.7, 123.0, nullptr, s);
  const auto st = state_at(p.right, 0.7);
  EXPECT_DOUBLE_EQ(prof.rho, 4.0);
  EXPECT_DOUBLE_EQ(prof.V, st.V);
  EXPECT_DOUBLE_EQ(prof.E, st.E);
}

TEST(Fluxes, JumpForms) {
  const SideProfile l{1.0, 2.0, 3.0};
  const SideProfile r{4.0, -1.0, 0.5};
  // -[rho V] + [rho] u with u = 0.3
  EXPECT_NEAR(mass_flux(l, r, 0.3), -(-4.0 - 2.0) + 3.0 * 0.3, 1e-15);
  const double jump_v3 = 4.0 * -1.0 - 8.0;
  const double jump_q = (4.0 + 0.25) - (4.0 + 9.0);
  EXPECT_NEAR(energy_flux(l, r, 0.3), -jump_v3 + jump_q * 0.3, 1e-14);
}
