#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "bpyield/invariants.hpp"
#include "oracles.hpp"

using namespace bpyield;

namespace {

constexpr double kPi = std::numbers::pi;

Principal<double> sorted_desc(Principal<double> v) {
  std::sort(v.data(), v.data() + 3, std::greater<>());
  return v;
}

}  // namespace

TEST(Invariants, UniaxialTension) {
  const auto inv = invariants(StressState<double>(1, 0, 0));
  EXPECT_NEAR(inv.p, -1.0 / 3.0, 1e-15);
  EXPECT_NEAR(inv.q, 1.0, 1e-15);
  EXPECT_NEAR(inv.theta, 0.0, 1e-15);
  EXPECT_FALSE(inv.hydrostatic);
}

TEST(Invariants, UniaxialCompressionIsTriaxialCompression) {
  const auto inv = invariants(StressState<double>(-1, 0, 0));
  EXPECT_NEAR(inv.p, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(inv.q, 1.0, 1e-15);
  EXPECT_NEAR(inv.theta, kPi / 3, 1e-15);
}

TEST(Invariants, PureShear) {
  const auto inv = invariants(StressState<double>(1, -1, 0));
  EXPECT_NEAR(inv.p, 0.0, 1e-15);
  EXPECT_NEAR(inv.q, std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(inv.theta, kPi / 6, 1e-15);
}

TEST(Invariants, HydrostaticFlag) {
  const auto inv = invariants(StressState<double>(-2, -2, -2));
  EXPECT_TRUE(inv.hydrostatic);
  EXPECT_DOUBLE_EQ(inv.p, 2.0);
  EXPECT_EQ(inv.theta, 0.0);
  EXPECT_FALSE(invariants(StressState<double>(-2, -2, -2 + 1e-6)).hydrostatic);
}

TEST(Invariants, PermutationInvariant) {
  const auto a = invariants(StressState<double>(3, -1, 0.5));
  const auto b = invariants(StressState<double>(0.5, 3, -1));
  const auto c = invariants(StressState<double>(-1, 0.5, 3));
  EXPECT_NEAR(a.theta, b.theta, 1e-15);
  EXPECT_NEAR(a.theta, c.theta, 1e-15);
  EXPECT_NEAR(a.q, b.q, 1e-15);
}

TEST(Invariants, RoundTripThroughPrincipalStresses) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 1000; ++i) {
    const StressState<double> s(u(rng), u(rng), u(rng));
    const auto inv = invariants(s);
    const StressState<double> back = principal_from_invariants(inv);
    const double scale = s.sigma.cwiseAbs().maxCoeff();
    EXPECT_LE((sorted_desc(back.sigma) - sorted_desc(s.sigma)).cwiseAbs().maxCoeff(), 1e-12 * scale);
  }
}

TEST(Invariants, AxisymmetricRoundTripKeepsFullPrecision) {
  for (double theta : {0.0, kPi / 3, 1e-9, kPi / 3 - 1e-9}) {
    const auto back = invariants(principal_from_invariants(0.7, 2.0, theta));
    EXPECT_NEAR(back.theta, theta, 1e-12);
    EXPECT_NEAR(back.q, 2.0, 1e-14);
  }
}

TEST(Invariants, LodeAngleOutOfRangeThrows) {
  EXPECT_THROW(principal_from_invariants(0.0, 1.0, -0.1), DomainError);
  EXPECT_THROW(principal_from_invariants(0.0, 1.0, kPi / 3 + 1e-6), DomainError);
  EXPECT_NO_THROW(principal_from_invariants(0.0, 1.0, kPi / 3 + 1e-13));
  EXPECT_THROW(principal_from_invariants(0.0, -1.0, 0.5), DomainError);
}

TEST(Invariants, GradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 200; ++i) {
    const StressState<double> s(u(rng), u(rng), u(rng));
    if (lode_sin3(deviator(s)) < 0.05) continue;
    const auto g = invariant_gradients(s);
    auto J2 = [](const oracle::Vec3& x) { return second_invariant(deviator(StressState<double>(x))); };
    auto J3 = [](const oracle::Vec3& x) { return third_invariant(deviator(StressState<double>(x))); };
    auto th = [](const oracle::Vec3& x) { return invariants(StressState<double>(x)).theta; };
    EXPECT_LE((g.dJ2 - oracle::gradient(J2, s.sigma, 1e-4)).norm(), 1e-8 * (1 + g.dJ2.norm()));
    EXPECT_LE((g.dJ3 - oracle::gradient(J3, s.sigma, 1e-4)).norm(), 1e-7 * (1 + g.dJ3.norm()));
    EXPECT_LE((g.dtheta - oracle::gradient(th, s.sigma, 1e-5)).norm(), 1e-6 * (1 + g.dtheta.norm()));
  }
}

TEST(Invariants, GradientUndefinedOnAxisymmetricStates) {
  EXPECT_THROW(invariant_gradients(StressState<double>(1, 0, 0)), DegenerateDirection);
  EXPECT_THROW(invariant_gradients(StressState<double>(1, 1, 1)), DegenerateDirection);
}

TEST(Invariants, DeviatoricFrameIsOrthonormal) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 200; ++i) {
    const StressState<double> s(u(rng), u(rng), u(rng));
    const auto frame = deviatoric_frame(s);
    ASSERT_TRUE(frame.defined);
    EXPECT_NEAR(frame.s_tilde.norm(), 1.0, 1e-12);
    EXPECT_NEAR(frame.s_tilde_perp.norm(), 1.0, 1e-9);
    EXPECT_NEAR(frame.s_tilde.dot(frame.s_tilde_perp), 0.0, 1e-9);
    EXPECT_NEAR(frame.s_tilde_perp.sum(), 0.0, 1e-9);
  }
}

TEST(Invariants, PerpendicularFrameIsTheScaledLodeGradient) {
  const StressState<double> s(2.0, -0.3, 0.4);
  const auto frame = deviatoric_frame(s);
  const auto g = invariant_gradients(s);
  const double q = invariants(s).q;
  EXPECT_LE((frame.s_tilde_perp + std::sqrt(2.0 / 3.0) * q * g.dtheta).norm(), 1e-12);
}

TEST(Invariants, FrameOnAxisymmetricMeridian) {
  const auto frame = deviatoric_frame(StressState<double>(1, 0, 0));
  EXPECT_FALSE(frame.defined);
  EXPECT_THROW(deviatoric_frame(StressState<double>(0, 0, 0)), DegenerateDirection);
}

TEST(Invariants, WorksWithLongDouble) {
  const auto inv = invariants(StressState<long double>(1.0L, 0.0L, 0.0L));
  EXPECT_NEAR(static_cast<double>(inv.q), 1.0, 1e-18);
}
