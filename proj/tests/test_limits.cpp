#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bpyield/convexity.hpp"
#include "bpyield/limits.hpp"

using namespace bpyield;

namespace {

constexpr double kPi = std::numbers::pi;

// Radius t along a stress direction at which F changes sign, by bisection.
double ray_strength(const BPParams& p, const Eigen::Vector3d& dir) {
  const CriterionSpec spec = CriterionSpec::from_bp(p);
  auto F = [&](double t) { return yield_value(StressState<double>((t * dir).eval()), spec).to_ieee(); };
  double lo = 0, hi = 1;
  while (F(hi) < 0) hi *= 2;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (F(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double tension(const BPParams& p) { return ray_strength(p, {1, 0, 0}); }
double compression(const BPParams& p) { return ray_strength(p, {-1, 0, 0}); }
double shear(const BPParams& p) { return ray_strength(p, {1, -1, 0}); }
double biaxial_compression(const BPParams& p) { return ray_strength(p, {-1, -1, 0}); }

void expect_rel(double actual, double expected, double tol) {
  EXPECT_NEAR(actual, expected, tol * std::abs(expected)) << "expected " << expected;
}

}  // namespace

TEST(Realize, StrengthsMatchAtDefaultScale) {
  const double fc = 30, r = 10, ft = fc / r;
  for (auto crit : {ClassicalCriterion::drucker_prager(fc, r), ClassicalCriterion::modified_tresca(fc, r),
                    ClassicalCriterion::coulomb_mohr(fc, r)}) {
    const auto real = realize(crit);
    expect_rel(tension(real.params), ft, 1e-4);
    expect_rel(compression(real.params), fc, 1e-4);
    EXPECT_TRUE(certify(CriterionSpec::from_bp(real.params)).admissible) << to_string(crit.kind);
  }
  for (auto crit : {ClassicalCriterion::von_mises(2.0), ClassicalCriterion::tresca(2.0)}) {
    const auto real = realize(crit);
    expect_rel(tension(real.params), 2.0, 1e-4);
    expect_rel(compression(real.params), 2.0, 1e-4);
    EXPECT_TRUE(certify(CriterionSpec::from_bp(real.params)).admissible) << to_string(crit.kind);
  }
}

TEST(Realize, ErrorShrinksWithScaleExponent) {
  const auto crit = ClassicalCriterion::drucker_prager(1, 3);
  double prev = 1;
  for (int k : {3, 5, 7}) {
    const double err = std::abs(compression(realize(crit, k).params) - 1);
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev, 1e-5);
}

TEST(Realize, ShearStrengths) {
  expect_rel(shear(realize(ClassicalCriterion::von_mises(1)).params), 1 / std::sqrt(3.0), 1e-4);
  expect_rel(shear(realize(ClassicalCriterion::tresca(1)).params), 0.5, 1e-4);
  const double fc = 1, ft = 0.25;
  const auto cm = realize(ClassicalCriterion::coulomb_mohr(fc, fc / ft)).params;
  expect_rel(shear(cm), ft * fc / (ft + fc), 1e-4);
  expect_rel(biaxial_compression(cm), fc, 1e-4);
}

TEST(Realize, VonMisesIsPressureInsensitive) {
  const CriterionSpec spec = CriterionSpec::from_bp(realize(ClassicalCriterion::von_mises(1)).params);
  for (double p : {-10.0, 0.0, 10.0}) EXPECT_NEAR(*surface_q(p, 0.3, spec), 1.0, 1e-4);
}

TEST(Realize, CamClayIsExact) {
  const auto real = realize(ClassicalCriterion::cam_clay(1.2, 3));
  EXPECT_EQ(real.params.M, 1.2);
  EXPECT_EQ(real.params.pc, 3);
  EXPECT_EQ(real.params.c, 0);
  EXPECT_TRUE(real.warnings.empty());
}

TEST(Realize, CoulombMohrBeta) {
  EXPECT_NEAR(realize(ClassicalCriterion::coulomb_mohr(1, 4)).params.beta, 6 / kPi * std::atan(std::sqrt(3.0) / 9), 1e-15);
  // r = 1 gives the Tresca hexagon.
  EXPECT_NEAR(6 / kPi * std::atan(std::sqrt(3.0) / 3), 1.0, 1e-15);
}

TEST(Realize, GeneralizedCoulombMohrKeepsStrengths) {
  for (double beta : {0.2, 0.5, 0.8}) {
    const auto real = coulomb_mohr_generalized(1, 5, beta);
    expect_rel(tension(real.params), 0.2, 1e-4);
    expect_rel(compression(real.params), 1, 1e-4);
  }
  EXPECT_THROW(coulomb_mohr_generalized(1, 1.5, 0.0), DomainError);
}

TEST(Realize, RatioOneFallsBack) {
  const auto dp = realize(ClassicalCriterion::drucker_prager(1, 1));
  EXPECT_EQ(dp.params.gamma, 0);
  EXPECT_EQ(dp.params.c, dp.params.pc);
  ASSERT_FALSE(dp.warnings.empty());
  EXPECT_NE(dp.warnings.back().find("von-mises"), std::string::npos);
  const auto mt = realize(ClassicalCriterion::modified_tresca(1, 1));
  EXPECT_EQ(mt.params.gamma, kLimitGamma);
}

TEST(Realize, RejectsBadInput) {
  EXPECT_THROW(realize(ClassicalCriterion::von_mises(1), 2), DomainError);
  EXPECT_THROW(realize(ClassicalCriterion::von_mises(-1)), DomainError);
  EXPECT_THROW(realize(ClassicalCriterion::drucker_prager(1, 0.5)), DomainError);
  EXPECT_THROW(realize(ClassicalCriterion::cam_clay(0, 1)), DomainError);
}

TEST(Realize, DeviatoricRatios) {
  const auto tr = CriterionSpec::from_bp(realize(ClassicalCriterion::tresca(1)).params);
  const double g0 = deviatoric_g(0.0, tr.deviatoric);
  EXPECT_NEAR(g0 / deviatoric_g(kPi / 6, tr.deviatoric), 2 / std::sqrt(3.0), 1e-4);
  // Rankine triangle: tension radius half the compression radius.
  const BPShape rankine{0, kLimitGamma};
  EXPECT_NEAR(deviatoric_g(0.0, rankine) / deviatoric_g(kPi / 3, rankine), 0.5, 1e-4);
}

TEST(DeshpandeFleck, RoundTrip) {
  const BPParams p = deshpande_fleck_to_bp(2.0, 0.7);
  EXPECT_EQ(p.pc, p.c);
  const auto back = bp_to_deshpande_fleck(p.M, p.pc, p.c);
  EXPECT_NEAR(back.Y, 2.0, 1e-14);
  EXPECT_NEAR(back.alpha, 0.7, 1e-15);
  EXPECT_THROW(bp_to_deshpande_fleck(1, 2, 1), ShapeMismatch);
}

TEST(DeshpandeFleck, MatchesTheFoamSurface) {
  // Deshpande-Fleck: σ̂² = (q² + α² σm²)/(1 + (α/3)²) = Y², σm = −p.
  const double Y = 1.5, a = 1.2;
  const CriterionSpec spec = CriterionSpec::from_bp(deshpande_fleck_to_bp(Y, a));
  for (double p : {-1.0, 0.0, 0.5}) {
    const double q = *surface_q(p, 0.4, spec);
    EXPECT_NEAR((q * q + a * a * p * p) / (1 + a * a / 9), Y * Y, 1e-12);
  }
}

TEST(DeshpandeFleck, WarnsForSmallAlpha) {
  std::vector<std::string> w;
  deshpande_fleck_to_bp(1, 1e-4, &w);
  EXPECT_EQ(w.size(), 1u);
}

TEST(Gurson, SharesInterceptsAndShearStrength) {
  const GursonParams g{0.05};
  const BPParams p = gurson_equivalent(g);
  EXPECT_NEAR(*gurson_surface_q(p.pc, g), 0.0, 1e-6);
  EXPECT_NEAR(*gurson_surface_q(-p.c, g), 0.0, 1e-6);
  const CriterionSpec spec = CriterionSpec::from_bp(p);
  EXPECT_NEAR(*surface_q(0.0, 0.0, spec), *gurson_surface_q(0.0, g), 1e-12);
  EXPECT_FALSE(gurson_surface_q(1.1 * p.pc, g).has_value());
  EXPECT_FALSE(gurson_surface_q(-1.1 * p.pc, g).has_value());
}

TEST(Gurson, YieldFunctionZeroOnItsSurface) {
  const GursonParams g{0.02, 2.0};
  for (double p : {-1.0, 0.3, 2.0}) {
    const double q = *gurson_surface_q(p, g);
    EXPECT_NEAR(gurson_yield(principal_from_invariants(p, q, 0.2), g), 0.0, 1e-12);
  }
  EXPECT_THROW(gurson_equivalent(GursonParams{0.5, 1, 1.5, 1, 1}), DomainError);
  EXPECT_THROW(gurson_equivalent(GursonParams{1.2}), DomainError);
}

TEST(Newman, Values) {
  EXPECT_EQ(newman_strength(0, 40), 40);
  EXPECT_NEAR(newman_strength(40, 40), 40 * 4.7, 1e-12);
  EXPECT_THROW(newman_strength(-1, 40), DomainError);
}
