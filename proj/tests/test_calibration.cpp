#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bpyield/calibration.hpp"

using namespace bpyield;

namespace {

constexpr double kPi = std::numbers::pi;

// Exact surface points of `spec` at a few Lode angles.
FitDataset synthetic(const CriterionSpec& spec, int per_theta, std::vector<double> thetas, double noise = 0,
                     unsigned seed = 1) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0, 1);
  const auto& mer = std::get<BPMeridian>(spec.meridian);
  FitDataset data;
  for (double theta : thetas) {
    for (int i = 1; i <= per_theta; ++i) {
      const double phi = static_cast<double>(i) / (per_theta + 1);
      const double p = phi * (mer.pc + mer.c) - mer.c;
      const double q = *surface_q(p, theta, spec) * (1 + noise * n(rng));
      data.points.push_back({p, q, theta, 1});
    }
  }
  return data;
}

}  // namespace

TEST(Dataset, InvariantColumnsAndMetadata) {
  const auto data = parse_dataset(
      "# source: triaxial series A\n"
      "# unit: MPa\n"
      "p,q,theta\n"
      "1.0, 2.0, 0.5\n"
      "\n"
      "# trailing comment\n"
      "3,4,1.0471975511965976\n");
  ASSERT_EQ(data.points.size(), 2u);
  EXPECT_EQ(data.source, "triaxial series A");
  EXPECT_EQ(data.unit, "MPa");
  EXPECT_EQ(data.points[0].q, 2.0);
  EXPECT_EQ(data.points[1].w, 1.0);
}

TEST(Dataset, PrincipalColumnsConvertToInvariants) {
  const auto data = parse_dataset("s1,s2,s3,w\n-1,0,0,2\n-3,-3,-3,1\n");
  ASSERT_EQ(data.points.size(), 2u);
  EXPECT_NEAR(data.points[0].p, 1.0 / 3, 1e-15);
  EXPECT_NEAR(data.points[0].q, 1.0, 1e-15);
  EXPECT_NEAR(data.points[0].theta, kPi / 3, 1e-15);
  EXPECT_EQ(data.points[0].w, 2.0);
  EXPECT_EQ(data.points[1].q, 0.0);
}

TEST(Dataset, ErrorsCarryTheLine) {
  auto line_of = [](const char* text) -> std::size_t {
    try {
      parse_dataset(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("x,y\n1,2\n"), 1u);
  EXPECT_EQ(line_of("# c\np,q,theta\n1,2,0.1\n1,abc,0.2\n"), 4u);
  EXPECT_EQ(line_of("p,q,theta\n1,2\n"), 2u);
  EXPECT_EQ(line_of("p,q,theta\n1,2,inf\n"), 2u);
  EXPECT_EQ(line_of("# only comments\n"), 1u);
  EXPECT_THROW(parse_dataset("p,q,theta,w\n1,2,0.1,0\n"), ValidationError);
  EXPECT_THROW(parse_dataset("p,q,theta\n1,-2,0.1\n"), ValidationError);
  EXPECT_THROW(parse_dataset("p,q,theta\n1,2,1.2\n"), ValidationError);
  EXPECT_THROW(load_dataset("/nonexistent/data.csv"), ValidationError);
}

TEST(Params, NamesRoundTrip) {
  for (auto p : {FitParam::M, FitParam::pc, FitParam::c, FitParam::m, FitParam::alpha, FitParam::Gamma, FitParam::A,
                 FitParam::e, FitParam::k, FitParam::n, FitParam::gamma, FitParam::beta}) {
    EXPECT_EQ(parse_fit_param(to_string(p)), p);
  }
  EXPECT_FALSE(parse_fit_param("phi").has_value());
  EXPECT_EQ(parse_residual_mode("function_value"), ResidualMode::function_value);
  EXPECT_FALSE(parse_residual_mode("l1").has_value());
}

TEST(Params, GetSetAndMismatch) {
  CriterionSpec spec = CriterionSpec::from_bp({1, 2, 0.3, 2, 1, 1, 0});
  set_param(spec, FitParam::gamma, 0.4);
  EXPECT_EQ(get_param(spec, FitParam::gamma), 0.4);
  EXPECT_EQ(get_param(spec, FitParam::c), 0.3);
  EXPECT_THROW(get_param(spec, FitParam::e), ShapeMismatch);
  EXPECT_THROW(get_param(spec, FitParam::Gamma), ShapeMismatch);
  spec.deviatoric = PowerLawShape{0.2, 2};
  EXPECT_EQ(get_param(spec, FitParam::beta), 0.2);
}

TEST(Bounds, ScaleWithData) {
  FitDataset data;
  data.points = {{10, 5, 0, 1}, {-2, 1, 0, 1}};
  const Bounds pc = default_bounds(FitParam::pc, data);
  EXPECT_NEAR(pc.lo, 1e-3 * 15, 1e-12);
  EXPECT_NEAR(pc.hi, 1e3 * 15, 1e-9);
  EXPECT_EQ(default_bounds(FitParam::gamma, data).hi, kLimitGamma);
}

TEST(Residuals, ZeroOnTheSurface) {
  const CriterionSpec truth = CriterionSpec::from_bp({1.1, 3, 0.5, 2.2, 0.8, 0.9, 0.6});
  const auto data = synthetic(truth, 8, {0.0, 0.5, kPi / 3});
  for (auto mode : {ResidualMode::function_value, ResidualMode::meridian_distance}) {
    EXPECT_LE(goodness(truth, data, mode).max_abs, 1e-13);
  }
}

TEST(Residuals, PenaltyBeyondTheCap) {
  const CriterionSpec spec = CriterionSpec::from_bp({1, 1, 0, 2, 1, 1, 0});
  FitDataset data;
  data.points = {{2.0, 0.5, 0, 1}, {0.5, 0.5, 0, 1}};
  const auto g = goodness(spec, data, ResidualMode::meridian_distance);
  EXPECT_GT(std::abs(g.per_point(0)), 1.0);
  EXPECT_TRUE(std::isfinite(g.per_point(0)));
}

TEST(Fit, RecoversMeridianParameters) {
  const CriterionSpec truth = CriterionSpec::from_bp({1.1, 3, 0.5, 2.2, 0.8, 0.9, 0.6});
  const auto data = synthetic(truth, 12, {0.0, kPi / 6, kPi / 3});
  FitProblem problem;
  problem.spec_template = CriterionSpec::from_bp({0.5, 1, 0.1, 2.2, 0.8, 0.9, 0.6});
  problem.free = {FitParam::M, FitParam::pc, FitParam::c};
  problem.starts = 4;
  const auto result = fit(problem, data);
  EXPECT_LE(result.rms, 1e-9);
  EXPECT_TRUE(result.converged);
  EXPECT_NEAR(get_param(result.spec, FitParam::M), 1.1, 1e-6);
  EXPECT_NEAR(get_param(result.spec, FitParam::pc), 3, 1e-6);
  EXPECT_NEAR(get_param(result.spec, FitParam::c), 0.5, 1e-6);
}

TEST(Fit, AllSevenParametersOnSyntheticData) {
  const CriterionSpec truth = CriterionSpec::from_bp({0.9, 2, 0.3, 3, 0.5, 0.8, 0.7});
  const auto data = synthetic(truth, 10, {0.0, 0.3, 0.6, kPi / 3});
  FitProblem problem;
  problem.spec_template = CriterionSpec::from_bp({1, 1, 0.1, 2, 1, 1, 0.3});
  problem.free = {FitParam::M, FitParam::pc, FitParam::c, FitParam::m,
                  FitParam::alpha, FitParam::beta, FitParam::gamma};
  const auto result = fit(problem, data);
  EXPECT_LE(result.rms, 1e-6);
  EXPECT_TRUE(result.convexity.admissible);
}

TEST(Fit, NeverWorseThanTheFirstStartAndAlwaysAdmissible) {
  const CriterionSpec truth = CriterionSpec::from_bp({1, 2, 0.2, 2, 1, 0.5, 0.9});
  const auto data = synthetic(truth, 10, {0.0, kPi / 3}, 0.05);
  FitProblem problem;
  problem.spec_template = CriterionSpec::from_bp({1, 2, 0.2, 2, 1, 1, 0});
  problem.free = {FitParam::beta, FitParam::gamma};
  problem.starts = 6;
  const auto result = fit(problem, data);
  EXPECT_LE(result.rms, result.initial_rms);
  EXPECT_LE(result.rms, 0.1);
  const double gamma = get_param(result.spec, FitParam::gamma);
  const double beta = get_param(result.spec, FitParam::beta);
  EXPECT_GE(beta, 2 - beta_bound(gamma) - 1e-9);
  EXPECT_LE(beta, beta_bound(gamma) + 1e-9);
  EXPECT_TRUE(result.convexity.admissible);
}

TEST(Fit, StartsCoverTheWholeRange) {
  // a starting template in the wrong basin; only the spread starts reach the truth
  const CriterionSpec truth = CriterionSpec::from_bp({0.94, 1, 0, 1.8, 0.8, 1, 0});
  const auto data = synthetic(truth, 8, {0.0, kPi / 6, kPi / 3});
  FitProblem problem;
  problem.spec_template = CriterionSpec::from_bp({0.725, 1, 0, 1.37, 0.62, 1, 0});
  problem.free = {FitParam::M, FitParam::m, FitParam::alpha};
  const auto result = fit(problem, data);
  EXPECT_LE(result.rms, 1e-9);
  EXPECT_NEAR(get_param(result.spec, FitParam::m), 1.8, 1e-6);
}

TEST(Fit, DeterministicForAGivenSeed) {
  const CriterionSpec truth = CriterionSpec::from_bp({1, 2, 0.2, 2, 1, 0.5, 0.9});
  const auto data = synthetic(truth, 6, {0.0, 0.5, kPi / 3}, 0.02);
  FitProblem problem;
  problem.spec_template = CriterionSpec::from_bp({1, 1, 0.1, 2, 1, 1, 0});
  problem.free = {FitParam::M, FitParam::pc, FitParam::beta};
  problem.starts = 5;
  const auto a = fit(problem, data);
  const auto b = fit(problem, data);
  EXPECT_EQ(a.rms, b.rms);
  EXPECT_EQ(a.best_start, b.best_start);
  EXPECT_EQ(get_param(a.spec, FitParam::M), get_param(b.spec, FitParam::M));
}

TEST(Fit, InitGivesASingleStart) {
  const CriterionSpec truth = CriterionSpec::from_bp({1, 2, 0.2, 2, 1, 1, 0});
  const auto data = synthetic(truth, 6, {0.0});
  FitProblem problem;
  problem.spec_template = CriterionSpec::from_bp({0.5, 1, 0.2, 2, 1, 1, 0});
  problem.free = {FitParam::M, FitParam::pc};
  const auto result = fit(problem, data, truth);
  EXPECT_EQ(result.best_start, 0);
  EXPECT_LE(result.initial_rms, 1e-13);
}

TEST(Fit, FunctionValueMode) {
  const CriterionSpec truth = CriterionSpec::from_bp({1.1, 3, 0.5, 2.2, 0.8, 0.9, 0.6});
  const auto data = synthetic(truth, 10, {0.0, kPi / 3});
  FitProblem problem;
  problem.spec_template = CriterionSpec::from_bp({0.6, 2, 0.5, 2.2, 0.8, 0.9, 0.6});
  problem.free = {FitParam::M, FitParam::pc};
  problem.mode = ResidualMode::function_value;
  problem.starts = 3;
  const auto result = fit(problem, data);
  EXPECT_LE(result.rms, 1e-9);
  EXPECT_NEAR(get_param(result.spec, FitParam::M), 1.1, 1e-6);
}

TEST(Fit, Errors) {
  FitDataset data;
  data.points = {{1, 1, 0, 1}};
  FitProblem problem;
  problem.spec_template = CriterionSpec::from_bp({1, 2, 0.2, 2, 1, 1, 0});
  problem.free = {FitParam::M, FitParam::pc};
  EXPECT_THROW(fit(problem, data), InsufficientData);
  problem.free = {};
  EXPECT_THROW(fit(problem, data), ValidationError);
  problem.free = {FitParam::e};
  EXPECT_THROW(fit(problem, data), ShapeMismatch);
  problem.free = {FitParam::M};
  problem.bounds[FitParam::M] = {2, 1};
  EXPECT_THROW(fit(problem, data), ValidationError);
}
