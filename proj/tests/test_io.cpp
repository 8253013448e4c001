#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "bpyield/io.hpp"

using namespace bpyield;

TEST(Format, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(format_double(-1e-300), "-1e-300");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng);
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

TEST(SpecJson, DefaultsForTheSevenParameterForm) {
  const auto spec = spec_from_json(Json::parse(R"({"M": 1.2, "pc": 3})"));
  const BPParams p = spec.to_bp();
  EXPECT_EQ(p.M, 1.2);
  EXPECT_EQ(p.pc, 3);
  EXPECT_EQ(p.c, 0);
  EXPECT_EQ(p.m, 2);
  EXPECT_EQ(p.alpha, 1);
  EXPECT_EQ(p.beta, 1);
  EXPECT_EQ(p.gamma, 0);
}

TEST(SpecJson, RoundTrip) {
  std::vector<CriterionSpec> specs;
  specs.push_back(CriterionSpec::from_bp({0.5, 0.961, 0, 2.6, 0.1, 0, 0.9999}));
  CriterionSpec lin;
  lin.meridian = LinearMeridian{0.7, 2};
  lin.deviatoric = WillamWarnkeShape{0.6};
  lin.A = 0.1;
  specs.push_back(lin);
  CriterionSpec pl = CriterionSpec::from_bp({1, 2, 0.1, 2, 1, 1, 0});
  pl.deviatoric = PowerLawShape{0.4, 2.5};
  specs.push_back(pl);
  CriterionSpec ga = pl;
  ga.deviatoric = GudehusArgyrisShape{0.8};
  ga.B = 2;
  specs.push_back(ga);
  for (const auto& spec : specs) {
    const Json j = spec_to_json(spec);
    const Json back = spec_to_json(spec_from_json(Json::parse(j.dump())));
    EXPECT_EQ(j.dump(), back.dump());
  }
  EXPECT_FALSE(spec_to_json(specs[0]).contains("deviatoric"));
  EXPECT_TRUE(spec_to_json(specs[1]).contains("deviatoric"));
}

TEST(SpecJson, RejectsBadInput) {
  EXPECT_THROW(spec_from_json(Json::parse(R"({"M": 1})")), ValidationError);
  EXPECT_THROW(spec_from_json(Json::parse(R"({"M": 1, "pc": 1, "phi": 2})")), ValidationError);
  EXPECT_THROW(spec_from_json(Json::parse(R"({"M": "1", "pc": 1})")), ValidationError);
  EXPECT_THROW(spec_from_json(Json::parse(R"([1, 2])")), ValidationError);
  EXPECT_THROW(spec_from_json(Json::parse(R"({"meridian": "linear", "Gamma": 1, "M": 1})")), ValidationError);
  EXPECT_THROW(spec_from_json(Json::parse(R"({"meridian": "cone", "Gamma": 1})")), ValidationError);
  EXPECT_THROW(spec_from_json(Json::parse(R"({"M": 1, "pc": 1, "deviatoric": {"kind": "hexagon"}})")),
               ValidationError);
  EXPECT_THROW(spec_from_json(Json::parse(R"({"M": 1, "pc": 1, "beta": 1, "deviatoric": {"kind": "bp"}})")),
               ValidationError);
  EXPECT_THROW(spec_from_json(Json::parse(R"({"M": 1, "pc": 1, "deviatoric": {"kind": "willam-warnke"}})")),
               ValidationError);
}

TEST(SpecJson, AcceptsItsOwnFitOutput) {
  FitResult result;
  result.spec = CriterionSpec::from_bp({1, 2, 0.3, 2, 1, 1, 0});
  result.rms = 0.01;
  const Json j = fit_to_json(result);
  EXPECT_EQ(j.at("rms").get<double>(), 0.01);
  EXPECT_EQ(spec_from_json(j).to_bp().c, 0.3);
}

TEST(ReportJson, NonFiniteMarginsBecomeStrings) {
  ConvexityReport report;
  report.deviatoric_worst_margin = -std::numeric_limits<double>::infinity();
  const Json j = report_to_json(report);
  EXPECT_EQ(j.at("deviatoric").at("worst_margin"), "-inf");
  EXPECT_TRUE(j.at("beta_interval").is_null());
  EXPECT_EQ(j.at("deviatoric").at("verdict"), "fail");
}

TEST(CurveCsv, HeaderAndRows) {
  const auto curve = sample_meridian(CriterionSpec::from_bp({1, 2, 0.5, 2, 1, 1, 0}), 0.25, 5);
  std::ostringstream out;
  write_curve_csv(out, curve);
  std::istringstream in(out.str());
  std::string line;
  std::vector<std::string> comments;
  std::vector<std::string> rows;
  while (std::getline(in, line)) (line.rfind("#", 0) == 0 ? comments : rows).push_back(line);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0], "x,y");
  EXPECT_EQ(rows[1], "-0.5,0");
  EXPECT_EQ(comments[0], "# section: meridian");
  EXPECT_EQ(comments[1], "# axes: p,q");
  EXPECT_EQ(comments[2].rfind("# spec: {", 0), 0u);
  EXPECT_EQ(comments[3], "# theta: 0.25");
  const Json spec = Json::parse(comments[2].substr(8));
  EXPECT_EQ(spec.at("c").get<double>(), 0.5);
}

TEST(CurveCsv, Deterministic) {
  const auto curve = sample_deviatoric(CriterionSpec::from_bp({1, 2, 0.5, 2, 1, 0.6, 0.7}), 0.5, 20, true);
  std::ostringstream a, b;
  write_curve_csv(a, curve);
  write_curve_csv(b, curve);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_NE(a.str().find("# scale: "), std::string::npos);
}

TEST(Svg, PathsAxesAndEscapedLabels) {
  std::ostringstream out;
  write_svg(out, {{{{0, 0}, {1, 0}, {1, 1}}, true, "a<b"}, {{{0, 0}, {2, 2}}, false, "line"}}, "x&y", "q");
  const std::string svg = out.str();
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  std::size_t paths = 0;
  for (auto pos = svg.find("<path"); pos != std::string::npos; pos = svg.find("<path", pos + 1)) ++paths;
  EXPECT_EQ(paths, 2u);
  EXPECT_NE(svg.find("a&lt;b"), std::string::npos);
  EXPECT_NE(svg.find("x&amp;y"), std::string::npos);
  EXPECT_NE(svg.find(" Z\""), std::string::npos);
  EXPECT_EQ(svg.find("nan"), std::string::npos);
}

TEST(Svg, EmptyAndDegenerateInput) {
  std::ostringstream out;
  write_svg(out, {{{{1, 1}}, false, ""}}, "x", "y");
  EXPECT_EQ(out.str().find("nan"), std::string::npos);
  EXPECT_EQ(out.str().find("inf"), std::string::npos);
}
