#include "bpyield/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace bpyield {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSeventhNinths = 7.0 / 9.0;
constexpr double kPrintedArgyrisBound = 0.777;

Verdict classify(double worst_margin) {
  if (worst_margin > kBoundaryMargin) return Verdict::pass;
  if (worst_margin >= -kBoundaryMargin) return Verdict::boundary;
  return Verdict::fail;
}

double cap_profile_second(double phi, double m, double alpha) {
  const double lin = 2 * (1 - alpha) * phi + alpha;
  return -m * (m - 1) * std::pow(phi, m - 2) * lin + 4 * (1 - alpha) * (1 - m * std::pow(phi, m - 1));
}

struct ShapeRanges {
  std::vector<std::string> violations;
  std::optional<std::pair<double, double>> beta_interval;
  std::vector<std::string> notes;
};

ShapeRanges shape_ranges(const DeviatoricShape& shape) {
  ShapeRanges out;
  struct Visitor {
    ShapeRanges& r;
    void operator()(const BPShape& s) const {
      if (!(s.gamma >= 0 && s.gamma < 1)) {
        r.violations.emplace_back("gamma must lie in [0, 1)");
        return;
      }
      const double hi = beta_bound(s.gamma);
      r.beta_interval = std::make_pair(2 - hi, hi);
      if (!(s.beta >= 2 - hi - kBoundaryMargin && s.beta <= hi + kBoundaryMargin)) {
        r.violations.emplace_back("beta must lie in [2 - B(gamma), B(gamma)]");
      }
      if (s.gamma > 1 - 1e-6) r.notes.emplace_back("gamma near 1: deviatoric section close to piecewise linear");
    }
    void operator()(const PowerLawShape& s) const {
      if (!(s.n > 0)) {
        r.violations.emplace_back("n must be > 0");
        return;
      }
      const double hi = powerlaw_beta_max(s.n);
      r.beta_interval = std::make_pair(0.0, hi);
      if (!(s.beta >= 0)) r.violations.emplace_back("beta must be >= 0");
      if (!(s.beta <= hi + kBoundaryMargin)) r.violations.emplace_back("beta must not exceed beta_max(n)");
    }
    void operator()(const WillamWarnkeShape& s) const {
      if (!(s.e > 0.5 && s.e <= 1)) r.violations.emplace_back("e must lie in (0.5, 1]");
    }
    void operator()(const GudehusArgyrisShape& s) const {
      if (!(s.k > kPrintedArgyrisBound && s.k <= 1)) r.violations.emplace_back("k must lie in (0.777, 1]");
      if (s.k > kPrintedArgyrisBound && s.k < kSeventhNinths) {
        r.notes.emplace_back("k below 7/9: the curvature scan decides convexity");
      }
    }
  };
  std::visit(Visitor{out}, shape);
  return out;
}

// Curvature margin used by the θ-grid scan; any positive multiple of
// g² + 2g′² − g g″ works, the BP shape uses its better-scaled closed form.
double curvature_margin(double theta, const DeviatoricShape& shape) {
  if (const auto* bp = std::get_if<BPShape>(&shape)) {
    return bp_curvature_margin(theta, bp->beta, bp->gamma);
  }
  const LodeFunction<double> l = lode_function(theta, shape);
  return (l.g * l.g + 2 * l.dg * l.dg - l.g * l.d2g) / (l.g * l.g * l.g);
}

}  // namespace

double beta_bound(double gamma) {
  if (!(gamma >= 0 && gamma < 1)) throw DomainError("beta_bound: gamma must lie in [0, 1)");
  const double z = 2.0 / 3.0 * (kPi - std::acos(gamma));
  const double cz = std::cos(z);
  const double ratio = (1 - 2 * cz - 2 * cz * cz) / (2 * std::sin(z) * (1 - cz));
  return 3 - 6 / kPi * std::atan(ratio);
}

MeridianCheck meridian_convexity_check(double alpha, double m, int grid_n) {
  MeridianCheck out;
  if (!(alpha > 0 && alpha < 2)) {
    out.violation = "alpha must lie in (0, 2)";
    return out;
  }
  if (!(m > 1)) {
    out.violation = "m must be > 1";
    return out;
  }
  if (grid_n < 2) throw DomainError("meridian_convexity_check: grid_n must be >= 2");
  out.range_ok = true;
  out.worst_margin = std::numeric_limits<double>::infinity();
  const double lo = kPhiEndBand;
  const double hi = 1 - kPhiEndBand;
  for (int i = 0; i < grid_n; ++i) {
    const double phi = lo + (hi - lo) * i / (grid_n - 1);
    const double h = detail::cap_profile(phi, m, alpha);
    const double dh = detail::cap_profile_derivative(phi, m, alpha);
    const double margin = dh * dh - 2 * cap_profile_second(phi, m, alpha) * h;
    if (margin < out.worst_margin) {
      out.worst_margin = margin;
      out.worst_phi = phi;
    }
  }
  out.ok = classify(out.worst_margin) != Verdict::fail;
  return out;
}

double bp_curvature_margin(double theta, double beta, double gamma) {
  const double t = std::cos(3 * theta);
  const double w = std::sqrt(1 - gamma * gamma * t * t);
  const double phi = beta * kPi / 6 - std::acos(gamma * t) / 3;
  return std::cos(phi) + 3 * gamma * t * std::sin(phi) / w;
}

DeviatoricPlaneDerivatives deviatoric_plane_derivatives(double s1, double s2) {
  const Principal<double> s(s1, s2, -s1 - s2);
  DeviatoricPlaneDerivatives d;
  d.q = std::sqrt(3 * (s1 * s1 + s1 * s2 + s2 * s2));
  if (d.q == 0) throw DegenerateDirection("q = 0");
  const double sin3 = lode_sin3(s);
  if (sin3 < 1e-14) throw DegenerateDirection("sin 3theta = 0");
  d.theta = lode_angle(s);

  const double q = d.q;
  const double q2 = q * q;
  const double q3 = q2 * q;
  const Eigen::Vector2d mvec(s2, -s1);
  d.dq << 3 * (2 * s1 + s2) / (2 * q), 3 * (s1 + 2 * s2) / (2 * q);
  d.d2q = 27.0 / (4 * q3) * mvec * mvec.transpose();

  // cos 3θ = (27/2) J3 / q³ with J3 = −S1 S2 (S1 + S2).
  const double j3 = -s1 * s2 * (s1 + s2);
  const Eigen::Vector2d dj3(-s2 * (2 * s1 + s2), -s1 * (s1 + 2 * s2));
  Eigen::Matrix2d d2j3;
  d2j3 << -2 * s2, -2 * (s1 + s2), -2 * (s1 + s2), -2 * s1;

  const double t = 13.5 * j3 / q3;
  const Eigen::Vector2d dt = 13.5 * (dj3 / q3 - 3 * j3 * d.dq / (q3 * q));
  const Eigen::Matrix2d d2t =
      13.5 * (d2j3 / q3 - 3 * (dj3 * d.dq.transpose() + d.dq * dj3.transpose()) / (q3 * q) -
              3 * j3 * d.d2q / (q3 * q) + 12 * j3 * d.dq * d.dq.transpose() / (q3 * q2));

  d.dtheta = -dt / (3 * sin3);
  d.d2theta = -(d2t / sin3 + t * dt * dt.transpose() / (sin3 * sin3 * sin3)) / 3;
  return d;
}

Eigen::Matrix2d lode_mixed_term(double s1, double s2) {
  const DeviatoricPlaneDerivatives d = deviatoric_plane_derivatives(s1, s2);
  return d.dq * d.dtheta.transpose() + d.dtheta * d.dq.transpose() + d.q * d.d2theta;
}

Eigen::Matrix2d hessian_qg(double s1, double s2, const DeviatoricShape& shape) {
  const Principal<double> s(s1, s2, -s1 - s2);
  const double q = std::sqrt(3 * (s1 * s1 + s1 * s2 + s2 * s2));
  if (q == 0) throw DegenerateState("Hessian of q/g undefined at q = 0");
  const double theta = lode_angle(s);
  const LodeFunction<double> l = lode_function(theta, shape);
  const double curvature = l.g * l.g + 2 * l.dg * l.dg - l.g * l.d2g;
  const Eigen::Vector2d mvec(s2, -s1);
  return 27.0 / 4.0 * curvature / (q * q * q * l.g * l.g * l.g) * mvec * mvec.transpose();
}

double powerlaw_beta_max(double n) {
  if (!(n > 0)) throw DomainError("powerlaw_beta_max: n must be > 0");
  if (n <= 11.0 / 3.0) return n / (9 - 2 * n);
  const double inner = 1 + 9 * (n - 2) * (n - 2) / (n * n * (4 * n - 13));
  return 1 / (-1 + std::sqrt(inner));
}

double powerlaw_quadratic(double beta, double n, double t) {
  const double a = beta * beta * (n * n - 9);
  const double b = beta * n * (1 + beta) * (9 - 2 * n);
  const double c = n * n * (1 + beta) * (1 + beta) + 9 * beta * beta * (1 - n);
  return (a * t + b) * t + c;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::boundary:
      return "boundary";
    case Verdict::fail:
      return "fail";
  }
  return "fail";
}

ConvexityReport certify(const CriterionSpec& spec) {
  ConvexityReport report;

  if (!(spec.A >= 0)) report.range_violations.emplace_back("A must be >= 0");
  if (!(spec.B > 0)) report.range_violations.emplace_back("B must be > 0");

  // Meridian.
  if (const auto* bp = std::get_if<BPMeridian>(&spec.meridian)) {
    if (!(bp->M > 0)) report.range_violations.emplace_back("M must be > 0");
    if (!(bp->pc > 0)) report.range_violations.emplace_back("pc must be > 0");
    if (!(bp->c >= 0)) report.range_violations.emplace_back("c must be >= 0");
    const MeridianCheck mc = meridian_convexity_check(bp->alpha, bp->m);
    if (!mc.range_ok) {
      report.range_violations.push_back(mc.violation);
      report.meridian_verdict = Verdict::fail;
    } else {
      report.meridian_worst_phi = mc.worst_phi;
      report.meridian_worst_margin = mc.worst_margin;
      report.meridian_verdict = classify(mc.worst_margin);
      if (bp->alpha < 1e-6 || bp->alpha > 2 - 1e-6) {
        report.notes.emplace_back("alpha near 0 or 2: apex close to a corner");
      }
    }
  } else {
    const auto& lin = std::get<LinearMeridian>(spec.meridian);
    if (!(lin.Gamma > 0)) report.range_violations.emplace_back("Gamma must be > 0");
    if (!(lin.c >= 0)) report.range_violations.emplace_back("c must be >= 0");
    report.meridian_verdict = Verdict::pass;
    report.notes.emplace_back("linear meridian: convex by construction");
  }
  report.meridian_ok = report.meridian_verdict != Verdict::fail;

  // Deviatoric section.
  ShapeRanges ranges = shape_ranges(spec.deviatoric);
  report.beta_interval = ranges.beta_interval;
  for (auto& v : ranges.violations) report.range_violations.push_back(std::move(v));
  for (auto& n : ranges.notes) report.notes.push_back(std::move(n));

  double worst = std::numeric_limits<double>::infinity();
  double worst_theta = 0;
  bool g_positive = true;
  for (int i = 0; i < kThetaGrid; ++i) {
    const double theta = kPi / 3 * i / (kThetaGrid - 1);
    const double g = deviatoric_g(theta, spec.deviatoric);
    if (!(g > 0) || !std::isfinite(g)) g_positive = false;
    double margin = curvature_margin(theta, spec.deviatoric);
    if (std::isnan(margin)) margin = -std::numeric_limits<double>::infinity();
    if (margin < worst) {
      worst = margin;
      worst_theta = theta;
    }
  }
  if (!g_positive) report.notes.emplace_back("g(theta) is not positive and finite on [0, pi/3]");
  report.deviatoric_worst_theta = worst_theta;
  report.deviatoric_worst_margin = worst;
  report.deviatoric_verdict = classify(worst);
  report.deviatoric_ok = g_positive && report.deviatoric_verdict != Verdict::fail;

  report.ranges_ok = report.range_violations.empty();
  report.admissible = report.ranges_ok && report.meridian_ok && report.deviatoric_ok;
  return report;
}

double nonconvex_demo(double p, double q, double a, double b) {
  const double x2 = (p / a) * (p / a);
  return x2 * x2 - x2 + (q / b) * (q / b);
}

}  // namespace bpyield
