#include "bpyield/sections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace bpyield {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxDoublings = 1100;
constexpr int kCrossingScan = 64;
constexpr int kCenterScan = 257;
constexpr int kGeometricScan = 64;

bool outside(double value) { return !(value < 0); }

double biaxial_value(const CriterionSpec& spec, double s1, double s2) {
  return yield_value(StressState<double>(s1, s2, 0.0), spec).to_ieee();
}

// Characteristic stress of the spec, used only to size initial brackets.
double stress_scale(const CriterionSpec& spec) {
  if (const auto* bp = std::get_if<BPMeridian>(&spec.meridian)) return bp->pc + bp->c;
  return std::max(std::get<LinearMeridian>(spec.meridian).c, 1.0);
}

// Crossing of F along t ≥ 0, F(0) < 0. Returns the bracket end with the
// smaller |F| once the bracket is down to adjacent doubles.
double ray_crossing(const std::function<double(double)>& F, double initial, bool check_unique) {
  double hi = initial;
  int doublings = 0;
  while (!outside(F(hi))) {
    hi *= 2;
    if (++doublings > kMaxDoublings || !std::isfinite(hi)) {
      throw UnboundedDomain("ray does not leave the sublevel set");
    }
  }

  double lo = 0;
  if (check_unique) {
    const double end = hi;
    int changes = 0;
    double prev_t = 0;
    bool prev_out = outside(F(0));
    for (int i = 1; i <= kCrossingScan; ++i) {
      const double t = end * i / kCrossingScan;
      const bool out = outside(F(t));
      if (out != prev_out) {
        ++changes;
        if (changes == 1) {
          lo = prev_t;
          hi = t;
        }
      }
      prev_out = out;
      prev_t = t;
    }
    if (changes != 1) throw Error("ray crosses the zero level set more than once");
  }

  for (;;) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (outside(F(mid)) ? hi : lo) = mid;
  }
  const double f_hi = F(hi);
  return std::isfinite(f_hi) && std::abs(f_hi) < std::abs(F(lo)) ? hi : lo;
}

double golden_minimum(const std::function<double(double)>& F, double a, double b) {
  const double ratio = (std::sqrt(5.0) - 1) / 2;
  double x1 = b - ratio * (b - a);
  double x2 = a + ratio * (b - a);
  double f1 = F(x1);
  double f2 = F(x2);
  for (int i = 0; i < 200 && b - a > 1e-15 * std::max(std::abs(a), std::abs(b)); ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - ratio * (b - a);
      f1 = F(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + ratio * (b - a);
      f2 = F(x2);
    }
  }
  return f1 < f2 ? x1 : x2;
}

}  // namespace

const char* to_string(SectionKind kind) {
  switch (kind) {
    case SectionKind::meridian:
      return "meridian";
    case SectionKind::deviatoric:
      return "deviatoric";
    case SectionKind::biaxial:
      return "biaxial";
    case SectionKind::custom:
      return "custom";
  }
  return "custom";
}

SectionCurve sample_meridian(const CriterionSpec& spec, double theta, int n,
                             std::optional<std::pair<double, double>> p_range) {
  if (n < 2) throw DomainError("sample_meridian: n must be >= 2");
  double lo = 0;
  double hi = 0;
  if (p_range) {
    std::tie(lo, hi) = *p_range;
    if (!(hi > lo)) throw DomainError("sample_meridian: empty p range");
  } else if (const auto* bp = std::get_if<BPMeridian>(&spec.meridian)) {
    lo = -bp->c;
    hi = bp->pc;
  } else {
    throw UnboundedDomain("linear meridian has no cap; give a p range");
  }
  deviatoric_g(theta, spec.deviatoric);  // validates θ

  SectionCurve curve;
  curve.kind = SectionKind::meridian;
  curve.x_label = "p";
  curve.y_label = "q";
  curve.parameter = theta;
  curve.spec = spec;
  for (int i = 0; i < n; ++i) {
    const double p = i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1);
    if (const auto q = surface_q(p, theta, spec)) curve.samples.emplace_back(p, *q);
  }
  return curve;
}

StressState<double> deviatoric_plane_stress(double p, double x, double y) {
  const Principal<double> e1 = Principal<double>(2, -1, -1) / std::sqrt(6.0);
  const Principal<double> e2 = Principal<double>(0, 1, -1) / std::sqrt(2.0);
  return StressState<double>((-p * Principal<double>::Ones() + x * e1 + y * e2).eval());
}

SectionCurve sample_deviatoric(const CriterionSpec& spec, double at_p, int n, bool normalize) {
  if (n < 2) throw DomainError("sample_deviatoric: n must be >= 2");
  const MeridianValue<double> mer = meridian_value(at_p, spec.meridian);
  if (const auto* bp = std::get_if<BPMeridian>(&spec.meridian)) {
    const double phi = normalized_pressure(at_p, *bp);
    if (!(phi > 0 && phi < 1)) throw OutsideCap("deviatoric section requested outside the cap 0 < Phi < 1");
  } else if (!(mer.f.value() < 0)) {
    throw OutsideCap("deviatoric section requested where f(p) >= 0");
  }

  const double step = kPi / 3 / (n - 1);
  std::vector<double> radius(n);
  for (int i = 0; i < n; ++i) {
    const double theta = i == n - 1 ? kPi / 3 : i * step;
    radius[i] = std::sqrt(2.0 / 3.0) * *surface_q(at_p, theta, spec);
  }

  SectionCurve curve;
  curve.kind = SectionKind::deviatoric;
  curve.x_label = "x";
  curve.y_label = "y";
  curve.parameter = at_p;
  curve.closed = true;
  curve.normalized = normalize;
  curve.scale = normalize ? radius[n - 1] : 1.0;
  curve.spec = spec;
  curve.samples.reserve(6 * (n - 1));
  for (int sector = 0; sector < 6; ++sector) {
    for (int i = 0; i < n - 1; ++i) {
      const double psi = sector * kPi / 3 + i * step;
      const double r = radius[sector % 2 == 0 ? i : n - 1 - i] / curve.scale;
      curve.samples.emplace_back(r * std::cos(psi), r * std::sin(psi));
    }
  }
  return curve;
}

UniaxialStrengths uniaxial_strengths(const CriterionSpec& spec) {
  const double r0 = 1e-6 * stress_scale(spec);
  auto strength = [&](double sign) {
    auto F = [&](double s) { return yield_value(StressState<double>(sign * s, 0.0, 0.0), spec).to_ieee(); };
    if (outside(F(0))) return 0.0;
    return ray_crossing(F, r0, false);
  };
  return {strength(1), strength(-1)};
}

std::vector<Eigen::Vector2d> trace_star_shaped(const std::function<double(const Eigen::Vector2d&)>& F,
                                               const Eigen::Vector2d& center, int n, double initial_radius) {
  if (n < 3) throw DomainError("trace_star_shaped: need at least 3 rays");
  if (!(initial_radius > 0)) throw DomainError("trace_star_shaped: initial radius must be positive");
  if (outside(F(center))) throw DomainError("trace_star_shaped: center is not strictly inside");
  std::vector<Eigen::Vector2d> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double angle = 2 * kPi * i / n;
    const Eigen::Vector2d dir(std::cos(angle), std::sin(angle));
    const double t = ray_crossing([&](double s) { return F(center + s * dir); }, initial_radius, true);
    out.push_back(center + t * dir);
  }
  return out;
}

SectionCurve sample_biaxial(const CriterionSpec& spec, int n, bool normalize) {
  auto along_diagonal = [&](double s) { return biaxial_value(spec, s, s); };
  double lo = 0;
  double hi = 0;
  if (const auto* bp = std::get_if<BPMeridian>(&spec.meridian)) {
    lo = -1.5 * bp->pc;
    hi = 1.5 * bp->c;
  } else {
    const double c = std::get<LinearMeridian>(spec.meridian).c;
    lo = -1e3 * std::max(c, 1.0);
    hi = 1.5 * c;
  }
  // A linear grid misses the feasible stretch near the origin when the cap is
  // far longer than the strengths, so geometric samples towards 0 are added.
  std::vector<double> grid;
  for (int i = 0; i < kCenterScan; ++i) grid.push_back(lo + (hi - lo) * i / (kCenterScan - 1));
  for (int j = 1; j <= kGeometricScan; ++j) {
    grid.push_back(lo * std::ldexp(1.0, -j));
    grid.push_back(hi * std::ldexp(1.0, -j));
  }
  grid.push_back(0.0);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = along_diagonal(grid[i]);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  if (!(best_value < 0)) throw EmptySlice("no point with F < 0 on the biaxial slice");
  double s_center = golden_minimum(along_diagonal, grid[best == 0 ? 0 : best - 1],
                                   grid[std::min(grid.size() - 1, best + 1)]);
  if (!(along_diagonal(s_center) < best_value)) s_center = grid[best];

  SectionCurve curve;
  curve.kind = SectionKind::biaxial;
  curve.closed = true;
  curve.spec = spec;
  curve.samples = trace_star_shaped([&](const Eigen::Vector2d& x) { return biaxial_value(spec, x(0), x(1)); },
                                    Eigen::Vector2d(s_center, s_center), n, 1e-6 * stress_scale(spec));
  // With c = 0 the tension apex is the origin of the slice. A ray leaving
  // through it stops a few ulps short, where the square-root meridian still
  // reads well below zero, so such roots are placed on the apex itself.
  const double c = std::visit([](const auto& m) { return m.c; }, spec.meridian);
  if (c == 0) {
    for (auto& x : curve.samples) {
      if (x.norm() <= 1e-12 * stress_scale(spec)) x.setZero();
    }
  }
  if (normalize) {
    const double ft = uniaxial_strengths(spec).ft;
    if (!(ft > 0)) throw DomainError("cannot normalize by a zero tensile strength");
    curve.scale = ft;
    curve.normalized = true;
    for (auto& x : curve.samples) x /= ft;
  }
  curve.x_label = normalize ? "sigma1/ft" : "sigma1";
  curve.y_label = normalize ? "sigma2/ft" : "sigma2";
  return curve;
}

bool is_convex_polygon(const std::vector<Eigen::Vector2d>& points, double tol) {
  std::vector<Eigen::Vector2d> pts;
  for (const auto& p : points) {
    if (pts.empty() || (p - pts.back()).norm() > 0) pts.push_back(p);
  }
  while (pts.size() > 1 && (pts.front() - pts.back()).norm() == 0) pts.pop_back();
  const std::size_t n = pts.size();
  if (n < 3) return true;

  double area = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = pts[i];
    const auto& b = pts[(i + 1) % n];
    area += a(0) * b(1) - a(1) * b(0);
  }
  const double orientation = area >= 0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector2d e1 = pts[(i + 1) % n] - pts[i];
    const Eigen::Vector2d e2 = pts[(i + 2) % n] - pts[(i + 1) % n];
    const double cross = e1(0) * e2(1) - e1(1) * e2(0);
    if (orientation * cross / (e1.norm() * e2.norm()) < -tol) return false;
  }
  return true;
}

bool is_convex(const SectionCurve& curve, double tol) {
  if (curve.closed || curve.samples.empty()) return is_convex_polygon(curve.samples, tol);
  std::vector<Eigen::Vector2d> pts = curve.samples;
  if (pts.back()(1) != 0) pts.emplace_back(pts.back()(0), 0.0);
  if (pts.front()(1) != 0) pts.emplace_back(pts.front()(0), 0.0);
  return is_convex_polygon(pts, tol);
}

double max_section_residual(const SectionCurve& curve) {
  double worst = 0;
  for (const auto& sample : curve.samples) {
    const Eigen::Vector2d x = sample * curve.scale;
    double r = 0;
    switch (curve.kind) {
      case SectionKind::meridian:
        r = normalized_residual(x(0), x(1), curve.parameter, curve.spec);
        break;
      case SectionKind::deviatoric: {
        // invariants straight from the plane coordinates; rebuilding principal
        // stresses would bury a small deviator under a large pressure
        const double theta = std::abs(std::remainder(std::atan2(x(1), x(0)), 2 * std::numbers::pi / 3));
        r = normalized_residual(curve.parameter, std::sqrt(1.5) * x.norm(), theta, curve.spec);
        break;
      }
      case SectionKind::biaxial: {
        const InvariantTriple<double> inv = invariants(StressState<double>(x(0), x(1), 0.0));
        r = normalized_residual(inv.p, inv.hydrostatic ? 0.0 : inv.q, inv.theta, curve.spec);
        break;
      }
      case SectionKind::custom:
        break;
    }
    worst = std::max(worst, r);
  }
  return worst;
}

}  // namespace bpyield
