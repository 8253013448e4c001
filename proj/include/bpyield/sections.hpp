#pragma once

// Meridian, deviatoric and biaxial (σ3 = 0) sections of a yield surface.

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "bpyield/criterion.hpp"

namespace bpyield {

enum class SectionKind { meridian, deviatoric, biaxial, custom };

const char* to_string(SectionKind kind);

struct SectionCurve {
  SectionKind kind{SectionKind::custom};
  std::vector<Eigen::Vector2d> samples;
  std::string x_label;
  std::string y_label;
  /// θ for meridian sections, p for deviatoric ones, unused for biaxial.
  double parameter{0};
  /// Physical coordinates are samples × scale (1 unless normalized).
  double scale{1};
  bool normalized{false};
  /// Polygon is closed (last sample connects to the first).
  bool closed{false};
  CriterionSpec spec;
};

/// n points (p, q) with p uniform on [−c, pc] and q = surface_q(p, θ).
/// A linear meridian has no cap and needs `p_range`; throws UnboundedDomain
/// otherwise.
SectionCurve sample_meridian(const CriterionSpec& spec, double theta, int n,
                             std::optional<std::pair<double, double>> p_range = std::nullopt);

/// Deviatoric section at pressure p. g(θ) is evaluated at n points of the
/// fundamental sector [0, π/3] and the result is expanded to the full plane
/// by the six-fold symmetry, giving 6(n − 1) points ordered by polar angle.
/// Coordinates are (x, y) in the deviatoric plane with x along the projected
/// σ1 axis and radius √(2/3) q. `normalize` divides by the radius at θ = π/3.
/// Throws OutsideCap unless 0 < Φ(p) < 1.
SectionCurve sample_deviatoric(const CriterionSpec& spec, double at_p, int n, bool normalize);

/// Principal stresses of the deviatoric-plane point (x, y) at pressure p,
/// the inverse of the coordinates used by sample_deviatoric.
StressState<double> deviatoric_plane_stress(double p, double x, double y);

inline constexpr int kDefaultRays = 200;

/// Closed curve F(σ1, σ2, 0) = 0 traced by rays from the minimizer of F on
/// the line σ1 = σ2. `normalize` divides by the uniaxial tensile strength.
/// Throws EmptySlice when F ≥ 0 on the whole slice.
SectionCurve sample_biaxial(const CriterionSpec& spec, int n = kDefaultRays, bool normalize = false);

struct UniaxialStrengths {
  double ft{0};
  double fc{0};
};

/// Uniaxial tensile and compressive strengths: the roots of F along
/// σ = (s, 0, 0) and σ = (−s, 0, 0), s ≥ 0. A strength is 0 when the origin
/// is not strictly inside the surface.
UniaxialStrengths uniaxial_strengths(const CriterionSpec& spec);

/// Zero crossing of a scalar function along each of n rays from `center`
/// (angles 2πi/n). F must be negative at the center; +∞ is allowed and counts
/// as positive. The bracket starts at `initial_radius` and is doubled until
/// F ≥ 0; a coarse scan then checks that F changes sign exactly once, and
/// bisection narrows the crossing to adjacent doubles.
/// Throws UnboundedDomain if a ray never leaves the sublevel set and Error
/// if a ray crosses more than once.
std::vector<Eigen::Vector2d> trace_star_shaped(const std::function<double(const Eigen::Vector2d&)>& F,
                                               const Eigen::Vector2d& center, int n, double initial_radius);

/// Cross-product sign test over consecutive edges, with each cross product
/// divided by the two edge lengths and compared against −tol. Repeated
/// points are skipped. An open meridian curve is closed along the p axis.
bool is_convex_polygon(const std::vector<Eigen::Vector2d>& points, double tol = 1e-9);

bool is_convex(const SectionCurve& curve, double tol = 1e-9);

/// Largest normalized residual |F| over the samples of a section.
double max_section_residual(const SectionCurve& curve);

}  // namespace bpyield
