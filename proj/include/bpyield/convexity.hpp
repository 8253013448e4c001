#pragma once

// Convexity certification. A function F = f(p) + q/g(θ) (optionally plus
// A q²) is convex exactly when f is convex and the deviatoric section has
// non-negative curvature, g² + 2g′² − g g″ ≥ 0. The checks below evaluate
// those two conditions on fixed grids from closed-form derivatives.

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bpyield/criterion.hpp"
#include "bpyield/deviatoric.hpp"

namespace bpyield {

inline constexpr int kPhiGrid = 2048;
inline constexpr int kThetaGrid = 2048;
inline constexpr double kBoundaryMargin = 1e-9;

/// B(γ): the BP deviatoric section is convex iff 2 − B(γ) ≤ β ≤ B(γ).
/// B decreases from 4 at γ = 0 towards 2 as γ → 1. Throws DomainError off [0, 1).
double beta_bound(double gamma);

struct MeridianCheck {
  bool ok{false};
  bool range_ok{false};
  double worst_phi{0};
  double worst_margin{0};
  std::string violation;
};

/// Samples (h′)² − 2 h″ h over Φ ∈ (δ, 1 − δ) for the cap profile
/// h = (Φ − Φ^m)(2(1 − α)Φ + α). Out-of-range (α, m) is reported without
/// scanning.
MeridianCheck meridian_convexity_check(double alpha, double m, int grid_n = kPhiGrid);

/// g² + 2g′² − g g″ at θ.
template <typename Scalar>
Scalar deviatoric_curvature(Scalar theta, const DeviatoricShape& shape) {
  const LodeFunction<Scalar> l = lode_function(theta, shape);
  return l.g * l.g + Scalar(2) * l.dg * l.dg - l.g * l.d2g;
}

/// Left side of the BP-shape curvature condition
///   1/g + 3γ cos3θ sin φ / √(1 − γ² cos² 3θ),  φ = βπ/6 − acos(γ cos 3θ)/3.
/// It equals deviatoric_curvature() times the positive factor
/// (1 − γ² cos² 3θ) / ((1 − γ²) g³) and is better scaled as γ → 1.
double bp_curvature_margin(double theta, double beta, double gamma);

/// Closed-form Hessian of q/g(θ) with respect to two principal deviators
/// (S1, S2), S3 = −S1 − S2:  (27/4)(g² + 2g′² − g g″)/(q³ g³) · m mᵀ,
/// m = (S2, −S1). Throws DegenerateState at q = 0.
Eigen::Matrix2d hessian_qg(double s1, double s2, const DeviatoricShape& shape);

/// q, θ and their first and second derivatives with respect to (S1, S2).
struct DeviatoricPlaneDerivatives {
  double q{0};
  double theta{0};
  Eigen::Vector2d dq;
  Eigen::Matrix2d d2q;
  Eigen::Vector2d dtheta;
  Eigen::Matrix2d d2theta;
};

/// Requires q > 0 and sin 3θ ≠ 0 (throws DegenerateDirection otherwise).
DeviatoricPlaneDerivatives deviatoric_plane_derivatives(double s1, double s2);

/// ∂q/∂Si ∂θ/∂Sj + ∂q/∂Sj ∂θ/∂Si + q ∂²θ/∂Si∂Sj, which vanishes identically;
/// this is why the Hessian of q/g has rank one.
Eigen::Matrix2d lode_mixed_term(double s1, double s2);

/// Largest β keeping the power-law section convex for exponent n > 0:
/// n/(9 − 2n) for n ≤ 11/3, otherwise (−1 + √(1 + 9(n−2)²/(n²(4n−13))))⁻¹.
double powerlaw_beta_max(double n);

/// a t² + b t + c with a = β²(n² − 9), b = βn(1 + β)(9 − 2n),
/// c = n²(1 + β)² + 9β²(1 − n), t = cos 3θ. Non-negative on t ∈ [−1, 1]
/// exactly when the power-law section is convex.
double powerlaw_quadratic(double beta, double n, double cos3theta);

enum class Verdict { pass, boundary, fail };

const char* to_string(Verdict v);

struct ConvexityReport {
  bool admissible{false};
  bool ranges_ok{false};
  std::vector<std::string> range_violations;

  /// [2 − B(γ), B(γ)] for the BP shape, [0, β_max(n)] for the power law.
  std::optional<std::pair<double, double>> beta_interval;

  bool meridian_ok{false};
  Verdict meridian_verdict{Verdict::fail};
  double meridian_worst_phi{0};
  double meridian_worst_margin{0};

  bool deviatoric_ok{false};
  Verdict deviatoric_verdict{Verdict::fail};
  double deviatoric_worst_theta{0};
  double deviatoric_worst_margin{0};

  std::vector<std::string> notes;
};

/// Parameter ranges, meridian convexity and a θ-grid curvature scan combined.
/// The q² term (A ≥ 0) never affects the verdict.
ConvexityReport certify(const CriterionSpec& spec);

/// p⁴/a⁴ − p²/a² + q²/b²: a function whose zero level set is convex on
/// 0 ≤ p/a ≤ 1 although the function itself is not even quasi-convex.
double nonconvex_demo(double p, double q, double a, double b);

}  // namespace bpyield
