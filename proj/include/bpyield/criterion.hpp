#pragma once

// The yield function F(σ) = A q² + B q / g(θ) + f(p) and its gradient.
//
// With a BP meridian, A = 0 and B = 1 this is the seven-parameter criterion
//   f(p) = −M pc √[(Φ − Φ^m)(2(1 − α)Φ + α)],  Φ = (p + c)/(pc + c),
// with f = +∞ for Φ ∉ [0, 1]. The linear meridian f(p) = −Γ(p + c) covers the
// Drucker-Prager-type family, and A > 0 the Ottosen-type q² extension.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "bpyield/deviatoric.hpp"
#include "bpyield/errors.hpp"
#include "bpyield/extended.hpp"
#include "bpyield/invariants.hpp"

namespace bpyield {

/// The seven material parameters of the criterion.
///
/// Aggregate initialization does not validate anything; use checked() for
/// values that must satisfy the admissible ranges (M > 0, pc > 0, c ≥ 0,
/// m > 1, 0 < α < 2, 0 ≤ γ < 1 and 2 − B(γ) ≤ β ≤ B(γ)).
struct BPParams {
  double M{1};
  double pc{1};
  double c{0};
  double m{2};
  double alpha{1};
  double beta{1};
  double gamma{0};

  /// Throws DomainError listing every violated range.
  static BPParams checked(double M, double pc, double c, double m, double alpha, double beta, double gamma);

  /// Range violations, empty when admissible.
  std::vector<std::string> violations() const;

  BPShape shape() const { return {beta, gamma}; }
};

/// Parameters with the limit values γ = 1 and α ∈ {0, 2} replaced by nearby
/// interior values; each substitution is recorded in `warnings`.
struct LimitModeParams {
  BPParams params;
  std::vector<std::string> warnings;
};

LimitModeParams limit_mode(BPParams params);

inline constexpr double kLimitGamma = 1.0 - 1e-9;
inline constexpr double kLimitAlpha = 1e-8;

struct BPMeridian {
  double M{1};
  double pc{1};
  double c{0};
  double m{2};
  double alpha{1};
};

struct LinearMeridian {
  double Gamma{1};
  double c{0};
};

using Meridian = std::variant<BPMeridian, LinearMeridian>;

struct CriterionSpec {
  Meridian meridian{BPMeridian{}};
  DeviatoricShape deviatoric{BPShape{}};
  double A{0};
  double B{1};

  static CriterionSpec from_bp(const BPParams& params);

  /// Back to the seven-parameter record; throws ShapeMismatch unless the
  /// spec has a BP meridian, BP deviatoric shape, A = 0 and B = 1.
  BPParams to_bp() const;

  bool has_bp_meridian() const { return std::holds_alternative<BPMeridian>(meridian); }
};

/// Normalized pressure Φ = (p + c)/(pc + c).
template <typename Scalar>
Scalar normalized_pressure(Scalar p, const BPMeridian& mer) {
  return (p + Scalar(mer.c)) / (Scalar(mer.pc) + Scalar(mer.c));
}

template <typename Scalar>
struct MeridianValue {
  Extended<Scalar> f{Scalar(0)};
  Scalar dfdp{0};  // meaningful only in the interior of the effective domain
  Scalar phi{0};   // Φ for the BP meridian, unused for the linear one
};

namespace detail {

template <typename Scalar>
Scalar cap_profile(Scalar phi, Scalar m, Scalar alpha) {
  using std::pow;
  return (phi - pow(phi, m)) * (Scalar(2) * (Scalar(1) - alpha) * phi + alpha);
}

template <typename Scalar>
Scalar cap_profile_derivative(Scalar phi, Scalar m, Scalar alpha) {
  using std::pow;
  const Scalar lin = Scalar(2) * (Scalar(1) - alpha) * phi + alpha;
  return (Scalar(1) - m * pow(phi, m - Scalar(1))) * lin + Scalar(2) * (Scalar(1) - alpha) * (phi - pow(phi, m));
}

}  // namespace detail

template <typename Scalar>
MeridianValue<Scalar> meridian_value(Scalar p, const BPMeridian& mer) {
  using std::sqrt;
  MeridianValue<Scalar> out;
  const Scalar phi = normalized_pressure(p, mer);
  out.phi = phi;
  if (!(phi >= Scalar(0) && phi <= Scalar(1))) {
    out.f = Extended<Scalar>::infinity();
    return out;
  }
  const Scalar m(mer.m), alpha(mer.alpha), scale = Scalar(mer.M) * Scalar(mer.pc);
  const Scalar h = std::max(Scalar(0), detail::cap_profile(phi, m, alpha));
  const Scalar root = sqrt(h);
  out.f = -scale * root;
  if (root > Scalar(0)) {
    out.dfdp = -scale * detail::cap_profile_derivative(phi, m, alpha) / (Scalar(2) * root) /
               (Scalar(mer.pc) + Scalar(mer.c));
  }
  return out;
}

template <typename Scalar>
MeridianValue<Scalar> meridian_value(Scalar p, const LinearMeridian& mer) {
  MeridianValue<Scalar> out;
  out.f = -Scalar(mer.Gamma) * (p + Scalar(mer.c));
  out.dfdp = -Scalar(mer.Gamma);
  return out;
}

template <typename Scalar>
MeridianValue<Scalar> meridian_value(Scalar p, const Meridian& mer) {
  return std::visit([p](const auto& m) { return meridian_value(p, m); }, mer);
}

/// f(p): −M pc √h(Φ) on the cap Φ ∈ [0, 1], +∞ outside.
template <typename Scalar>
Extended<Scalar> meridian_f(Scalar p, const BPParams& params) {
  return meridian_value(p, BPMeridian{params.M, params.pc, params.c, params.m, params.alpha}).f;
}

/// F at invariants (p, q, θ). For q = 0 the Lode angle is not consulted.
template <typename Scalar>
Extended<Scalar> yield_value(Scalar p, Scalar q, Scalar theta, const CriterionSpec& spec) {
  const Extended<Scalar> f = meridian_value(p, spec.meridian).f;
  if (f.infinite()) return f;
  Scalar dev(0);
  if (q != Scalar(0)) dev = Scalar(spec.B) * q / deviatoric_g(theta, spec.deviatoric);
  return Scalar(spec.A) * q * q + dev + f.value();
}

template <typename Scalar>
Extended<Scalar> yield_value(const StressState<Scalar>& stress, const CriterionSpec& spec) {
  const InvariantTriple<Scalar> inv = invariants(stress);
  return yield_value(inv.p, inv.hydrostatic ? Scalar(0) : inv.q, inv.theta, spec);
}

/// |F| divided by the magnitude of its terms, |A q²| + |B q/g| + |f|.
/// Used as the acceptance measure for traced and sampled surface points.
template <typename Scalar>
Scalar normalized_residual(Scalar p, Scalar q, Scalar theta, const CriterionSpec& spec) {
  using std::abs;
  const Extended<Scalar> f = meridian_value(p, spec.meridian).f;
  if (f.infinite()) return std::numeric_limits<Scalar>::infinity();
  const Scalar dev = q == Scalar(0) ? Scalar(0) : Scalar(spec.B) * q / deviatoric_g(theta, spec.deviatoric);
  const Scalar quad = Scalar(spec.A) * q * q;
  const Scalar value = quad + dev + f.value();
  const Scalar scale = abs(quad) + abs(dev) + abs(f.value());
  return scale > Scalar(0) ? abs(value) / scale : abs(value);
}

/// q on the yield surface at (p, θ), or nullopt where the meridian has no
/// real surface point (outside the cap, or f(p) > 0).
template <typename Scalar>
std::optional<Scalar> surface_q(Scalar p, Scalar theta, const CriterionSpec& spec) {
  using std::sqrt;
  const Scalar g = deviatoric_g(theta, spec.deviatoric);
  const Extended<Scalar> f = meridian_value(p, spec.meridian).f;
  if (f.infinite() || f.value() > Scalar(0)) return std::nullopt;
  const Scalar fv = f.value();
  if (fv == Scalar(0)) return Scalar(0);
  const Scalar lin = Scalar(spec.B) / g;
  if (spec.A == 0.0) return -fv / lin;
  // A q² + (B/g) q + f = 0, positive root written to avoid cancellation.
  const Scalar a(spec.A);
  return Scalar(-2) * fv / (lin + sqrt(lin * lin - Scalar(4) * a * fv));
}

template <typename Scalar>
struct GradientDecomposition {
  Scalar a{0};
  Scalar b{0};
  Scalar c{0};
  Principal<Scalar> tensor;
  Principal<Scalar> unit_normal;
};

/// Half-width of the Φ band at the cap ends where the gradient is refused;
/// normal_limits() gives the limiting normals there.
inline constexpr double kPhiEndBand = 1e-10;

/// ∂F/∂σ = a I + b S̃ + c S̃⊥ with a = −f′(p)/3, b = √(3/2)(B/g + 2Aq),
/// c = √(3/2) B g′/g². On the axisymmetric meridians (sin 3θ = 0) the c term
/// vanishes and the tensor lies in span{I, S̃}.
template <typename Scalar>
GradientDecomposition<Scalar> gradient(const StressState<Scalar>& stress, const CriterionSpec& spec) {
  using std::sqrt;
  const InvariantTriple<Scalar> inv = invariants(stress);
  if (inv.hydrostatic) throw DegenerateState("gradient undefined on the hydrostatic axis (q = 0)");

  const MeridianValue<Scalar> mer = meridian_value(inv.p, spec.meridian);
  if (mer.f.infinite()) throw DegenerateState("stress outside the effective domain of the yield function");
  if (spec.has_bp_meridian()) {
    const Scalar band(kPhiEndBand);
    if (!(mer.phi > band && mer.phi < Scalar(1) - band)) {
      throw DegenerateState("gradient requested at the end of the meridian cap; use normal_limits");
    }
  }

  const LodeFunction<Scalar> lode = lode_function(inv.theta, spec.deviatoric);
  const Scalar root32 = sqrt(Scalar(1.5));
  const Scalar B(spec.B);

  GradientDecomposition<Scalar> out;
  out.a = -mer.dfdp / Scalar(3);
  out.b = root32 * (B / lode.g + Scalar(2) * Scalar(spec.A) * inv.q);
  out.c = root32 * B * lode.dg / (lode.g * lode.g);

  const DeviatoricFrame<Scalar> frame = deviatoric_frame(stress);
  out.tensor = out.a * Principal<Scalar>::Ones() + out.b * frame.s_tilde;
  if (frame.defined) {
    out.tensor += out.c * frame.s_tilde_perp;
  } else {
    out.c = Scalar(0);
  }
  out.unit_normal = out.tensor / sqrt(Scalar(3) * out.a * out.a + out.b * out.b + out.c * out.c);
  return out;
}

enum class Apex { tension, compression };

/// Limiting unit normal where the surface meets the hydrostatic axis:
/// I/√3 at the tension apex (Φ → 0⁺), −I/√3 at the compression apex (Φ → 1⁻).
/// Throws CornerCase for α ∈ {0, 2}, where the surface has a corner instead.
Principal<double> normal_limits(Apex which, const BPParams& params);

/// Cosine between the unit normal computed at Φ = δ (tension) or Φ = 1 − δ
/// (compression), θ = 0, and the limiting normal ±I/√3. Close to 1 for a
/// smooth apex; stays well below 1 when α sits at a corner value.
double apex_normal_alignment(Apex which, const BPParams& params, double delta);

}  // namespace bpyield
