#pragma once

// Haigh-Westergaard invariants of a principal stress triple.
//
// Sign conventions: stresses are tension-positive, p = -tr(σ)/3 is
// compression-positive, and the Lode angle θ ∈ [0, π/3] is taken from
// cos 3θ = (3√3/2) J3 / J2^{3/2}, so θ = 0 is triaxial extension (e.g.
// uniaxial tension) and θ = π/3 is triaxial compression. Some references use
// the opposite orientation; everything in this library uses this one.

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Core>

#include "bpyield/errors.hpp"

namespace bpyield {

/// Coaxial tensors in the fixed principal frame are stored as their three
/// eigenvalues; the scalar product of two such tensors is the dot product.
template <typename Scalar>
using Principal = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
struct StressState {
  Principal<Scalar> sigma;

  StressState() : sigma(Principal<Scalar>::Zero()) {}
  explicit StressState(const Principal<Scalar>& s) : sigma(s) {}
  StressState(Scalar s1, Scalar s2, Scalar s3) : sigma(s1, s2, s3) {}

  bool finite() const { return sigma.allFinite(); }
};

template <typename Scalar>
struct InvariantTriple {
  Scalar p{0};
  Scalar q{0};
  Scalar theta{0};
  bool hydrostatic{false};
};

template <typename Scalar>
struct DeviatoricFrame {
  Principal<Scalar> s_tilde;
  Principal<Scalar> s_tilde_perp;
  bool defined{false};
};

template <typename Scalar>
struct InvariantGradients {
  Principal<Scalar> dp;
  Principal<Scalar> dJ2;
  Principal<Scalar> dJ3;
  Principal<Scalar> dtheta;
};

namespace detail {

template <typename Scalar>
constexpr Scalar kHydrostaticTolerance = Scalar(1e-12);

template <typename Scalar>
Principal<Scalar> identity3() {
  return Principal<Scalar>::Ones();
}

}  // namespace detail

template <typename Scalar>
Principal<Scalar> deviator(const StressState<Scalar>& stress) {
  return (stress.sigma.array() - stress.sigma.mean()).matrix();
}

template <typename Scalar>
Scalar second_invariant(const Principal<Scalar>& s) {
  return Scalar(0.5) * s.squaredNorm();
}

/// J3 = tr(S³)/3, evaluated as the product of the principal deviators.
template <typename Scalar>
Scalar third_invariant(const Principal<Scalar>& s) {
  return s.prod();
}

/// cos 3θ clamped to [-1, 1]; rounding can push it slightly outside near
/// axisymmetric states.
template <typename Scalar>
Scalar lode_cos3(const Principal<Scalar>& s) {
  using std::pow;
  const Scalar j2 = second_invariant(s);
  if (j2 <= Scalar(0)) return Scalar(1);
  const Scalar raw = Scalar(1.5) * std::sqrt(Scalar(3)) * third_invariant(s) / pow(j2, Scalar(1.5));
  return std::clamp(raw, Scalar(-1), Scalar(1));
}

/// sin 3θ ≥ 0 from 4 J2³ − 27 J3² = [(s1−s2)(s2−s3)(s3−s1)]², which keeps full
/// relative precision near θ = 0 and θ = π/3 where 1 − cos² 3θ cancels.
template <typename Scalar>
Scalar lode_sin3(const Principal<Scalar>& s) {
  using std::abs;
  using std::pow;
  const Scalar j2 = second_invariant(s);
  if (j2 <= Scalar(0)) return Scalar(0);
  const Scalar disc = (s(0) - s(1)) * (s(1) - s(2)) * (s(2) - s(0));
  return std::min(Scalar(1), abs(disc) / (Scalar(2) * pow(j2, Scalar(1.5))));
}

template <typename Scalar>
Scalar lode_angle(const Principal<Scalar>& s) {
  using std::abs;
  using std::atan2;
  using std::sqrt;
  const Scalar disc = (s(0) - s(1)) * (s(1) - s(2)) * (s(2) - s(0));
  return atan2(abs(disc), Scalar(3) * sqrt(Scalar(3)) * third_invariant(s)) / Scalar(3);
}

template <typename Scalar>
InvariantTriple<Scalar> invariants(const StressState<Scalar>& stress) {
  using std::abs;
  using std::sqrt;
  InvariantTriple<Scalar> out;
  const Principal<Scalar> s = deviator(stress);
  out.p = -stress.sigma.mean();
  // √(3 J2) = √(3/2) |S|; stableNorm keeps q from underflowing before p does
  out.q = sqrt(Scalar(1.5)) * s.stableNorm();
  out.hydrostatic = out.q <= detail::kHydrostaticTolerance<Scalar> * stress.sigma.cwiseAbs().maxCoeff();
  out.theta = out.hydrostatic ? Scalar(0) : lode_angle(s);
  return out;
}

/// Gradients of p, J2, J3 and θ with respect to stress (all coaxial with σ).
/// Throws DegenerateDirection where θ has no gradient (q = 0 or sin 3θ = 0).
template <typename Scalar>
InvariantGradients<Scalar> invariant_gradients(const StressState<Scalar>& stress) {
  const Principal<Scalar> I = detail::identity3<Scalar>();
  const Principal<Scalar> s = deviator(stress);
  const Principal<Scalar> s2 = s.array().square().matrix();
  const Scalar tr_s2 = s2.sum();

  InvariantGradients<Scalar> g;
  g.dp = -I / Scalar(3);
  g.dJ2 = s;
  g.dJ3 = s2 - (tr_s2 / Scalar(3)) * I;

  const InvariantTriple<Scalar> inv = invariants(stress);
  const Scalar sin3 = lode_sin3(s);
  if (inv.hydrostatic || sin3 < Scalar(1e-14)) {
    throw DegenerateDirection("Lode angle gradient undefined at q = 0 or sin 3θ = 0");
  }
  const Scalar cos3 = lode_cos3(s);
  const Scalar q3 = inv.q * inv.q * inv.q;
  g.dtheta = -(Scalar(9) / (Scalar(2) * q3 * sin3)) * (g.dJ3 - inv.q * cos3 / Scalar(3) * s);
  return g;
}

/// S̃ = √(3/2) S / q and, off the axisymmetric meridians, the orthogonal unit
/// deviator S̃⊥ = [√6 (S̃² − I/3) − cos 3θ S̃] / sin 3θ.
template <typename Scalar>
DeviatoricFrame<Scalar> deviatoric_frame(const StressState<Scalar>& stress) {
  using std::sqrt;
  const InvariantTriple<Scalar> inv = invariants(stress);
  if (inv.hydrostatic) {
    throw DegenerateDirection("deviatoric frame undefined on the hydrostatic axis");
  }
  const Principal<Scalar> s = deviator(stress);
  DeviatoricFrame<Scalar> frame;
  frame.s_tilde = sqrt(Scalar(1.5)) * s / inv.q;
  const Scalar sin3 = lode_sin3(s);
  if (sin3 < Scalar(1e-14)) {
    frame.s_tilde_perp.setZero();
    frame.defined = false;
    return frame;
  }
  const Scalar cos3 = lode_cos3(s);
  const Principal<Scalar> st2 = frame.s_tilde.array().square().matrix();
  frame.s_tilde_perp =
      (sqrt(Scalar(6)) * (st2.array() - Scalar(1) / Scalar(3)).matrix() - cos3 * frame.s_tilde) / sin3;
  frame.defined = true;
  return frame;
}

/// Inverse map σ_k = −p + (2q/3) cos(θ − 2πk/3), k = 0, 1, 2.
template <typename Scalar>
StressState<Scalar> principal_from_invariants(Scalar p, Scalar q, Scalar theta) {
  using std::cos;
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  constexpr Scalar slack = Scalar(1e-12);
  if (!(theta >= -slack && theta <= pi / Scalar(3) + slack)) {
    throw DomainError("Lode angle outside [0, pi/3]");
  }
  if (!(q >= Scalar(0))) throw DomainError("q must be non-negative");
  theta = std::clamp(theta, Scalar(0), pi / Scalar(3));
  const Scalar r = Scalar(2) * q / Scalar(3);
  return StressState<Scalar>(-p + r * cos(theta), -p + r * cos(theta - Scalar(2) * pi / Scalar(3)),
                             -p + r * cos(theta - Scalar(4) * pi / Scalar(3)));
}

template <typename Scalar>
StressState<Scalar> principal_from_invariants(const InvariantTriple<Scalar>& inv) {
  return principal_from_invariants(inv.p, inv.q, inv.theta);
}

}  // namespace bpyield
