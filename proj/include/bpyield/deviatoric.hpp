#pragma once

// Lode-dependence functions g(θ) on the fundamental sector θ ∈ [0, π/3],
// with first and second derivatives in closed form.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <variant>

#include "bpyield/errors.hpp"

namespace bpyield {

/// g = 1 / cos[βπ/6 − acos(γ cos 3θ)/3]
struct BPShape {
  double beta{1};
  double gamma{0};
};

/// g = [1 + β (1 + cos 3θ)]^{−1/n}
struct PowerLawShape {
  double beta{0};
  double n{1};
};

/// Willam-Warnke ellipse-segment section, g(0) = e, g(π/3) = 1.
struct WillamWarnkeShape {
  double e{1};
};

/// g = 2k / [1 + k + (1 − k) cos 3θ], g(0) = k, g(π/3) = 1.
struct GudehusArgyrisShape {
  double k{1};
};

using DeviatoricShape = std::variant<BPShape, PowerLawShape, WillamWarnkeShape, GudehusArgyrisShape>;

std::string shape_name(const DeviatoricShape& shape);

template <typename Scalar>
struct LodeFunction {
  Scalar g;
  Scalar dg;
  Scalar d2g;
};

namespace detail {

template <typename Scalar>
Scalar checked_sector_angle(Scalar theta) {
  constexpr Scalar third = std::numbers::pi_v<Scalar> / Scalar(3);
  constexpr Scalar slack = Scalar(1e-12);
  if (!(theta >= -slack && theta <= third + slack)) {
    throw DomainError("Lode angle outside [0, pi/3]");
  }
  return std::clamp(theta, Scalar(0), third);
}

template <typename Scalar>
LodeFunction<Scalar> lode_function(Scalar theta, const BPShape& shape) {
  using std::acos;
  using std::cos;
  using std::sin;
  using std::sqrt;
  using std::tan;
  const Scalar beta(shape.beta);
  const Scalar gamma(shape.gamma);
  const Scalar t = cos(Scalar(3) * theta);
  const Scalar s3 = sin(Scalar(3) * theta);
  const Scalar w = sqrt(Scalar(1) - gamma * gamma * t * t);
  const Scalar phi = beta * std::numbers::pi_v<Scalar> / Scalar(6) - acos(gamma * t) / Scalar(3);
  // φ' = −γ sin3θ / w and φ'' = −3γ(1 − γ²) cos3θ / w³.
  const Scalar dphi = -gamma * s3 / w;
  const Scalar d2phi = -Scalar(3) * gamma * (Scalar(1) - gamma * gamma) * t / (w * w * w);
  const Scalar g = Scalar(1) / cos(phi);
  const Scalar tn = tan(phi);
  LodeFunction<Scalar> out;
  out.g = g;
  out.dg = g * tn * dphi;
  out.d2g = g * ((Scalar(2) * tn * tn + Scalar(1)) * dphi * dphi + tn * d2phi);
  return out;
}

template <typename Scalar>
LodeFunction<Scalar> lode_function(Scalar theta, const PowerLawShape& shape) {
  using std::cos;
  using std::pow;
  using std::sin;
  const Scalar beta(shape.beta);
  const Scalar n(shape.n);
  const Scalar t = cos(Scalar(3) * theta);
  const Scalar s = Scalar(1) + beta * (Scalar(1) + t);
  const Scalar ds = -Scalar(3) * beta * sin(Scalar(3) * theta);
  const Scalar d2s = -Scalar(9) * beta * t;
  const Scalar g = pow(s, -Scalar(1) / n);
  const Scalar r = ds / s;
  LodeFunction<Scalar> out;
  out.g = g;
  out.dg = -g * r / n;
  out.d2g = g * ((Scalar(1) / n + Scalar(1)) * r * r / n - d2s / (n * s));
  return out;
}

template <typename Scalar>
LodeFunction<Scalar> lode_function(Scalar theta, const WillamWarnkeShape& shape) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const Scalar e(shape.e);
  const Scalar a = Scalar(1) - e * e;
  const Scalar b = Scalar(2) * e - Scalar(1);
  const Scalar c = cos(theta);
  const Scalar s = sin(theta);
  const Scalar c2 = c * c - s * s;

  const Scalar R = sqrt(std::max(Scalar(0), Scalar(4) * a * c * c + Scalar(5) * e * e - Scalar(4) * e));
  const Scalar N = Scalar(2) * a * c + b * R;
  const Scalar D = Scalar(4) * a * c * c + b * b;

  LodeFunction<Scalar> out;
  out.g = N / D;
  if (a == Scalar(0)) {  // e = 1: von Mises circle
    out.dg = Scalar(0);
    out.d2g = Scalar(0);
    return out;
  }
  const Scalar dR = -Scalar(4) * a * c * s / R;
  const Scalar d2R = -Scalar(4) * a * (c2 * R - c * s * dR) / (R * R);
  const Scalar dN = -Scalar(2) * a * s + b * dR;
  const Scalar d2N = -Scalar(2) * a * c + b * d2R;
  const Scalar dD = -Scalar(8) * a * c * s;
  const Scalar d2D = -Scalar(8) * a * c2;

  const Scalar num1 = dN * D - N * dD;
  out.dg = num1 / (D * D);
  out.d2g = (d2N * D - N * d2D) / (D * D) - Scalar(2) * dD * num1 / (D * D * D);
  return out;
}

template <typename Scalar>
LodeFunction<Scalar> lode_function(Scalar theta, const GudehusArgyrisShape& shape) {
  using std::cos;
  using std::sin;
  const Scalar k(shape.k);
  const Scalar t = cos(Scalar(3) * theta);
  const Scalar D = Scalar(1) + k + (Scalar(1) - k) * t;
  const Scalar dD = -Scalar(3) * (Scalar(1) - k) * sin(Scalar(3) * theta);
  const Scalar d2D = -Scalar(9) * (Scalar(1) - k) * t;
  LodeFunction<Scalar> out;
  out.g = Scalar(2) * k / D;
  out.dg = -Scalar(2) * k * dD / (D * D);
  out.d2g = Scalar(2) * k * (Scalar(2) * dD * dD / (D * D * D) - d2D / (D * D));
  return out;
}

}  // namespace detail

/// g, g′, g″ at θ. Throws DomainError for θ ∉ [0, π/3].
template <typename Scalar>
LodeFunction<Scalar> lode_function(Scalar theta, const DeviatoricShape& shape) {
  theta = detail::checked_sector_angle(theta);
  return std::visit([theta](const auto& s) { return detail::lode_function(theta, s); }, shape);
}

template <typename Scalar>
Scalar deviatoric_g(Scalar theta, const DeviatoricShape& shape) {
  return lode_function(theta, shape).g;
}

}  // namespace bpyield
