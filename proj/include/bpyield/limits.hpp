#pragma once

// Parameter sets reducing the criterion to classical ones, the
// Deshpande-Fleck and Gurson correspondences, and reference strength laws
// used for comparison.
//
// Criteria that are only reached in a limit (pc → ∞, α → 0, γ → 1) are
// realized with finite surrogates: pc = 10^k times the reference strength,
// so the strength error is O(10^-k).

#include <optional>
#include <string>
#include <vector>

#include "bpyield/criterion.hpp"
#include "bpyield/invariants.hpp"

namespace bpyield {

enum class ClassicalKind { von_mises, drucker_prager, tresca, modified_tresca, coulomb_mohr, cam_clay };

const char* to_string(ClassicalKind kind);

/// A classical criterion with its strengths. r = fc/ft ≥ 1 for the
/// pressure-sensitive ones; Cam-clay carries (M, pc) instead.
struct ClassicalCriterion {
  ClassicalKind kind{ClassicalKind::von_mises};
  double ft{1};
  double fc{1};
  double M{1};
  double pc{1};

  static ClassicalCriterion von_mises(double ft);
  static ClassicalCriterion tresca(double ft);
  static ClassicalCriterion drucker_prager(double fc, double r);
  static ClassicalCriterion modified_tresca(double fc, double r);
  static ClassicalCriterion coulomb_mohr(double fc, double r);
  static ClassicalCriterion cam_clay(double M, double pc);

  double r() const { return fc / ft; }
};

struct LimitRealization {
  BPParams params;
  int scale_exponent{6};
  std::vector<std::string> warnings;
};

inline constexpr int kDefaultScaleExponent = 6;

/// Throws DomainError for k < 3, non-positive strengths or r < 1. At r = 1
/// Drucker-Prager falls back to von Mises and modified Tresca and
/// Coulomb-Mohr to Tresca, with a warning.
LimitRealization realize(const ClassicalCriterion& criterion, int scale_exponent = kDefaultScaleExponent);

/// Coulomb-Mohr with a free deviatoric parameter β. The Coulomb-Mohr
/// realization is the special case β = (6/π) atan(√3/(2r + 1)).
/// Throws DomainError when r cos(βπ/6 − π/3) − cos(βπ/6) ≤ 0.
LimitRealization coulomb_mohr_generalized(double fc, double r, double beta,
                                          int scale_exponent = kDefaultScaleExponent);

/// Deshpande-Fleck foam model (Y, α) as BP parameters: M = 2α, c = pc =
/// (Y/α)√(1 + (α/3)²), β = 1, γ = 0, m = 2, α = 1. Appends a warning for
/// α < 1e-3, where c grows without bound.
BPParams deshpande_fleck_to_bp(double Y, double alpha_df, std::vector<std::string>* warnings = nullptr);

struct DeshpandeFleck {
  double Y{0};
  double alpha{0};
};

/// Inverse map; throws ShapeMismatch unless pc = c.
DeshpandeFleck bp_to_deshpande_fleck(double M, double pc, double c);

struct GursonParams {
  double f{0};
  double sigmaM{1};
  double q1{1.5};
  double q2{1};
  double q3{2.25};
};

/// BP parameters sharing the hydrostatic intercepts ±pc and the p = 0
/// strength of the Gurson-Tvergaard surface:
///   pc = c = σM (2/(3q2)) acosh((1 + q3 f²)/(2 f q1)),
///   M = (2σM/pc) √(1 + q3 f² − 2 f q1).
/// Throws DomainError when the acosh argument is below 1 or the radicand
/// is negative.
BPParams gurson_equivalent(const GursonParams& g);

/// (q/σM)² + 2 q1 f cosh(3 q2 p/(2σM)) − 1 − q3 f², with p compression
/// positive as everywhere else (cosh is even, so the sign is immaterial).
double gurson_yield(const StressState<double>& stress, const GursonParams& g);

/// q on the Gurson surface at pressure p; nullopt beyond the hydrostatic
/// intercepts.
std::optional<double> gurson_surface_q(double p, const GursonParams& g);

/// σ1 = fc (1 + 3.7 (σ3/fc)^0.86) for confinement σ3 ≥ 0 (compression
/// positive magnitudes).
double newman_strength(double sigma3, double fc);

}  // namespace bpyield
