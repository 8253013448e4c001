#include "bpyield/limits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace bpyield {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(double v, const char* name) {
  if (!(v > 0) || !std::isfinite(v)) throw DomainError(std::string(name) + " must be positive and finite");
}

void require_ratio(double r) {
  if (!(r >= 1) || !std::isfinite(r)) throw DomainError("r = fc/ft must be >= 1");
}

double scale(int k) {
  if (k < 3) throw DomainError("scale exponent must be >= 3");
  return std::pow(10.0, k);
}

// The cap is made long (pc = fc 10^k, m = 10^k) so that Φ stays of order
// 10^-k over the range of interest and f(p) is linear there. α is taken of
// order 10^-2k: the √(αΦ) term then perturbs the strength by O(10^-k) instead
// of O(√α / Φ).
BPParams linear_cap(double fc, int k) {
  BPParams p;
  p.pc = fc * scale(k);
  p.m = scale(k);
  p.alpha = std::pow(10.0, -2 * k);
  return p;
}

LimitRealization tresca_like(double ft, double M_factor, int k) {
  LimitRealization out;
  out.scale_exponent = k;
  BPParams& p = out.params;
  p.pc = ft * scale(k);
  p.c = p.pc;
  p.m = 2;
  p.alpha = 1;
  p.beta = 1;
  p.gamma = 0;
  p.M = M_factor * ft / p.pc;
  return out;
}

}  // namespace

const char* to_string(ClassicalKind kind) {
  switch (kind) {
    case ClassicalKind::von_mises:
      return "von-mises";
    case ClassicalKind::drucker_prager:
      return "drucker-prager";
    case ClassicalKind::tresca:
      return "tresca";
    case ClassicalKind::modified_tresca:
      return "modified-tresca";
    case ClassicalKind::coulomb_mohr:
      return "coulomb-mohr";
    case ClassicalKind::cam_clay:
      return "cam-clay";
  }
  return "unknown";
}

ClassicalCriterion ClassicalCriterion::von_mises(double ft) {
  return {ClassicalKind::von_mises, ft, ft};
}

ClassicalCriterion ClassicalCriterion::tresca(double ft) {
  return {ClassicalKind::tresca, ft, ft};
}

ClassicalCriterion ClassicalCriterion::drucker_prager(double fc, double r) {
  return {ClassicalKind::drucker_prager, fc / r, fc};
}

ClassicalCriterion ClassicalCriterion::modified_tresca(double fc, double r) {
  return {ClassicalKind::modified_tresca, fc / r, fc};
}

ClassicalCriterion ClassicalCriterion::coulomb_mohr(double fc, double r) {
  return {ClassicalKind::coulomb_mohr, fc / r, fc};
}

ClassicalCriterion ClassicalCriterion::cam_clay(double M, double pc) {
  ClassicalCriterion c;
  c.kind = ClassicalKind::cam_clay;
  c.M = M;
  c.pc = pc;
  return c;
}

LimitRealization realize(const ClassicalCriterion& criterion, int k) {
  scale(k);
  const double sqrt2 = std::sqrt(2.0);
  const double sqrt3 = std::sqrt(3.0);

  switch (criterion.kind) {
    case ClassicalKind::cam_clay: {
      require_positive(criterion.M, "M");
      require_positive(criterion.pc, "pc");
      LimitRealization out;
      out.scale_exponent = k;
      out.params = {criterion.M, criterion.pc, 0, 2, 1, 1, 0};
      return out;
    }
    case ClassicalKind::von_mises:
      require_positive(criterion.ft, "ft");
      return tresca_like(criterion.ft, 2, k);
    case ClassicalKind::tresca: {
      require_positive(criterion.ft, "ft");
      LimitRealization out = tresca_like(criterion.ft, sqrt3, k);
      out.params.gamma = kLimitGamma;
      out.warnings.emplace_back("gamma = 1 replaced by 1 - 1e-9");
      return out;
    }
    default:
      break;
  }

  require_positive(criterion.ft, "ft");
  require_positive(criterion.fc, "fc");
  const double r = criterion.r();
  require_ratio(r);
  const double fc = criterion.fc;

  if (r == 1) {
    const bool dp = criterion.kind == ClassicalKind::drucker_prager;
    LimitRealization out = realize(dp ? ClassicalCriterion::von_mises(fc) : ClassicalCriterion::tresca(fc), k);
    out.warnings.emplace_back(std::string(to_string(criterion.kind)) + " with r = 1 reduces to " +
                              (dp ? "von-mises" : "tresca"));
    return out;
  }

  if (criterion.kind == ClassicalKind::coulomb_mohr) {
    return coulomb_mohr_generalized(fc, r, 6 / kPi * std::atan(sqrt3 / (2 * r + 1)), k);
  }

  LimitRealization out;
  out.scale_exponent = k;
  out.params = linear_cap(fc, k);
  out.params.c = 2 * fc / (3 * (r - 1));
  out.params.beta = 1;
  out.warnings.emplace_back("alpha = 0 replaced by 1e-" + std::to_string(2 * k));
  if (criterion.kind == ClassicalKind::drucker_prager) {
    out.params.M = 3 * (r - 1) / (sqrt2 * (r + 1));
    out.params.gamma = 0;
  } else {
    out.params.M = 3 * sqrt3 * (r - 1) / (2 * sqrt2 * (r + 1));
    out.params.gamma = kLimitGamma;
    out.warnings.emplace_back("gamma = 1 replaced by 1 - 1e-9");
  }
  return out;
}

LimitRealization coulomb_mohr_generalized(double fc, double r, double beta, int k) {
  require_positive(fc, "fc");
  require_ratio(r);
  const double c0 = std::cos(beta * kPi / 6);
  const double c1 = std::cos(beta * kPi / 6 - kPi / 3);
  const double denom = r * c1 - c0;
  if (!(denom > 0)) throw DomainError("coulomb-mohr: r cos(beta pi/6 - pi/3) - cos(beta pi/6) must be positive");

  LimitRealization out;
  out.scale_exponent = k;
  out.params = linear_cap(fc, k);
  out.params.M = 3 * denom / (std::sqrt(2.0) * (r + 1));
  out.params.c = fc * (c1 + c0) / (3 * denom);
  out.params.beta = beta;
  out.params.gamma = kLimitGamma;
  out.warnings.emplace_back("alpha = 0 replaced by 1e-" + std::to_string(2 * k));
  out.warnings.emplace_back("gamma = 1 replaced by 1 - 1e-9");
  return out;
}

BPParams deshpande_fleck_to_bp(double Y, double alpha_df, std::vector<std::string>* warnings) {
  require_positive(Y, "Y");
  require_positive(alpha_df, "alpha_df");
  if (warnings && alpha_df < 1e-3) {
    warnings->emplace_back("alpha_df < 1e-3: c = pc grows as 1/alpha_df (von Mises-like limit)");
  }
  const double pc = Y / alpha_df * std::sqrt(1 + alpha_df * alpha_df / 9);
  return {2 * alpha_df, pc, pc, 2, 1, 1, 0};
}

DeshpandeFleck bp_to_deshpande_fleck(double M, double pc, double c) {
  if (pc != c) throw ShapeMismatch("Deshpande-Fleck correspondence requires pc = c");
  require_positive(M, "M");
  require_positive(pc, "pc");
  return {c * M / (2 * std::sqrt(1 + M * M / 36)), M / 2};
}

BPParams gurson_equivalent(const GursonParams& g) {
  require_positive(g.sigmaM, "sigmaM");
  require_positive(g.q1, "q1");
  require_positive(g.q2, "q2");
  if (!(g.f > 0 && g.f < 1)) throw DomainError("void fraction f must lie in (0, 1)");
  if (!(g.q3 >= 0)) throw DomainError("q3 must be >= 0");
  const double arg = (1 + g.q3 * g.f * g.f) / (2 * g.f * g.q1);
  if (!(arg >= 1)) throw DomainError("gurson: acosh argument below 1");
  const double radicand = 1 + g.q3 * g.f * g.f - 2 * g.f * g.q1;
  if (!(radicand >= 0)) throw DomainError("gurson: negative radicand, f too large for the given q1, q3");
  const double pc = g.sigmaM * 2 / (3 * g.q2) * std::acosh(arg);
  const double M = g.sigmaM * 2 / pc * std::sqrt(radicand);
  return {M, pc, pc, 2, 1, 1, 0};
}

double gurson_yield(const StressState<double>& stress, const GursonParams& g) {
  require_positive(g.sigmaM, "sigmaM");
  const InvariantTriple<double> inv = invariants(stress);
  const double qn = inv.q / g.sigmaM;
  return qn * qn + 2 * g.q1 * g.f * std::cosh(3 * g.q2 * inv.p / (2 * g.sigmaM)) - 1 - g.q3 * g.f * g.f;
}

std::optional<double> gurson_surface_q(double p, const GursonParams& g) {
  require_positive(g.sigmaM, "sigmaM");
  const double rest = 1 + g.q3 * g.f * g.f - 2 * g.q1 * g.f * std::cosh(3 * g.q2 * p / (2 * g.sigmaM));
  // round-off at the intercepts
  if (rest < -1e-12 * (1 + g.q3 * g.f * g.f)) return std::nullopt;
  return g.sigmaM * std::sqrt(std::max(rest, 0.0));
}

double newman_strength(double sigma3, double fc) {
  require_positive(fc, "fc");
  if (!(sigma3 >= 0)) throw DomainError("confinement sigma3 must be >= 0");
  return fc * (1 + 3.7 * std::pow(sigma3 / fc, 0.86));
}

}  // namespace bpyield
