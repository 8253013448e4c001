#include "bpyield/criterion.hpp"

#include <cmath>
#include <sstream>

#include "bpyield/convexity.hpp"

namespace bpyield {

std::string shape_name(const DeviatoricShape& shape) {
  struct Namer {
    std::string operator()(const BPShape&) const { return "bp"; }
    std::string operator()(const PowerLawShape&) const { return "power-law"; }
    std::string operator()(const WillamWarnkeShape&) const { return "willam-warnke"; }
    std::string operator()(const GudehusArgyrisShape&) const { return "gudehus-argyris"; }
  };
  return std::visit(Namer{}, shape);
}

std::vector<std::string> BPParams::violations() const {
  std::vector<std::string> out;
  auto require = [&out](bool ok, const char* what) {
    if (!ok) out.emplace_back(what);
  };
  require(std::isfinite(M) && M > 0, "M must be > 0");
  require(std::isfinite(pc) && pc > 0, "pc must be > 0");
  require(std::isfinite(c) && c >= 0, "c must be >= 0");
  require(std::isfinite(m) && m > 1, "m must be > 1");
  require(alpha > 0 && alpha < 2, "alpha must lie in (0, 2)");
  const bool gamma_ok = gamma >= 0 && gamma < 1;
  require(gamma_ok, "gamma must lie in [0, 1)");
  if (gamma_ok) {
    const double bound = beta_bound(gamma);
    require(beta >= 2 - bound - kBoundaryMargin && beta <= bound + kBoundaryMargin,
            "beta must lie in [2 - B(gamma), B(gamma)]");
  }
  return out;
}

BPParams BPParams::checked(double M, double pc, double c, double m, double alpha, double beta, double gamma) {
  BPParams p{M, pc, c, m, alpha, beta, gamma};
  const auto bad = p.violations();
  if (!bad.empty()) {
    std::ostringstream msg;
    msg << "inadmissible parameters:";
    for (const auto& v : bad) msg << ' ' << v << ';';
    throw DomainError(msg.str());
  }
  return p;
}

LimitModeParams limit_mode(BPParams params) {
  LimitModeParams out;
  if (params.gamma >= 1) {
    out.warnings.push_back("gamma = 1 replaced by 1 - 1e-9");
    params.gamma = kLimitGamma;
  }
  if (params.alpha <= 0) {
    out.warnings.push_back("alpha = 0 replaced by 1e-8");
    params.alpha = kLimitAlpha;
  } else if (params.alpha >= 2) {
    out.warnings.push_back("alpha = 2 replaced by 2 - 1e-8");
    params.alpha = 2 - kLimitAlpha;
  }
  out.params = params;
  return out;
}

CriterionSpec CriterionSpec::from_bp(const BPParams& p) {
  CriterionSpec spec;
  spec.meridian = BPMeridian{p.M, p.pc, p.c, p.m, p.alpha};
  spec.deviatoric = BPShape{p.beta, p.gamma};
  return spec;
}

BPParams CriterionSpec::to_bp() const {
  const auto* mer = std::get_if<BPMeridian>(&meridian);
  const auto* dev = std::get_if<BPShape>(&deviatoric);
  if (mer == nullptr || dev == nullptr || A != 0 || B != 1) {
    throw ShapeMismatch("criterion is not the seven-parameter form");
  }
  return {mer->M, mer->pc, mer->c, mer->m, mer->alpha, dev->beta, dev->gamma};
}

Principal<double> normal_limits(Apex which, const BPParams& params) {
  if (params.alpha == 0 || params.alpha == 2) {
    throw CornerCase("the surface has a corner on the hydrostatic axis for alpha in {0, 2}");
  }
  if (!(params.alpha > 0 && params.alpha < 2)) throw DomainError("alpha must lie in (0, 2)");
  const double s = which == Apex::tension ? 1.0 : -1.0;
  return Principal<double>::Constant(s / std::sqrt(3.0));
}

double apex_normal_alignment(Apex which, const BPParams& params, double delta) {
  const Principal<double> limit = normal_limits(which, params);
  const CriterionSpec spec = CriterionSpec::from_bp(params);
  const double phi = which == Apex::tension ? delta : 1 - delta;
  const double p = phi * (params.pc + params.c) - params.c;
  const auto q = surface_q(p, 0.0, spec);
  if (!q || *q <= 0) throw DegenerateState("no deviatoric offset at the requested apex distance");
  const auto grad = gradient(principal_from_invariants(p, *q, 0.0), spec);
  return grad.unit_normal.dot(limit);
}

}  // namespace bpyield
