#include "bpyield/calibration.hpp"

#include <algorithm>
#include <numeric>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

namespace bpyield {

namespace {

constexpr double kPi = std::numbers::pi;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(std::string_view field, std::size_t line) {
  double value = 0;
  const char* end = field.data() + field.size();
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || field.empty()) {
    throw ParseError(line, "not a number: '" + std::string(field) + "'");
  }
  if (!std::isfinite(value)) throw ParseError(line, "non-finite value");
  return value;
}

struct Mapping {
  FitParam param;
  Bounds bounds;
  bool log_scale;
};

double sigmoid(double u) { return 1 / (1 + std::exp(-u)); }

double decode(double u, double lo, double hi, bool log_scale) {
  if (log_scale) return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * sigmoid(u));
  return lo + (hi - lo) * sigmoid(u);
}

double encode(double x, double lo, double hi, bool log_scale) {
  double s = log_scale ? (std::log(x) - std::log(lo)) / (std::log(hi) - std::log(lo)) : (x - lo) / (hi - lo);
  s = std::clamp(s, 1e-9, 1 - 1e-9);
  return std::log(s / (1 - s));
}

Bounds intersect(Bounds a, Bounds b) { return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)}; }

class Decoder {
 public:
  Decoder(const FitProblem& problem, const FitDataset& data) : base_(problem.spec_template) {
    std::vector<FitParam> order = problem.free;
    std::sort(order.begin(), order.end());
    order.erase(std::unique(order.begin(), order.end()), order.end());
    for (FitParam p : order) {
      get_param(base_, p);  // ShapeMismatch for parameters the template lacks
      Bounds b = default_bounds(p, data);
      if (auto it = problem.bounds.find(p); it != problem.bounds.end()) b = intersect(b, it->second);
      if (!(b.hi > b.lo)) throw ValidationError(std::string("empty bounds for ") + to_string(p));
      const bool log_scale = b.lo > 0 && b.hi / b.lo > 10;
      maps_.push_back({p, b, log_scale});
    }
  }

  int size() const { return static_cast<int>(maps_.size()); }

  CriterionSpec spec(const Eigen::VectorXd& u) const {
    CriterionSpec s = base_;
    for (int i = 0; i < size(); ++i) {
      const Mapping& m = maps_[i];
      Bounds b = m.bounds;
      if (m.param == FitParam::beta) b = intersect(b, beta_interval(s));
      set_param(s, m.param, decode(u(i), b.lo, b.hi, m.log_scale && b.lo > 0));
    }
    return s;
  }

  Eigen::VectorXd encode_spec(const CriterionSpec& s) const {
    Eigen::VectorXd u(size());
    CriterionSpec partial = base_;
    for (int i = 0; i < size(); ++i) {
      const Mapping& m = maps_[i];
      Bounds b = m.bounds;
      if (m.param == FitParam::beta) b = intersect(b, beta_interval(partial));
      const double x = get_param(s, m.param);
      u(i) = encode(std::clamp(x, b.lo, b.hi), b.lo, b.hi, m.log_scale && b.lo > 0);
      set_param(partial, m.param, decode(u(i), b.lo, b.hi, m.log_scale && b.lo > 0));
    }
    return u;
  }

 private:
  static Bounds beta_interval(const CriterionSpec& s) {
    if (const auto* bp = std::get_if<BPShape>(&s.deviatoric)) {
      const double hi = beta_bound(std::clamp(bp->gamma, 0.0, kLimitGamma));
      return {2 - hi, hi};
    }
    if (const auto* pl = std::get_if<PowerLawShape>(&s.deviatoric)) return {0, powerlaw_beta_max(pl->n)};
    return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  }

  CriterionSpec base_;
  std::vector<Mapping> maps_;
};

struct ResidualFunctor {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const FitProblem* problem;
  const FitDataset* data;
  const Decoder* decoder;

  int inputs() const { return decoder->size(); }
  int values() const { return static_cast<int>(data->points.size()); }

  int operator()(const Eigen::VectorXd& u, Eigen::VectorXd& r) const {
    r = residuals(*problem, decoder->spec(u), *data);
    return 0;
  }
};

double rms_of(const Eigen::VectorXd& r) { return r.size() ? std::sqrt(r.squaredNorm() / r.size()) : 0.0; }

bool converged_status(Eigen::LevenbergMarquardtSpace::Status status) {
  using namespace Eigen::LevenbergMarquardtSpace;
  switch (status) {
    case RelativeReductionTooSmall:
    case RelativeErrorTooSmall:
    case RelativeErrorAndReductionTooSmall:
    case CosinusTooSmall:
    case FtolTooSmall:
    case XtolTooSmall:
    case GtolTooSmall:
      return true;
    default:
      return false;
  }
}

double data_stress_scale(const FitDataset& data) {
  double s = 0;
  for (const auto& pt : data.points) s = std::max(s, std::abs(pt.p) + pt.q);
  return s > 0 ? s : 1.0;
}

}  // namespace

FitDataset parse_dataset(std::string_view text) {
  FitDataset out;
  bool have_header = false;
  bool principal = false;
  bool weighted = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string_view body = trim(line.substr(1));
      const auto colon = body.find(':');
      if (colon != std::string_view::npos) {
        const std::string_view key = trim(body.substr(0, colon));
        const std::string value(trim(body.substr(colon + 1)));
        if (key == "source") out.source = value;
        if (key == "unit") out.unit = value;
      }
      continue;
    }
    const std::vector<std::string_view> fields = split(line);
    if (!have_header) {
      const bool invariant_cols = fields.size() >= 3 && fields[0] == "p" && fields[1] == "q" && fields[2] == "theta";
      const bool principal_cols = fields.size() >= 3 && fields[0] == "s1" && fields[1] == "s2" && fields[2] == "s3";
      if (!(invariant_cols || principal_cols) || fields.size() > 4 || (fields.size() == 4 && fields[3] != "w")) {
        throw ParseError(line_no, "expected header 'p,q,theta[,w]' or 's1,s2,s3[,w]'");
      }
      have_header = true;
      principal = principal_cols;
      weighted = fields.size() == 4;
      continue;
    }
    const std::size_t expected = weighted ? 4 : 3;
    if (fields.size() != expected) {
      throw ParseError(line_no, "expected " + std::to_string(expected) + " fields, got " + std::to_string(fields.size()));
    }
    std::array<double, 4> v{0, 0, 0, 1};
    for (std::size_t i = 0; i < expected; ++i) v[i] = parse_number(fields[i], line_no);
    FitPoint pt;
    pt.w = v[3];
    if (!(pt.w > 0)) throw ValidationError("line " + std::to_string(line_no) + ": weight must be positive");
    if (principal) {
      const InvariantTriple<double> inv = invariants(StressState<double>(v[0], v[1], v[2]));
      pt.p = inv.p;
      pt.q = inv.hydrostatic ? 0.0 : inv.q;
      pt.theta = inv.theta;
    } else {
      pt.p = v[0];
      pt.q = v[1];
      pt.theta = v[2];
      if (!(pt.q >= 0)) throw ValidationError("line " + std::to_string(line_no) + ": q must be >= 0");
      if (!(pt.theta >= 0 && pt.theta <= kPi / 3 + 1e-12)) {
        throw ValidationError("line " + std::to_string(line_no) + ": theta outside [0, pi/3]");
      }
      pt.theta = std::min(pt.theta, kPi / 3);
    }
    out.points.push_back(pt);
  }
  if (!have_header) throw ParseError(line_no == 0 ? 1 : line_no, "missing header");
  return out;
}

FitDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open dataset " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  FitDataset data = parse_dataset(buffer.str());
  if (data.source.empty()) data.source = path.filename().string();
  return data;
}

const char* to_string(ResidualMode mode) {
  return mode == ResidualMode::function_value ? "function_value" : "meridian_distance";
}

std::optional<ResidualMode> parse_residual_mode(std::string_view name) {
  if (name == "function_value") return ResidualMode::function_value;
  if (name == "meridian_distance") return ResidualMode::meridian_distance;
  return std::nullopt;
}

namespace {

constexpr std::array<std::pair<FitParam, const char*>, 12> kParamNames{{
    {FitParam::M, "M"},
    {FitParam::pc, "pc"},
    {FitParam::c, "c"},
    {FitParam::m, "m"},
    {FitParam::alpha, "alpha"},
    {FitParam::Gamma, "Gamma"},
    {FitParam::A, "A"},
    {FitParam::e, "e"},
    {FitParam::k, "k"},
    {FitParam::n, "n"},
    {FitParam::gamma, "gamma"},
    {FitParam::beta, "beta"},
}};

// Pointer to the storage of a parameter inside a spec, or nullptr.
double* param_slot(CriterionSpec& spec, FitParam p) {
  auto* bp = std::get_if<BPMeridian>(&spec.meridian);
  auto* lin = std::get_if<LinearMeridian>(&spec.meridian);
  switch (p) {
    case FitParam::M:
      return bp ? &bp->M : nullptr;
    case FitParam::pc:
      return bp ? &bp->pc : nullptr;
    case FitParam::c:
      return bp ? &bp->c : &lin->c;
    case FitParam::m:
      return bp ? &bp->m : nullptr;
    case FitParam::alpha:
      return bp ? &bp->alpha : nullptr;
    case FitParam::Gamma:
      return lin ? &lin->Gamma : nullptr;
    case FitParam::A:
      return &spec.A;
    case FitParam::e: {
      auto* s = std::get_if<WillamWarnkeShape>(&spec.deviatoric);
      return s ? &s->e : nullptr;
    }
    case FitParam::k: {
      auto* s = std::get_if<GudehusArgyrisShape>(&spec.deviatoric);
      return s ? &s->k : nullptr;
    }
    case FitParam::n: {
      auto* s = std::get_if<PowerLawShape>(&spec.deviatoric);
      return s ? &s->n : nullptr;
    }
    case FitParam::gamma: {
      auto* s = std::get_if<BPShape>(&spec.deviatoric);
      return s ? &s->gamma : nullptr;
    }
    case FitParam::beta: {
      if (auto* s = std::get_if<BPShape>(&spec.deviatoric)) return &s->beta;
      if (auto* s = std::get_if<PowerLawShape>(&spec.deviatoric)) return &s->beta;
      return nullptr;
    }
  }
  return nullptr;
}

}  // namespace

const char* to_string(FitParam p) {
  for (const auto& [param, name] : kParamNames) {
    if (param == p) return name;
  }
  return "?";
}

std::optional<FitParam> parse_fit_param(std::string_view name) {
  for (const auto& [param, n] : kParamNames) {
    if (name == n) return param;
  }
  return std::nullopt;
}

double get_param(const CriterionSpec& spec, FitParam p) {
  const double* slot = param_slot(const_cast<CriterionSpec&>(spec), p);
  if (!slot) throw ShapeMismatch(std::string("parameter ") + to_string(p) + " does not apply to this criterion");
  return *slot;
}

void set_param(CriterionSpec& spec, FitParam p, double value) {
  double* slot = param_slot(spec, p);
  if (!slot) throw ShapeMismatch(std::string("parameter ") + to_string(p) + " does not apply to this criterion");
  *slot = value;
}

Bounds default_bounds(FitParam p, const FitDataset& data) {
  const double s = data_stress_scale(data);
  switch (p) {
    case FitParam::M:
      return {1e-3, 10};
    case FitParam::pc:
      return {1e-3 * s, 1e3 * s};
    case FitParam::c:
      return {0, 10 * s};
    case FitParam::m:
      return {1 + 1e-6, 50};
    case FitParam::alpha:
      return {1e-6, 2 - 1e-6};
    case FitParam::Gamma:
      return {1e-6, 10};
    case FitParam::A:
      return {0, 10 / s};
    case FitParam::e:
      return {0.5 + 1e-9, 1};
    case FitParam::k:
      return {7.0 / 9.0, 1};
    case FitParam::n:
      return {1e-6, 20};
    case FitParam::gamma:
      return {0, kLimitGamma};
    case FitParam::beta:
      return {0, 4};
  }
  return {0, 1};
}

Eigen::VectorXd residuals(const FitProblem& problem, const CriterionSpec& candidate, const FitDataset& data) {
  const auto n = static_cast<Eigen::Index>(data.points.size());
  Eigen::VectorXd r(n);
  double q_mean = 0;
  for (const auto& pt : data.points) q_mean += pt.q;
  q_mean = n ? q_mean / n : 1.0;
  if (!(q_mean > 0)) q_mean = 1.0;

  const auto* bp = std::get_if<BPMeridian>(&candidate.meridian);
  const double floor = bp ? 0.01 * bp->pc : 0.01 * q_mean;

  for (Eigen::Index i = 0; i < n; ++i) {
    const FitPoint& pt = data.points[i];
    const MeridianValue<double> mer = meridian_value(pt.p, candidate.meridian);
    double dist = -1;  // distance outside the effective domain
    if (bp) {
      if (mer.phi < 0) dist = -mer.phi;
      if (mer.phi > 1) dist = mer.phi - 1;
    } else if (mer.f.value() > 0) {
      dist = mer.f.value() / q_mean;
    }
    if (dist >= 0) {
      r(i) = pt.w * (1 + dist);
      continue;
    }
    const double f = mer.f.value();
    if (problem.mode == ResidualMode::function_value) {
      const double F = yield_value(pt.p, pt.q, pt.theta, candidate).value();
      r(i) = pt.w * F / std::max({candidate.B * pt.q, std::abs(f), floor});
    } else {
      r(i) = pt.w * (pt.q - *surface_q(pt.p, pt.theta, candidate)) / q_mean;
    }
  }
  return r;
}

Goodness goodness(const CriterionSpec& spec, const FitDataset& data, ResidualMode mode) {
  FitProblem problem;
  problem.spec_template = spec;
  problem.mode = mode;
  Goodness g;
  g.per_point = residuals(problem, spec, data);
  g.rms = rms_of(g.per_point);
  g.max_abs = g.per_point.size() ? g.per_point.cwiseAbs().maxCoeff() : 0.0;
  return g;
}

FitResult fit(const FitProblem& problem, const FitDataset& data, std::optional<CriterionSpec> init) {
  const Decoder decoder(problem, data);
  if (decoder.size() == 0) throw ValidationError("no free parameters");
  if (data.points.size() < static_cast<std::size_t>(decoder.size())) {
    throw InsufficientData("need at least as many points as free parameters");
  }

  const ResidualFunctor functor{&problem, &data, &decoder};
  const int starts = init ? 1 : std::max(1, problem.starts);
  // Latin hypercube over the bounded coordinates so every stratum of every
  // parameter range is visited once
  std::mt19937_64 rng(problem.seed);
  std::uniform_real_distribution<double> jitter(0, 1);
  const int strata = std::max(1, starts - 1);
  std::vector<std::vector<int>> order(decoder.size());
  for (auto& o : order) {
    o.resize(strata);
    std::iota(o.begin(), o.end(), 0);
    std::shuffle(o.begin(), o.end(), rng);
  }

  FitResult best;
  best.rms = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_u;

  for (int start = 0; start < starts; ++start) {
    Eigen::VectorXd u(decoder.size());
    if (start == 0) {
      u = decoder.encode_spec(init ? *init : problem.spec_template);
    } else {
      for (int i = 0; i < u.size(); ++i) {
        const double frac = (order[i][start - 1] + jitter(rng)) / strata;
        const double t = 0.01 + 0.98 * frac;
        u(i) = std::log(t / (1 - t));
      }
    }
    Eigen::VectorXd r0;
    functor(u, r0);
    const double rms0 = rms_of(r0);
    if (start == 0) best.initial_rms = rms0;

    Eigen::NumericalDiff<ResidualFunctor, Eigen::Central> diff(functor, 1e-10);
    Eigen::LevenbergMarquardt<Eigen::NumericalDiff<ResidualFunctor, Eigen::Central>> lm(diff);
    lm.parameters.ftol = 1e-14;
    lm.parameters.xtol = 1e-14;
    lm.parameters.maxfev = 400 * (decoder.size() + 1);
    Eigen::VectorXd x = u;
    const auto status = lm.minimize(x);

    Eigen::VectorXd r1;
    functor(x, r1);
    const double rms1 = std::isfinite(rms_of(r1)) ? rms_of(r1) : std::numeric_limits<double>::infinity();
    const bool improved = rms1 <= rms0;
    const double rms = improved ? rms1 : rms0;
    if (rms < best.rms) {
      best.rms = rms;
      best.best_start = start;
      best.iterations = static_cast<int>(lm.iter);
      best.converged = improved && converged_status(status);
      best_u = improved ? x : u;
    }
  }

  best.spec = decoder.spec(best_u);
  best.convexity = certify(best.spec);
  if (!best.convexity.admissible) best.converged = false;
  return best;
}

}  // namespace bpyield
