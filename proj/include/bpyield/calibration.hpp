#pragma once

// Least-squares calibration of criterion parameters to yield points.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "bpyield/convexity.hpp"
#include "bpyield/criterion.hpp"

namespace bpyield {

struct FitPoint {
  double p{0};
  double q{0};
  double theta{0};
  double w{1};
};

struct FitDataset {
  std::vector<FitPoint> points;
  std::string source;
  std::string unit;
};

/// CSV with header "p,q,theta[,w]" or "s1,s2,s3[,w]" (angles in radians).
/// Lines starting with '#' are comments; "# source: ..." and "# unit: ..."
/// fill the metadata. Principal-stress rows are converted to invariants.
/// Throws ParseError (with the 1-based line) and ValidationError.
FitDataset parse_dataset(std::string_view text);
FitDataset load_dataset(const std::filesystem::path& path);

enum class ResidualMode { function_value, meridian_distance };

const char* to_string(ResidualMode mode);
std::optional<ResidualMode> parse_residual_mode(std::string_view name);

/// Fit parameters, in the order they are decoded (β last, since its
/// admissible interval depends on γ or n).
enum class FitParam { M, pc, c, m, alpha, Gamma, A, e, k, n, gamma, beta };

const char* to_string(FitParam p);
std::optional<FitParam> parse_fit_param(std::string_view name);

/// Value of a parameter in a spec; throws ShapeMismatch if the spec's
/// meridian or deviatoric shape has no such parameter.
double get_param(const CriterionSpec& spec, FitParam p);
void set_param(CriterionSpec& spec, FitParam p, double value);

struct Bounds {
  double lo{0};
  double hi{0};
};

struct FitProblem {
  /// Supplies the shape and the values of every parameter not in `free`.
  CriterionSpec spec_template;
  std::vector<FitParam> free;
  /// Overrides of the default admissible bounds. β bounds are further
  /// intersected with its convexity interval.
  std::map<FitParam, Bounds> bounds;
  ResidualMode mode{ResidualMode::meridian_distance};
  int starts{16};
  std::uint64_t seed{20100301};
};

/// Default (lo, hi) of a parameter; scale parameters are sized from the
/// largest stress in the dataset.
Bounds default_bounds(FitParam p, const FitDataset& data);

/// function_value: r = w F / max(B q, |f(p)|, 0.01 pc).
/// meridian_distance: r = w (q − q_surface(p, θ)) / q̄, q̄ the mean data q.
/// Points without a surface point at their pressure get w (1 + distance).
Eigen::VectorXd residuals(const FitProblem& problem, const CriterionSpec& candidate, const FitDataset& data);

struct Goodness {
  double rms{0};
  double max_abs{0};
  Eigen::VectorXd per_point;
};

Goodness goodness(const CriterionSpec& spec, const FitDataset& data, ResidualMode mode);

struct FitResult {
  CriterionSpec spec;
  double rms{0};
  double initial_rms{0};
  int iterations{0};
  int best_start{0};
  bool converged{false};
  ConvexityReport convexity;
};

/// Multi-start Levenberg-Marquardt in sigmoid-mapped coordinates. Start 0
/// is the template (or `init`); further starts are drawn from the seeded
/// generator. The returned rms never exceeds that of start 0. Throws
/// InsufficientData when there are fewer points than free parameters.
FitResult fit(const FitProblem& problem, const FitDataset& data, std::optional<CriterionSpec> init = std::nullopt);

}  // namespace bpyield
