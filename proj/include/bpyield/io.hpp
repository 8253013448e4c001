#pragma once

// JSON, CSV and SVG serialization. Numbers are written in the shortest form
// that round-trips, and JSON objects keep a fixed key order, so identical
// inputs give byte-identical output.

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "bpyield/calibration.hpp"
#include "bpyield/convexity.hpp"
#include "bpyield/criterion.hpp"
#include "bpyield/sections.hpp"

namespace bpyield {

using Json = nlohmann::ordered_json;

std::string format_double(double v);

/// Reads a parameter object. The seven-parameter form is
///   {"M": .., "pc": .., "c": .., "m": .., "alpha": .., "beta": .., "gamma": ..}
/// (c, m, alpha, beta, gamma default to 0, 2, 1, 1, 0). Optional keys:
/// "meridian": "bp" | "linear" (with "Gamma", "c"), "A", "B", and
/// "deviatoric": {"kind": "bp" | "power-law" | "willam-warnke" |
/// "gudehus-argyris", ...shape parameters}. Throws ValidationError on
/// unknown keys or wrong types.
CriterionSpec spec_from_json(const Json& j);

Json spec_to_json(const CriterionSpec& spec);
Json report_to_json(const ConvexityReport& report);
Json fit_to_json(const FitResult& result);

/// "x,y" rows, preceded by '#' lines with the section kind and the spec.
void write_curve_csv(std::ostream& out, const SectionCurve& curve);

void write_table_csv(std::ostream& out, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows, const std::vector<std::string>& comments = {});

struct Polyline {
  std::vector<Eigen::Vector2d> points;
  bool closed{false};
  std::string name;
};

/// Self-contained SVG: one path per polyline, axes through the data range,
/// axis labels and a legend.
void write_svg(std::ostream& out, const std::vector<Polyline>& lines, const std::string& x_label,
               const std::string& y_label);

void write_curve_svg(std::ostream& out, const SectionCurve& curve);

}  // namespace bpyield
