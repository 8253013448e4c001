#include "bpyield/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>

namespace bpyield {

namespace {

double number(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number()) throw ValidationError(std::string("parameter '") + key + "' must be a number");
  return v.get<double>();
}

double required(const Json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(std::string("missing parameter '") + key + "'");
  return number(j, key, 0);
}

void reject_unknown(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) throw ValidationError("unknown key '" + item.key() + "' in " + where);
  }
}

DeviatoricShape shape_from_json(const Json& d) {
  if (!d.is_object() || !d.contains("kind") || !d.at("kind").is_string()) {
    throw ValidationError("deviatoric must be an object with a string 'kind'");
  }
  const std::string kind = d.at("kind").get<std::string>();
  if (kind == "bp") {
    reject_unknown(d, {"kind", "beta", "gamma"}, "deviatoric");
    return BPShape{number(d, "beta", 1), number(d, "gamma", 0)};
  }
  if (kind == "power-law") {
    reject_unknown(d, {"kind", "beta", "n"}, "deviatoric");
    return PowerLawShape{required(d, "beta"), required(d, "n")};
  }
  if (kind == "willam-warnke") {
    reject_unknown(d, {"kind", "e"}, "deviatoric");
    return WillamWarnkeShape{required(d, "e")};
  }
  if (kind == "gudehus-argyris") {
    reject_unknown(d, {"kind", "k"}, "deviatoric");
    return GudehusArgyrisShape{required(d, "k")};
  }
  throw ValidationError("unknown deviatoric kind '" + kind + "'");
}

Json shape_to_json(const DeviatoricShape& shape) {
  Json j;
  j["kind"] = shape_name(shape);
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BPShape>) {
          j["beta"] = s.beta;
          j["gamma"] = s.gamma;
        } else if constexpr (std::is_same_v<T, PowerLawShape>) {
          j["beta"] = s.beta;
          j["n"] = s.n;
        } else if constexpr (std::is_same_v<T, WillamWarnkeShape>) {
          j["e"] = s.e;
        } else {
          j["k"] = s.k;
        }
      },
      shape);
  return j;
}

Json json_number(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += ch;
    }
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

CriterionSpec spec_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("parameters must be a JSON object");
  // Keys written by realize/fit are accepted so their output can be fed back.
  static const std::set<std::string> allowed{
      "M",        "pc",         "c",           "m",        "alpha",     "beta",  "gamma",      "Gamma",
      "A",        "B",          "meridian",    "deviatoric", "criterion", "scale_exponent", "warnings",
      "rms",      "converged",  "iterations",  "initial_rms", "admissible", "convexity", "free"};
  reject_unknown(j, allowed, "parameters");

  CriterionSpec spec;
  std::string meridian = "bp";
  if (j.contains("meridian")) {
    if (!j.at("meridian").is_string()) throw ValidationError("'meridian' must be \"bp\" or \"linear\"");
    meridian = j.at("meridian").get<std::string>();
  }
  if (meridian == "bp") {
    spec.meridian = BPMeridian{required(j, "M"), required(j, "pc"), number(j, "c", 0), number(j, "m", 2),
                               number(j, "alpha", 1)};
  } else if (meridian == "linear") {
    for (const char* key : {"M", "pc", "m", "alpha"}) {
      if (j.contains(key)) throw ValidationError(std::string("'") + key + "' does not apply to a linear meridian");
    }
    spec.meridian = LinearMeridian{required(j, "Gamma"), number(j, "c", 0)};
  } else {
    throw ValidationError("unknown meridian '" + meridian + "'");
  }

  if (j.contains("deviatoric")) {
    if (j.contains("beta") || j.contains("gamma")) {
      throw ValidationError("give beta/gamma either at top level or inside 'deviatoric', not both");
    }
    spec.deviatoric = shape_from_json(j.at("deviatoric"));
  } else {
    spec.deviatoric = BPShape{number(j, "beta", 1), number(j, "gamma", 0)};
  }
  spec.A = number(j, "A", 0);
  spec.B = number(j, "B", 1);
  return spec;
}

Json spec_to_json(const CriterionSpec& spec) {
  Json j;
  const bool plain = spec.has_bp_meridian() && std::holds_alternative<BPShape>(spec.deviatoric) && spec.A == 0 &&
                     spec.B == 1;
  if (const auto* bp = std::get_if<BPMeridian>(&spec.meridian)) {
    if (!plain) j["meridian"] = "bp";
    j["M"] = bp->M;
    j["pc"] = bp->pc;
    j["c"] = bp->c;
    j["m"] = bp->m;
    j["alpha"] = bp->alpha;
  } else {
    const auto& lin = std::get<LinearMeridian>(spec.meridian);
    j["meridian"] = "linear";
    j["Gamma"] = lin.Gamma;
    j["c"] = lin.c;
  }
  if (plain) {
    const auto& s = std::get<BPShape>(spec.deviatoric);
    j["beta"] = s.beta;
    j["gamma"] = s.gamma;
    return j;
  }
  j["deviatoric"] = shape_to_json(spec.deviatoric);
  j["A"] = spec.A;
  j["B"] = spec.B;
  return j;
}

Json report_to_json(const ConvexityReport& report) {
  Json j;
  j["admissible"] = report.admissible;
  j["ranges_ok"] = report.ranges_ok;
  j["range_violations"] = report.range_violations;
  if (report.beta_interval) {
    j["beta_interval"] = Json::array({report.beta_interval->first, report.beta_interval->second});
  } else {
    j["beta_interval"] = nullptr;
  }
  j["meridian"] = Json{{"ok", report.meridian_ok},
                       {"verdict", to_string(report.meridian_verdict)},
                       {"worst_phi", json_number(report.meridian_worst_phi)},
                       {"worst_margin", json_number(report.meridian_worst_margin)}};
  j["deviatoric"] = Json{{"ok", report.deviatoric_ok},
                         {"verdict", to_string(report.deviatoric_verdict)},
                         {"worst_theta", json_number(report.deviatoric_worst_theta)},
                         {"worst_margin", json_number(report.deviatoric_worst_margin)}};
  j["notes"] = report.notes;
  return j;
}

Json fit_to_json(const FitResult& result) {
  Json j = spec_to_json(result.spec);
  j["rms"] = json_number(result.rms);
  j["initial_rms"] = json_number(result.initial_rms);
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  j["admissible"] = result.convexity.admissible;
  return j;
}

void write_table_csv(std::ostream& out, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows, const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
}

void write_curve_csv(std::ostream& out, const SectionCurve& curve) {
  std::vector<std::string> comments{
      std::string("section: ") + to_string(curve.kind),
      "axes: " + curve.x_label + "," + curve.y_label,
      "spec: " + spec_to_json(curve.spec).dump(),
  };
  if (curve.kind == SectionKind::meridian) comments.push_back("theta: " + format_double(curve.parameter));
  if (curve.kind == SectionKind::deviatoric) comments.push_back("p: " + format_double(curve.parameter));
  if (curve.normalized) comments.push_back("scale: " + format_double(curve.scale));
  std::vector<std::vector<double>> rows;
  rows.reserve(curve.samples.size());
  for (const auto& s : curve.samples) rows.push_back({s(0), s(1)});
  write_table_csv(out, {"x", "y"}, rows, comments);
}

void write_svg(std::ostream& out, const std::vector<Polyline>& lines, const std::string& x_label,
               const std::string& y_label) {
  constexpr double width = 640, height = 480, margin = 60;
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd"};

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& line : lines) {
    for (const auto& p : line.points) {
      xmin = std::min(xmin, p(0));
      xmax = std::max(xmax, p(0));
      ymin = std::min(ymin, p(1));
      ymax = std::max(ymax, p(1));
    }
  }
  if (!(xmin <= xmax)) xmin = ymin = 0, xmax = ymax = 1;
  if (xmax - xmin == 0) xmin -= 0.5, xmax += 0.5;
  if (ymax - ymin == 0) ymin -= 0.5, ymax += 0.5;
  const double pad_x = 0.05 * (xmax - xmin), pad_y = 0.05 * (ymax - ymin);
  xmin -= pad_x, xmax += pad_x, ymin -= pad_y, ymax += pad_y;
  // Equal scales on both axes so sections keep their shape.
  const double s = std::min((width - 2 * margin) / (xmax - xmin), (height - 2 * margin) / (ymax - ymin));
  const double ox = margin + 0.5 * ((width - 2 * margin) - s * (xmax - xmin));
  const double oy = margin + 0.5 * ((height - 2 * margin) - s * (ymax - ymin));
  auto X = [&](double x) { return format_double(std::round((ox + s * (x - xmin)) * 100) / 100); };
  auto Y = [&](double y) { return format_double(std::round((height - oy - s * (y - ymin)) * 100) / 100); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width << ' ' << height << "\" width=\""
      << width << "\" height=\"" << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const double x_axis = std::clamp(0.0, ymin, ymax);
  const double y_axis = std::clamp(0.0, xmin, xmax);
  out << "<g stroke=\"#888\" stroke-width=\"1\">\n";
  out << "<line x1=\"" << X(xmin) << "\" y1=\"" << Y(x_axis) << "\" x2=\"" << X(xmax) << "\" y2=\"" << Y(x_axis)
      << "\"/>\n";
  out << "<line x1=\"" << X(y_axis) << "\" y1=\"" << Y(ymin) << "\" x2=\"" << X(y_axis) << "\" y2=\"" << Y(ymax)
      << "\"/>\n";
  out << "</g>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n";
  out << "<text x=\"" << X(xmax) << "\" y=\"" << Y(x_axis) << "\" dy=\"16\" text-anchor=\"end\">"
      << xml_escape(x_label) << "</text>\n";
  out << "<text x=\"" << X(y_axis) << "\" y=\"" << Y(ymax) << "\" dx=\"6\" dy=\"4\">" << xml_escape(y_label)
      << "</text>\n";
  out << "<text x=\"" << X(xmin) << "\" y=\"" << Y(ymin) << "\" dy=\"16\">" << format_double(xmin) << "</text>\n";
  out << "<text x=\"" << X(xmax) << "\" y=\"" << Y(ymin) << "\" dy=\"30\" text-anchor=\"end\">"
      << format_double(xmax) << "</text>\n";
  out << "</g>\n";

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (line.points.empty()) continue;
    out << "<path fill=\"none\" stroke=\"" << colors[i % 5] << "\" stroke-width=\"1.5\" d=\"";
    for (std::size_t k = 0; k < line.points.size(); ++k) {
      out << (k ? " L" : "M") << X(line.points[k](0)) << ',' << Y(line.points[k](1));
    }
    if (line.closed) out << " Z";
    out << "\"/>\n";
    if (!line.name.empty()) {
      out << "<text font-family=\"sans-serif\" font-size=\"12\" fill=\"" << colors[i % 5] << "\" x=\""
          << width - margin << "\" y=\"" << margin / 2 + 14 * static_cast<double>(i)
          << "\" text-anchor=\"end\">" << xml_escape(line.name) << "</text>\n";
    }
  }
  out << "</svg>\n";
}

void write_curve_svg(std::ostream& out, const SectionCurve& curve) {
  write_svg(out, {Polyline{curve.samples, curve.closed, to_string(curve.kind)}}, curve.x_label, curve.y_label);
}

}  // namespace bpyield
