#include "bpyield/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "bpyield/calibration.hpp"
#include "bpyield/convexity.hpp"
#include "bpyield/io.hpp"
#include "bpyield/limits.hpp"
#include "bpyield/sections.hpp"

namespace bpyield::cli {

namespace {

namespace fs = std::filesystem;

constexpr double kPi = std::numbers::pi;
constexpr const char* kOutputDirEnv = "BPYIELD_OUTPUT_DIR";

struct Options {
  bool unchecked{false};
  bool degrees{false};
  std::string format{"csv"};
  std::string output;
  std::string output_dir;

  std::string params_file;
  std::optional<double> M, pc, c, m, alpha, beta, gamma;

  std::string stress;
  double theta{0};
  double at_p{0};
  int n{0};
  bool normalize{false};
  std::string p_range;

  std::string data_file;
  std::string problem_file;

  double f_void{0.3}, sigmaM{1}, q1{1.5}, q2{1}, q3{2.25};
  double fc{1}, ft{1}, r{1}, max_ratio{10};
  int scale_exponent{kDefaultScaleExponent};
};

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

std::vector<double> parse_list(const std::string& text, std::size_t count, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError(std::string("malformed ") + what + ": '" + text + "'");
    }
  }
  if (out.size() != count) {
    throw ValidationError(std::string(what) + " needs " + std::to_string(count) + " comma-separated values");
  }
  return out;
}

CriterionSpec load_spec(const Options& o) {
  Json j = o.params_file.empty() ? Json::object() : read_json_file(o.params_file);
  auto put = [&](const char* key, const std::optional<double>& v) {
    if (v) j[key] = *v;
  };
  put("M", o.M);
  put("pc", o.pc);
  put("c", o.c);
  put("m", o.m);
  put("alpha", o.alpha);
  put("beta", o.beta);
  put("gamma", o.gamma);
  if (j.empty()) throw ValidationError("no parameters given (use --params FILE or --M, --pc, ...)");
  return spec_from_json(j);
}

void require_admissible(const CriterionSpec& spec, const Options& o) {
  if (o.unchecked) return;
  const ConvexityReport report = certify(spec);
  if (report.admissible) return;
  std::string why;
  for (const auto& v : report.range_violations) why += "\n  " + v;
  if (!report.meridian_ok) why += "\n  meridian section not convex";
  if (!report.deviatoric_ok) {
    why += "\n  deviatoric section not convex near theta = " + format_double(report.deviatoric_worst_theta);
  }
  throw ValidationError("parameters fail convexity certification (use --unchecked to override):" + why);
}

double angle_in(double value, const Options& o) { return o.degrees ? value * kPi / 180 : value; }
double angle_out(double value, const Options& o) { return o.degrees ? value * 180 / kPi : value; }

// Writes through `emit` to the output file, or to `out` when none is given.
// Relative output paths are resolved against the output directory.
void deliver(const Options& o, std::ostream& out, const std::function<void(std::ostream&)>& emit) {
  if (o.output.empty()) {
    emit(out);
    return;
  }
  fs::path path(o.output);
  if (path.is_relative() && !o.output_dir.empty()) path = fs::path(o.output_dir) / path;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ValidationError("cannot write " + path.string());
  emit(file);
}

void emit_json(const Options& o, std::ostream& out, const Json& j) {
  deliver(o, out, [&](std::ostream& s) { s << j.dump(2) << '\n'; });
}

Json vec_json(const Principal<double>& v) { return Json::array({v(0), v(1), v(2)}); }

int cmd_eval(const Options& o, std::ostream& out) {
  const CriterionSpec spec = load_spec(o);
  require_admissible(spec, o);
  const std::vector<double> s = parse_list(o.stress, 3, "--stress");
  const StressState<double> stress(s[0], s[1], s[2]);
  const InvariantTriple<double> inv = invariants(stress);

  Json j;
  j["stress"] = Json::array({s[0], s[1], s[2]});
  j["p"] = inv.p;
  j["q"] = inv.q;
  j["theta"] = angle_out(inv.theta, o);
  const Extended<double> F = yield_value(stress, spec);
  j["F"] = F.finite() ? Json(F.value()) : Json("inf");
  try {
    const GradientDecomposition<double> g = gradient(stress, spec);
    j["gradient"] = vec_json(g.tensor);
    j["unit_normal"] = vec_json(g.unit_normal);
  } catch (const DegenerateState& e) {
    j["gradient"] = nullptr;
    j["unit_normal"] = nullptr;
    j["note"] = e.what();
  }
  emit_json(o, out, j);
  return ok;
}

void emit_curve(const Options& o, std::ostream& out, const SectionCurve& curve) {
  if (o.format == "json") {
    Json pts = Json::array();
    for (const auto& p : curve.samples) pts.push_back(Json::array({p(0), p(1)}));
    Json j;
    j["section"] = to_string(curve.kind);
    j["x_label"] = curve.x_label;
    j["y_label"] = curve.y_label;
    j["parameter"] = curve.parameter;
    j["normalized"] = curve.normalized;
    j["scale"] = curve.scale;
    j["spec"] = spec_to_json(curve.spec);
    j["samples"] = pts;
    emit_json(o, out, j);
  } else if (o.format == "svg") {
    deliver(o, out, [&](std::ostream& s) { write_curve_svg(s, curve); });
  } else {
    deliver(o, out, [&](std::ostream& s) { write_curve_csv(s, curve); });
  }
}

int cmd_section(const std::string& kind, const Options& o, std::ostream& out) {
  const CriterionSpec spec = load_spec(o);
  require_admissible(spec, o);
  SectionCurve curve;
  if (kind == "meridian") {
    std::optional<std::pair<double, double>> range;
    if (!o.p_range.empty()) {
      const auto v = parse_list(o.p_range, 2, "--p-range");
      range = std::make_pair(v[0], v[1]);
    }
    curve = sample_meridian(spec, angle_in(o.theta, o), o.n > 0 ? o.n : 101, range);
  } else if (kind == "deviatoric") {
    curve = sample_deviatoric(spec, o.at_p, o.n > 0 ? o.n : 61, o.normalize);
  } else {
    curve = sample_biaxial(spec, o.n > 0 ? o.n : kDefaultRays, o.normalize);
  }
  emit_curve(o, out, curve);
  return ok;
}

int cmd_check(const Options& o, std::ostream& out) {
  const CriterionSpec spec = load_spec(o);
  const ConvexityReport report = certify(spec);
  Json j = report_to_json(report);
  j["spec"] = spec_to_json(spec);
  emit_json(o, out, j);
  return report.admissible ? ok : invalid;
}

FitProblem problem_from_json(const Json& j, std::optional<CriterionSpec>& init) {
  if (!j.is_object() || !j.contains("template") || !j.contains("free")) {
    throw ValidationError("fit problem needs 'template' and 'free'");
  }
  for (const auto& item : j.items()) {
    static const std::set<std::string> allowed{"template", "free", "bounds", "mode", "starts", "seed", "init"};
    if (!allowed.count(item.key())) throw ValidationError("unknown key '" + item.key() + "' in fit problem");
  }
  FitProblem p;
  p.spec_template = spec_from_json(j.at("template"));
  for (const auto& name : j.at("free")) {
    const auto param = name.is_string() ? parse_fit_param(name.get<std::string>()) : std::nullopt;
    if (!param) throw ValidationError("unknown free parameter " + name.dump());
    p.free.push_back(*param);
  }
  if (j.contains("bounds")) {
    for (const auto& [key, value] : j.at("bounds").items()) {
      const auto param = parse_fit_param(key);
      if (!param || !value.is_array() || value.size() != 2 || !value[0].is_number() || !value[1].is_number()) {
        throw ValidationError("bounds entry '" + key + "' must be [lo, hi] for a known parameter");
      }
      p.bounds[*param] = {value[0].get<double>(), value[1].get<double>()};
    }
  }
  if (j.contains("mode")) {
    const auto mode = j.at("mode").is_string() ? parse_residual_mode(j.at("mode").get<std::string>()) : std::nullopt;
    if (!mode) throw ValidationError("mode must be \"function_value\" or \"meridian_distance\"");
    p.mode = *mode;
  }
  if (j.contains("starts")) p.starts = j.at("starts").get<int>();
  if (j.contains("seed")) p.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("init")) init = spec_from_json(j.at("init"));
  return p;
}

int cmd_fit(const Options& o, std::ostream& out, std::ostream& err) {
  std::optional<CriterionSpec> init;
  const FitProblem problem = problem_from_json(read_json_file(o.problem_file), init);
  const FitDataset data = load_dataset(o.data_file);
  const FitResult result = fit(problem, data, init);
  Json j = fit_to_json(result);
  emit_json(o, out, j);
  if (!result.converged) {
    err << "fit did not converge (rms " << format_double(result.rms) << ")\n";
    return not_converged;
  }
  return ok;
}

void emit_pairs(const Options& o, std::ostream& out, const std::vector<std::string>& header,
                const std::vector<std::vector<double>>& rows, const std::vector<std::string>& comments) {
  if (o.format == "svg") {
    std::vector<Polyline> lines(header.size() - 1);
    for (std::size_t k = 1; k < header.size(); ++k) {
      lines[k - 1].name = header[k];
      for (const auto& row : rows) {
        if (std::isfinite(row[k])) lines[k - 1].points.emplace_back(row[0], row[k]);
      }
    }
    deliver(o, out, [&](std::ostream& s) { write_svg(s, lines, header[0], "q"); });
  } else if (o.format == "json") {
    Json j;
    j["columns"] = header;
    j["rows"] = rows;
    j["notes"] = comments;
    emit_json(o, out, j);
  } else {
    deliver(o, out, [&](std::ostream& s) { write_table_csv(s, header, rows, comments); });
  }
}

int cmd_compare(const std::string& kind, const Options& o, std::ostream& out) {
  const int n = o.n > 0 ? o.n : 101;
  if (n < 2) throw ValidationError("--n must be >= 2");
  std::vector<std::vector<double>> rows;
  std::vector<std::string> comments;
  if (kind == "gurson") {
    const GursonParams g{o.f_void, o.sigmaM, o.q1, o.q2, o.q3};
    const CriterionSpec spec = CriterionSpec::from_bp(gurson_equivalent(g));
    const auto& mer = std::get<BPMeridian>(spec.meridian);
    double worst = 0;
    for (int i = 0; i < n; ++i) {
      const double p = i == n - 1 ? mer.pc : -mer.c + (mer.pc + mer.c) * i / (n - 1);
      const double qb = surface_q(p, 0.0, spec).value_or(0.0);
      const double qg = gurson_surface_q(p, g).value_or(0.0);
      worst = std::max(worst, std::abs(qb - qg) / g.sigmaM);
      rows.push_back({p, qb, qg});
    }
    comments.push_back("spec: " + spec_to_json(spec).dump());
    comments.push_back("max |q_bp - q_gurson| / sigmaM: " + format_double(worst));
    emit_pairs(o, out, {"p", "q_bp", "q_gurson"}, rows, comments);
    return ok;
  }

  const CriterionSpec spec = load_spec(o);
  require_admissible(spec, o);
  if (!(o.max_ratio > 0)) throw ValidationError("--max-ratio must be positive");
  const double theta = kPi / 3;  // triaxial compression
  for (int i = 0; i < n; ++i) {
    const double s3 = o.fc * o.max_ratio * i / (n - 1);
    const double s1 = newman_strength(s3, o.fc);
    const double p = (s1 + 2 * s3) / 3;
    const double qb = surface_q(p, theta, spec).value_or(std::nan(""));
    rows.push_back({p, qb, s1 - s3});
  }
  comments.push_back("spec: " + spec_to_json(spec).dump());
  comments.push_back("reference: triaxial compression strength, fc = " + format_double(o.fc));
  emit_pairs(o, out, {"p", "q_bp", "q_newman"}, rows, comments);
  return ok;
}

int cmd_realize(const std::string& kind, const Options& o, std::ostream& out, std::ostream& err) {
  ClassicalCriterion criterion;
  if (kind == "von-mises") criterion = ClassicalCriterion::von_mises(o.ft);
  if (kind == "tresca") criterion = ClassicalCriterion::tresca(o.ft);
  if (kind == "drucker-prager") criterion = ClassicalCriterion::drucker_prager(o.fc, o.r);
  if (kind == "modified-tresca") criterion = ClassicalCriterion::modified_tresca(o.fc, o.r);
  if (kind == "coulomb-mohr") criterion = ClassicalCriterion::coulomb_mohr(o.fc, o.r);
  if (kind == "cam-clay") {
    if (!o.M || !o.pc) throw ValidationError("cam-clay needs --M and --pc");
    criterion = ClassicalCriterion::cam_clay(*o.M, *o.pc);
  }
  const LimitRealization real = realize(criterion, o.scale_exponent);
  for (const auto& w : real.warnings) err << "warning: " << w << '\n';
  Json j = spec_to_json(CriterionSpec::from_bp(real.params));
  j["criterion"] = kind;
  j["scale_exponent"] = real.scale_exponent;
  j["warnings"] = real.warnings;
  emit_json(o, out, j);
  return ok;
}

void add_param_options(CLI::App* sub, Options& o) {
  sub->add_option("--params", o.params_file, "parameter JSON file");
  sub->add_option("--M", o.M, "meridian slope parameter M");
  sub->add_option("--pc", o.pc, "compressive hydrostatic strength pc");
  sub->add_option("--c", o.c, "tensile hydrostatic strength c");
  sub->add_option("--m", o.m, "meridian exponent m");
  sub->add_option("--alpha", o.alpha, "meridian shape parameter alpha");
  sub->add_option("--beta", o.beta, "deviatoric parameter beta");
  sub->add_option("--gamma", o.gamma, "deviatoric parameter gamma");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  if (const char* dir = std::getenv(kOutputDirEnv)) o.output_dir = dir;

  CLI::App app{"Evaluate, certify, section and calibrate the seven-parameter BP yield criterion", "bpyield"};
  app.require_subcommand(1);
  app.add_flag("--unchecked", o.unchecked, "skip convexity certification of the parameters");
  app.add_flag("--degrees", o.degrees, "Lode angles in degrees instead of radians");
  app.add_option("--format", o.format, "output format for curves")->check(CLI::IsMember({"csv", "json", "svg"}));
  app.add_option("-o,--output", o.output, "output file (default: standard output)");
  app.add_option("--output-dir", o.output_dir, std::string("directory for relative output paths (default $") +
                                                   kOutputDirEnv + ")");

  auto* eval = app.add_subcommand("eval", "invariants, F, gradient and unit normal at a stress state");
  add_param_options(eval, o);
  eval->add_option("--stress", o.stress, "principal stresses s1,s2,s3 (tension positive)")->required();

  auto* section = app.add_subcommand("section", "sample a section of the yield surface");
  section->require_subcommand(1);
  auto* meridian = section->add_subcommand("meridian", "q against p at fixed Lode angle");
  meridian->add_option("--theta", o.theta, "Lode angle");
  meridian->add_option("--p-range", o.p_range, "lo,hi pressure range (required for a linear meridian)");
  auto* deviatoric = section->add_subcommand("deviatoric", "section at fixed pressure");
  deviatoric->add_option("--p", o.at_p, "pressure p")->required();
  deviatoric->add_flag("--normalize", o.normalize, "divide by the radius at theta = pi/3");
  auto* biaxial = section->add_subcommand("biaxial", "plane stress section sigma3 = 0");
  biaxial->add_flag("--normalize", o.normalize, "divide by the uniaxial tensile strength");
  for (auto* sub : {meridian, deviatoric, biaxial}) {
    add_param_options(sub, o);
    sub->add_option("--n", o.n, "number of samples");
  }

  auto* check = app.add_subcommand("check-convexity", "convexity report; exit 2 when not admissible");
  add_param_options(check, o);

  auto* fit_cmd = app.add_subcommand("fit", "calibrate parameters to a dataset");
  fit_cmd->add_option("--data", o.data_file, "CSV dataset")->required()->check(CLI::ExistingFile);
  fit_cmd->add_option("--problem", o.problem_file, "fit problem JSON")->required()->check(CLI::ExistingFile);

  auto* compare = app.add_subcommand("compare", "paired curves against reference models");
  compare->require_subcommand(1);
  auto* gurson = compare->add_subcommand("gurson", "meridian against the Gurson-Tvergaard surface");
  gurson->add_option("--f", o.f_void, "void volume fraction");
  gurson->add_option("--sigmaM", o.sigmaM, "matrix yield stress");
  gurson->add_option("--q1", o.q1, "Tvergaard coefficient q1");
  gurson->add_option("--q2", o.q2, "Tvergaard coefficient q2");
  gurson->add_option("--q3", o.q3, "Tvergaard coefficient q3");
  gurson->add_option("--n", o.n, "number of samples");
  auto* newman = compare->add_subcommand("newman", "triaxial compression strength against 1 + 3.7 (s3/fc)^0.86");
  add_param_options(newman, o);
  newman->add_option("--fc", o.fc, "uniaxial compressive strength");
  newman->add_option("--max-ratio", o.max_ratio, "largest confinement s3/fc");
  newman->add_option("--n", o.n, "number of samples");

  auto* realize_cmd = app.add_subcommand("realize", "parameters reproducing a classical criterion");
  realize_cmd->require_subcommand(1);
  std::vector<CLI::App*> realize_subs;
  const std::pair<const char*, const char*> realizable[] = {
      {"von-mises", "von Mises cylinder"},           {"tresca", "Tresca hexagonal prism"},
      {"drucker-prager", "Drucker-Prager cone"},      {"modified-tresca", "Tresca prism with a pressure-dependent radius"},
      {"coulomb-mohr", "Coulomb-Mohr hexagonal pyramid"}, {"cam-clay", "modified Cam-clay ellipsoid"}};
  for (const auto& [name, description] : realizable) {
    auto* sub = realize_cmd->add_subcommand(name, description);
    sub->add_option("--k", o.scale_exponent, "scale exponent: pc = 10^k times the strength");
    if (std::string(name) == "cam-clay") {
      sub->add_option("--M", o.M, "critical state slope M")->required();
      sub->add_option("--pc", o.pc, "compressive hydrostatic strength pc")->required();
    } else if (std::string(name) == "von-mises" || std::string(name) == "tresca") {
      sub->add_option("--ft", o.ft, "uniaxial tensile strength");
    } else {
      sub->add_option("--fc", o.fc, "uniaxial compressive strength");
      sub->add_option("--r", o.r, "strength ratio fc/ft >= 1");
    }
    realize_subs.push_back(sub);
  }

  for (auto* sub : app.get_subcommands({})) {
    sub->fallthrough();
    for (auto* nested : sub->get_subcommands({})) nested->fallthrough();
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  try {
    if (*eval) return cmd_eval(o, out);
    if (*section) {
      for (auto* sub : {meridian, deviatoric, biaxial}) {
        if (*sub) return cmd_section(sub->get_name(), o, out);
      }
    }
    if (*check) return cmd_check(o, out);
    if (*fit_cmd) return cmd_fit(o, out, err);
    if (*gurson) return cmd_compare("gurson", o, out);
    if (*newman) return cmd_compare("newman", o, out);
    for (auto* sub : realize_subs) {
      if (*sub) return cmd_realize(sub->get_name(), o, out, err);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return invalid;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return invalid;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << '\n';
    return invalid;
  }
  err << app.help();
  return usage;
}

}  // namespace bpyield::cli
