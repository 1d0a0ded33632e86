#include "sprayscope/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace sprayscope::cli {

using nlohmann::json;

std::string to_string(Mode m) {
  switch (m) {
    case Mode::automatic: return "auto";
    case Mode::spray: return "spray";
    case Mode::finsler: return "finsler";
  }
  return "auto";
}

Mode mode_from_string(std::string_view s) {
  if (s == "auto") return Mode::automatic;
  if (s == "spray") return Mode::spray;
  if (s == "finsler") return Mode::finsler;
  throw ConfigError("mode must be auto, spray or finsler");
}

namespace {

double parse_number(std::string_view s, const char* what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ConfigError(std::string("bad number in ") + what + ": '" + std::string(s) + "'");
  return v;
}

}  // namespace

BoxOverride parse_box(std::string_view text) {
  BoxOverride b;
  std::string_view range = text;
  if (const auto eq = text.find('='); eq != std::string_view::npos) {
    b.target = std::string(text.substr(0, eq));
    range = text.substr(eq + 1);
    const bool ok = (b.target.size() >= 1 && (b.target[0] == 'x' || b.target[0] == 'y')) &&
                    std::all_of(b.target.begin() + 1, b.target.end(), [](char c) { return c >= '0' && c <= '9'; });
    if (!ok) throw ConfigError("box target must be x, y, x<k> or y<k>, got '" + b.target + "'");
  }
  const auto colon = range.find(':');
  if (colon == std::string_view::npos) throw ConfigError("box range must look like lo:hi");
  b.range.lo = parse_number(range.substr(0, colon), "--box");
  b.range.hi = parse_number(range.substr(colon + 1), "--box");
  if (!(b.range.hi > b.range.lo)) throw ConfigError("box range must have lo < hi");
  return b;
}

gallery::Params::value_type parse_param(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0) throw ConfigError("parameter must look like key=value");
  return {std::string(text.substr(0, eq)), std::string(text.substr(eq + 1))};
}

void RunConfig::validate() const {
  if (input.empty() == gallery.empty()) throw ConfigError("give exactly one of --input or --gallery");
  if (points < 1) throw ConfigError("--points must be at least 1");
  if (!(tol > 0.0) || !std::isfinite(tol)) throw ConfigError("--tol must be positive");
  if (!input.empty() && !params.empty()) throw ConfigError("--param applies to gallery examples only");
}

int exit_code_for(checks::Status s) {
  if (s == checks::Status::metrizable_constant_curvature) return 0;
  if (checks::is_not_metrizable(s)) return 1;
  return 2;
}

// ---------------------------------------------------------------------------

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read input file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void apply_box(checks::Box& box, const std::vector<BoxOverride>& overrides, int n) {
  for (const auto& o : overrides) {
    if (o.target.empty() || o.target == "x")
      for (auto& iv : box.x) iv = o.range;
    if (o.target.empty() || o.target == "y")
      for (auto& iv : box.y) iv = o.range;
    if (o.target.size() > 1) {
      const int k = std::stoi(o.target.substr(1));
      if (k < 1 || k > n) throw ConfigError("box coordinate '" + o.target + "' is out of range");
      (o.target[0] == 'x' ? box.x : box.y)[static_cast<std::size_t>(k - 1)] = o.range;
    }
  }
}

void fill_checks(CheckSummary& c, const checks::ConditionReport& rep, double tol) {
  const auto& a = rep.aggregates;
  c.rank_required = 2 * rep.dimension;
  c.rank_min = a.min_rank;
  c.rank_pass = a.max_rank_deficiency == 0;
  c.D1 = {true, a.max_D1 <= tol, a.max_D1};
  c.D2 = {true, a.max_D2 <= tol, a.max_D2};
  c.isotropy = {true, a.max_iso <= tol, a.max_iso};
  const bool iso = a.max_iso <= tol;
  c.dJ_alpha = {iso, a.max_dJalpha <= tol, a.max_dJalpha};
  c.dJR_alpha = {iso, a.max_dJR_alpha <= tol, a.max_dJR_alpha};
  c.forms_agree = std::all_of(rep.points.begin(), rep.points.end(), [tol](const checks::PointRecord& r) {
    return (r.residual_dJalpha <= tol) == (r.residual_dJR_alpha <= tol);
  });
  c.weak_ricci = {true, a.max_weak_ricci <= tol, a.max_weak_ricci};
  c.max_dh_R = a.max_dh_R;
  c.min_abs_R = a.min_abs_R;
  c.positive = a.positive;
  c.negative = a.negative;
  c.vanishing = a.vanishing;
}

ReconstructionSummary summarize(const finsler::Reconstruction& rec) {
  ReconstructionSummary s;
  s.outcome = finsler::to_string(rec.outcome);
  s.kappa = rec.kappa;
  s.max_EL = rec.max_EL;
  s.max_flag = rec.max_flag;
  s.min_F2 = rec.min_F2;
  s.min_g_eigen = rec.min_g_eigen;
  for (const auto& p : rec.samples) s.samples.push_back({p.point, p.F2, p.g_eigen_min, p.EL_relative, p.flag_residual});
  return s;
}

Report fail(Report r, const std::string& message) {
  r.error = message;
  r.verdict.status = "error";
  r.verdict.exit_code = 3;
  return r;
}

}  // namespace

Report run(const RunConfig& config) {
  Report report;
  auto& echo = report.config;
  echo.points = config.points;
  echo.seed = config.seed;
  echo.tol = config.tol;
  echo.mode = to_string(config.mode);
  echo.params = config.params;
  try {
    config.validate();

    dsl::Definition def;
    checks::Box box;
    if (!config.gallery.empty()) {
      echo.source = "gallery";
      echo.input = config.gallery;
      const auto entry = gallery::get_example(config.gallery, config.params);
      def = entry.definition;
      box = entry.box;
      echo.params = entry.params;
    } else {
      echo.source = "file";
      echo.input = config.input;
      def = dsl::parse_definition_file(read_file(config.input));
    }
    const bool is_finsler = std::holds_alternative<dsl::FinslerDefinition>(def);
    echo.kind = is_finsler ? "finsler" : "spray";
    echo.dimension = std::visit([](const auto& d) { return d.dimension; }, def);
    echo.name = std::visit([](const auto& d) { return d.name; }, def);
    if (config.mode == Mode::spray && is_finsler) throw ConfigError("--mode spray needs a spray definition (G1..Gn)");
    if (config.mode == Mode::finsler && !is_finsler) throw ConfigError("--mode finsler needs a Finsler definition (F)");
    echo.mode = is_finsler ? "finsler" : "spray";

    const int n = echo.dimension;
    if (box.x.empty()) box = checks::Box::uniform(n);
    apply_box(box, config.box, n);
    echo.box_x = box.x;
    echo.box_y = box.y;

    const geom::Spray spray = is_finsler ? finsler::geodesic_spray(std::get<dsl::FinslerDefinition>(def))
                                         : geom::Spray::from_definition(std::get<dsl::SprayDefinition>(def));
    checks::SampleSpec spec = checks::SampleSpec::defaults(n);
    spec.count = config.points;
    spec.seed = config.seed;
    spec.box = box;
    const auto points = checks::sample_points(spray, spec);

    const auto hom = checks::check_homogeneity(spray, points, config.tol);
    report.checks.homogeneity = {true, hom.pass, hom.max};
    if (!hom.pass) return fail(std::move(report), "spray coefficients are not 2-homogeneous in y");

    const checks::Tolerances tol{config.tol, 1e-8, 1e-8};
    auto conditions = checks::evaluate_conditions(spray, points, tol);
    fill_checks(report.checks, conditions, config.tol);
    if (config.per_point) report.points = conditions.points;
    const auto v = checks::decide(std::move(conditions), tol);
    report.verdict.status = checks::to_string(v.status);
    report.verdict.kappa = v.kappa;
    report.verdict.annotation = v.annotation;
    report.verdict.exit_code = exit_code_for(v.status);

    if (v.status == checks::Status::metrizable_constant_curvature)
      report.reconstruction = summarize(finsler::reconstruct_finsler(spray, points, config.tol));

    if (is_finsler) {
      const auto& fdef = std::get<dsl::FinslerDefinition>(def);
      const auto fc = finsler::check_finsler_function(fdef, points, config.tol);
      report.checks.finsler_function =
          FunctionSummary{fc.max_homogeneity, fc.min_F, fc.min_g_eigen, fc.positive, fc.homogeneous, fc.positive_definite};
      if (fc.positive) {
        const auto ein = finsler::check_einstein(spray, finsler::energy_of(fdef), points, config.tol);
        EinsteinSummary es{ein.pass, ein.lambda_constant, ein.max_dJ_lambda, 0.0, 0.0};
        if (!ein.samples.empty()) {
          const auto [lo, hi] = std::minmax_element(ein.samples.begin(), ein.samples.end(),
                                                    [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
          es.lambda_min = lo->lambda;
          es.lambda_max = hi->lambda;
        }
        report.checks.einstein = es;
      }
    }
    return report;
  } catch (const std::exception& e) {
    return fail(std::move(report), e.what());
  }
}

// ---------------------------------------------------------------------------

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string pass(bool ok) { return ok ? "pass" : "FAIL"; }

}  // namespace

std::string explain(const Report& r) {
  std::ostringstream out;
  if (!r.error.empty()) {
    out << "input error: " << r.error << "\n";
    return out.str();
  }
  const int n = r.config.dimension;
  const auto& c = r.checks;
  const auto status = checks::status_from_string(r.verdict.status);
  switch (status) {
    case checks::Status::ricci_vanishes_out_of_scope:
      out << "The Ricci scalar vanishes at " << c.vanishing << " sample point(s). The metrizability test needs "
          << "non-vanishing Ricci curvature, so no decision is made; a zero-curvature spray has no local "
          << "obstruction to a Finsler metric.\n";
      break;
    case checks::Status::inconclusive_mixed_sign:
      out << "The Ricci scalar is positive at " << c.positive << " and negative at " << c.negative
          << " sample points. The test presumes non-vanishing Ricci curvature of one sign, which fails here.\n";
      break;
    case checks::Status::not_metrizable_rank_fails:
      out << "Condition A fails: rank of dd_J(Tr Phi) drops to " << c.rank_min << " < 2n = " << c.rank_required
          << ", so Tr Phi cannot be the energy of a constant-curvature Finsler function.\n";
      break;
    case checks::Status::not_metrizable_D1_fails:
      if (n == 2)
        out << "d_J alpha != 0 (equivalently d_J R != 2 alpha; max residual " << fmt(c.dJ_alpha.max)
            << "): in dimension 2 this replaces D1, so the spray is not metrizable by a Finsler function of "
            << "non-zero constant curvature.\n";
      else
        out << "Condition D1 fails: 2(n-1) Phi - 2 Tr(Phi) J + d_J Tr(Phi) (x) C != 0 (max residual "
            << fmt(c.D1.max) << ").\n";
      break;
    case checks::Status::not_metrizable_D2_fails:
      out << "Condition D2 fails: d_h Tr(Phi) != 0 (max residual " << fmt(c.D2.max)
          << "), the spray is not Ricci constant.";
      if (n >= 3 && c.isotropy.pass && c.rank_pass && c.dJ_alpha.pass)
        out << " With isotropy, condition A and d_J alpha = 0 in dimension >= 3 this also rules out Finsler "
               "metrizability of any kind.";
      out << "\n";
      break;
    case checks::Status::metrizable_constant_curvature:
      out << "Conditions A, " << (n == 2 ? "d_J alpha = 0" : "D1") << " and " << (n == 2 ? "d_h R = 0" : "D2")
          << " hold: the spray is metrizable by a Finsler function of constant flag curvature kappa = "
          << r.verdict.kappa << ", reconstructed as F^2 = sign(R) R.\n";
      if (r.reconstruction && r.reconstruction->outcome == "conic_pseudo_finsler")
        out << "The reconstructed metric tensor is indefinite, so F is a conic pseudo-Finsler function on the "
               "sampled cone.\n";
      if (r.reconstruction && r.reconstruction->outcome == "failed")
        out << "Warning: the reconstructed F^2 does not satisfy the Euler-Lagrange or flag curvature identities "
               "within tolerance.\n";
      break;
  }
  if (!r.verdict.annotation.empty()) out << "Note: " << r.verdict.annotation << ".\n";
  return out.str();
}

std::string render_text(const Report& r) {
  std::ostringstream out;
  const auto& e = r.config;
  out << "sprayscope: " << (e.name.empty() ? e.input : e.name) << " (" << e.kind << ", n = " << e.dimension
      << ", " << e.source << ")\n";
  for (const auto& [k, v] : e.params) out << "  param " << k << " = " << v << "\n";
  out << "  points " << e.points << ", seed " << e.seed << ", tol " << fmt(e.tol) << "\n";
  if (!r.error.empty()) {
    out << "\n" << explain(r);
    return out.str();
  }
  const auto& c = r.checks;
  out << "\nchecks\n";
  out << "  homogeneity        " << pass(c.homogeneity.pass) << "  max " << fmt(c.homogeneity.max) << "\n";
  out << "  A (rank)           " << pass(c.rank_pass) << "  min rank " << c.rank_min << " / " << c.rank_required << "\n";
  out << "  D1                 " << pass(c.D1.pass) << "  max " << fmt(c.D1.max) << "\n";
  out << "  D2                 " << pass(c.D2.pass) << "  max " << fmt(c.D2.max) << "  (raw max |d_h R| "
      << fmt(c.max_dh_R) << ")\n";
  out << "  isotropy           " << pass(c.isotropy.pass) << "  max " << fmt(c.isotropy.max) << "\n";
  if (c.dJ_alpha.applicable) {
    out << "  d_J alpha          " << pass(c.dJ_alpha.pass) << "  max " << fmt(c.dJ_alpha.max) << "\n";
    out << "  d_J R - 2 alpha    " << pass(c.dJR_alpha.pass) << "  max " << fmt(c.dJR_alpha.max)
        << (c.forms_agree ? "" : "  (forms disagree)") << "\n";
  } else {
    out << "  d_J alpha          n/a (not isotropic)\n";
  }
  out << "  S(R) = 0           " << pass(c.weak_ricci.pass) << "  max " << fmt(c.weak_ricci.max) << "\n";
  out << "  sign(R)            +" << c.positive << " -" << c.negative << " 0:" << c.vanishing << "  min |R| "
      << fmt(c.min_abs_R) << "\n";
  if (c.finsler_function) {
    const auto& f = *c.finsler_function;
    out << "  F positive         " << pass(f.positive) << "  min F " << fmt(f.min_F) << "\n";
    out << "  F 1-homogeneous    " << pass(f.homogeneous) << "  max " << fmt(f.max_homogeneity) << "\n";
    out << "  g positive def.    " << pass(f.positive_definite) << "  min eig " << fmt(f.min_g_eigen) << "\n";
  }
  if (c.einstein) {
    const auto& s = *c.einstein;
    out << "  Einstein (R/F^2)   " << pass(s.pass) << "  max |d_J lambda| " << fmt(s.max_dJ_lambda) << ", lambda in ["
        << fmt(s.lambda_min) << ", " << fmt(s.lambda_max) << "]" << (s.lambda_constant ? " constant" : "") << "\n";
  }
  out << "\nverdict: " << r.verdict.status;
  if (r.verdict.kappa != 0) out << " (kappa = " << r.verdict.kappa << ")";
  out << "\n";
  if (r.reconstruction) {
    const auto& rec = *r.reconstruction;
    out << "reconstruction: " << rec.outcome << ", kappa = " << rec.kappa << ", max EL " << fmt(rec.max_EL)
        << ", max flag " << fmt(rec.max_flag) << ", min F^2 " << fmt(rec.min_F2) << ", min eig g "
        << fmt(rec.min_g_eigen) << "\n";
  }
  out << "\n" << explain(r);
  if (r.points) {
    out << "\nper point\n";
    out << "  #    R            rank  D1         D2         dJalpha    iso        S(R)\n";
    std::size_t i = 0;
    for (const auto& p : *r.points) {
      char line[200];
      std::snprintf(line, sizeof line, "  %-4zu %-12.4e %-5d %-10.2e %-10.2e %-10.2e %-10.2e %-10.2e\n", i++, p.R_value,
                    p.rank, p.residual_D1, p.residual_D2, p.residual_dJalpha, p.residual_iso, p.residual_weak_ricci);
      out << line;
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------

}  // namespace sprayscope::cli

namespace sprayscope::checks {

void to_json(nlohmann::json& j, const Interval& v) { j = nlohmann::json::array({v.lo, v.hi}); }
void from_json(const nlohmann::json& j, Interval& v) {
  v.lo = j.at(0).get<double>();
  v.hi = j.at(1).get<double>();
}

void to_json(nlohmann::json& j, const PointRecord& p) {
  j = {{"point", p.point},
       {"rank", p.rank},
       {"rank_deficiency", p.rank_deficiency},
       {"residual_D1", p.residual_D1},
       {"residual_D2", p.residual_D2},
       {"dh_TrPhi_max", p.dh_TrPhi_max},
       {"dh_R_max", p.dh_R_max},
       {"residual_iso", p.residual_iso},
       {"residual_dJalpha", p.residual_dJalpha},
       {"residual_dJR_alpha", p.residual_dJR_alpha},
       {"residual_homogeneity", p.residual_homogeneity},
       {"residual_weak_ricci", p.residual_weak_ricci},
       {"R_value", p.R_value},
       {"S_R", p.S_R},
       {"curvature_scale", p.curvature_scale}};
}

void from_json(const nlohmann::json& j, PointRecord& p) {
  j.at("point").get_to(p.point);
  j.at("rank").get_to(p.rank);
  j.at("rank_deficiency").get_to(p.rank_deficiency);
  j.at("residual_D1").get_to(p.residual_D1);
  j.at("residual_D2").get_to(p.residual_D2);
  j.at("dh_TrPhi_max").get_to(p.dh_TrPhi_max);
  j.at("dh_R_max").get_to(p.dh_R_max);
  j.at("residual_iso").get_to(p.residual_iso);
  j.at("residual_dJalpha").get_to(p.residual_dJalpha);
  j.at("residual_dJR_alpha").get_to(p.residual_dJR_alpha);
  j.at("residual_homogeneity").get_to(p.residual_homogeneity);
  j.at("residual_weak_ricci").get_to(p.residual_weak_ricci);
  j.at("R_value").get_to(p.R_value);
  j.at("S_R").get_to(p.S_R);
  j.at("curvature_scale").get_to(p.curvature_scale);
}

}  // namespace sprayscope::checks

namespace sprayscope::cli {

// Serializers live directly in this namespace so that argument-dependent
// lookup from nlohmann finds them.
static void to_json(json& j, const Series& s) { j = {{"applicable", s.applicable}, {"pass", s.pass}, {"max", s.max}}; }
static void from_json(const json& j, Series& s) {
  j.at("applicable").get_to(s.applicable);
  j.at("pass").get_to(s.pass);
  j.at("max").get_to(s.max);
}

static void to_json(json& j, const ReconstructionPoint& p) {
  j = {{"point", p.point}, {"F2", p.F2}, {"g_eigen_min", p.g_eigen_min}, {"EL", p.EL}, {"flag", p.flag}};
}
static void from_json(const json& j, ReconstructionPoint& p) {
  j.at("point").get_to(p.point);
  j.at("F2").get_to(p.F2);
  j.at("g_eigen_min").get_to(p.g_eigen_min);
  j.at("EL").get_to(p.EL);
  j.at("flag").get_to(p.flag);
}

// nlohmann writes non-finite doubles as null; keep them readable on the way back.
static double number_or_inf(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

std::string to_json(const Report& r) {
  json j;
  const auto& e = r.config;
  j["config"] = {{"source", e.source}, {"input", e.input},   {"name", e.name},     {"kind", e.kind},
                 {"mode", e.mode},     {"dimension", e.dimension}, {"points", e.points}, {"seed", e.seed},
                 {"tol", e.tol},       {"box", {{"x", e.box_x}, {"y", e.box_y}}}, {"params", e.params}};
  const auto& c = r.checks;
  json checks = {{"homogeneity", c.homogeneity},
                 {"A", {{"required", c.rank_required}, {"min_rank", c.rank_min}, {"pass", c.rank_pass}}},
                 {"D1", c.D1},
                 {"D2", c.D2},
                 {"isotropy", c.isotropy},
                 {"dJ_alpha", c.dJ_alpha},
                 {"dJR_alpha", c.dJR_alpha},
                 {"forms_agree", c.forms_agree},
                 {"weak_ricci_constant", c.weak_ricci},
                 {"max_dh_R", c.max_dh_R},
                 {"ricci_sign", {{"positive", c.positive}, {"negative", c.negative}, {"vanishing", c.vanishing}, {"min_abs_R", c.min_abs_R}}}};
  if (c.finsler_function) {
    const auto& f = *c.finsler_function;
    checks["finsler_function"] = {{"max_homogeneity", f.max_homogeneity}, {"min_F", f.min_F},
                                  {"min_g_eigen", f.min_g_eigen},         {"positive", f.positive},
                                  {"homogeneous", f.homogeneous},         {"positive_definite", f.positive_definite}};
  }
  if (c.einstein) {
    const auto& s = *c.einstein;
    checks["einstein"] = {{"pass", s.pass},
                          {"lambda_constant", s.lambda_constant},
                          {"max_dJ_lambda", s.max_dJ_lambda},
                          {"lambda_min", s.lambda_min},
                          {"lambda_max", s.lambda_max}};
  }
  j["checks"] = checks;
  j["verdict"] = {{"status", r.verdict.status},
                  {"kappa", r.verdict.kappa},
                  {"annotation", r.verdict.annotation},
                  {"exit_code", r.verdict.exit_code},
                  {"explanation", explain(r)}};
  if (r.reconstruction) {
    const auto& rec = *r.reconstruction;
    j["reconstruction"] = {{"outcome", rec.outcome}, {"kappa", rec.kappa},     {"max_EL", rec.max_EL},
                           {"max_flag", rec.max_flag}, {"min_F2", rec.min_F2}, {"min_g_eigen", rec.min_g_eigen},
                           {"samples", rec.samples}};
  } else {
    j["reconstruction"] = nullptr;
  }
  if (r.points) j["points"] = *r.points;
  if (!r.error.empty()) j["error"] = r.error;
  return j.dump(2) + "\n";
}

Report report_from_json(std::string_view text) {
  const json j = json::parse(text);
  Report r;
  const auto& jc = j.at("config");
  auto& e = r.config;
  jc.at("source").get_to(e.source);
  jc.at("input").get_to(e.input);
  jc.at("name").get_to(e.name);
  jc.at("kind").get_to(e.kind);
  jc.at("mode").get_to(e.mode);
  jc.at("dimension").get_to(e.dimension);
  jc.at("points").get_to(e.points);
  jc.at("seed").get_to(e.seed);
  jc.at("tol").get_to(e.tol);
  jc.at("box").at("x").get_to(e.box_x);
  jc.at("box").at("y").get_to(e.box_y);
  jc.at("params").get_to(e.params);

  const auto& k = j.at("checks");
  auto& c = r.checks;
  k.at("homogeneity").get_to(c.homogeneity);
  k.at("A").at("required").get_to(c.rank_required);
  k.at("A").at("min_rank").get_to(c.rank_min);
  k.at("A").at("pass").get_to(c.rank_pass);
  k.at("D1").get_to(c.D1);
  k.at("D2").get_to(c.D2);
  k.at("isotropy").get_to(c.isotropy);
  k.at("dJ_alpha").get_to(c.dJ_alpha);
  k.at("dJR_alpha").get_to(c.dJR_alpha);
  k.at("forms_agree").get_to(c.forms_agree);
  k.at("weak_ricci_constant").get_to(c.weak_ricci);
  k.at("max_dh_R").get_to(c.max_dh_R);
  const auto& sign = k.at("ricci_sign");
  sign.at("positive").get_to(c.positive);
  sign.at("negative").get_to(c.negative);
  sign.at("vanishing").get_to(c.vanishing);
  c.min_abs_R = number_or_inf(sign.at("min_abs_R"));
  if (k.contains("finsler_function")) {
    const auto& f = k.at("finsler_function");
    FunctionSummary s;
    f.at("max_homogeneity").get_to(s.max_homogeneity);
    f.at("min_F").get_to(s.min_F);
    f.at("min_g_eigen").get_to(s.min_g_eigen);
    f.at("positive").get_to(s.positive);
    f.at("homogeneous").get_to(s.homogeneous);
    f.at("positive_definite").get_to(s.positive_definite);
    c.finsler_function = s;
  }
  if (k.contains("einstein")) {
    const auto& f = k.at("einstein");
    EinsteinSummary s;
    f.at("pass").get_to(s.pass);
    f.at("lambda_constant").get_to(s.lambda_constant);
    f.at("max_dJ_lambda").get_to(s.max_dJ_lambda);
    f.at("lambda_min").get_to(s.lambda_min);
    f.at("lambda_max").get_to(s.lambda_max);
    c.einstein = s;
  }

  const auto& v = j.at("verdict");
  v.at("status").get_to(r.verdict.status);
  v.at("kappa").get_to(r.verdict.kappa);
  v.at("annotation").get_to(r.verdict.annotation);
  v.at("exit_code").get_to(r.verdict.exit_code);

  if (const auto& jr = j.at("reconstruction"); !jr.is_null()) {
    ReconstructionSummary s;
    jr.at("outcome").get_to(s.outcome);
    jr.at("kappa").get_to(s.kappa);
    jr.at("max_EL").get_to(s.max_EL);
    jr.at("max_flag").get_to(s.max_flag);
    jr.at("min_F2").get_to(s.min_F2);
    jr.at("min_g_eigen").get_to(s.min_g_eigen);
    jr.at("samples").get_to(s.samples);
    r.reconstruction = s;
  }
  if (j.contains("points")) r.points = j.at("points").get<std::vector<checks::PointRecord>>();
  if (j.contains("error")) j.at("error").get_to(r.error);
  return r;
}

}  // namespace sprayscope::cli
