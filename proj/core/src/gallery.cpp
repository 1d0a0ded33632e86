#include "sprayscope/gallery.hpp"

#include <charconv>
#include <cmath>
#include <set>

#include "sprayscope/jet.hpp"

namespace sprayscope::gallery {

using dsl::Expression;

std::string to_string(Kind k) { return k == Kind::spray ? "spray" : "finsler"; }
std::string to_string(Provenance p) { return p == Provenance::paper ? "paper" : "derived"; }

int GalleryEntry::dimension() const {
  return std::visit([](const auto& d) { return d.dimension; }, definition);
}

geom::Spray GalleryEntry::spray() const {
  if (const auto* s = std::get_if<dsl::SprayDefinition>(&definition)) return geom::Spray::from_definition(*s);
  return finsler::geodesic_spray(std::get<dsl::FinslerDefinition>(definition));
}

checks::SampleSpec GalleryEntry::sample_spec(std::size_t count, std::uint64_t seed) const {
  checks::SampleSpec s = checks::SampleSpec::defaults(dimension());
  s.count = count;
  s.seed = seed;
  s.box = box;
  return s;
}

namespace {

Expression num(double v) { return Expression::constant(v); }
Expression sq(const Expression& e) { return Expression::power(e, dsl::make_rational(2, 1)); }

class ParamReader {
 public:
  ParamReader(const Params& p, std::set<std::string> known) : params_(p) {
    for (const auto& [k, v] : p)
      if (!known.count(k)) throw std::invalid_argument("unknown parameter '" + k + "'");
  }

  double number(const std::string& key, double fallback) const {
    const auto it = params_.find(key);
    if (it == params_.end()) return fallback;
    const auto& s = it->second;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
      throw std::invalid_argument("parameter '" + key + "' must be a finite number, got '" + s + "'");
    return v;
  }

  int integer(const std::string& key, int fallback, int lo, int hi) const {
    const double v = number(key, fallback);
    if (v != std::floor(v) || v < lo || v > hi)
      throw std::invalid_argument("parameter '" + key + "' must be an integer in [" + std::to_string(lo) + ", " +
                                  std::to_string(hi) + "]");
    return static_cast<int>(v);
  }

  std::optional<std::string> text(const std::string& key) const {
    const auto it = params_.find(key);
    if (it == params_.end()) return std::nullopt;
    return it->second;
  }

 private:
  const Params& params_;
};

checks::Box box_with(int n, checks::Interval x, checks::Interval y = {-2.0, 2.0}) {
  checks::Box b;
  b.x.assign(static_cast<std::size_t>(n), x);
  b.y.assign(static_cast<std::size_t>(n), y);
  return b;
}

Expression half_plane_energy() { return dsl::parse_expression("(y1^2 + y2^2)/x2^2", 2); }

dsl::SprayDefinition half_plane_spray(std::string name) {
  return {std::move(name),
          2,
          {dsl::parse_expression("-(y1*y2)/x2", 2), dsl::parse_expression("(y1^2 - y2^2)/(2*x2)", 2)},
          {dsl::parse_expression("x2", 2)}};
}

checks::Box half_plane_box(int n = 2) {
  auto b = box_with(n, {-2.0, 2.0});
  b.x.back() = {0.25, 2.0};
  return b;
}

GalleryEntry poincare_half_plane(const Params& p) {
  ParamReader(p, {});
  GalleryEntry e;
  e.name = "poincare_half_plane";
  e.definition = half_plane_spray(e.name);
  e.expected.status = checks::Status::metrizable_constant_curvature;
  e.expected.kappa = -1;
  e.expected.ricci = dsl::parse_expression("-(y1^2 + y2^2)/x2^2", 2);
  e.expected.energy = half_plane_energy();
  e.expected.outcome = finsler::Outcome::finsler;
  e.expected.note = "geodesics of the Poincare half-plane; R and F given in closed form";
  e.box = half_plane_box();
  return e;
}

GalleryEntry poincare_half_plane_finsler(const Params& p) {
  ParamReader(p, {});
  GalleryEntry e;
  e.name = "poincare_half_plane_finsler";
  e.kind = Kind::finsler;
  e.definition = dsl::FinslerDefinition{e.name, 2, dsl::parse_expression("sqrt(y1^2 + y2^2)/x2", 2),
                                        {dsl::parse_expression("x2", 2)}};
  e.expected.status = checks::Status::metrizable_constant_curvature;
  e.expected.kappa = -1;
  e.expected.ricci = dsl::parse_expression("-(y1^2 + y2^2)/x2^2", 2);
  e.expected.energy = half_plane_energy();
  e.expected.flag_curvature = num(-1.0);
  e.expected.energy_ratio = 1.0;
  e.expected.outcome = finsler::Outcome::finsler;
  e.expected.note = "Poincare metric given by F; its geodesic spray is built numerically";
  e.box = half_plane_box();
  return e;
}

Expression disk_function() {
  return dsl::parse_expression(
      "4*sqrt(y1^2 + y2^2)/(4 - x1^2 - x2^2) + 16*(x1*y2 + x2*y1)/((4 - x1^2 - x2^2)*(4 + x1^2 + x2^2))", 2);
}

GalleryEntry finsler_poincare_disk(const Params& p) {
  ParamReader(p, {});
  GalleryEntry e;
  e.name = "finsler_poincare_disk";
  e.kind = Kind::finsler;
  const Expression F = disk_function();
  e.definition = dsl::FinslerDefinition{e.name, 2, F, {dsl::parse_expression("4 - x1^2 - x2^2", 2)}};
  e.expected.status = checks::Status::metrizable_constant_curvature;
  e.expected.kappa = -1;
  e.expected.ricci = num(-0.25) * sq(F);
  e.expected.energy = num(0.25) * sq(F);
  e.expected.flag_curvature = num(-0.25);
  e.expected.energy_ratio = 0.25;
  e.expected.outcome = finsler::Outcome::finsler;
  e.expected.disputed = true;
  e.expected.note =
      "Randers-type metric on the disk r < 2, stated to have constant flag curvature -1/4; as written, R / F^2 "
      "is not constant on the sample, so the constant-curvature expectations are not met";
  e.box = box_with(2, {-1.0, 1.0});
  return e;
}

GalleryEntry bao_robles_paraboloid(const Params& p) {
  ParamReader(p, {});
  GalleryEntry e;
  e.name = "bao_robles_paraboloid";
  e.kind = Kind::finsler;
  const Expression F = dsl::parse_expression(
      "sqrt((x1*y2 - x2*y1)^2 + ((1 + 4*x1^2)*y1^2 + 8*x1*x2*y1*y2 + (1 + 4*x2^2)*y2^2)*(1 - x1^2 - x2^2))"
      "/(1 - x1^2 - x2^2) + (x2*y1 - x1*y2)/(1 - x1^2 - x2^2)",
      2);
  const Expression kappa = dsl::parse_expression("4/(1 + 4*x1^2 + 4*x2^2)^2", 2);
  e.definition = dsl::FinslerDefinition{e.name, 2, F, {dsl::parse_expression("1 - x1^2 - x2^2", 2)}};
  e.expected.status = checks::Status::not_metrizable_D2_fails;
  e.expected.ricci = kappa * sq(F);
  e.expected.flag_curvature = kappa;
  e.expected.note = "Randers metric on a paraboloid; scalar flag curvature depending on x only";
  e.box = box_with(2, {-0.6, 0.6});
  return e;
}

GalleryEntry shen_randers(const Params& p) {
  const ParamReader r(p, {"a1", "a2"});
  const double a1 = r.number("a1", 0.1);
  const double a2 = r.number("a2", 0.0);
  const double a2sum = a1 * a1 + a2 * a2;
  GalleryEntry e;
  e.name = "shen_randers_11_2";
  e.kind = Kind::finsler;
  e.params = {{"a1", std::to_string(a1)}, {"a2", std::to_string(a2)}};

  const Expression x1 = Expression::x(1), x2 = Expression::x(2), y1 = Expression::y(1), y2 = Expression::y(2);
  const Expression ax = num(a1) * x1 + num(a2) * x2;
  const Expression ay = num(a1) * y1 + num(a2) * y2;
  const Expression xy = x1 * y1 + x2 * y2;
  const Expression xx = sq(x1) + sq(x2);
  const Expression yy = sq(y1) + sq(y2);
  const Expression delta = num(1.0) - num(a2sum) * sq(xx);
  const Expression beta = num(2.0) * ax * xy - xx * ay;
  const Expression F = (Expression::call(dsl::Function::sqrt, sq(beta) + delta * yy) + beta) / delta;
  const Expression kappa = num(3.0) * ay / F + num(3.0) * sq(ax) - num(2.0 * a2sum) * xx;

  e.definition = dsl::FinslerDefinition{e.name, 2, F, {delta}};
  e.expected.ricci = kappa * sq(F);
  e.expected.flag_curvature = kappa;
  e.expected.note = "Randers metric with scalar flag curvature depending on the flagpole; d_J alpha != 0";
  // With a != 0 the flag curvature takes both signs on any box containing
  // both directions of <a, y>, so the sample sees mixed-sign Ricci.
  if (a2sum > 0.0) e.expected.status = checks::Status::inconclusive_mixed_sign;
  e.box = box_with(2, {-0.7, 0.7});
  return e;
}

dsl::SprayDefinition affine_spray(std::string name, const Expression& phi, const Expression& psi) {
  const Expression half = num(0.5);
  return {std::move(name),
          2,
          {half * phi * sq(Expression::y(1)), half * psi * sq(Expression::y(2))},
          {dsl::parse_expression("x1 + x2", 2), dsl::parse_expression("y1*y2", 2)}};
}

GalleryEntry conic_affine(const Params& p) {
  ParamReader(p, {});
  GalleryEntry e;
  e.name = "conic_affine";
  e.definition = dsl::SprayDefinition{
      e.name,
      2,
      {dsl::parse_expression("-(y1^2)/(x1 + x2)", 2), dsl::parse_expression("-(y2^2)/(x1 + x2)", 2)},
      {dsl::parse_expression("x1 + x2", 2), dsl::parse_expression("y1*y2", 2)}};
  e.expected.status = checks::Status::metrizable_constant_curvature;
  e.expected.kappa = -1;
  e.expected.ricci = dsl::parse_expression("-4*y1*y2/(x1 + x2)^2", 2);
  e.expected.energy = dsl::parse_expression("4*y1*y2/(x1 + x2)^2", 2);
  e.expected.outcome = finsler::Outcome::conic_pseudo_finsler;
  e.expected.note = "affine spray with phi = psi = -2/(x1+x2); metrizable only on the cone y1 y2 > 0";
  e.box = box_with(2, {0.1, 2.0});
  return e;
}

GalleryEntry affine_conic_family(const Params& p) {
  const ParamReader r(p, {"phi", "psi"});
  const std::string fallback = "-2/(x1 + x2)";
  const auto phi_text = r.text("phi").value_or(fallback);
  const auto psi_text = r.text("psi").value_or(fallback);
  GalleryEntry e;
  e.name = "affine_conic_family";
  e.params = {{"phi", phi_text}, {"psi", psi_text}};
  const Expression phi = dsl::parse_expression(phi_text, 2);
  const Expression psi = dsl::parse_expression(psi_text, 2);
  e.definition = affine_spray(e.name, phi, psi);
  const Expression dflt = dsl::parse_expression(fallback, 2);
  if (phi == dflt && psi == dflt) {
    e.expected.status = checks::Status::metrizable_constant_curvature;
    e.expected.kappa = -1;
    e.expected.ricci = dsl::parse_expression("-4*y1*y2/(x1 + x2)^2", 2);
    e.expected.outcome = finsler::Outcome::conic_pseudo_finsler;
  }
  e.expected.provenance = Provenance::derived;
  e.expected.note = "G = (phi y1^2, psi y2^2)/2; metrizable iff the phi/psi integrability system holds";
  e.box = box_with(2, {0.1, 2.0});
  return e;
}

GalleryEntry deformed_half_plane(const Params& p) {
  const ParamReader r(p, {"lambda"});
  const double lambda = r.number("lambda", 2.0);
  GalleryEntry e;
  e.name = "deformed_half_plane";
  e.params = {{"lambda", std::to_string(lambda)}};
  const Expression F0 = dsl::parse_expression("sqrt(y1^2 + y2^2)/x2", 2);
  auto def = half_plane_spray(e.name);
  if (lambda != 0.0) {
    for (int i = 0; i < 2; ++i)
      def.coefficients[static_cast<std::size_t>(i)] =
          def.coefficients[static_cast<std::size_t>(i)] + num(lambda) * F0 * Expression::y(i + 1);
  }
  e.definition = def;

  const double c = lambda * lambda - 1.0;
  e.expected.ricci = num(c) * half_plane_energy();
  for (int i = 1; i <= 2; ++i) {
    // delta_i R = -(P d_J R + 2 R d_J P) = -2 lambda (kappa0 + lambda^2) F0 d_J F0^2, kappa0 = -1
    e.expected.dh_ricci.push_back(num(-2.0 * lambda * c) * F0 * num(2.0) * Expression::y(i) / sq(Expression::x(2)));
  }
  if (lambda == 0.0) {
    e.expected.status = checks::Status::metrizable_constant_curvature;
    e.expected.kappa = -1;
    e.expected.energy = half_plane_energy();
    e.expected.outcome = finsler::Outcome::finsler;
  } else if (c == 0.0) {
    e.expected.status = checks::Status::ricci_vanishes_out_of_scope;
  } else {
    e.expected.status = checks::Status::not_metrizable_D2_fails;
  }
  e.expected.provenance = Provenance::derived;
  e.expected.note = "half-plane spray deformed by P = lambda F0; R = (lambda^2 - 1) F0^2";
  e.box = half_plane_box();
  return e;
}

GalleryEntry flat(const Params& p) {
  const ParamReader r(p, {"n"});
  const int n = r.integer("n", 2, 2, 6);
  GalleryEntry e;
  e.name = "flat";
  e.params = {{"n", std::to_string(n)}};
  e.definition = dsl::SprayDefinition{e.name, n, std::vector<Expression>(static_cast<std::size_t>(n)), {}};
  e.expected.status = checks::Status::ricci_vanishes_out_of_scope;
  e.expected.ricci = num(0.0);
  e.expected.provenance = Provenance::derived;
  e.expected.note = "straight lines";
  e.box = box_with(n, {-2.0, 2.0});
  return e;
}

GalleryEntry euclidean(const Params& p) {
  const ParamReader r(p, {"n"});
  const int n = r.integer("n", 2, 2, 6);
  GalleryEntry e;
  e.name = "euclidean";
  e.kind = Kind::finsler;
  e.params = {{"n", std::to_string(n)}};
  Expression yy = sq(Expression::y(1));
  for (int i = 2; i <= n; ++i) yy = yy + sq(Expression::y(i));
  e.definition = dsl::FinslerDefinition{e.name, n, Expression::call(dsl::Function::sqrt, yy), {}};
  e.expected.status = checks::Status::ricci_vanishes_out_of_scope;
  e.expected.ricci = num(0.0);
  e.expected.flag_curvature = num(0.0);
  e.expected.provenance = Provenance::derived;
  e.expected.note = "Euclidean norm";
  e.box = box_with(n, {-2.0, 2.0});
  return e;
}

GalleryEntry hyperbolic_half_space(const Params& p) {
  const ParamReader r(p, {"n"});
  const int n = r.integer("n", 3, 2, 5);
  GalleryEntry e;
  e.name = "hyperbolic_half_space";
  e.params = {{"n", std::to_string(n)}};
  Expression yy = sq(Expression::y(1));
  for (int i = 2; i <= n; ++i) yy = yy + sq(Expression::y(i));
  const Expression xn = Expression::x(n);
  std::vector<Expression> G;
  for (int i = 1; i <= n; ++i) {
    Expression g = -(Expression::y(i) * Expression::y(n)) / xn;
    if (i == n) g = g + yy / (num(2.0) * xn);
    G.push_back(g);
  }
  e.definition = dsl::SprayDefinition{e.name, n, G, {xn}};
  e.expected.status = checks::Status::metrizable_constant_curvature;
  e.expected.kappa = -1;
  e.expected.ricci = -yy / sq(xn);
  e.expected.energy = yy / sq(xn);
  e.expected.outcome = finsler::Outcome::finsler;
  e.expected.provenance = Provenance::derived;
  e.expected.note = "geodesics of the upper half-space model of hyperbolic space";
  e.box = half_plane_box(n);
  return e;
}

GalleryEntry product_half_plane_line(const Params& p) {
  ParamReader(p, {});
  GalleryEntry e;
  e.name = "product_half_plane_line";
  auto hp = half_plane_spray(e.name);
  std::vector<Expression> G;
  for (const auto& g : hp.coefficients) G.push_back(dsl::parse_expression(dsl::to_string(g), 3));
  G.push_back(num(0.0));
  e.definition = dsl::SprayDefinition{e.name, 3, G, {dsl::parse_expression("x2", 3)}};
  e.expected.status = checks::Status::not_metrizable_rank_fails;
  e.expected.ricci = dsl::parse_expression("-(y1^2 + y2^2)/(2*x2^2)", 3);
  e.expected.provenance = Provenance::derived;
  e.expected.note = "half-plane times a line; Tr Phi ignores (x3, y3) so dd_J Tr Phi is degenerate";
  e.box = half_plane_box(3);
  e.box.x[1] = {0.25, 2.0};
  e.box.x[2] = {-2.0, 2.0};
  return e;
}

using Factory = GalleryEntry (*)(const Params&);

const std::vector<std::pair<std::string, Factory>>& catalog() {
  static const std::vector<std::pair<std::string, Factory>> c = {
      {"poincare_half_plane", poincare_half_plane},
      {"poincare_half_plane_finsler", poincare_half_plane_finsler},
      {"finsler_poincare_disk", finsler_poincare_disk},
      {"bao_robles_paraboloid", bao_robles_paraboloid},
      {"shen_randers_11_2", shen_randers},
      {"conic_affine", conic_affine},
      {"affine_conic_family", affine_conic_family},
      {"deformed_half_plane", deformed_half_plane},
      {"flat", flat},
      {"euclidean", euclidean},
      {"hyperbolic_half_space", hyperbolic_half_space},
      {"product_half_plane_line", product_half_plane_line},
  };
  return c;
}

}  // namespace

std::vector<std::string> list_examples() {
  std::vector<std::string> names;
  for (const auto& [name, f] : catalog()) names.push_back(name);
  return names;
}

GalleryEntry get_example(const std::string& name, const Params& params) {
  for (const auto& [n, f] : catalog())
    if (n == name) return f(params);
  throw UnknownExample("unknown gallery example '" + name + "'");
}

dsl::SprayDefinition projective_deform(const dsl::SprayDefinition& spray, const Expression& P,
                                       std::span<const geom::Point> probe, double tol) {
  if (P == Expression::constant(0.0)) return spray;
  if (P.max_index() > spray.dimension) throw std::invalid_argument("P references an out-of-range variable");
  const int n = spray.dimension;
  for (const auto& p : probe) {
    const ad::Jet j = ad::jet_evaluate(P, p, 1);
    double euler = 0.0;
    for (int i = 0; i < n; ++i) euler += p[static_cast<std::size_t>(n + i)] * j.d(n + i);
    geom::Point scaled = p;
    for (int i = n; i < 2 * n; ++i) scaled[static_cast<std::size_t>(i)] *= 2.0;
    const double p2 = dsl::evaluate(P, scaled);
    const double scale = 1.0 + 2.0 * std::abs(j.value());
    if (std::abs(euler - j.value()) > tol * scale || std::abs(p2 - 2.0 * j.value()) > tol * scale)
      throw std::invalid_argument("deformation P is not 1-homogeneous in y");
  }
  dsl::SprayDefinition out = spray;
  for (int i = 0; i < n; ++i)
    out.coefficients[static_cast<std::size_t>(i)] =
        out.coefficients[static_cast<std::size_t>(i)] + P * Expression::y(i + 1);
  return out;
}

AffinePDE affine_pde_residuals(const Expression& phi, const Expression& psi, std::span<const double> point) {
  const ad::Jet a = ad::jet_evaluate(phi, point, 2);
  const ad::Jet b = ad::jet_evaluate(psi, point, 2);
  AffinePDE r;
  r.symmetry = a.d(1) - b.d(0);
  r.phi_eq = a.d(0, 1) - a.value() * a.d(1);
  r.psi_eq = b.d(0, 1) - b.value() * b.d(0);
  return r;
}

std::string export_definition(const GalleryEntry& entry) {
  return std::visit([](const auto& d) { return dsl::to_file(d); }, entry.definition);
}

}  // namespace sprayscope::gallery
