// Acceptance checks, one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (capped at 1).
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "properties.hpp"
#include "sprayscope/checks.hpp"
#include "sprayscope/cli.hpp"
#include "sprayscope/finsler.hpp"
#include "sprayscope/gallery.hpp"

using namespace sprayscope;
using checks::Status;
using geom::Point;

namespace {

struct Check {
  std::ostringstream detail;
  bool pass = true;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel(double got, double expected) { return std::abs(got - expected) / std::max(std::abs(expected), 1e-300); }

std::vector<Point> sample(const gallery::GalleryEntry& e, std::size_t count) {
  return checks::sample_points(e.spray(), e.sample_spec(count));
}

const dsl::FinslerDefinition& finsler_of(const gallery::GalleryEntry& e) {
  return std::get<dsl::FinslerDefinition>(e.definition);
}

void half_plane(Check& c) {
  cli::RunConfig config;
  config.gallery = "poincare_half_plane";
  config.points = 64;
  const auto t0 = std::chrono::steady_clock::now();
  const auto report = cli::run(config);
  const double runtime = seconds_since(t0);

  const auto e = gallery::get_example("poincare_half_plane");
  const auto spray = e.spray();
  const auto points = sample(e, 64);
  double worst_R = 0.0;
  for (const auto& p : points) {
    const double expected = -(p[2] * p[2] + p[3] * p[3]) / (p[1] * p[1]);
    worst_R = std::max(worst_R, rel(geom::ricci_scalar(spray, p).R, expected));
  }
  const auto rec = finsler::reconstruct_finsler(spray, points);
  double worst_F2 = 0.0;
  for (const auto& s : rec.samples) {
    const auto& p = s.point;
    worst_F2 = std::max(worst_F2, rel(s.F2, (p[2] * p[2] + p[3] * p[3]) / (p[1] * p[1])));
  }
  c.detail << "status=" << report.verdict.status << " kappa=" << report.verdict.kappa << " R_rel=" << worst_R
           << " F2_rel=" << worst_F2 << " EL=" << rec.max_EL << " flag=" << rec.max_flag << " runtime=" << runtime << "s";
  c.require(report.verdict.status == "metrizable_constant_curvature", "status");
  c.require(report.verdict.kappa == -1 && rec.kappa == -1, "kappa");
  c.require(report.reconstruction && report.reconstruction->samples.size() == 64, "64 reconstructed points");
  c.require(worst_R <= 1e-9, "R");
  c.require(worst_F2 <= 1e-9, "F2");
  c.require(rec.max_EL <= 1e-8 && rec.max_flag <= 1e-8, "EL/flag");
  c.require(runtime < 1.0, "runtime");
}

void disk(Check& c) {
  const auto e = gallery::get_example("finsler_poincare_disk");
  const auto& F = finsler_of(e);
  const auto spray = finsler::geodesic_spray(F);
  const auto energy = finsler::energy_of(F);
  const auto points = checks::sample_points(spray, e.sample_spec(64));
  double worst_flag = 0.0;
  for (const auto& p : points)
    worst_flag = std::max(worst_flag, finsler::flag_curvature_residual(spray, energy, -0.25, p).relative);
  const auto v = checks::verdict(spray, points);
  c.detail << "flag(-1/4)=" << worst_flag << " status=" << checks::to_string(v.status);
  c.require(worst_flag <= 1e-6, "flag curvature -1/4");
  c.require(v.status == Status::metrizable_constant_curvature, "verdict");
  if (v.status == Status::metrizable_constant_curvature) {
    const auto rec = finsler::reconstruct_finsler(spray, points);
    double worst_ratio = 0.0;
    for (const auto& s : rec.samples) {
      const double f = dsl::evaluate(F.function, s.point);
      worst_ratio = std::max(worst_ratio, std::abs(s.F2 / (f * f) - 0.25));
    }
    c.detail << " ratio_dev=" << worst_ratio;
    c.require(worst_ratio <= 1e-6, "F2_rec / F2 = 1/4");
  } else {
    // R / F^2 over the sample shows how far from constant curvature the stated F is
    double lo = 1e300, hi = -1e300;
    for (const auto& p : points) {
      const double f = dsl::evaluate(F.function, p);
      const double k = geom::ricci_scalar(spray, p).R / (f * f);
      lo = std::min(lo, k);
      hi = std::max(hi, k);
    }
    c.detail << " R/F^2 in [" << lo << ", " << hi << "]";
    c.require(false, "no reconstruction");
  }
}

void bao_robles(Check& c) {
  const auto e = gallery::get_example("bao_robles_paraboloid");
  const auto spray = e.spray();
  const auto points = sample(e, 64);
  const auto frames = checks::build_frames(spray, points);
  const auto dj = checks::check_dJ_alpha(frames);
  double max_dh = 0.0;
  for (const auto& f : frames) max_dh = std::max(max_dh, f.dh_R.cwiseAbs().maxCoeff());
  const auto v = checks::verdict(spray, points);
  const auto& F = finsler_of(e);
  const auto ein = finsler::check_einstein(spray, finsler::energy_of(F), points);
  double worst_lambda = 0.0;
  for (const auto& s : ein.samples) {
    const double x = s.point[0], y = s.point[1];
    const double d = 1.0 + 4.0 * x * x + 4.0 * y * y;
    worst_lambda = std::max(worst_lambda, rel(s.lambda, 4.0 / (d * d)));
  }
  c.detail << "dJ_alpha=" << dj.max_dJ_alpha << " max|dh_R|=" << max_dh << " status=" << checks::to_string(v.status)
           << " einstein=" << ein.pass << " lambda_const=" << ein.lambda_constant << " lambda_rel=" << worst_lambda;
  c.require(dj.max_dJ_alpha <= 1e-7, "dJ_alpha");
  c.require(max_dh >= 1e-3, "dh_R");
  c.require(v.status == Status::not_metrizable_D2_fails, "verdict");
  c.require(ein.pass && !ein.lambda_constant, "einstein");
  c.require(worst_lambda <= 1e-6, "lambda vs kappa(x)");
}

void shen(Check& c) {
  const auto e = gallery::get_example("shen_randers_11_2");
  const auto spray = e.spray();
  const auto points = sample(e, 64);
  const auto frames = checks::build_frames(spray, points);
  const auto dj = checks::check_dJ_alpha(frames);
  std::size_t above = 0;
  for (std::size_t i = 0; i < frames.size(); ++i)
    if (dj.applicable[i] && dj.dJ_alpha[i] >= 1e-4) ++above;
  const double fraction = static_cast<double>(above) / static_cast<double>(frames.size());
  const auto d1 = checks::check_condition_D1(frames);
  const auto energy = finsler::energy_of(finsler_of(e));
  double worst_EL = 0.0;
  for (const auto& p : points) worst_EL = std::max(worst_EL, finsler::euler_lagrange_residual(spray, energy, p).relative);
  c.detail << "dJ_alpha>=1e-4 at " << 100.0 * fraction << "% D1_max=" << d1.max << " EL=" << worst_EL;
  c.require(fraction >= 0.9, "dJ_alpha lower bound");
  c.require(!d1.pass, "D1 fails");
  c.require(worst_EL <= 1e-8, "EL");
}

void conic(Check& c) {
  const auto e = gallery::get_example("conic_affine");
  const auto spray = e.spray();
  const auto points = sample(e, 64);
  const auto frames = checks::build_frames(spray, points);
  const auto rank = checks::check_condition_A(frames);
  const auto dj = checks::check_dJ_alpha(frames);
  const auto d2 = checks::check_condition_D2(frames);
  bool on_cone = true;
  double worst_R = 0.0;
  for (const auto& p : points) {
    on_cone = on_cone && p[2] * p[3] > 0.0;
    const double s = p[0] + p[1];
    worst_R = std::max(worst_R, rel(geom::ricci_scalar(spray, p).R, -4.0 * p[2] * p[3] / (s * s)));
  }
  const auto rec = finsler::reconstruct_finsler(spray, points);
  c.detail << "rank_min=" << *std::min_element(rank.ranks.begin(), rank.ranks.end()) << "/" << rank.required
           << " dJ_alpha=" << dj.max_dJ_alpha << " D2=" << d2.max << " R_rel=" << worst_R
           << " outcome=" << finsler::to_string(rec.outcome) << " kappa=" << rec.kappa << " g_min=" << rec.min_g_eigen;
  c.require(on_cone, "cone");
  c.require(rank.pass, "condition A");
  c.require(dj.max_dJ_alpha <= 1e-8 && dj.max_dJR_alpha <= 1e-8, "dJ_alpha");
  c.require(d2.max <= 1e-8, "dh_R");
  c.require(worst_R <= 1e-9, "R");
  c.require(rec.outcome == finsler::Outcome::conic_pseudo_finsler && rec.min_g_eigen < 0.0, "outcome");
  c.require(rec.kappa == -1, "kappa");
}

void deformation(Check& c) {
  const std::vector<std::pair<double, Status>> family{{0.0, Status::metrizable_constant_curvature},
                                                      {0.5, Status::not_metrizable_D2_fails},
                                                      {1.0, Status::ricci_vanishes_out_of_scope},
                                                      {2.0, Status::not_metrizable_D2_fails}};
  double worst_literal = 0.0, worst_with_F0 = 0.0, worst_phi = 0.0;
  for (const auto& [lambda, status] : family) {
    std::ostringstream l;
    l << lambda;
    const auto e = gallery::get_example("deformed_half_plane", {{"lambda", l.str()}});
    const auto spray = e.spray();
    const auto points = sample(e, 64);
    const auto v = checks::verdict(spray, points);
    c.detail << "lambda=" << lambda << ":" << checks::to_string(v.status) << " ";
    c.require(v.status == status, "status at lambda=" + l.str());
    const double kc = lambda * lambda - 1.0;  // kappa0 + lambda^2
    for (const auto& f : checks::build_frames(spray, points)) {
      const double x2 = f.point[1], y1 = f.point[2], y2 = f.point[3];
      const double F0 = std::hypot(y1, y2) / x2;
      const double ys[2] = {y1, y2};
      // Phi^i_j = (kappa0 + lambda^2)/x2^2 (|y|^2 delta - y^i y_j)
      Eigen::Matrix2d phi;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) phi(i, j) = kc / (x2 * x2) * ((i == j ? y1 * y1 + y2 * y2 : 0.0) - ys[i] * ys[j]);
      worst_phi = std::max(worst_phi, (f.Phi - phi).cwiseAbs().maxCoeff() / std::max(phi.cwiseAbs().maxCoeff(), 1.0));
      if (status != Status::not_metrizable_D2_fails) continue;
      // -4 lambda (kappa0 + lambda^2) d_J F0^2, and the same with the factor F0 / 2
      Eigen::Vector2d literal;
      for (int i = 0; i < 2; ++i) literal(i) = -4.0 * lambda * kc * 2.0 * ys[i] / (x2 * x2);
      const Eigen::Vector2d with_F0 = 0.5 * F0 * literal;
      worst_literal = std::max(worst_literal, (f.dh_R - literal).cwiseAbs().maxCoeff() / literal.cwiseAbs().maxCoeff());
      worst_with_F0 = std::max(worst_with_F0, (f.dh_R - with_F0).cwiseAbs().maxCoeff() / with_F0.cwiseAbs().maxCoeff());
    }
  }
  c.detail << "dh_R_rel(-4 lambda (k0+lambda^2) d_J F0^2)=" << worst_literal
           << " dh_R_rel(-2 lambda (k0+lambda^2) F0 d_J F0^2)=" << worst_with_F0 << " Phi_rel=" << worst_phi;
  c.require(worst_literal <= 1e-6, "dh_R vs -4 lambda (k0+lambda^2) d_J F0^2");
  c.require(worst_phi <= 1e-8, "Phi");
}

void properties(Check& c) {
  using Suite = std::function<testing::PropertyResult()>;
  const std::vector<Suite> suites{
      [] { return testing::property_phi_y(); },
      [] { return testing::property_trace_identity(); },
      [] { return testing::property_lemma_forms_agree(); },
      [] { return testing::property_d1_matches_dj_alpha(); },
      [] { return testing::property_homogeneity_scaling(); },
      [] { return testing::property_ad_vs_fd(); },
  };
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& suite : suites) {
    const auto r = suite();
    c.detail << " " << r.name << "=" << r.cases << "/" << r.failures;
    c.require(r.ok(), r.summary());
  }
  const double runtime = seconds_since(t0);
  c.detail << " runtime=" << runtime << "s";
  c.require(runtime < 60.0, "runtime");
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<void(Check&)>>> criteria{
      {1, half_plane}, {2, disk}, {3, bao_robles}, {4, shen}, {5, conic}, {6, deformation}, {7, properties}};
  int failed = 0;
  for (const auto& [id, body] : criteria) {
    Check c;
    try {
      body(c);
    } catch (const std::exception& ex) {
      c.require(false, std::string("exception: ") + ex.what());
    }
    std::printf("criterion %d: %s %s\n", id, c.pass ? "PASS" : "FAIL", c.detail.str().c_str());
    std::fflush(stdout);
    if (!c.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
