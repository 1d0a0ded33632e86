#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "sprayscope/checks.hpp"
#include "sprayscope/finsler.hpp"
#include "sprayscope/gallery.hpp"

using namespace sprayscope;
using checks::Status;
using dsl::parse_expression;
using geom::Point;

namespace {

struct Outcome {
  std::vector<std::string> unmet;  // one line per expectation the pipeline did not meet
};

// Runs the pipeline on a gallery entry and compares with every stated expectation.
Outcome check_expectations(const gallery::GalleryEntry& e, std::size_t count = 32) {
  Outcome out;
  const auto spray = e.spray();
  const auto points = checks::sample_points(spray, e.sample_spec(count));
  const auto v = checks::verdict(spray, points);
  const auto& ex = e.expected;
  if (ex.status && v.status != *ex.status)
    out.unmet.push_back("status " + checks::to_string(v.status) + " != " + checks::to_string(*ex.status));
  if (ex.status == Status::metrizable_constant_curvature && v.kappa != ex.kappa) out.unmet.push_back("kappa");
  if (ex.ricci) {
    for (const auto& p : points) {
      const double expected = dsl::evaluate(*ex.ricci, p);
      const double got = geom::ricci_scalar(spray, p).R;
      if (std::abs(got - expected) > 1e-9 * std::max(std::abs(expected), 1e-3)) {
        out.unmet.push_back("ricci");
        break;
      }
    }
  }
  const dsl::FinslerDefinition* F = std::get_if<dsl::FinslerDefinition>(&e.definition);
  if (F && ex.flag_curvature) {
    const auto energy = finsler::energy_of(*F);
    for (const auto& p : points) {
      if (finsler::flag_curvature_residual(spray, energy, *ex.flag_curvature, p).relative > 1e-6) {
        out.unmet.push_back("flag curvature");
        break;
      }
    }
  }
  if (v.status == Status::metrizable_constant_curvature) {
    const auto rec = finsler::reconstruct_finsler(spray, points);
    if (ex.outcome && rec.outcome != *ex.outcome) out.unmet.push_back("outcome " + finsler::to_string(rec.outcome));
    for (const auto& s : rec.samples) {
      if (ex.energy) {
        const double expected = dsl::evaluate(*ex.energy, s.point);
        if (std::abs(s.F2 - expected) > 1e-9 * std::abs(expected)) {
          out.unmet.push_back("energy");
          break;
        }
      }
      if (F && ex.energy_ratio) {
        const double f = dsl::evaluate(F->function, s.point);
        if (std::abs(s.F2 / (f * f) - *ex.energy_ratio) > 1e-6) {
          out.unmet.push_back("energy ratio");
          break;
        }
      }
    }
  } else if (ex.outcome || ex.energy_ratio) {
    out.unmet.push_back("no reconstruction");
  }
  for (std::size_t i = 0; i < ex.dh_ricci.size() && v.status != Status::ricci_vanishes_out_of_scope; ++i) {
    for (const auto& p : points) {
      const double expected = dsl::evaluate(ex.dh_ricci[i], p);
      const double got = geom::build_frame(spray, p).dh_R(static_cast<Eigen::Index>(i));
      if (std::abs(got - expected) > 1e-6 * std::max(std::abs(expected), 1.0)) {
        out.unmet.push_back("dh_ricci");
        break;
      }
    }
  }
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += x + "; ";
  return s;
}

}  // namespace

TEST(Catalog, ContainsTheReferenceExamples) {
  const auto names = gallery::list_examples();
  for (const char* n : {"poincare_half_plane", "finsler_poincare_disk", "bao_robles_paraboloid", "shen_randers_11_2",
                        "conic_affine", "deformed_half_plane"})
    EXPECT_NE(std::find(names.begin(), names.end(), n), names.end()) << n;
}

TEST(Catalog, UnknownNamesAndParameters) {
  EXPECT_THROW(gallery::get_example("klein_bottle"), gallery::UnknownExample);
  EXPECT_THROW(gallery::get_example("deformed_half_plane", {{"mu", "1"}}), std::invalid_argument);
  EXPECT_THROW(gallery::get_example("deformed_half_plane", {{"lambda", "abc"}}), std::invalid_argument);
  EXPECT_THROW(gallery::get_example("flat", {{"n", "2.5"}}), std::invalid_argument);
  EXPECT_THROW(gallery::get_example("affine_conic_family", {{"phi", "x3"}}), dsl::ParseError);
}

TEST(Catalog, HalfPlaneCoefficients) {
  const auto e = gallery::get_example("poincare_half_plane");
  const auto& def = std::get<dsl::SprayDefinition>(e.definition);
  const Point p{0.3, 1.7, -0.8, 1.9};
  EXPECT_NEAR(dsl::evaluate(def.coefficients[0], p), -p[2] * p[3] / p[1], 1e-15);
  EXPECT_NEAR(dsl::evaluate(def.coefficients[1], p), (p[2] * p[2] - p[3] * p[3]) / (2 * p[1]), 1e-15);
}

TEST(Catalog, ConicCoefficientsFollowTheDisplayedSpray) {
  const auto def = std::get<dsl::SprayDefinition>(gallery::get_example("conic_affine").definition);
  const Point p{0.5, 1.5, 1.0, 2.0};
  // S = y d/dx + 2 (y1)^2/(x1+x2) d/dy1 + ...  with S = y d/dx - 2G d/dy
  EXPECT_NEAR(-2.0 * dsl::evaluate(def.coefficients[0], p), 2.0 * 1.0 / 2.0, 1e-15);
  EXPECT_NEAR(-2.0 * dsl::evaluate(def.coefficients[1], p), 2.0 * 4.0 / 2.0, 1e-15);
}

TEST(Catalog, DeformedCoefficients) {
  const auto base = std::get<dsl::SprayDefinition>(gallery::get_example("poincare_half_plane").definition);
  const auto def = std::get<dsl::SprayDefinition>(gallery::get_example("deformed_half_plane", {{"lambda", "2"}}).definition);
  const Point p{0.2, 0.9, 1.2, -0.5};
  const double F0 = std::hypot(p[2], p[3]) / p[1];
  for (std::size_t i = 0; i < 2; ++i)
    EXPECT_NEAR(dsl::evaluate(def.coefficients[i], p), dsl::evaluate(base.coefficients[i], p) + 2.0 * F0 * p[2 + i],
                1e-14);
}

TEST(Expectations, EveryUndisputedEntryIsMet) {
  std::vector<std::pair<std::string, gallery::Params>> runs;
  for (const auto& n : gallery::list_examples()) runs.emplace_back(n, gallery::Params{});
  for (const char* l : {"0", "0.5", "1", "2", "-1.5"}) runs.emplace_back("deformed_half_plane", gallery::Params{{"lambda", l}});
  runs.emplace_back("flat", gallery::Params{{"n", "3"}});
  runs.emplace_back("hyperbolic_half_space", gallery::Params{{"n", "2"}});
  for (const auto& [name, params] : runs) {
    const auto e = gallery::get_example(name, params);
    if (e.expected.disputed) continue;
    const auto r = check_expectations(e);
    EXPECT_TRUE(r.unmet.empty()) << name << ": " << join(r.unmet);
  }
}

TEST(Expectations, DisputedEntriesAreFlaggedAndActuallyUnmet) {
  std::size_t disputed = 0;
  for (const auto& n : gallery::list_examples()) {
    const auto e = gallery::get_example(n);
    if (!e.expected.disputed) continue;
    ++disputed;
    EXPECT_FALSE(e.expected.note.empty()) << n;
    EXPECT_FALSE(check_expectations(e).unmet.empty()) << n << " is marked disputed but meets every expectation";
  }
  EXPECT_EQ(disputed, 1u);
}

TEST(Expectations, ProvenanceIsTagged) {
  for (const auto& n : gallery::list_examples()) {
    const auto e = gallery::get_example(n);
    const auto tag = gallery::to_string(e.expected.provenance);
    EXPECT_TRUE(tag == "paper" || tag == "derived") << n;
  }
}

TEST(ProjectiveDeform, ZeroIsIdentity) {
  const auto base = std::get<dsl::SprayDefinition>(gallery::get_example("poincare_half_plane").definition);
  const std::vector<Point> probe{{0, 1, 1, 0}, {0.5, 2, -1, 3}};
  const auto same = gallery::projective_deform(base, dsl::Expression::constant(0.0), probe);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(same.coefficients[i], base.coefficients[i]);
}

TEST(ProjectiveDeform, UnitDeformationKillsRicci) {
  const auto e = gallery::get_example("poincare_half_plane");
  const auto base = std::get<dsl::SprayDefinition>(e.definition);
  const auto F0 = parse_expression("sqrt(y1^2 + y2^2)/x2", 2);
  const auto spray = geom::Spray::from_definition(gallery::projective_deform(base, F0, std::vector<Point>{{0, 1, 1, 1}}));
  for (const auto& p : checks::sample_points(spray, e.sample_spec(32))) EXPECT_NEAR(geom::ricci_scalar(spray, p).R, 0.0, 1e-12);
}

TEST(ProjectiveDeform, DoubleDeformationKeepsDJAlphaZero) {
  const auto e = gallery::get_example("poincare_half_plane");
  const auto base = std::get<dsl::SprayDefinition>(e.definition);
  const auto P = parse_expression("2*sqrt(y1^2 + y2^2)/x2", 2);
  const auto spray = geom::Spray::from_definition(gallery::projective_deform(base, P, std::vector<Point>{{0, 1, 1, 1}}));
  const auto points = checks::sample_points(spray, e.sample_spec(32));
  EXPECT_LE(checks::check_dJ_alpha(checks::build_frames(spray, points)).max_dJ_alpha, 1e-9);
}

TEST(ProjectiveDeform, NonHomogeneousPIsRejected) {
  const auto base = std::get<dsl::SprayDefinition>(gallery::get_example("poincare_half_plane").definition);
  EXPECT_THROW(gallery::projective_deform(base, parse_expression("y1^2", 2), std::vector<Point>{{0, 1, 1, 1}}),
               std::invalid_argument);
}

TEST(AffineFamily, VerdictPassesExactlyWhenThePDEHolds) {
  struct Instance {
    std::string phi, psi;
    bool pde;
  };
  const std::vector<Instance> instances{{"-2/(x1 + x2)", "-2/(x1 + x2)", true}, {"x2", "0", false}};
  for (const auto& inst : instances) {
    const auto e = gallery::get_example("affine_conic_family", {{"phi", inst.phi}, {"psi", inst.psi}});
    const auto spray = e.spray();
    const auto points = checks::sample_points(spray, e.sample_spec(32));
    const auto phi = parse_expression(inst.phi, 2);
    const auto psi = parse_expression(inst.psi, 2);
    double worst = 0.0;
    for (const auto& p : points) {
      const auto r = gallery::affine_pde_residuals(phi, psi, p);
      worst = std::max({worst, std::abs(r.symmetry), std::abs(r.phi_eq), std::abs(r.psi_eq)});
    }
    const bool pde_holds = worst <= 1e-9;
    EXPECT_EQ(pde_holds, inst.pde) << inst.phi;
    const bool metrizable = checks::verdict(spray, points).status == Status::metrizable_constant_curvature;
    EXPECT_EQ(metrizable, pde_holds) << inst.phi << " / " << inst.psi;
  }
}

TEST(Export, RoundTripsThroughTheFileFormat) {
  for (const auto& n : gallery::list_examples()) {
    const auto e = gallery::get_example(n);
    const auto def = dsl::parse_definition_file(gallery::export_definition(e));
    ASSERT_EQ(def.index(), e.definition.index()) << n;
    if (const auto* s = std::get_if<dsl::SprayDefinition>(&def)) {
      const auto& orig = std::get<dsl::SprayDefinition>(e.definition);
      ASSERT_EQ(s->coefficients.size(), orig.coefficients.size());
      for (std::size_t i = 0; i < orig.coefficients.size(); ++i) EXPECT_EQ(s->coefficients[i], orig.coefficients[i]) << n;
      EXPECT_EQ(s->constraints.size(), orig.constraints.size());
    } else {
      EXPECT_EQ(std::get<dsl::FinslerDefinition>(def).function, std::get<dsl::FinslerDefinition>(e.definition).function);
    }
  }
}
