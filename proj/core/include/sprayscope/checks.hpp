#pragma once

// Metrizability conditions evaluated over a sample of points, and the verdict
// assembled from them.
//
// For a spray with non-vanishing Ricci scalar R the tests are
//   A)  rank d d_J(Tr Phi) = 2n
//   D1) 2(n-1) Phi - 2 Tr(Phi) J + d_J(Tr Phi) (x) C = 0
//   D2) d_h(Tr Phi) = 0
// and for n = 2 the pair d_J alpha = 0, d_h R = 0 replaces D1/D2. All
// residuals are relative: each is divided by 1 + the size of its dominant
// term, so that pass/fail is stable under rescaling of y.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sprayscope/geom.hpp"

namespace sprayscope::checks {

using geom::Point;

class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Interval {
  double lo;
  double hi;
};

struct Box {
  std::vector<Interval> x;
  std::vector<Interval> y;

  /// [-2, 2] for every coordinate.
  static Box uniform(int n, Interval range = {-2.0, 2.0});
};

struct SampleSpec {
  std::size_t count = 64;
  Box box;
  std::uint64_t seed = 42;
  /// Every constraint must exceed this value at an accepted point.
  double margin = 1e-3;
  /// Velocities shorter than this are rejected.
  double min_speed = 0.1;
  std::size_t max_attempts = 100000;

  static SampleSpec defaults(int n);
};

/// Deterministic rejection sampling of points satisfying every constraint.
std::vector<Point> sample_points(const std::vector<dsl::Expression>& constraints, int n, const SampleSpec& spec);
std::vector<Point> sample_points(const geom::Spray& spray, const SampleSpec& spec);

struct Tolerances {
  /// Relative tolerance for residual identities.
  double residual = 1e-8;
  /// Singular values below rank * sigma_max count as zero. Kept separate from
  /// `residual` so that tightening the residual tolerance cannot repair a rank failure.
  double rank = 1e-8;
  /// |R| <= vanishing * curvature_scale counts as a zero of the Ricci scalar.
  double vanishing = 1e-8;
};

// --- relative residuals of one frame ---------------------------------------

double residual_D1(const geom::GeometryFrame& f);
double residual_D2(const geom::GeometryFrame& f);
double residual_dJ_alpha(const geom::GeometryFrame& f);
/// |d_J R - 2 alpha|, the second form of the d_J alpha = 0 condition.
double residual_dJR_alpha(const geom::GeometryFrame& f);
double residual_isotropy(const geom::GeometryFrame& f);
double residual_weak_ricci(const geom::GeometryFrame& f);
int numeric_rank(const Eigen::MatrixXd& m, double relative_threshold);

/// max_i of |N^i_j y^j - 2 G^i| and |G^i(x, 2y) - 4 G^i(x, y)|, relative.
double homogeneity_residual(const geom::Spray& spray, std::span<const double> point);

struct PointRecord {
  Point point;
  int rank = 0;
  int rank_deficiency = 0;
  double residual_D1 = 0.0;
  double residual_D2 = 0.0;
  double dh_TrPhi_max = 0.0;  // raw max_i |(d_h Tr Phi)_i|
  double dh_R_max = 0.0;      // raw max_i |(d_h R)_i|
  double residual_iso = 0.0;
  double residual_dJalpha = 0.0;
  double residual_dJR_alpha = 0.0;
  double residual_homogeneity = 0.0;
  double residual_weak_ricci = 0.0;
  double R_value = 0.0;
  double S_R = 0.0;
  double curvature_scale = 0.0;
};

struct Aggregates {
  double max_D1 = 0.0;
  double max_D2 = 0.0;
  double max_dh_R = 0.0;
  double max_iso = 0.0;
  double max_dJalpha = 0.0;
  double max_dJR_alpha = 0.0;
  double max_homogeneity = 0.0;
  double max_weak_ricci = 0.0;
  int max_rank_deficiency = 0;
  int min_rank = 0;
  double min_abs_R = 0.0;
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t vanishing = 0;
};

struct ConditionReport {
  int dimension = 0;
  std::vector<PointRecord> points;
  Aggregates aggregates;
};

/// |R| <= threshold * curvature_scale
bool ricci_vanishes(const PointRecord& r, double threshold);

PointRecord record_point(const geom::Spray& spray, const geom::GeometryFrame& frame, const Tolerances& tol);
Aggregates aggregate(std::span<const PointRecord> records, int dimension, const Tolerances& tol);
ConditionReport evaluate_conditions(const geom::Spray& spray, std::span<const Point> points, const Tolerances& tol = {});

std::vector<geom::GeometryFrame> build_frames(const geom::Spray& spray, std::span<const Point> points, double tol = 1e-8);

// --- the individual checks -------------------------------------------------

struct ResidualSeries {
  std::vector<double> values;
  double max = 0.0;
  bool pass = true;
};

struct RankSeries {
  std::vector<int> ranks;
  int required = 0;
  bool pass = true;
};

struct DJAlphaSeries {
  std::vector<double> dJ_alpha;    // |d_J alpha|, relative
  std::vector<double> dJR_alpha;   // |d_J R - 2 alpha|, relative
  std::vector<bool> applicable;    // false where the spray is not isotropic
  double max_dJ_alpha = 0.0;
  double max_dJR_alpha = 0.0;
  bool pass = true;
  /// Both formulations reach the same pass/fail decision at every applicable point.
  bool forms_agree = true;
};

ResidualSeries check_homogeneity(const geom::Spray& spray, std::span<const Point> points, double tol = 1e-8);
RankSeries check_condition_A(std::span<const geom::GeometryFrame> frames, double rank_tol = 1e-8);
ResidualSeries check_condition_D1(std::span<const geom::GeometryFrame> frames, double tol = 1e-8);
ResidualSeries check_condition_D2(std::span<const geom::GeometryFrame> frames, double tol = 1e-8);
DJAlphaSeries check_dJ_alpha(std::span<const geom::GeometryFrame> frames, double tol = 1e-8);
ResidualSeries check_weak_ricci_constant(std::span<const geom::GeometryFrame> frames, double tol = 1e-8);

RankSeries check_condition_A(const geom::Spray& spray, const SampleSpec& sample, double rank_tol = 1e-8);
ResidualSeries check_condition_D1(const geom::Spray& spray, const SampleSpec& sample, double tol = 1e-8);
ResidualSeries check_condition_D2(const geom::Spray& spray, const SampleSpec& sample, double tol = 1e-8);
DJAlphaSeries check_dJ_alpha(const geom::Spray& spray, const SampleSpec& sample, double tol = 1e-8);
ResidualSeries check_weak_ricci_constant(const geom::Spray& spray, const SampleSpec& sample, double tol = 1e-8);

// --- verdict ---------------------------------------------------------------

enum class Status {
  metrizable_constant_curvature,
  not_metrizable_D1_fails,
  not_metrizable_D2_fails,
  not_metrizable_rank_fails,
  ricci_vanishes_out_of_scope,
  inconclusive_mixed_sign,
};

std::string to_string(Status s);
Status status_from_string(std::string_view s);
bool is_not_metrizable(Status s);

struct Verdict {
  Status status = Status::inconclusive_mixed_sign;
  /// sign(R) when metrizable, otherwise 0.
  int kappa = 0;
  ConditionReport witness;
  /// Set for n >= 3 when the isotropy, rank and d_J alpha hypotheses hold.
  std::string annotation;
};

Verdict verdict(const geom::Spray& spray, std::span<const Point> points, const Tolerances& tol = {});
Verdict verdict(const geom::Spray& spray, const SampleSpec& sample, const Tolerances& tol = {});
/// Decision tree applied to an already evaluated report.
Verdict decide(ConditionReport report, const Tolerances& tol);

}  // namespace sprayscope::checks
