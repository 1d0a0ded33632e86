#include "sprayscope/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace sprayscope::checks {

Box Box::uniform(int n, Interval range) {
  Box b;
  b.x.assign(static_cast<std::size_t>(n), range);
  b.y.assign(static_cast<std::size_t>(n), range);
  return b;
}

SampleSpec SampleSpec::defaults(int n) {
  SampleSpec s;
  s.box = Box::uniform(n);
  return s;
}

std::vector<Point> sample_points(const std::vector<dsl::Expression>& constraints, int n, const SampleSpec& spec) {
  const auto un = static_cast<std::size_t>(n);
  if (spec.count < 1) throw std::invalid_argument("sample count must be at least 1");
  if (spec.box.x.size() != un || spec.box.y.size() != un) throw std::invalid_argument("sampling box has the wrong dimension");
  for (const auto* side : {&spec.box.x, &spec.box.y}) {
    for (const auto& iv : *side) {
      if (!(iv.hi > iv.lo)) throw std::invalid_argument("sampling interval is degenerate");
    }
  }

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point> out;
  out.reserve(spec.count);
  Point p(2 * un);
  while (out.size() < spec.count) {
    bool accepted = false;
    for (std::size_t attempt = 0; attempt < spec.max_attempts && !accepted; ++attempt) {
      for (std::size_t i = 0; i < un; ++i) {
        p[i] = spec.box.x[i].lo + (spec.box.x[i].hi - spec.box.x[i].lo) * unit(rng);
        p[un + i] = spec.box.y[i].lo + (spec.box.y[i].hi - spec.box.y[i].lo) * unit(rng);
      }
      double speed2 = 0.0;
      for (std::size_t i = 0; i < un; ++i) speed2 += p[un + i] * p[un + i];
      if (speed2 < spec.min_speed * spec.min_speed) continue;
      accepted = std::all_of(constraints.begin(), constraints.end(), [&](const dsl::Expression& c) {
        try {
          return dsl::evaluate(c, p) > spec.margin;
        } catch (const dsl::DomainError&) {
          return false;
        }
      });
    }
    if (!accepted)
      throw SamplingError("no point satisfying the constraints found in " + std::to_string(spec.max_attempts) +
                          " attempts");
    out.push_back(p);
  }
  return out;
}

std::vector<Point> sample_points(const geom::Spray& spray, const SampleSpec& spec) {
  return sample_points(spray.constraints(), spray.dimension(), spec);
}

// ---------------------------------------------------------------------------

double residual_D1(const geom::GeometryFrame& f) {
  const auto n = f.Phi.rows();
  const Eigen::Map<const Eigen::VectorXd> y(f.point.data() + n, n);
  const Eigen::MatrixXd m = 2.0 * static_cast<double>(n - 1) * f.Phi -
                            2.0 * f.Ric * Eigen::MatrixXd::Identity(n, n) + y * f.dJ_TrPhi.transpose();
  return m.norm() / (1.0 + f.Phi.norm());
}

double residual_D2(const geom::GeometryFrame& f) {
  return f.dh_TrPhi.cwiseAbs().maxCoeff() / (1.0 + f.dh_TrPhi_scale);
}

double residual_dJ_alpha(const geom::GeometryFrame& f) { return f.dJ_alpha.norm() / (1.0 + f.alpha_y_norm); }

double residual_dJR_alpha(const geom::GeometryFrame& f) {
  return (f.dJ_R - 2.0 * f.alpha).norm() / (1.0 + f.dJ_R.norm() + 2.0 * f.alpha.norm());
}

double residual_isotropy(const geom::GeometryFrame& f) { return f.iso_residual / (1.0 + f.Phi.norm()); }

double residual_weak_ricci(const geom::GeometryFrame& f) {
  const auto n = f.Phi.rows();
  const Eigen::Map<const Eigen::VectorXd> y(f.point.data() + n, n);
  return std::abs(f.S_R) / (1.0 + std::abs(f.R) * y.norm());
}

int numeric_rank(const Eigen::MatrixXd& m, double relative_threshold) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  const double cut = relative_threshold * s[0];
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > cut) ++rank;
  return rank;
}

double homogeneity_residual(const geom::Spray& spray, std::span<const double> point) {
  const auto n = static_cast<std::size_t>(spray.dimension());
  const auto jets = spray.coefficient_jets(point, 1);
  Point scaled(point.begin(), point.end());
  for (std::size_t i = n; i < 2 * n; ++i) scaled[i] *= 2.0;
  const auto g2 = spray.coefficients(scaled);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double g = jets[i].value();
    double euler = 0.0;
    for (std::size_t j = 0; j < n; ++j) euler += jets[i].d(static_cast<int>(n + j)) * point[n + j];
    worst = std::max(worst, std::abs(euler - 2.0 * g) / (1.0 + 2.0 * std::abs(g)));
    worst = std::max(worst, std::abs(g2[i] - 4.0 * g) / (1.0 + 4.0 * std::abs(g)));
  }
  return worst;
}

bool ricci_vanishes(const PointRecord& r, double threshold) {
  return std::abs(r.R_value) <= threshold * r.curvature_scale;
}

std::vector<geom::GeometryFrame> build_frames(const geom::Spray& spray, std::span<const Point> points, double tol) {
  std::vector<geom::GeometryFrame> frames;
  frames.reserve(points.size());
  for (const auto& p : points) frames.push_back(geom::build_frame(spray, p, tol));
  return frames;
}

PointRecord record_point(const geom::Spray& spray, const geom::GeometryFrame& f, const Tolerances& tol) {
  PointRecord r;
  const int n = static_cast<int>(f.Phi.rows());
  r.point = f.point;
  r.rank = numeric_rank(f.ddJ_TrPhi, tol.rank);
  r.rank_deficiency = 2 * n - r.rank;
  r.residual_D1 = residual_D1(f);
  r.residual_D2 = residual_D2(f);
  r.dh_TrPhi_max = f.dh_TrPhi.cwiseAbs().maxCoeff();
  r.dh_R_max = f.dh_R.cwiseAbs().maxCoeff();
  r.residual_iso = residual_isotropy(f);
  r.residual_dJalpha = residual_dJ_alpha(f);
  r.residual_dJR_alpha = residual_dJR_alpha(f);
  r.residual_homogeneity = homogeneity_residual(spray, f.point);
  r.residual_weak_ricci = residual_weak_ricci(f);
  r.R_value = f.R;
  r.S_R = f.S_R;
  r.curvature_scale = f.curvature_scale;
  return r;
}

Aggregates aggregate(std::span<const PointRecord> records, int dimension, const Tolerances& tol) {
  Aggregates a;
  a.min_rank = 2 * dimension;
  a.min_abs_R = std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    a.max_D1 = std::max(a.max_D1, r.residual_D1);
    a.max_D2 = std::max(a.max_D2, r.residual_D2);
    a.max_dh_R = std::max(a.max_dh_R, r.dh_R_max);
    a.max_iso = std::max(a.max_iso, r.residual_iso);
    a.max_dJalpha = std::max(a.max_dJalpha, r.residual_dJalpha);
    a.max_dJR_alpha = std::max(a.max_dJR_alpha, r.residual_dJR_alpha);
    a.max_homogeneity = std::max(a.max_homogeneity, r.residual_homogeneity);
    a.max_weak_ricci = std::max(a.max_weak_ricci, r.residual_weak_ricci);
    a.max_rank_deficiency = std::max(a.max_rank_deficiency, r.rank_deficiency);
    a.min_rank = std::min(a.min_rank, r.rank);
    a.min_abs_R = std::min(a.min_abs_R, std::abs(r.R_value));
    if (ricci_vanishes(r, tol.vanishing)) {
      ++a.vanishing;
    } else if (r.R_value > 0) {
      ++a.positive;
    } else {
      ++a.negative;
    }
  }
  if (records.empty()) a.min_abs_R = 0.0;
  return a;
}

ConditionReport evaluate_conditions(const geom::Spray& spray, std::span<const Point> points, const Tolerances& tol) {
  ConditionReport report;
  report.dimension = spray.dimension();
  report.points.reserve(points.size());
  for (const auto& p : points) report.points.push_back(record_point(spray, geom::build_frame(spray, p, tol.residual), tol));
  report.aggregates = aggregate(report.points, report.dimension, tol);
  return report;
}

// ---------------------------------------------------------------------------

namespace {

template <class F>
ResidualSeries series(std::span<const geom::GeometryFrame> frames, double tol, F residual) {
  ResidualSeries s;
  s.values.reserve(frames.size());
  for (const auto& f : frames) {
    s.values.push_back(residual(f));
    s.max = std::max(s.max, s.values.back());
  }
  s.pass = s.max <= tol;
  return s;
}

std::vector<geom::GeometryFrame> frames_for(const geom::Spray& spray, const SampleSpec& sample) {
  const auto points = sample_points(spray, sample);
  return build_frames(spray, points);
}

}  // namespace

ResidualSeries check_homogeneity(const geom::Spray& spray, std::span<const Point> points, double tol) {
  ResidualSeries s;
  for (const auto& p : points) {
    s.values.push_back(homogeneity_residual(spray, p));
    s.max = std::max(s.max, s.values.back());
  }
  s.pass = s.max <= tol;
  return s;
}

RankSeries check_condition_A(std::span<const geom::GeometryFrame> frames, double rank_tol) {
  RankSeries s;
  for (const auto& f : frames) {
    s.required = static_cast<int>(f.ddJ_TrPhi.rows());
    s.ranks.push_back(numeric_rank(f.ddJ_TrPhi, rank_tol));
    if (s.ranks.back() != s.required) s.pass = false;
  }
  return s;
}

ResidualSeries check_condition_D1(std::span<const geom::GeometryFrame> frames, double tol) {
  return series(frames, tol, [](const auto& f) { return residual_D1(f); });
}

ResidualSeries check_condition_D2(std::span<const geom::GeometryFrame> frames, double tol) {
  return series(frames, tol, [](const auto& f) { return residual_D2(f); });
}

ResidualSeries check_weak_ricci_constant(std::span<const geom::GeometryFrame> frames, double tol) {
  return series(frames, tol, [](const auto& f) { return residual_weak_ricci(f); });
}

DJAlphaSeries check_dJ_alpha(std::span<const geom::GeometryFrame> frames, double tol) {
  DJAlphaSeries s;
  for (const auto& f : frames) {
    const double a = residual_dJ_alpha(f);
    const double b = residual_dJR_alpha(f);
    const bool applicable = residual_isotropy(f) <= tol;
    s.dJ_alpha.push_back(a);
    s.dJR_alpha.push_back(b);
    s.applicable.push_back(applicable);
    if (!applicable) {
      s.pass = false;
      continue;
    }
    s.max_dJ_alpha = std::max(s.max_dJ_alpha, a);
    s.max_dJR_alpha = std::max(s.max_dJR_alpha, b);
    if ((a <= tol) != (b <= tol)) s.forms_agree = false;
    if (a > tol || b > tol) s.pass = false;
  }
  return s;
}

RankSeries check_condition_A(const geom::Spray& spray, const SampleSpec& sample, double rank_tol) {
  return check_condition_A(frames_for(spray, sample), rank_tol);
}
ResidualSeries check_condition_D1(const geom::Spray& spray, const SampleSpec& sample, double tol) {
  return check_condition_D1(frames_for(spray, sample), tol);
}
ResidualSeries check_condition_D2(const geom::Spray& spray, const SampleSpec& sample, double tol) {
  return check_condition_D2(frames_for(spray, sample), tol);
}
DJAlphaSeries check_dJ_alpha(const geom::Spray& spray, const SampleSpec& sample, double tol) {
  return check_dJ_alpha(frames_for(spray, sample), tol);
}
ResidualSeries check_weak_ricci_constant(const geom::Spray& spray, const SampleSpec& sample, double tol) {
  return check_weak_ricci_constant(frames_for(spray, sample), tol);
}

// ---------------------------------------------------------------------------

std::string to_string(Status s) {
  switch (s) {
    case Status::metrizable_constant_curvature: return "metrizable_constant_curvature";
    case Status::not_metrizable_D1_fails: return "not_metrizable_D1_fails";
    case Status::not_metrizable_D2_fails: return "not_metrizable_D2_fails";
    case Status::not_metrizable_rank_fails: return "not_metrizable_rank_fails";
    case Status::ricci_vanishes_out_of_scope: return "ricci_vanishes_out_of_scope";
    case Status::inconclusive_mixed_sign: return "inconclusive_mixed_sign";
  }
  return "unknown";
}

Status status_from_string(std::string_view s) {
  for (auto st : {Status::metrizable_constant_curvature, Status::not_metrizable_D1_fails,
                  Status::not_metrizable_D2_fails, Status::not_metrizable_rank_fails,
                  Status::ricci_vanishes_out_of_scope, Status::inconclusive_mixed_sign}) {
    if (to_string(st) == s) return st;
  }
  throw std::invalid_argument("unknown verdict status '" + std::string(s) + "'");
}

bool is_not_metrizable(Status s) {
  return s == Status::not_metrizable_D1_fails || s == Status::not_metrizable_D2_fails ||
         s == Status::not_metrizable_rank_fails;
}

Verdict decide(ConditionReport report, const Tolerances& tol) {
  Verdict v;
  const auto& a = report.aggregates;
  const int n = report.dimension;
  v.witness = std::move(report);

  if (a.vanishing > 0) {
    v.status = Status::ricci_vanishes_out_of_scope;
    return v;
  }
  if (a.positive > 0 && a.negative > 0) {
    v.status = Status::inconclusive_mixed_sign;
    return v;
  }
  if (a.max_rank_deficiency > 0) {
    v.status = Status::not_metrizable_rank_fails;
    return v;
  }

  const bool first_order_ok =
      n == 2 ? (a.max_dJalpha <= tol.residual && a.max_dJR_alpha <= tol.residual) : a.max_D1 <= tol.residual;
  if (n >= 3 && a.max_iso <= tol.residual && a.max_dJalpha <= tol.residual) {
    v.annotation =
        "isotropic, rank condition A holds and d_J alpha = 0: in dimension >= 3 Finsler metrizability, "
        "scalar flag curvature, Einstein metrizability, constant flag curvature and Ricci constancy are "
        "equivalent for this spray";
  }
  if (!first_order_ok) {
    v.status = Status::not_metrizable_D1_fails;
    return v;
  }
  if (a.max_D2 > tol.residual) {
    v.status = Status::not_metrizable_D2_fails;
    return v;
  }
  v.status = Status::metrizable_constant_curvature;
  v.kappa = a.positive > 0 ? 1 : -1;
  return v;
}

Verdict verdict(const geom::Spray& spray, std::span<const Point> points, const Tolerances& tol) {
  return decide(evaluate_conditions(spray, points, tol), tol);
}

Verdict verdict(const geom::Spray& spray, const SampleSpec& sample, const Tolerances& tol) {
  const auto points = sample_points(spray, sample);
  return verdict(spray, points, tol);
}

}  // namespace sprayscope::checks
