#include "sprayscope/finsler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sprayscope::finsler {

using ad::Jet;

Energy energy_of(const dsl::FinslerDefinition& def) {
  auto f = def.function;
  return [f](std::span<const double> point, int order) {
    const Jet j = ad::jet_evaluate(f, point, order);
    return j * j;
  };
}

Energy energy_from_square(const dsl::Expression& f2) {
  return [f2](std::span<const double> point, int order) { return ad::jet_evaluate(f2, point, order); };
}

Metric metric_from_energy(const Jet& f2, int n) {
  if (f2.order() < 2) throw std::invalid_argument("metric tensor needs an energy jet of order >= 2");
  Metric m;
  m.g.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.g(i, j) = 0.5 * f2.d(n + i, n + j);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.g, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  m.min_eigenvalue = ev.minCoeff();
  m.max_eigenvalue = ev.maxCoeff();
  const double lo = ev.cwiseAbs().minCoeff();
  m.condition = lo == 0.0 ? std::numeric_limits<double>::infinity() : ev.cwiseAbs().maxCoeff() / lo;
  return m;
}

Metric metric_tensor(const Energy& energy, int n, std::span<const double> point) {
  return metric_from_energy(energy(point, 2), n);
}

Metric metric_tensor(const dsl::FinslerDefinition& def, std::span<const double> point) {
  return metric_tensor(energy_of(def), def.dimension, point);
}

namespace {

// Solves a x = b for jets by elimination with partial pivoting on the values.
std::vector<Jet> solve(std::vector<Jet> a, std::vector<Jet> b, int n) {
  const auto un = static_cast<std::size_t>(n);
  auto at = [&](std::size_t r, std::size_t c) -> Jet& { return a[r * un + c]; };
  for (std::size_t col = 0; col < un; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < un; ++r)
      if (std::abs(at(r, col).value()) > std::abs(at(piv, col).value())) piv = r;
    if (at(piv, col).value() == 0.0) throw SingularMetricError("metric tensor is singular");
    if (piv != col) {
      for (std::size_t c = 0; c < un; ++c) std::swap(at(col, c), at(piv, c));
      std::swap(b[col], b[piv]);
    }
    for (std::size_t r = col + 1; r < un; ++r) {
      const Jet f = at(r, col) / at(col, col);
      for (std::size_t c = col; c < un; ++c) at(r, c) -= f * at(col, c);
      b[r] -= f * b[col];
    }
  }
  std::vector<Jet> x(un);
  for (std::size_t i = un; i-- > 0;) {
    Jet s = b[i];
    for (std::size_t c = i + 1; c < un; ++c) s -= at(i, c) * x[c];
    x[i] = s / at(i, i);
  }
  return x;
}

}  // namespace

geom::Spray geodesic_spray(std::string name, int n, std::vector<dsl::Expression> constraints, Energy energy) {
  return geom::Spray(
      std::move(name), n, std::move(constraints), [energy, n](std::span<const double> point, int order) {
        const int nv = 2 * n;
        const Jet L = energy(point, order + 2);
        std::vector<Jet> Ly;
        for (int l = 0; l < n; ++l) Ly.push_back(L.derivative(n + l));

        std::vector<Jet> g;
        g.reserve(static_cast<std::size_t>(n * n));
        Eigen::MatrixXd gv(n, n);
        for (int l = 0; l < n; ++l) {
          for (int m = 0; m < n; ++m) {
            g.push_back(0.5 * Ly[static_cast<std::size_t>(l)].derivative(n + m));
            gv(l, m) = g.back().value();
          }
        }
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gv, Eigen::EigenvaluesOnly);
        const auto ev = eig.eigenvalues().cwiseAbs();
        if (ev.minCoeff() == 0.0 || ev.maxCoeff() / ev.minCoeff() > kMaxCondition)
          throw SingularMetricError("metric tensor is singular or ill-conditioned at the point");

        std::vector<Jet> rhs;
        for (int l = 0; l < n; ++l) {
          const auto& ly = Ly[static_cast<std::size_t>(l)];
          Jet b = -L.derivative(l);
          for (int k = 0; k < n; ++k)
            b += Jet::variable(nv, order, n + k, point[static_cast<std::size_t>(n + k)]) * ly.derivative(k);
          rhs.push_back(0.25 * b.truncated(order));
        }
        return solve(std::move(g), std::move(rhs), n);
      });
}

geom::Spray geodesic_spray(const dsl::FinslerDefinition& def) {
  if (def.function.max_index() > def.dimension) throw dsl::DefinitionError("F references an out-of-range variable");
  return geodesic_spray(def.name, def.dimension, def.constraints, energy_of(def));
}

std::vector<double> geodesic_spray_of(const dsl::FinslerDefinition& def, std::span<const double> point) {
  return geodesic_spray(def).coefficients(point);
}

// ---------------------------------------------------------------------------

namespace {

ELResidual el_from(std::span<const double> G, const Jet& L, std::span<const double> point, int n) {
  ELResidual r;
  r.raw.resize(n);
  Eigen::VectorXd t1(n), t2(n), t3(n);
  for (int i = 0; i < n; ++i) {
    double a = 0.0;
    double b = 0.0;
    for (int k = 0; k < n; ++k) {
      a += point[static_cast<std::size_t>(n + k)] * L.d(k, n + i);
      b += 2.0 * G[static_cast<std::size_t>(k)] * L.d(n + k, n + i);
    }
    t1[i] = a;
    t2[i] = b;
    t3[i] = L.d(i);
    r.raw[i] = a - b - t3[i];
  }
  r.relative = r.raw.norm() / (1.0 + t1.norm() + t2.norm() + t3.norm());
  return r;
}

FlagResidual flag_from(const Eigen::MatrixXd& phi, const Jet& L, double kappa, std::span<const double> point, int n) {
  Eigen::MatrixXd m = phi;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double model = (i == j ? L.value() : 0.0) - 0.5 * point[static_cast<std::size_t>(n + i)] * L.d(n + j);
      m(i, j) -= kappa * model;
    }
  }
  FlagResidual r;
  r.raw = m.norm();
  r.relative = r.raw / (1.0 + phi.norm());
  return r;
}

double kappa_at(const Curvature& kappa, std::span<const double> point) {
  if (const auto* c = std::get_if<double>(&kappa)) return *c;
  return dsl::evaluate(std::get<dsl::Expression>(kappa), point);
}

}  // namespace

ELResidual euler_lagrange_residual(const geom::Spray& spray, const Energy& energy, std::span<const double> point) {
  const auto G = spray.coefficients(point);
  return el_from(G, energy(point, 2), point, spray.dimension());
}

FlagResidual flag_curvature_residual(const geom::Spray& spray, const Energy& energy, const Curvature& kappa,
                                     std::span<const double> point) {
  const Eigen::MatrixXd phi = geom::jacobi_endomorphism(spray, point);
  return flag_from(phi, energy(point, 1), kappa_at(kappa, point), point, spray.dimension());
}

// ---------------------------------------------------------------------------

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::finsler: return "finsler";
    case Outcome::conic_pseudo_finsler: return "conic_pseudo_finsler";
    case Outcome::failed: return "failed";
  }
  return "failed";
}

Outcome outcome_from_string(std::string_view s) {
  for (auto o : {Outcome::finsler, Outcome::conic_pseudo_finsler, Outcome::failed})
    if (to_string(o) == s) return o;
  throw std::invalid_argument("unknown reconstruction outcome '" + std::string(s) + "'");
}

Energy reconstructed_energy(const geom::Spray& spray, int kappa) {
  return [spray, kappa](std::span<const double> point, int order) {
    const geom::LocalSpray local(spray, point, order + 2);
    return static_cast<double>(kappa) * local.ricci_scalar();
  };
}

Reconstruction reconstruct_finsler(const geom::Spray& spray, std::span<const Point> points, double tol) {
  const int n = spray.dimension();
  Reconstruction rec;
  if (points.empty()) return rec;

  std::vector<geom::LocalSpray> locals;
  locals.reserve(points.size());
  for (const auto& p : points) {
    locals.emplace_back(spray, p, 4);
    const double R = locals.back().ricci_scalar().value();
    const int s = R > 0 ? 1 : (R < 0 ? -1 : 0);
    if (s == 0) throw std::logic_error("Ricci scalar vanishes at a sample point; nothing to reconstruct");
    if (rec.kappa == 0) rec.kappa = s;
    if (s != rec.kappa) throw std::logic_error("Ricci scalar changes sign on the sample");
  }

  rec.min_F2 = std::numeric_limits<double>::infinity();
  rec.min_g_eigen = std::numeric_limits<double>::infinity();
  for (const auto& local : locals) {
    FinslerSample s;
    s.point.assign(local.point().begin(), local.point().end());
    s.kappa = rec.kappa;
    const Jet L = static_cast<double>(rec.kappa) * local.ricci_scalar();
    s.F2 = L.value();
    const Metric m = metric_from_energy(L, n);
    s.g = m.g;
    s.g_eigen_min = m.min_eigenvalue;

    std::vector<double> G;
    for (const auto& g : local.G()) G.push_back(g.value());
    const auto el = el_from(G, L, local.point(), n);
    s.EL_residual = el.raw;
    s.EL_relative = el.relative;
    s.flag_residual = flag_from(local.values(local.phi()), L, rec.kappa, local.point(), n).relative;

    rec.max_EL = std::max(rec.max_EL, s.EL_relative);
    rec.max_flag = std::max(rec.max_flag, s.flag_residual);
    rec.min_F2 = std::min(rec.min_F2, s.F2);
    rec.min_g_eigen = std::min(rec.min_g_eigen, s.g_eigen_min);
    rec.samples.push_back(std::move(s));
  }

  if (rec.max_EL > tol || rec.max_flag > tol || !(rec.min_F2 > 0.0)) {
    rec.outcome = Outcome::failed;
  } else if (rec.min_g_eigen > 0.0) {
    rec.outcome = Outcome::finsler;
  } else {
    rec.outcome = Outcome::conic_pseudo_finsler;
  }
  return rec;
}

// ---------------------------------------------------------------------------

EinsteinReport check_einstein(const geom::Spray& spray, const Energy& energy, std::span<const Point> points,
                              double tol) {
  const int n = spray.dimension();
  EinsteinReport rep;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double big = 0.0;
  for (const auto& p : points) {
    const geom::LocalSpray local(spray, p, 3);
    const Jet L = energy(p, 1);
    if (L.value() <= tol) throw std::domain_error("F^2 is not positive at a sample point");
    const Jet lambda = local.ricci_scalar() / L;
    EinsteinSample s;
    s.point = p;
    s.lambda = lambda.value();
    const Eigen::Map<const Eigen::VectorXd> y(p.data() + n, n);
    s.dJ_lambda = local.dJ(lambda).norm() * y.norm() / (1.0 + std::abs(s.lambda));
    rep.max_dJ_lambda = std::max(rep.max_dJ_lambda, s.dJ_lambda);
    lo = std::min(lo, s.lambda);
    hi = std::max(hi, s.lambda);
    big = std::max(big, std::abs(s.lambda));
    rep.samples.push_back(std::move(s));
  }
  rep.pass = rep.max_dJ_lambda <= tol;
  rep.lambda_constant = rep.samples.empty() || hi - lo <= tol * (1.0 + big);
  return rep;
}

FunctionCheck check_finsler_function(const dsl::FinslerDefinition& def, std::span<const Point> points, double tol) {
  const int n = def.dimension;
  FunctionCheck c;
  c.min_F = std::numeric_limits<double>::infinity();
  c.min_g_eigen = std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    const Jet f = ad::jet_evaluate(def.function, p, 2);
    double euler = 0.0;
    for (int i = 0; i < n; ++i) euler += p[static_cast<std::size_t>(n + i)] * f.d(n + i);
    Point scaled = p;
    for (int i = n; i < 2 * n; ++i) scaled[static_cast<std::size_t>(i)] *= 2.0;
    const double f2y = dsl::evaluate(def.function, scaled);
    c.max_homogeneity = std::max({c.max_homogeneity, std::abs(euler - f.value()) / (1.0 + std::abs(f.value())),
                                  std::abs(f2y - 2.0 * f.value()) / (1.0 + 2.0 * std::abs(f.value()))});
    c.min_F = std::min(c.min_F, f.value());
    c.min_g_eigen = std::min(c.min_g_eigen, metric_from_energy(f * f, n).min_eigenvalue);
  }
  c.positive = c.min_F > 0.0;
  c.homogeneous = c.max_homogeneity <= tol;
  c.positive_definite = c.min_g_eigen > 0.0;
  return c;
}

}  // namespace sprayscope::finsler
