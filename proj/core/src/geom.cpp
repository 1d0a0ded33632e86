#include "sprayscope/geom.hpp"

#include <cmath>
#include <stdexcept>

namespace sprayscope::geom {

using ad::Jet;

Spray::Spray(std::string name, int dimension, std::vector<dsl::Expression> constraints, JetSource source)
    : name_(std::move(name)), dimension_(dimension), constraints_(std::move(constraints)), source_(std::move(source)) {
  if (dimension_ < 2) throw std::invalid_argument("spray dimension must be at least 2");
}

Spray Spray::from_definition(const dsl::SprayDefinition& def) {
  if (static_cast<int>(def.coefficients.size()) != def.dimension)
    throw dsl::DefinitionError("spray needs exactly one coefficient per dimension");
  for (const auto& g : def.coefficients) {
    if (g.max_index() > def.dimension) throw dsl::DefinitionError("coefficient references an out-of-range variable");
  }
  auto coefficients = def.coefficients;
  return Spray(def.name, def.dimension, def.constraints,
               [coefficients](std::span<const double> point, int order) {
                 std::vector<Jet> out;
                 out.reserve(coefficients.size());
                 for (const auto& g : coefficients) out.push_back(ad::jet_evaluate(g, point, order));
                 return out;
               });
}

std::vector<Jet> Spray::coefficient_jets(std::span<const double> point, int order) const {
  if (point.size() != 2 * static_cast<std::size_t>(dimension_))
    throw std::invalid_argument("point must have 2n coordinates");
  return source_(point, order);
}

std::vector<double> Spray::coefficients(std::span<const double> point) const {
  std::vector<double> out;
  for (const auto& j : coefficient_jets(point, 0)) out.push_back(j.value());
  return out;
}

Spray Spray::deformed(const dsl::Expression& P, std::string name) const {
  const int n = dimension_;
  JetSource base = source_;
  return Spray(name.empty() ? name_ + "_deformed" : std::move(name), n, constraints_,
               [base, P, n](std::span<const double> point, int order) {
                 auto g = base(point, order);
                 const Jet p = ad::jet_evaluate(P, point, order);
                 for (int i = 0; i < n; ++i) {
                   const auto slot = static_cast<std::size_t>(n + i);
                   g[static_cast<std::size_t>(i)] += p * Jet::variable(2 * n, order, n + i, point[slot]);
                 }
                 return g;
               });
}

// ---------------------------------------------------------------------------

LocalSpray::LocalSpray(const Spray& spray, std::span<const double> point, int order)
    : n_(spray.dimension()), order_(order), point_(point.begin(), point.end()) {
  if (order < 1) throw std::invalid_argument("local spray needs jets of order >= 1");
  double y2 = 0.0;
  for (double v : velocity()) y2 += v * v;
  if (y2 == 0.0) throw std::invalid_argument("point lies on the zero section (y = 0)");

  G_ = spray.coefficient_jets(point_, order_);
  const auto n = static_cast<std::size_t>(n_);
  N_.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) N_.push_back(G_[i].derivative(n_ + static_cast<int>(j)));

  if (order_ < 2) return;

  // R^i_j = 2 dG^i/dx^j - S(N^i_j) - N^i_r N^r_j
  phi_.reserve(n * n);
  double term_x = 0.0;
  double term_s = 0.0;
  double term_nn = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Jet gx = 2.0 * G_[i].derivative(static_cast<int>(j));
      const Jet sn = S(N_[i * n + j]);
      Jet nn = Jet::constant(2 * n_, order_ - 1, 0.0);
      for (std::size_t r = 0; r < n; ++r) nn += N_[i * n + r] * N_[r * n + j];
      term_x += gx.value() * gx.value();
      term_s += sn.value() * sn.value();
      term_nn += nn.value() * nn.value();
      phi_.push_back(gx - sn - nn);
    }
  }
  curvature_scale_ = std::sqrt(term_x) + std::sqrt(term_s) + std::sqrt(term_nn);

  trace_ = phi_[0];
  for (std::size_t i = 1; i < n; ++i) trace_ += phi_[i * n + i];
  ricci_ = trace_ / static_cast<double>(n_ - 1);

  // alpha_j = -(sum_i y^i (R^i_j - R delta^i_j)) / |y|^2
  Jet norm2 = Jet::constant(2 * n_, order_, 0.0);
  for (int i = 0; i < n_; ++i) norm2 += velocity(i) * velocity(i);
  alpha_.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    Jet acc = Jet::constant(2 * n_, phi_[0].order(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      Jet entry = phi_[i * n + j];
      if (i == j) entry -= ricci_;
      acc += velocity(static_cast<int>(i)) * entry;
    }
    alpha_.push_back(-(acc / norm2));
  }
}

Jet LocalSpray::position(int i) const {
  return Jet::variable(2 * n_, order_, i, point_[static_cast<std::size_t>(i)]);
}

Jet LocalSpray::velocity(int i) const {
  return Jet::variable(2 * n_, order_, n_ + i, point_[static_cast<std::size_t>(n_ + i)]);
}

Jet LocalSpray::lift(const dsl::Expression& f, int order) const { return ad::jet_evaluate(f, point_, order); }

Jet LocalSpray::S(const Jet& f) const {
  if (f.order() < 1) throw std::out_of_range("S(f) needs a jet of order >= 1");
  Jet out = Jet::constant(2 * n_, f.order() - 1, 0.0);
  for (int k = 0; k < n_; ++k) {
    out += velocity(k) * f.derivative(k);
    out -= 2.0 * (G_[static_cast<std::size_t>(k)] * f.derivative(n_ + k));
  }
  return out;
}

Eigen::VectorXd LocalSpray::dJ(const Jet& f) const {
  Eigen::VectorXd out(n_);
  for (int i = 0; i < n_; ++i) out[i] = f.d(n_ + i);
  return out;
}

Eigen::VectorXd LocalSpray::dh(const Jet& f) const {
  Eigen::VectorXd out(n_);
  const auto n = static_cast<std::size_t>(n_);
  for (int i = 0; i < n_; ++i) {
    double v = f.d(i);
    for (std::size_t j = 0; j < n; ++j) v -= N_[j * n + static_cast<std::size_t>(i)].value() * f.d(n_ + static_cast<int>(j));
    out[i] = v;
  }
  return out;
}

Eigen::MatrixXd LocalSpray::dJ(std::span<const Jet> omega) const {
  if (omega.size() != static_cast<std::size_t>(n_)) throw std::invalid_argument("one-form needs n components");
  Eigen::MatrixXd out(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      out(i, j) = omega[static_cast<std::size_t>(j)].d(n_ + i) - omega[static_cast<std::size_t>(i)].d(n_ + j);
  return out;
}

Eigen::MatrixXd LocalSpray::ddJ(const Jet& f) const {
  const int n = n_;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      m(j, i) = f.d(j, n + i) - f.d(i, n + j);
      const double c = f.d(n + j, n + i);
      m(n + j, i) = c;
      m(i, n + j) = -c;
    }
  }
  return m;
}

Eigen::MatrixXd LocalSpray::values(std::span<const Jet> square) const {
  Eigen::MatrixXd m(n_, n_);
  const auto n = static_cast<std::size_t>(n_);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = square[i * n + j].value();
  return m;
}

// ---------------------------------------------------------------------------

Eigen::VectorXd isotropic_alpha_2d(const Eigen::MatrixXd& phi, std::span<const double> velocity) {
  if (phi.rows() != 2 || velocity.size() != 2) throw std::invalid_argument("closed-form alpha is two-dimensional");
  const double y1 = velocity[0];
  const double y2 = velocity[1];
  if (y1 == 0.0 && y2 == 0.0) throw std::invalid_argument("closed-form alpha needs y != 0");
  Eigen::VectorXd a(2);
  a[0] = y1 != 0.0 ? phi(1, 1) / y1 : -phi(1, 0) / y2;
  a[1] = y2 != 0.0 ? phi(0, 0) / y2 : -phi(0, 1) / y1;
  return a;
}

GeometryFrame build_frame(const LocalSpray& local, double tol) {
  if (local.order() < 4) throw std::invalid_argument("a full frame needs jets of order 4");
  const int n = local.dimension();
  GeometryFrame f;
  f.point.assign(local.point().begin(), local.point().end());
  f.N = local.values(local.N());
  f.Phi = local.values(local.phi());
  f.Ric = local.trace_phi().value();
  f.R = local.ricci_scalar().value();
  f.curvature_scale = local.curvature_scale();

  const Eigen::Map<const Eigen::VectorXd> y(local.velocity().data(), n);
  f.alpha.resize(n);
  for (int j = 0; j < n; ++j) f.alpha[j] = local.alpha()[static_cast<std::size_t>(j)].value();

  const Eigen::MatrixXd iso = f.Phi - f.R * Eigen::MatrixXd::Identity(n, n) + y * f.alpha.transpose();
  f.iso_residual = iso.norm();
  f.isotropic = f.iso_residual <= tol * (1.0 + f.Phi.norm());

  f.dJ_alpha = local.dJ(local.alpha());
  double ay = 0.0;
  for (const auto& a : local.alpha())
    for (int i = 0; i < n; ++i) ay += a.d(n + i) * a.d(n + i);
  f.alpha_y_norm = std::sqrt(ay);

  f.dJ_R = local.dJ(local.ricci_scalar());
  f.dJ_TrPhi = local.dJ(local.trace_phi());
  f.dh_R = local.dh(local.ricci_scalar());
  f.dh_TrPhi = local.dh(local.trace_phi());
  {
    double dx = 0.0;
    double dv = 0.0;
    for (int i = 0; i < n; ++i) {
      dx = std::max(dx, std::abs(local.trace_phi().d(i)));
      dv = std::max(dv, std::abs(local.trace_phi().d(i) - f.dh_TrPhi[i]));
    }
    f.dh_TrPhi_scale = dx + dv;
  }
  f.S_R = local.S(local.ricci_scalar()).value();
  f.ddJ_TrPhi = local.ddJ(local.trace_phi());
  if (n == 2) f.alpha_2d = isotropic_alpha_2d(f.Phi, local.velocity());

  f.phi_y_residual = (f.Phi * y).cwiseAbs().maxCoeff() / (1.0 + f.Phi.norm() * y.norm());
  f.trace_residual = std::abs(f.Phi.trace() - (n - 1) * f.R);
  return f;
}

GeometryFrame build_frame(const Spray& spray, std::span<const double> point, double tol) {
  return build_frame(LocalSpray(spray, point, LocalSpray::kDefaultOrder), tol);
}

Eigen::MatrixXd connection_coefficients(const Spray& spray, std::span<const double> point) {
  const LocalSpray local(spray, point, 1);
  return local.values(local.N());
}

Eigen::MatrixXd jacobi_endomorphism(const Spray& spray, std::span<const double> point) {
  const LocalSpray local(spray, point, 2);
  return local.values(local.phi());
}

Ricci ricci_scalar(const Spray& spray, std::span<const double> point) {
  const LocalSpray local(spray, point, 2);
  return {local.trace_phi().value(), local.ricci_scalar().value()};
}

Isotropy isotropy_decomposition(const Spray& spray, std::span<const double> point) {
  const LocalSpray local(spray, point, 2);
  const int n = local.dimension();
  const Eigen::MatrixXd phi = local.values(local.phi());
  Isotropy out{local.ricci_scalar().value(), Eigen::VectorXd(n), 0.0};
  for (int j = 0; j < n; ++j) out.alpha[j] = local.alpha()[static_cast<std::size_t>(j)].value();
  const Eigen::Map<const Eigen::VectorXd> y(local.velocity().data(), n);
  out.residual = (phi - out.R * Eigen::MatrixXd::Identity(n, n) + y * out.alpha.transpose()).norm();
  return out;
}

Eigen::VectorXd isotropic_alpha_2d(const Spray& spray, std::span<const double> point) {
  if (spray.dimension() != 2) throw std::invalid_argument("closed-form alpha is two-dimensional");
  const LocalSpray local(spray, point, 2);
  return isotropic_alpha_2d(local.values(local.phi()), local.velocity());
}

Eigen::VectorXd dJ_of_scalar(const Spray& spray, const dsl::Expression& f, std::span<const double> point) {
  const LocalSpray local(spray, point, 1);
  return local.dJ(local.lift(f, 1));
}

Eigen::VectorXd dh_of_scalar(const Spray& spray, const dsl::Expression& f, std::span<const double> point) {
  const LocalSpray local(spray, point, 1);
  return local.dh(local.lift(f, 1));
}

double S_of_scalar(const Spray& spray, const dsl::Expression& f, std::span<const double> point) {
  const LocalSpray local(spray, point, 1);
  return local.S(local.lift(f, 1)).value();
}

Eigen::MatrixXd dJ_of_oneform(const Spray& spray, std::span<const dsl::Expression> omega, std::span<const double> point) {
  const LocalSpray local(spray, point, 1);
  std::vector<Jet> jets;
  for (const auto& w : omega) jets.push_back(local.lift(w, 1));
  return local.dJ(jets);
}

Eigen::MatrixXd ddJ_of_scalar(const Spray& spray, const dsl::Expression& f, std::span<const double> point) {
  const LocalSpray local(spray, point, 1);
  return local.ddJ(local.lift(f, 2));
}

}  // namespace sprayscope::geom
