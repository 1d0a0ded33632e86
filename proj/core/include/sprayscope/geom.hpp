#pragma once

// Geometry of a spray S = y^i d/dx^i - 2 G^i d/dy^i at a point of the slit
// tangent bundle: nonlinear connection, Jacobi endomorphism, Ricci scalar,
// isotropy decomposition and the derivations d_J, d_h, S.
//
// Every derived scalar is carried as a jet, so derivatives of R, Tr(Phi) and
// alpha come out of the same Taylor expansion of G^i without numerical
// re-differentiation. Coordinates of a jet are ordered (x1..xn, y1..yn).

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sprayscope/dsl.hpp"
#include "sprayscope/jet.hpp"

namespace sprayscope::geom {

using Point = std::vector<double>;

/// A spray given by jets of its coefficients G^i at any admissible point.
class Spray {
 public:
  using JetSource = std::function<std::vector<ad::Jet>(std::span<const double> point, int order)>;

  Spray(std::string name, int dimension, std::vector<dsl::Expression> constraints, JetSource source);

  static Spray from_definition(const dsl::SprayDefinition& def);

  const std::string& name() const { return name_; }
  int dimension() const { return dimension_; }
  const std::vector<dsl::Expression>& constraints() const { return constraints_; }

  std::vector<ad::Jet> coefficient_jets(std::span<const double> point, int order) const;
  std::vector<double> coefficients(std::span<const double> point) const;

  /// The projectively related spray with coefficients G^i + P y^i.
  Spray deformed(const dsl::Expression& P, std::string name = {}) const;

 private:
  std::string name_;
  int dimension_;
  std::vector<dsl::Expression> constraints_;
  JetSource source_;
};

/// Jets of a spray and of its curvature at one point.
class LocalSpray {
 public:
  static constexpr int kDefaultOrder = 4;

  LocalSpray(const Spray& spray, std::span<const double> point, int order = kDefaultOrder);

  int dimension() const { return n_; }
  int order() const { return order_; }
  std::span<const double> point() const { return point_; }
  std::span<const double> velocity() const { return std::span<const double>(point_).subspan(static_cast<std::size_t>(n_)); }

  const std::vector<ad::Jet>& G() const { return G_; }
  /// N^i_j = dG^i/dy^j, row-major.
  const std::vector<ad::Jet>& N() const { return N_; }
  /// R^i_j, row-major; empty when order < 2.
  const std::vector<ad::Jet>& phi() const { return phi_; }
  const ad::Jet& trace_phi() const { return trace_; }
  const ad::Jet& ricci_scalar() const { return ricci_; }
  /// Least-squares alpha along the Liouville direction.
  const std::vector<ad::Jet>& alpha() const { return alpha_; }
  /// Sum of the magnitudes of the three terms that make up Phi.
  double curvature_scale() const { return curvature_scale_; }

  ad::Jet position(int i) const;
  ad::Jet velocity(int i) const;
  /// Jet of a user scalar expanded at the same point.
  ad::Jet lift(const dsl::Expression& f, int order) const;

  /// S(f) = y^k df/dx^k - 2 G^k df/dy^k; the result has order f.order() - 1.
  ad::Jet S(const ad::Jet& f) const;
  /// (d_J f)_i = df/dy^i
  Eigen::VectorXd dJ(const ad::Jet& f) const;
  /// (d_h f)_i = df/dx^i - N^j_i df/dy^j
  Eigen::VectorXd dh(const ad::Jet& f) const;
  /// (d_J omega)_ij = d omega_j / dy^i - d omega_i / dy^j
  Eigen::MatrixXd dJ(std::span<const ad::Jet> omega) const;
  /// Coordinate matrix of d d_J f in the basis (dx^1..dx^n, dy^1..dy^n).
  Eigen::MatrixXd ddJ(const ad::Jet& f) const;

  Eigen::MatrixXd values(std::span<const ad::Jet> square) const;

 private:
  int n_;
  int order_;
  Point point_;
  std::vector<ad::Jet> G_;
  std::vector<ad::Jet> N_;
  std::vector<ad::Jet> phi_;
  ad::Jet trace_;
  ad::Jet ricci_;
  std::vector<ad::Jet> alpha_;
  double curvature_scale_ = 0.0;
};

struct GeometryFrame {
  Point point;
  Eigen::MatrixXd N;
  Eigen::MatrixXd Phi;
  double Ric = 0.0;
  double R = 0.0;
  Eigen::VectorXd alpha;
  /// Frobenius norm of Phi - R J + alpha (x) C.
  double iso_residual = 0.0;
  bool isotropic = false;
  Eigen::MatrixXd dJ_alpha;
  /// Frobenius norm of d alpha_i / dy^j, the scale for dJ_alpha.
  double alpha_y_norm = 0.0;
  Eigen::VectorXd dJ_R;
  Eigen::VectorXd dJ_TrPhi;
  Eigen::VectorXd dh_R;
  Eigen::VectorXd dh_TrPhi;
  /// Magnitudes of the two parts of d_h Tr(Phi), the scale for dh_TrPhi.
  double dh_TrPhi_scale = 0.0;
  double S_R = 0.0;
  Eigen::MatrixXd ddJ_TrPhi;
  /// Closed-form 2-D alpha; set only when n = 2.
  std::optional<Eigen::VectorXd> alpha_2d;

  /// max_i |Phi^i_j y^j| / (1 + |Phi| |y|)
  double phi_y_residual = 0.0;
  /// |Tr(Phi) - (n-1) R|
  double trace_residual = 0.0;
  double curvature_scale = 0.0;
};

Eigen::MatrixXd connection_coefficients(const Spray& spray, std::span<const double> point);
Eigen::MatrixXd jacobi_endomorphism(const Spray& spray, std::span<const double> point);

struct Ricci {
  double Ric;
  double R;
};
Ricci ricci_scalar(const Spray& spray, std::span<const double> point);

struct Isotropy {
  double R;
  Eigen::VectorXd alpha;
  double residual;
};
Isotropy isotropy_decomposition(const Spray& spray, std::span<const double> point);

/// alpha_1 = R^2_2 / y^1 (or -R^2_1 / y^2), alpha_2 = -R^1_2 / y^1 (or R^1_1 / y^2).
Eigen::VectorXd isotropic_alpha_2d(const Eigen::MatrixXd& phi, std::span<const double> velocity);
Eigen::VectorXd isotropic_alpha_2d(const Spray& spray, std::span<const double> point);

Eigen::VectorXd dJ_of_scalar(const Spray& spray, const dsl::Expression& f, std::span<const double> point);
Eigen::VectorXd dh_of_scalar(const Spray& spray, const dsl::Expression& f, std::span<const double> point);
double S_of_scalar(const Spray& spray, const dsl::Expression& f, std::span<const double> point);
Eigen::MatrixXd dJ_of_oneform(const Spray& spray, std::span<const dsl::Expression> omega, std::span<const double> point);
Eigen::MatrixXd ddJ_of_scalar(const Spray& spray, const dsl::Expression& f, std::span<const double> point);

GeometryFrame build_frame(const LocalSpray& local, double tol = 1e-8);
GeometryFrame build_frame(const Spray& spray, std::span<const double> point, double tol = 1e-8);

}  // namespace sprayscope::geom
