#pragma once

// Finsler functions: metric tensor, geodesic spray, Euler-Lagrange and flag
// curvature residuals, and reconstruction of F^2 = sign(R) R from a spray
// that passed the metrizability checks.
//
// Everything is phrased in terms of the energy L = F^2, carried as a jet.

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sprayscope/checks.hpp"
#include "sprayscope/dsl.hpp"
#include "sprayscope/geom.hpp"
#include "sprayscope/jet.hpp"

namespace sprayscope::finsler {

using geom::Point;

class SingularMetricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Jets of F^2 about a point, to the requested order.
using Energy = std::function<ad::Jet(std::span<const double> point, int order)>;

Energy energy_of(const dsl::FinslerDefinition& def);
/// Energy given directly as an expression for F^2 (e.g. a conic metric).
Energy energy_from_square(const dsl::Expression& f2);

struct Metric {
  Eigen::MatrixXd g;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  /// max |eigenvalue| / min |eigenvalue|
  double condition = 0.0;
};

/// g_ij = 1/2 d^2 F^2 / dy^i dy^j from a jet of F^2 of order >= 2.
Metric metric_from_energy(const ad::Jet& f2, int n);
Metric metric_tensor(const Energy& energy, int n, std::span<const double> point);
Metric metric_tensor(const dsl::FinslerDefinition& def, std::span<const double> point);

inline constexpr double kMaxCondition = 1e10;

/// The geodesic spray G^i = 1/4 g^il (y^k d^2F^2/dx^k dy^l - dF^2/dx^l),
/// solved in jet arithmetic so that its own derivatives are exact.
geom::Spray geodesic_spray(const dsl::FinslerDefinition& def);
geom::Spray geodesic_spray(std::string name, int n, std::vector<dsl::Expression> constraints, Energy energy);
/// Values G^i at one point; throws SingularMetricError when cond(g) > 1e10.
std::vector<double> geodesic_spray_of(const dsl::FinslerDefinition& def, std::span<const double> point);

struct ELResidual {
  Eigen::VectorXd raw;  // E_i = S(dF^2/dy^i) - dF^2/dx^i
  double relative = 0.0;
};
ELResidual euler_lagrange_residual(const geom::Spray& spray, const Energy& energy, std::span<const double> point);

/// kappa may be a constant or an expression (in x, or even in x and y).
using Curvature = std::variant<double, dsl::Expression>;

struct FlagResidual {
  double raw = 0.0;  // |Phi - kappa (F^2 J - F d_J F (x) C)|_F
  double relative = 0.0;
};
FlagResidual flag_curvature_residual(const geom::Spray& spray, const Energy& energy, const Curvature& kappa,
                                     std::span<const double> point);

// --- reconstruction --------------------------------------------------------

enum class Outcome { finsler, conic_pseudo_finsler, failed };
std::string to_string(Outcome o);
Outcome outcome_from_string(std::string_view s);

struct FinslerSample {
  Point point;
  double F2 = 0.0;
  Eigen::MatrixXd g;
  double g_eigen_min = 0.0;
  Eigen::VectorXd EL_residual;
  double EL_relative = 0.0;
  double flag_residual = 0.0;
  int kappa = 0;
};

struct Reconstruction {
  std::vector<FinslerSample> samples;
  Outcome outcome = Outcome::failed;
  int kappa = 0;
  double max_EL = 0.0;
  double max_flag = 0.0;
  double min_F2 = 0.0;
  double min_g_eigen = 0.0;
};

/// F^2 = sign(R) R at each point, then verified. Throws std::logic_error when
/// R vanishes or changes sign on the sample.
Reconstruction reconstruct_finsler(const geom::Spray& spray, std::span<const Point> points, double tol = 1e-8);

/// Energy sign(R) R of a spray, usable wherever an Energy is expected.
Energy reconstructed_energy(const geom::Spray& spray, int kappa);

// --- Einstein and Finsler-function checks ----------------------------------

struct EinsteinSample {
  Point point;
  double lambda = 0.0;
  /// |d_J lambda| |y| / (1 + |lambda|)
  double dJ_lambda = 0.0;
};

struct EinsteinReport {
  std::vector<EinsteinSample> samples;
  double max_dJ_lambda = 0.0;
  /// lambda depends on x only
  bool pass = false;
  /// lambda is the same number at every sample
  bool lambda_constant = false;
};

/// lambda = R / F^2; throws std::domain_error when F^2 <= tol at a point.
EinsteinReport check_einstein(const geom::Spray& spray, const Energy& energy, std::span<const Point> points,
                              double tol = 1e-8);

struct FunctionCheck {
  double max_homogeneity = 0.0;  // relative, from y.dF/dy - F and F(x, 2y) - 2F
  double min_F = 0.0;
  double min_g_eigen = 0.0;
  bool positive = false;
  bool homogeneous = false;
  bool positive_definite = false;
};

FunctionCheck check_finsler_function(const dsl::FinslerDefinition& def, std::span<const Point> points,
                                     double tol = 1e-8);

}  // namespace sprayscope::finsler
