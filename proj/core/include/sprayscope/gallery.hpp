#pragma once

// Named example sprays and Finsler functions with their expected outcomes.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sprayscope/checks.hpp"
#include "sprayscope/dsl.hpp"
#include "sprayscope/finsler.hpp"
#include "sprayscope/geom.hpp"

namespace sprayscope::gallery {

enum class Kind { spray, finsler };
enum class Provenance { paper, derived };

std::string to_string(Kind k);
std::string to_string(Provenance p);

struct Expected {
  std::optional<checks::Status> status;
  /// sign of R when the verdict is metrizable
  int kappa = 0;
  /// Closed-form Ricci scalar R.
  std::optional<dsl::Expression> ricci;
  /// Closed-form F^2 that reconstruction should return.
  std::optional<dsl::Expression> energy;
  /// Flag curvature of the defining Finsler function (constant or x-dependent).
  std::optional<dsl::Expression> flag_curvature;
  /// F^2_rec / F^2 when F is given.
  std::optional<double> energy_ratio;
  std::optional<finsler::Outcome> outcome;
  /// Expected d_h R components, when a closed form is known.
  std::vector<dsl::Expression> dh_ricci;
  Provenance provenance = Provenance::paper;
  /// The pipeline contradicts the stated expectation; `note` says how.
  bool disputed = false;
  std::string note;
};

using Params = std::map<std::string, std::string>;

struct GalleryEntry {
  std::string name;
  Kind kind = Kind::spray;
  dsl::Definition definition;
  Expected expected;
  Params params;
  /// Sampling box used when the caller does not give one.
  checks::Box box;

  int dimension() const;
  /// The spray under test; for a Finsler entry its geodesic spray.
  geom::Spray spray() const;
  checks::SampleSpec sample_spec(std::size_t count = 64, std::uint64_t seed = 42) const;
};

class UnknownExample : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::vector<std::string> list_examples();
/// Throws UnknownExample, or std::invalid_argument for bad parameters.
GalleryEntry get_example(const std::string& name, const Params& params = {});

/// Spray with G^i + P y^i. Throws std::invalid_argument when P fails the
/// numeric 1-homogeneity test at the given points.
dsl::SprayDefinition projective_deform(const dsl::SprayDefinition& spray, const dsl::Expression& P,
                                       std::span<const geom::Point> probe, double tol = 1e-9);

struct AffinePDE {
  double symmetry = 0.0;  // phi_x2 - psi_x1
  double phi_eq = 0.0;    // phi_x1x2 - phi phi_x2
  double psi_eq = 0.0;    // psi_x1x2 - psi psi_x1
};
/// Residuals of the integrability system for G = (phi (y1)^2, psi (y2)^2) / 2, at a full (x, y) point.
AffinePDE affine_pde_residuals(const dsl::Expression& phi, const dsl::Expression& psi, std::span<const double> point);

std::string export_definition(const GalleryEntry& entry);

}  // namespace sprayscope::gallery
