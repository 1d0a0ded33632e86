#pragma once

// Hand-rolled random generators for expressions, sprays and points, plus a
// finite-difference oracle. Nothing here touches the jet code, so tests can
// compare jet output against it.

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "sprayscope/dsl.hpp"
#include "sprayscope/geom.hpp"
#include "sprayscope/jet.hpp"

namespace sprayscope::testing {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);
int uniform_int(Rng& rng, int lo, int hi);

/// Smooth expression in x1..xn, y1..yn, defined on all of R^{2n}. Only
/// wrapped forms such as sqrt(1 + e^2) or e / (1 + f^2) are used, so
/// evaluation never leaves the domain.
dsl::Expression random_expression(Rng& rng, int n, int depth = 3);

/// Polynomial in x1..xn of total degree <= 2 with small rational-looking coefficients.
dsl::Expression random_polynomial_x(Rng& rng, int n, int degree = 2);

/// G^i = sum_{j<=k} c^i_jk(x) y^j y^k with each c a polynomial, optionally
/// over a denominator 1 + q(x)^2.
dsl::SprayDefinition random_spray(Rng& rng, int n);

/// 2-D affine spray (phi y1^2, psi y2^2) / 2 with phi = U_x1, psi = U_x2 for
/// a random polynomial U. These have d_J alpha = 0.
dsl::SprayDefinition random_gradient_affine_spray(Rng& rng);

/// Half-plane spray deformed by P = lambda F0 for a random lambda.
dsl::SprayDefinition random_deformed_half_plane(Rng& rng);

/// x in [-1, 1]^n, y in [-2, 2]^n with |y| >= 0.3.
geom::Point random_point(Rng& rng, int n);
/// Same, with x_n in [0.3, 2] (upper half space).
geom::Point random_half_space_point(Rng& rng, int n);

using ScalarField = std::function<double(std::span<const double>)>;

/// Nested central differences with one Richardson step. `step` defaults to a
/// value tuned to the derivative order.
double fd_partial(const ScalarField& f, std::span<const double> point, const ad::MultiIndex& m, double step = 0.0);

/// max(|a|, floor) relative comparison used against finite differences.
bool close_relative(double actual, double expected, double tol, double floor = 1.0);

}  // namespace sprayscope::testing
