#pragma once

// Truncated multivariate Taylor arithmetic ("jets").
//
// A Jet of order k in v variables stores the Taylor coefficients
// c_m = (d^|m| f / dz^m) / m! for every multi-index m with |m| <= k,
// expanded about a fixed point. Coefficients are stored in graded order
// (all degree-0 terms, then degree 1, ...), so the coefficients of an
// order-k jet are a prefix of those of the order-(k+1) jet of the same
// function.

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "sprayscope/dsl.hpp"

namespace sprayscope::ad {

inline constexpr int kMaxOrder = 8;

/// Exponents of a monomial, one per variable.
using MultiIndex = std::vector<std::uint8_t>;

/// Shared, immutable bookkeeping for one (variable count, order) pair.
class JetLayout {
 public:
  struct ProductTerm {
    std::uint32_t lhs;
    std::uint32_t rhs;
    std::uint32_t out;
  };

  static std::shared_ptr<const JetLayout> get(int nvars, int order);

  int nvars() const { return nvars_; }
  int order() const { return order_; }
  std::size_t size() const { return monomials_.size(); }
  /// Number of coefficients of total degree <= d.
  std::size_t prefix(int degree) const { return degree_end_[static_cast<std::size_t>(degree)]; }
  int degree(std::size_t index) const { return degrees_[index]; }
  const MultiIndex& monomial(std::size_t index) const { return monomials_[index]; }
  /// Index of monomial(index) + e_var, or -1 when it exceeds the order.
  std::int32_t raise(std::size_t index, int var) const { return raise_[index * static_cast<std::size_t>(nvars_) + static_cast<std::size_t>(var)]; }
  /// Index of a multi-index, or -1 when it exceeds the order.
  std::int32_t find(const MultiIndex& m) const;
  /// All (a, b, a+b) triples with |a| + |b| <= order, sorted by `out`.
  const std::vector<ProductTerm>& products() const { return products_; }

  JetLayout(int nvars, int order);

 private:
  int nvars_;
  int order_;
  std::vector<MultiIndex> monomials_;
  std::vector<int> degrees_;
  std::vector<std::size_t> degree_end_;
  std::vector<std::int32_t> raise_;
  std::vector<ProductTerm> products_;
};

class Jet {
 public:
  Jet() = default;

  static Jet constant(int nvars, int order, double value);
  /// Jet of coordinate `var` expanded about `value`.
  static Jet variable(int nvars, int order, int var, double value);

  int nvars() const { return layout_ ? layout_->nvars() : 0; }
  int order() const { return layout_ ? layout_->order() : 0; }
  std::size_t size() const { return coeffs_.size(); }
  const JetLayout& layout() const { return *layout_; }

  double value() const { return coeffs_.front(); }
  std::span<const double> coefficients() const { return coeffs_; }
  double coefficient(const MultiIndex& m) const;
  /// Raw mixed partial derivative m! * c_m.
  double partial(const MultiIndex& m) const;
  /// Convenience for first and second derivatives.
  double d(int var) const;
  double d(int var_a, int var_b) const;

  Jet truncated(int order) const;
  /// Exact derivative of the truncated polynomial; the result has order - 1.
  Jet derivative(int var) const;

  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(double s);
  Jet& operator+=(double s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator-(Jet a) { return a *= -1.0; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a += -s; }
  friend Jet operator-(double s, Jet a) { return (-a) + s; }
  friend Jet operator/(Jet a, double s) { return a *= 1.0 / s; }

 private:
  Jet(std::shared_ptr<const JetLayout> layout, std::vector<double> coeffs)
      : layout_(std::move(layout)), coeffs_(std::move(coeffs)) {}
  friend Jet compose(const Jet&, std::span<const double>);

  std::shared_ptr<const JetLayout> layout_;
  std::vector<double> coeffs_;
};

/// f(g) for a scalar function given by its derivatives f^(m)(g0), m = 0..order.
Jet compose(const Jet& g, std::span<const double> derivatives);

Jet sqrt(const Jet& g);
Jet exp(const Jet& g);
Jet log(const Jet& g);
Jet sin(const Jet& g);
Jet cos(const Jet& g);
Jet abs(const Jet& g);
Jet pow(const Jet& g, std::int64_t exponent);
Jet pow(const Jet& g, dsl::Rational exponent);

/// Truncated Taylor expansion of `expr` about `point` (2n coordinates).
Jet jet_evaluate(const dsl::Expression& expr, std::span<const double> point, int order);

/// m! * coefficient; throws std::out_of_range when |m| exceeds the order.
double partial(const Jet& jet, const MultiIndex& m);

}  // namespace sprayscope::ad
