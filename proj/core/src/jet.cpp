#include "sprayscope/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>

#include "int_power.hpp"

namespace sprayscope::ad {

namespace {

void enumerate_degree(int nvars, int degree, int var, MultiIndex& current, std::vector<MultiIndex>& out) {
  if (var == nvars - 1) {
    current[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(degree);
    out.push_back(current);
    current[static_cast<std::size_t>(var)] = 0;
    return;
  }
  for (int k = degree; k >= 0; --k) {
    current[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(k);
    enumerate_degree(nvars, degree - k, var + 1, current, out);
  }
  current[static_cast<std::size_t>(var)] = 0;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

double multi_factorial(const MultiIndex& m) {
  double f = 1.0;
  for (auto e : m) f *= factorial(e);
  return f;
}

[[noreturn]] void domain_error(const char* what, double value) {
  throw dsl::DomainError(what, "jet with value " + std::to_string(value));
}

}  // namespace

JetLayout::JetLayout(int nvars, int order) : nvars_(nvars), order_(order) {
  if (nvars < 1) throw std::invalid_argument("jet needs at least one variable");
  if (order < 0 || order > kMaxOrder) throw std::invalid_argument("jet order out of range");

  MultiIndex current(static_cast<std::size_t>(nvars), 0);
  for (int d = 0; d <= order; ++d) {
    enumerate_degree(nvars, d, 0, current, monomials_);
    degree_end_.push_back(monomials_.size());
  }
  degrees_.reserve(monomials_.size());
  std::map<MultiIndex, std::int32_t> index;
  for (std::size_t i = 0; i < monomials_.size(); ++i) {
    const auto& m = monomials_[i];
    degrees_.push_back(std::accumulate(m.begin(), m.end(), 0));
    index.emplace(m, static_cast<std::int32_t>(i));
  }

  raise_.assign(monomials_.size() * static_cast<std::size_t>(nvars), -1);
  for (std::size_t i = 0; i < monomials_.size(); ++i) {
    if (degrees_[i] == order) continue;
    for (int v = 0; v < nvars; ++v) {
      MultiIndex m = monomials_[i];
      ++m[static_cast<std::size_t>(v)];
      raise_[i * static_cast<std::size_t>(nvars) + static_cast<std::size_t>(v)] = index.at(m);
    }
  }

  for (std::size_t a = 0; a < monomials_.size(); ++a) {
    const std::size_t limit = degree_end_[static_cast<std::size_t>(order - degrees_[a])];
    for (std::size_t b = 0; b < limit; ++b) {
      MultiIndex m = monomials_[a];
      for (std::size_t v = 0; v < m.size(); ++v) m[v] = static_cast<std::uint8_t>(m[v] + monomials_[b][v]);
      products_.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                           static_cast<std::uint32_t>(index.at(m))});
    }
  }
  std::stable_sort(products_.begin(), products_.end(),
                   [](const ProductTerm& l, const ProductTerm& r) { return l.out < r.out; });
}

std::int32_t JetLayout::find(const MultiIndex& m) const {
  if (m.size() != static_cast<std::size_t>(nvars_)) throw std::invalid_argument("multi-index has wrong length");
  std::int32_t idx = 0;
  for (int v = 0; v < nvars_; ++v) {
    for (int k = 0; k < m[static_cast<std::size_t>(v)]; ++k) {
      idx = raise(static_cast<std::size_t>(idx), v);
      if (idx < 0) return -1;
    }
  }
  return idx;
}

std::shared_ptr<const JetLayout> JetLayout::get(int nvars, int order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const JetLayout>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{nvars, order}];
  if (!slot) slot = std::make_shared<const JetLayout>(nvars, order);
  return slot;
}

// ---------------------------------------------------------------------------

Jet Jet::constant(int nvars, int order, double value) {
  auto layout = JetLayout::get(nvars, order);
  std::vector<double> c(layout->size(), 0.0);
  c[0] = value;
  return Jet(std::move(layout), std::move(c));
}

Jet Jet::variable(int nvars, int order, int var, double value) {
  if (var < 0 || var >= nvars) throw std::out_of_range("jet variable index out of range");
  Jet j = constant(nvars, order, value);
  if (order >= 1) j.coeffs_[static_cast<std::size_t>(j.layout_->raise(0, var))] = 1.0;
  return j;
}

double Jet::coefficient(const MultiIndex& m) const {
  const std::int32_t idx = layout_->find(m);
  if (idx < 0) throw std::out_of_range("multi-index degree exceeds jet order");
  return coeffs_[static_cast<std::size_t>(idx)];
}

double Jet::partial(const MultiIndex& m) const { return multi_factorial(m) * coefficient(m); }

double Jet::d(int var) const {
  const std::int32_t idx = layout_->raise(0, var);
  if (idx < 0) throw std::out_of_range("jet order too low for a first derivative");
  return coeffs_[static_cast<std::size_t>(idx)];
}

double Jet::d(int var_a, int var_b) const {
  const std::int32_t first = layout_->raise(0, var_a);
  const std::int32_t idx = first < 0 ? -1 : layout_->raise(static_cast<std::size_t>(first), var_b);
  if (idx < 0) throw std::out_of_range("jet order too low for a second derivative");
  return (var_a == var_b ? 2.0 : 1.0) * coeffs_[static_cast<std::size_t>(idx)];
}

Jet Jet::truncated(int order) const {
  if (order >= this->order()) return *this;
  auto layout = JetLayout::get(nvars(), order);
  std::vector<double> c(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(layout->size()));
  return Jet(std::move(layout), std::move(c));
}

Jet Jet::derivative(int var) const {
  if (order() < 1) throw std::out_of_range("cannot differentiate an order-0 jet");
  auto layout = JetLayout::get(nvars(), order() - 1);
  std::vector<double> c(layout->size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto up = static_cast<std::size_t>(layout_->raise(i, var));
    c[i] = (layout_->monomial(i)[static_cast<std::size_t>(var)] + 1) * coeffs_[up];
  }
  return Jet(std::move(layout), std::move(c));
}

Jet& Jet::operator+=(const Jet& rhs) {
  if (rhs.order() < order()) *this = truncated(rhs.order());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  if (rhs.order() < order()) *this = truncated(rhs.order());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

Jet& Jet::operator+=(double s) {
  coeffs_[0] += s;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  if (a.nvars() != b.nvars()) throw std::invalid_argument("jet variable count mismatch");
  const Jet& lo = a.order() <= b.order() ? a : b;
  auto layout = lo.layout_;
  std::vector<double> out(layout->size(), 0.0);
  for (const auto& t : layout->products()) out[t.out] += a.coeffs_[t.lhs] * b.coeffs_[t.rhs];
  return Jet(std::move(layout), std::move(out));
}

// h = a / b solved degree by degree: h_m = (a_m - sum_{b' != 0} h_{m-b'} b_{b'}) / b_0.
Jet operator/(const Jet& a, const Jet& b) {
  if (a.nvars() != b.nvars()) throw std::invalid_argument("jet variable count mismatch");
  const double b0 = b.coeffs_[0];
  if (b0 == 0.0) domain_error("division by a jet with zero constant term", b0);
  auto layout = (a.order() <= b.order() ? a : b).layout_;
  std::vector<double> h(layout->size(), 0.0);
  const auto& prods = layout->products();
  std::size_t t = 0;
  for (std::size_t m = 0; m < h.size(); ++m) {
    double acc = a.coeffs_[m];
    for (; t < prods.size() && prods[t].out == m; ++t) {
      if (prods[t].rhs != 0) acc -= h[prods[t].lhs] * b.coeffs_[prods[t].rhs];
    }
    h[m] = acc / b0;
  }
  return Jet(std::move(layout), std::move(h));
}

Jet compose(const Jet& g, std::span<const double> derivatives) {
  const int k = g.order();
  if (derivatives.size() < static_cast<std::size_t>(k) + 1) throw std::invalid_argument("not enough derivatives to compose");
  Jet delta = g;
  delta.coeffs_[0] = 0.0;
  // Horner in delta: sum_m f^(m)(g0) / m! * delta^m.
  Jet r = Jet::constant(g.nvars(), k, derivatives[static_cast<std::size_t>(k)] / factorial(k));
  for (int m = k - 1; m >= 0; --m) {
    r = r * delta;
    r.coeffs_[0] += derivatives[static_cast<std::size_t>(m)] / factorial(m);
  }
  return r;
}

namespace {

std::vector<double> power_derivatives(double g0, double q, int k) {
  std::vector<double> d(static_cast<std::size_t>(k) + 1);
  double falling = 1.0;
  for (int m = 0; m <= k; ++m) {
    d[static_cast<std::size_t>(m)] = falling * std::pow(g0, q - m);
    falling *= (q - m);
  }
  d[0] = std::pow(g0, q);
  return d;
}

}  // namespace

Jet sqrt(const Jet& g) {
  const double g0 = g.value();
  if (g0 < 0.0 || (g0 == 0.0 && g.order() > 0)) domain_error("sqrt of a non-positive jet", g0);
  auto d = power_derivatives(g0, 0.5, g.order());
  d[0] = std::sqrt(g0);
  return compose(g, d);
}

Jet exp(const Jet& g) {
  std::vector<double> d(static_cast<std::size_t>(g.order()) + 1, std::exp(g.value()));
  return compose(g, d);
}

Jet log(const Jet& g) {
  const double g0 = g.value();
  if (g0 <= 0.0) domain_error("log of a non-positive jet", g0);
  std::vector<double> d(static_cast<std::size_t>(g.order()) + 1);
  d[0] = std::log(g0);
  for (int m = 1; m <= g.order(); ++m)
    d[static_cast<std::size_t>(m)] = ((m % 2 == 1) ? 1.0 : -1.0) * factorial(m - 1) / std::pow(g0, m);
  return compose(g, d);
}

Jet sin(const Jet& g) {
  const double s = std::sin(g.value());
  const double c = std::cos(g.value());
  const double cycle[4] = {s, c, -s, -c};
  std::vector<double> d(static_cast<std::size_t>(g.order()) + 1);
  for (std::size_t m = 0; m < d.size(); ++m) d[m] = cycle[m % 4];
  return compose(g, d);
}

Jet cos(const Jet& g) {
  const double s = std::sin(g.value());
  const double c = std::cos(g.value());
  const double cycle[4] = {c, -s, -c, s};
  std::vector<double> d(static_cast<std::size_t>(g.order()) + 1);
  for (std::size_t m = 0; m < d.size(); ++m) d[m] = cycle[m % 4];
  return compose(g, d);
}

Jet abs(const Jet& g) {
  const double g0 = g.value();
  if (g0 == 0.0 && g.order() > 0) domain_error("abs is not differentiable at zero", g0);
  return g0 < 0.0 ? -g : g;
}

Jet pow(const Jet& g, std::int64_t exponent) {
  const Jet one = Jet::constant(g.nvars(), g.order(), 1.0);
  const Jet mag = detail::int_power(g, static_cast<std::uint64_t>(exponent < 0 ? -exponent : exponent), one);
  if (exponent >= 0) return mag;
  return one / mag;
}

Jet pow(const Jet& g, dsl::Rational exponent) {
  if (exponent.is_integer()) return pow(g, exponent.num);
  const double g0 = g.value();
  if (g0 < 0.0 || (g0 == 0.0 && (g.order() > 0 || exponent.num < 0)))
    domain_error("fractional power of a non-positive jet", g0);
  return compose(g, power_derivatives(g0, exponent.value(), g.order()));
}

double partial(const Jet& jet, const MultiIndex& m) { return jet.partial(m); }

// ---------------------------------------------------------------------------

namespace {

struct JetEvaluator {
  std::span<const double> point;
  int order;
  int nvars;
  std::size_t n;

  Jet eval(const dsl::Expression& e) const {
    return std::visit([&](const auto& node) { return apply(node, e); }, e.node().value);
  }

  // Primitive failures are reported against the node that triggered them.
  template <class Op>
  static Jet guarded(const dsl::Expression& e, Op op) {
    try {
      return op();
    } catch (const dsl::DomainError& err) {
      const std::string what = err.what();
      throw dsl::DomainError(what.substr(0, what.find(" in `")), dsl::to_string(e));
    }
  }

  Jet apply(const dsl::Variable& v, const dsl::Expression&) const {
    if (static_cast<std::size_t>(v.index) > n) throw std::out_of_range("variable index exceeds point dimension");
    const std::size_t slot = (v.kind == dsl::VarKind::position ? 0 : n) + static_cast<std::size_t>(v.index) - 1;
    return Jet::variable(nvars, order, static_cast<int>(slot), point[slot]);
  }
  Jet apply(const dsl::Constant& c, const dsl::Expression&) const { return Jet::constant(nvars, order, c.value); }
  Jet apply(const dsl::Negate& neg, const dsl::Expression&) const { return -eval(neg.operand); }
  Jet apply(const dsl::Binary& b, const dsl::Expression& e) const {
    Jet l = eval(b.lhs);
    Jet r = eval(b.rhs);
    switch (b.op) {
      case dsl::BinaryOp::add: return l + r;
      case dsl::BinaryOp::sub: return l - r;
      case dsl::BinaryOp::mul: return l * r;
      case dsl::BinaryOp::div: return guarded(e, [&] { return l / r; });
    }
    return l;
  }
  Jet apply(const dsl::Power& p, const dsl::Expression& e) const {
    Jet base = eval(p.base);
    return guarded(e, [&] { return pow(base, p.exponent); });
  }
  Jet apply(const dsl::Call& c, const dsl::Expression& e) const {
    Jet a = eval(c.arg);
    return guarded(e, [&] {
      switch (c.fn) {
        case dsl::Function::sqrt: return sqrt(a);
        case dsl::Function::abs: return abs(a);
        case dsl::Function::sin: return sin(a);
        case dsl::Function::cos: return cos(a);
        case dsl::Function::exp: return exp(a);
        case dsl::Function::log: return log(a);
      }
      return a;
    });
  }
};

}  // namespace

Jet jet_evaluate(const dsl::Expression& expr, std::span<const double> point, int order) {
  if (point.empty() || point.size() % 2 != 0) throw std::invalid_argument("point must have 2n coordinates");
  return JetEvaluator{point, order, static_cast<int>(point.size()), point.size() / 2}.eval(expr);
}

}  // namespace sprayscope::ad
