#include "sprayscope/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>

#include "int_power.hpp"

namespace sprayscope::dsl {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return {num, den};
}

std::string_view function_name(Function f) {
  switch (f) {
    case Function::sqrt: return "sqrt";
    case Function::abs: return "abs";
    case Function::sin: return "sin";
    case Function::cos: return "cos";
    case Function::exp: return "exp";
    case Function::log: return "log";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Expression construction

Expression::Expression() : Expression(constant(0.0)) {}

Expression Expression::variable(VarKind kind, int index) {
  if (index < 1) throw std::invalid_argument("variable index must be >= 1");
  return Expression(std::make_shared<const Node>(Node{Variable{kind, index}}));
}

Expression Expression::constant(double value) {
  return Expression(std::make_shared<const Node>(Node{Constant{value}}));
}

Expression Expression::call(Function f, Expression arg) {
  return Expression(std::make_shared<const Node>(Node{Call{f, std::move(arg)}}));
}

Expression Expression::power(Expression base, Rational exponent) {
  return Expression(
      std::make_shared<const Node>(Node{Power{std::move(base), make_rational(exponent.num, exponent.den)}}));
}

Expression operator+(Expression a, Expression b) {
  return Expression(std::make_shared<const Expression::Node>(
      Expression::Node{Binary{BinaryOp::add, std::move(a), std::move(b)}}));
}
Expression operator-(Expression a, Expression b) {
  return Expression(std::make_shared<const Expression::Node>(
      Expression::Node{Binary{BinaryOp::sub, std::move(a), std::move(b)}}));
}
Expression operator*(Expression a, Expression b) {
  return Expression(std::make_shared<const Expression::Node>(
      Expression::Node{Binary{BinaryOp::mul, std::move(a), std::move(b)}}));
}
Expression operator/(Expression a, Expression b) {
  return Expression(std::make_shared<const Expression::Node>(
      Expression::Node{Binary{BinaryOp::div, std::move(a), std::move(b)}}));
}
Expression operator-(Expression a) {
  return Expression(std::make_shared<const Expression::Node>(Expression::Node{Negate{std::move(a)}}));
}

bool operator==(const Expression& a, const Expression& b) {
  if (a.node_ == b.node_) return true;
  const auto& va = a.node().value;
  const auto& vb = b.node().value;
  if (va.index() != vb.index()) return false;
  return std::visit(
      overloaded{
          [&](const Variable& v) {
            const auto& w = std::get<Variable>(vb);
            return v.kind == w.kind && v.index == w.index;
          },
          [&](const Constant& c) { return c.value == std::get<Constant>(vb).value; },
          [&](const Negate& n) { return n.operand == std::get<Negate>(vb).operand; },
          [&](const Binary& e) {
            const auto& f = std::get<Binary>(vb);
            return e.op == f.op && e.lhs == f.lhs && e.rhs == f.rhs;
          },
          [&](const Power& p) {
            const auto& q = std::get<Power>(vb);
            return p.exponent == q.exponent && p.base == q.base;
          },
          [&](const Call& c) {
            const auto& d = std::get<Call>(vb);
            return c.fn == d.fn && c.arg == d.arg;
          },
      },
      va);
}

int Expression::max_index() const {
  return std::visit(overloaded{
                        [](const Variable& v) { return v.index; },
                        [](const Constant&) { return 0; },
                        [](const Negate& n) { return n.operand.max_index(); },
                        [](const Binary& b) { return std::max(b.lhs.max_index(), b.rhs.max_index()); },
                        [](const Power& p) { return p.base.max_index(); },
                        [](const Call& c) { return c.arg.max_index(); },
                    },
                    node().value);
}

// ---------------------------------------------------------------------------
// Printing

std::string to_string(const Expression& expr) {
  return std::visit(
      overloaded{
          [](const Variable& v) {
            return std::string(v.kind == VarKind::position ? "x" : "y") + std::to_string(v.index);
          },
          [](const Constant& c) {
            if (c.value < 0) return "(-" + format_double(-c.value) + ")";
            return format_double(c.value);
          },
          [](const Negate& n) { return "(-" + to_string(n.operand) + ")"; },
          [](const Binary& b) {
            static constexpr char ops[] = {'+', '-', '*', '/'};
            return "(" + to_string(b.lhs) + " " + ops[static_cast<int>(b.op)] + " " + to_string(b.rhs) + ")";
          },
          [](const Power& p) {
            std::string e;
            if (p.exponent.is_integer() && p.exponent.num >= 0) {
              e = std::to_string(p.exponent.num);
            } else if (p.exponent.is_integer()) {
              e = "(" + std::to_string(p.exponent.num) + ")";
            } else {
              e = "(" + std::to_string(p.exponent.num) + "/" + std::to_string(p.exponent.den) + ")";
            }
            return "(" + to_string(p.base) + "^" + e + ")";
          },
          [](const Call& c) { return std::string(function_name(c.fn)) + "(" + to_string(c.arg) + ")"; },
      },
      expr.node().value);
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  Parser(std::string_view text, int dimension) : text_(text), dim_(dimension) {}

  Expression parse() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
    Expression e = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError(std::string("unexpected character '") + text_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) throw ParseError(std::string("expected '") + c + "' but reached end of input", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  Expression parse_sum() {
    Expression lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = std::move(lhs) + parse_product();
      } else if (accept('-')) {
        lhs = std::move(lhs) - parse_product();
      } else {
        return lhs;
      }
    }
  }

  Expression parse_product() {
    Expression lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = std::move(lhs) * parse_unary();
      } else if (accept('/')) {
        lhs = std::move(lhs) / parse_unary();
      } else {
        return lhs;
      }
    }
  }

  Expression parse_unary() {
    if (accept('-')) return -parse_unary();
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  Expression parse_power() {
    Expression base = parse_primary();
    if (accept('^')) {
      Rational exponent = parse_exponent();
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '^')
        throw ParseError("chained '^' is not supported; parenthesise the base", pos_);
      return Expression::power(std::move(base), exponent);
    }
    return base;
  }

  // Literal rational: [-]int, [-]decimal, or a parenthesised [-]a[/b].
  Rational parse_exponent() {
    skip_ws();
    if (accept('(')) {
      Rational r = parse_signed_literal();
      if (accept('/')) {
        Rational d = parse_signed_literal();
        if (d.num == 0) throw ParseError("zero denominator in exponent", pos_);
        r = make_rational(r.num * d.den, r.den * d.num);
      }
      expect(')');
      return r;
    }
    return parse_signed_literal();
  }

  Rational parse_signed_literal() {
    skip_ws();
    bool negative = false;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      negative = text_[pos_] == '-';
      ++pos_;
      skip_ws();
    }
    const std::size_t start = pos_;
    std::int64_t num = 0;
    std::int64_t den = 1;
    bool any = false;
    bool seen_dot = false;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        if (num > (INT64_C(1) << 50) || den > (INT64_C(1) << 50)) throw ParseError("exponent literal too long", start);
        num = num * 10 + (c - '0');
        if (seen_dot) den *= 10;
        any = true;
      } else if (c == '.' && !seen_dot) {
        seen_dot = true;
      } else {
        break;
      }
      ++pos_;
    }
    if (!any) throw ParseError("exponent of '^' must be a literal rational", start);
    return make_rational(negative ? -num : num, den);
  }

  Expression parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expression e = parse_sum();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  Expression parse_number() {
    const std::size_t start = pos_;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
    if (ec != std::errc()) throw ParseError("malformed number", start);
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return Expression::constant(value);
  }

  Expression parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);

    static const std::pair<std::string_view, Function> functions[] = {
        {"sqrt", Function::sqrt}, {"abs", Function::abs}, {"sin", Function::sin},
        {"cos", Function::cos},   {"exp", Function::exp}, {"log", Function::log},
    };
    for (const auto& [fname, fn] : functions) {
      if (name == fname) {
        expect('(');
        Expression arg = parse_sum();
        expect(')');
        return Expression::call(fn, std::move(arg));
      }
    }

    if (name.size() >= 2 && (name[0] == 'x' || name[0] == 'y')) {
      std::string_view digits = name.substr(1);
      if (!digits.empty() && digits[0] == '_') digits.remove_prefix(1);
      const bool numeric =
          !digits.empty() && std::all_of(digits.begin(), digits.end(), [](char d) { return std::isdigit(static_cast<unsigned char>(d)); });
      if (numeric) {
        int index = 0;
        std::from_chars(digits.data(), digits.data() + digits.size(), index);
        if (index < 1 || index > dim_) {
          throw ParseError("variable index out of range: '" + std::string(name) + "' with dimension " +
                               std::to_string(dim_),
                           start);
        }
        return Expression::variable(name[0] == 'x' ? VarKind::position : VarKind::velocity, index);
      }
    }
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view text_;
  int dim_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression parse_expression(std::string_view text, int dimension) {
  if (dimension < 1) throw std::invalid_argument("dimension must be positive");
  return Parser(text, dimension).parse();
}

// ---------------------------------------------------------------------------
// Evaluation

double evaluate(const Expression& expr, std::span<const double> point) {
  const std::size_t n = point.size() / 2;
  return std::visit(
      overloaded{
          [&](const Variable& v) -> double {
            if (static_cast<std::size_t>(v.index) > n)
              throw std::out_of_range("variable index exceeds point dimension");
            return point[(v.kind == VarKind::position ? 0 : n) + static_cast<std::size_t>(v.index) - 1];
          },
          [](const Constant& c) { return c.value; },
          [&](const Negate& e) { return -evaluate(e.operand, point); },
          [&](const Binary& b) -> double {
            const double l = evaluate(b.lhs, point);
            const double r = evaluate(b.rhs, point);
            switch (b.op) {
              case BinaryOp::add: return l + r;
              case BinaryOp::sub: return l - r;
              case BinaryOp::mul: return l * r;
              case BinaryOp::div:
                if (r == 0.0) throw DomainError("division by zero", to_string(expr));
                return l / r;
            }
            return 0.0;
          },
          [&](const Power& p) -> double {
            const double base = evaluate(p.base, point);
            if (p.exponent.is_integer()) {
              const std::int64_t e = p.exponent.num;
              const double mag = detail::int_power(base, static_cast<std::uint64_t>(e < 0 ? -e : e), 1.0);
              if (e >= 0) return mag;
              if (mag == 0.0) throw DomainError("negative power of zero", to_string(expr));
              return 1.0 / mag;
            }
            if (base < 0.0 || (base == 0.0 && p.exponent.num < 0))
              throw DomainError("fractional power of a non-positive base", to_string(expr));
            return std::pow(base, p.exponent.value());
          },
          [&](const Call& c) -> double {
            const double a = evaluate(c.arg, point);
            switch (c.fn) {
              case Function::sqrt:
                if (a < 0.0) throw DomainError("sqrt of a negative value", to_string(expr));
                return std::sqrt(a);
              case Function::abs: return std::abs(a);
              case Function::sin: return std::sin(a);
              case Function::cos: return std::cos(a);
              case Function::exp: return std::exp(a);
              case Function::log:
                if (a <= 0.0) throw DomainError("log of a non-positive value", to_string(expr));
                return std::log(a);
            }
            return 0.0;
          },
      },
      expr.node().value);
}

// ---------------------------------------------------------------------------
// Definition files

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct RawDefinition {
  std::optional<std::string> name;
  std::optional<int> dim;
  std::map<int, std::pair<std::string, int>> coefficients;  // index -> (text, line)
  std::optional<std::pair<std::string, int>> function;
  std::vector<std::pair<std::string, int>> constraints;
};

RawDefinition read_raw(std::string_view text) {
  RawDefinition raw;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (eq == std::string_view::npos) throw DefinitionError(where + "expected `key = value`");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (value.empty()) throw DefinitionError(where + "empty value for `" + key + "`");

    if (key == "name") {
      if (raw.name) throw DefinitionError(where + "duplicate `name`");
      raw.name = value;
    } else if (key == "dim") {
      if (raw.dim) throw DefinitionError(where + "duplicate `dim`");
      int d = 0;
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), d);
      if (ec != std::errc() || p != value.data() + value.size())
        throw DefinitionError(where + "`dim` must be an integer");
      raw.dim = d;
    } else if (key == "F") {
      if (raw.function) throw DefinitionError(where + "duplicate `F`");
      raw.function = {value, line_no};
    } else if (key == "constraint") {
      raw.constraints.emplace_back(value, line_no);
    } else if (key.size() >= 2 && key[0] == 'G' &&
               std::all_of(key.begin() + 1, key.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      const int index = std::stoi(key.substr(1));
      if (!raw.coefficients.emplace(index, std::pair{value, line_no}).second)
        throw DefinitionError(where + "duplicate `" + key + "`");
    } else {
      throw DefinitionError(where + "unknown key `" + key + "`");
    }
    if (end == text.size()) break;
  }
  if (!raw.dim) throw DefinitionError("missing field `dim`");
  if (*raw.dim < 2) throw DefinitionError("`dim` must be at least 2");
  return raw;
}

Expression parse_field(const std::pair<std::string, int>& field, int dim, const std::string& key) {
  try {
    return parse_expression(field.first, dim);
  } catch (const ParseError& e) {
    throw DefinitionError("line " + std::to_string(field.second) + " (`" + key + "`): " + e.what());
  }
}

std::vector<Expression> parse_constraints(const RawDefinition& raw) {
  std::vector<Expression> out;
  for (const auto& c : raw.constraints) out.push_back(parse_field(c, *raw.dim, "constraint"));
  return out;
}

SprayDefinition spray_from_raw(const RawDefinition& raw) {
  const int n = *raw.dim;
  if (raw.function) throw DefinitionError("spray file must not define `F`");
  if (static_cast<int>(raw.coefficients.size()) != n || raw.coefficients.begin()->first != 1 ||
      raw.coefficients.rbegin()->first != n) {
    throw DefinitionError("wrong coefficient count: expected G1..G" + std::to_string(n) + ", found " +
                          std::to_string(raw.coefficients.size()) + " coefficient(s)");
  }
  SprayDefinition def;
  def.name = raw.name.value_or("unnamed");
  def.dimension = n;
  for (const auto& [index, field] : raw.coefficients)
    def.coefficients.push_back(parse_field(field, n, "G" + std::to_string(index)));
  def.constraints = parse_constraints(raw);
  return def;
}

FinslerDefinition finsler_from_raw(const RawDefinition& raw) {
  if (!raw.coefficients.empty()) throw DefinitionError("Finsler file must not define `G` coefficients");
  if (!raw.function) throw DefinitionError("missing field `F`");
  FinslerDefinition def;
  def.name = raw.name.value_or("unnamed");
  def.dimension = *raw.dim;
  def.function = parse_field(*raw.function, def.dimension, "F");
  def.constraints = parse_constraints(raw);
  return def;
}

std::string header(const std::string& name, int dim) {
  return "name = " + name + "\ndim = " + std::to_string(dim) + "\n";
}

}  // namespace

Definition parse_definition_file(std::string_view text) {
  RawDefinition raw = read_raw(text);
  if (raw.function) return finsler_from_raw(raw);
  if (raw.coefficients.empty()) throw DefinitionError("missing spray coefficients `G1..Gn` or Finsler function `F`");
  return spray_from_raw(raw);
}

SprayDefinition parse_spray_file(std::string_view text) { return spray_from_raw(read_raw(text)); }

FinslerDefinition parse_finsler_file(std::string_view text) { return finsler_from_raw(read_raw(text)); }

std::string to_file(const SprayDefinition& def) {
  std::string out = header(def.name, def.dimension);
  for (std::size_t i = 0; i < def.coefficients.size(); ++i)
    out += "G" + std::to_string(i + 1) + " = " + to_string(def.coefficients[i]) + "\n";
  for (const auto& c : def.constraints) out += "constraint = " + to_string(c) + "\n";
  return out;
}

std::string to_file(const FinslerDefinition& def) {
  std::string out = header(def.name, def.dimension);
  out += "F = " + to_string(def.function) + "\n";
  for (const auto& c : def.constraints) out += "constraint = " + to_string(c) + "\n";
  return out;
}

}  // namespace sprayscope::dsl
