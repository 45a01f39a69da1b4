#include "curv4/expr.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <unordered_map>
#include <vector>

#include "curv4/errors.hpp"

namespace curv4 {

struct ExprNode {
  Op op = Op::constant;
  double value = 0.0;
  int var = 0;
  Func func = Func::sin;
  // Empty handles for leaves; the default Expr would recurse into zero_node().
  Expr a{std::shared_ptr<const ExprNode>{}};
  Expr b{std::shared_ptr<const ExprNode>{}};
  bool has_vars = false;
  std::size_t count = 1;
};

namespace {

std::shared_ptr<const ExprNode> make_constant_node(double c) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::constant;
  n->value = c;
  return n;
}

const std::shared_ptr<const ExprNode>& zero_node() {
  static const auto z = make_constant_node(0.0);
  return z;
}

double checked(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw DomainError(std::string("non-finite result in ") + what);
  }
  return v;
}

double apply_pow(double base, double exponent) {
  if (exponent == std::floor(exponent) && std::fabs(exponent) <= 64.0) {
    const int n = static_cast<int>(std::fabs(exponent));
    double r = 1.0;
    double f = base;
    for (int k = n; k > 0; k >>= 1) {
      if (k & 1) r *= f;
      f *= f;
    }
    if (exponent < 0) {
      if (r == 0.0) throw DomainError("zero raised to a negative power");
      r = 1.0 / r;
    }
    return checked(r, "^");
  }
  if (base < 0.0) throw DomainError("negative base with non-integer exponent");
  if (base == 0.0 && exponent < 0.0) {
    throw DomainError("zero raised to a negative power");
  }
  return checked(std::pow(base, exponent), "^");
}

double apply_func(Func f, double x) {
  switch (f) {
    case Func::sin: return std::sin(x);
    case Func::cos: return std::cos(x);
    case Func::exp: return checked(std::exp(x), "exp");
    case Func::log:
      if (x <= 0.0) throw DomainError("log of a non-positive number");
      return std::log(x);
    case Func::sqrt:
      if (x < 0.0) throw DomainError("sqrt of a negative number");
      return std::sqrt(x);
    case Func::atan: return std::atan(x);
  }
  return 0.0;
}

double apply_binary(Op op, double x, double y) {
  switch (op) {
    case Op::add: return checked(x + y, "+");
    case Op::sub: return checked(x - y, "-");
    case Op::mul: return checked(x * y, "*");
    case Op::div:
      if (y == 0.0) throw DomainError("division by zero");
      return checked(x / y, "/");
    case Op::pow: return apply_pow(x, y);
    default: break;
  }
  return 0.0;
}

// Folds a constant subexpression; returns false when folding would raise.
template <class F>
bool try_fold(F&& f, double& out) {
  try {
    out = f();
    return std::isfinite(out);
  } catch (const DomainError&) {
    return false;
  }
}

}  // namespace

Expr make_node(Op op, Expr a, Expr b, Func f) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->func = f;
  n->has_vars = a.depends_on_variables() || b.depends_on_variables();
  n->count = 1 + a.node_count() + (op == Op::neg || op == Op::func ? 0 : b.node_count());
  n->a = std::move(a);
  n->b = std::move(b);
  return Expr(std::shared_ptr<const ExprNode>(std::move(n)));
}

Expr::Expr() : node_(zero_node()) {}
Expr::Expr(double c) : node_(c == 0.0 ? zero_node() : make_constant_node(c)) {}

Expr Expr::variable(int index) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::variable;
  n->var = index;
  n->has_vars = true;
  return Expr(std::shared_ptr<const ExprNode>(std::move(n)));
}

Expr Expr::function(Func f, Expr arg) {
  double v = 0.0;
  if (arg.is_constant() &&
      try_fold([&] { return apply_func(f, arg.constant_value()); }, v)) {
    return Expr(v);
  }
  return make_node(Op::func, std::move(arg), Expr(), f);
}

Op Expr::op() const { return node_->op; }
double Expr::constant_value() const { return node_->value; }
int Expr::variable_index() const { return node_->var; }
Func Expr::func() const { return node_->func; }
const Expr& Expr::lhs() const { return node_->a; }
const Expr& Expr::rhs() const { return node_->b; }
bool Expr::depends_on_variables() const { return node_->has_vars; }
std::size_t Expr::node_count() const { return node_->count; }

double Expr::eval(const Point& p) const {
  const ExprNode& n = *node_;
  switch (n.op) {
    case Op::constant: return n.value;
    case Op::variable: return p[static_cast<std::size_t>(n.var)];
    case Op::neg: return -n.a.eval(p);
    case Op::func: return apply_func(n.func, n.a.eval(p));
    default: return apply_binary(n.op, n.a.eval(p), n.b.eval(p));
  }
}

const char* func_name(Func f) {
  switch (f) {
    case Func::sin: return "sin";
    case Func::cos: return "cos";
    case Func::exp: return "exp";
    case Func::log: return "log";
    case Func::sqrt: return "sqrt";
    case Func::atan: return "atan";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Builders

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  double v = 0.0;
  if (a.is_constant() && b.is_constant() &&
      try_fold([&] { return a.constant_value() + b.constant_value(); }, v)) {
    return Expr(v);
  }
  return make_node(Op::add, a, b, Func::sin);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  double v = 0.0;
  if (a.is_constant() && b.is_constant() &&
      try_fold([&] { return a.constant_value() - b.constant_value(); }, v)) {
    return Expr(v);
  }
  return make_node(Op::sub, a, b, Func::sin);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr();
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  double v = 0.0;
  if (a.is_constant() && b.is_constant() &&
      try_fold([&] { return a.constant_value() * b.constant_value(); }, v)) {
    return Expr(v);
  }
  return make_node(Op::mul, a, b, Func::sin);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_one()) return a;
  if (a.is_zero() && !b.is_zero()) return Expr();
  double v = 0.0;
  if (a.is_constant() && b.is_constant() &&
      try_fold([&] { return apply_binary(Op::div, a.constant_value(), b.constant_value()); }, v)) {
    return Expr(v);
  }
  return make_node(Op::div, a, b, Func::sin);
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr(-a.constant_value());
  if (a.op() == Op::neg) return a.lhs();
  return make_node(Op::neg, a, Expr(), Func::sin);
}

Expr pow(const Expr& base, const Expr& exponent) {
  if (exponent.is_zero()) return Expr(1.0);
  if (exponent.is_one()) return base;
  double v = 0.0;
  if (base.is_constant() && exponent.is_constant() &&
      try_fold([&] { return apply_pow(base.constant_value(), exponent.constant_value()); }, v)) {
    return Expr(v);
  }
  return make_node(Op::pow, base, exponent, Func::sin);
}

Expr sin(const Expr& a) { return Expr::function(Func::sin, a); }
Expr cos(const Expr& a) { return Expr::function(Func::cos, a); }
Expr exp(const Expr& a) { return Expr::function(Func::exp, a); }
Expr log(const Expr& a) { return Expr::function(Func::log, a); }
Expr sqrt(const Expr& a) { return Expr::function(Func::sqrt, a); }
Expr atan(const Expr& a) { return Expr::function(Func::atan, a); }

// ---------------------------------------------------------------------------
// Differentiation

namespace {

class Differentiator {
 public:
  explicit Differentiator(int var) : var_(var) {}

  Expr d(const Expr& e) {
    if (!e.depends_on_variables()) return Expr();
    auto it = memo_.find(e.node());
    if (it != memo_.end()) return it->second;
    Expr r = compute(e);
    memo_.emplace(e.node(), r);
    return r;
  }

 private:
  Expr compute(const Expr& e) {
    const Expr& u = e.lhs();
    const Expr& v = e.rhs();
    switch (e.op()) {
      case Op::constant: return Expr();
      case Op::variable: return Expr(e.variable_index() == var_ ? 1.0 : 0.0);
      case Op::neg: return -d(u);
      case Op::add: return d(u) + d(v);
      case Op::sub: return d(u) - d(v);
      case Op::mul: return d(u) * v + u * d(v);
      case Op::div: {
        const Expr du = d(u);
        const Expr dv = d(v);
        if (dv.is_zero()) return du / v;
        return (du * v - u * dv) / (v * v);
      }
      case Op::pow: {
        if (!v.depends_on_variables()) {
          const double c = v.constant_value();
          if (v.is_constant() && c == 2.0) return Expr(2.0) * u * d(u);
          return v * pow(u, v - Expr(1.0)) * d(u);
        }
        return e * (d(v) * log(u) + v * d(u) / u);
      }
      case Op::func: {
        const Expr du = d(u);
        switch (e.func()) {
          case Func::sin: return cos(u) * du;
          case Func::cos: return -(sin(u) * du);
          case Func::exp: return e * du;
          case Func::log: return du / u;
          case Func::sqrt: return du / (Expr(2.0) * e);
          case Func::atan: return du / (Expr(1.0) + u * u);
        }
      }
    }
    return Expr();
  }

  int var_;
  std::unordered_map<const ExprNode*, Expr> memo_;
};

}  // namespace

Expr differentiate(const Expr& e, int var) {
  Differentiator diff(var);
  return diff.d(e);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

void print_to(const Expr& e, std::string& out) {
  switch (e.op()) {
    case Op::constant: {
      char buf[40];
      const double c = e.constant_value();
      std::snprintf(buf, sizeof buf, "%.17g", std::fabs(c));
      if (c < 0) {
        out += "(-";
        out += buf;
        out += ')';
      } else {
        out += buf;
      }
      return;
    }
    case Op::variable:
      out += 'x';
      out += static_cast<char>('1' + e.variable_index());
      return;
    case Op::neg:
      out += "(-";
      print_to(e.lhs(), out);
      out += ')';
      return;
    case Op::func:
      out += func_name(e.func());
      out += '(';
      print_to(e.lhs(), out);
      out += ')';
      return;
    default: break;
  }
  static constexpr const char* kSymbols = "+-*/^";
  const char sym = kSymbols[static_cast<int>(e.op()) - static_cast<int>(Op::add)];
  out += '(';
  print_to(e.lhs(), out);
  out += sym;
  print_to(e.rhs(), out);
  out += ')';
}

}  // namespace

std::string print(const Expr& e) {
  std::string out;
  print_to(e, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
  Tok kind;
  std::size_t pos;  // 1-based
  std::string_view text;
  double value = 0.0;
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::number: return "number";
    case Tok::ident: return "identifier";
    case Tok::plus: return "'+'";
    case Tok::minus: return "'-'";
    case Tok::star: return "'*'";
    case Tok::slash: return "'/'";
    case Tok::caret: return "'^'";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::end: return "end of input";
  }
  return "?";
}

bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> toks;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (is_digit(c) || (c == '.' && i + 1 < s.size() && is_digit(s[i + 1]))) {
      while (i < s.size() && (is_digit(s[i]) || s[i] == '.')) ++i;
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && is_digit(s[j])) {
          i = j;
          while (i < s.size() && is_digit(s[i])) ++i;
        }
      }
      Token t{Tok::number, start + 1, s.substr(start, i - start)};
      const auto res = std::from_chars(s.data() + start, s.data() + i, t.value);
      if (res.ec != std::errc() || res.ptr != s.data() + i) {
        throw SyntaxError(start + 1, "malformed number '" + std::string(t.text) + "'");
      }
      toks.push_back(t);
      continue;
    }
    if (is_ident_start(c)) {
      while (i < s.size() && (is_ident_start(s[i]) || is_digit(s[i]))) ++i;
      toks.push_back({Tok::ident, start + 1, s.substr(start, i - start)});
      continue;
    }
    Tok k;
    switch (c) {
      case '+': k = Tok::plus; break;
      case '-': k = Tok::minus; break;
      case '*': k = Tok::star; break;
      case '/': k = Tok::slash; break;
      case '^': k = Tok::caret; break;
      case '(': k = Tok::lparen; break;
      case ')': k = Tok::rparen; break;
      default:
        throw SyntaxError(start + 1, std::string("unexpected character '") + c + "'");
    }
    toks.push_back({k, start + 1, s.substr(start, 1)});
    ++i;
  }
  toks.push_back({Tok::end, s.size() + 1, {}});
  return toks;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(tokenize(src)) {}

  Expr parse_all() {
    Expr e = expr();
    if (peek().kind != Tok::end) {
      throw SyntaxError(peek().pos, std::string("expected operator or end of input, found ") +
                                        describe(peek().kind));
    }
    return e;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  const Token& next() { return toks_[i_++]; }

  void expect(Tok k) {
    if (peek().kind != k) {
      throw SyntaxError(peek().pos, std::string("expected ") + describe(k) + ", found " +
                                        describe(peek().kind));
    }
    ++i_;
  }

  Expr expr() {
    Expr e = term();
    while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
      const bool plus = next().kind == Tok::plus;
      Expr r = term();
      e = plus ? make_node(Op::add, e, r, Func::sin) : make_node(Op::sub, e, r, Func::sin);
    }
    return e;
  }

  Expr term() {
    Expr e = unary();
    while (peek().kind == Tok::star || peek().kind == Tok::slash) {
      const bool mul = next().kind == Tok::star;
      Expr r = unary();
      e = mul ? make_node(Op::mul, e, r, Func::sin) : make_node(Op::div, e, r, Func::sin);
    }
    return e;
  }

  Expr unary() {
    if (peek().kind == Tok::minus) {
      next();
      return make_node(Op::neg, unary(), Expr(), Func::sin);
    }
    if (peek().kind == Tok::plus) {
      next();
      return unary();
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (peek().kind == Tok::caret) {
      next();
      return make_node(Op::pow, base, unary(), Func::sin);
    }
    return base;
  }

  Expr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::number: next(); return Expr(t.value);
      case Tok::lparen: {
        next();
        Expr e = expr();
        expect(Tok::rparen);
        return e;
      }
      case Tok::ident: return identifier();
      default:
        throw SyntaxError(t.pos, std::string("expected number, variable, function or '(', found ") +
                                     describe(t.kind));
    }
  }

  Expr identifier() {
    const Token t = next();
    if (t.text.size() == 2 && t.text[0] == 'x' && t.text[1] >= '1' && t.text[1] <= '4') {
      return Expr::variable(t.text[1] - '1');
    }
    static constexpr Func kFuncs[] = {Func::sin, Func::cos, Func::exp,
                                      Func::log, Func::sqrt, Func::atan};
    for (Func f : kFuncs) {
      if (t.text == func_name(f)) {
        expect(Tok::lparen);
        Expr arg = expr();
        expect(Tok::rparen);
        return make_node(Op::func, arg, Expr(), f);
      }
    }
    throw UnknownIdentifier(t.pos, std::string(t.text));
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

}  // namespace

Expr parse(std::string_view source) { return Parser(source).parse_all(); }

}  // namespace curv4
