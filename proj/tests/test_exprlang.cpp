#include "curv4/errors.hpp"
#include "curv4/expr.hpp"
#include "support.hpp"

using namespace curv4;
using testsupport::x;

TEST_CASE("parse and evaluate simple arithmetic") {
  const Expr e = parse("x1^2 + x2*x3");
  CHECK(e.eval({1, 2, 3, 0}) == 7.0);
  // The parser keeps the literal exponent as its own node.
  CHECK(e.node_count() == 7);
}

TEST_CASE("stereographic factor at the origin") {
  CHECK(parse("4/(1 + x1^2 + x2^2 + x3^2 + x4^2)^2").eval({0, 0, 0, 0}) == 4.0);
}

TEST_CASE("precedence and associativity") {
  const Point p{2, 3, 0, 0};
  CHECK(parse("-x1^2").eval(p) == -4.0);
  CHECK(parse("(-x1)^2").eval(p) == 4.0);
  CHECK(parse("x1^x2^2").eval(p) == 512.0);  // right-associative
  CHECK(parse("x1 - x2 - 1").eval(p) == -2.0);
  CHECK(parse("x2 / x1 / 3").eval(p) == doctest::Approx(0.5));
  CHECK(parse("2*x1 + 3*x2^2").eval(p) == 31.0);
  CHECK(parse("1.5e1 + .5").eval(p) == 15.5);
}

TEST_CASE("library functions") {
  const Point p{1, 0, 0, 0};
  CHECK(parse("exp(0)").eval({0.3, 0.1, 0, 0}) == 1.0);
  CHECK(std::fabs(parse("atan(x1)").eval(p) - M_PI / 4) <= 1e-15);
  CHECK(parse("sqrt(4)").eval(p) == 2.0);
  CHECK(parse("log(exp(2))").eval(p) == doctest::Approx(2.0));
  CHECK(parse("cos(0) + sin(0)").eval(p) == 1.0);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(parse("x1/x2").eval({1, 0, 0, 0}), DomainError);
  CHECK_THROWS_AS(parse("log(x1)").eval({-1, 0, 0, 0}), DomainError);
  CHECK_THROWS_AS(parse("sqrt(x1)").eval({-1, 0, 0, 0}), DomainError);
  CHECK_THROWS_AS(parse("log(x1)").eval({0, 0, 0, 0}), DomainError);
  CHECK_THROWS_AS(parse("x1^(-1)").eval({0, 0, 0, 0}), DomainError);
  CHECK_THROWS_AS(parse("x1^0.5").eval({-1, 0, 0, 0}), DomainError);
  CHECK_THROWS_AS(parse("exp(x1)").eval({1000, 0, 0, 0}), DomainError);
}

TEST_CASE("syntax errors carry 1-based positions") {
  auto position_of = [](const char* src) -> std::size_t {
    try {
      parse(src);
    } catch (const SyntaxError& e) {
      return e.position();
    }
    return 0;
  };
  CHECK(position_of("sin(") == 5);
  CHECK(position_of("x1 +") == 5);
  CHECK(position_of("x1 $ 2") == 4);
  CHECK(position_of("(x1") == 4);
  CHECK(position_of("x1 x2") == 4);
  CHECK(position_of("") == 1);
  CHECK(position_of("sin x1") == 5);  // application needs parentheses
  CHECK_THROWS_AS(parse("foo(x1)"), UnknownIdentifier);
  CHECK_THROWS_AS(parse("x5"), UnknownIdentifier);
  CHECK_THROWS_AS(parse("y"), UnknownIdentifier);
  try {
    parse("x1 + bar");
    FAIL("expected UnknownIdentifier");
  } catch (const UnknownIdentifier& e) {
    CHECK(e.position() == 6);
  }
}

TEST_CASE("derivative examples") {
  CHECK(differentiate(parse("x1^2"), 0).eval({3, 0, 0, 0}) == doctest::Approx(6.0));
  CHECK(differentiate(parse("sin(x1*x2)"), 1).eval({1, M_PI, 0, 0}) == doctest::Approx(-1.0));
  const Expr f = parse("4/(1+x1^2)^2");
  const Expr f2 = differentiate(differentiate(f, 0), 0);
  const Point p{0.3, 0, 0, 0};
  const double h = 1e-4;
  const double fd = (f.eval({0.3 + h, 0, 0, 0}) - 2 * f.eval(p) + f.eval({0.3 - h, 0, 0, 0})) / (h * h);
  CHECK(std::fabs(f2.eval(p) - fd) <= 1e-6 * std::fabs(fd));
}

TEST_CASE("derivatives of every node kind") {
  const Point p{0.4, -0.7, 0.2, 1.3};
  const char* sources[] = {"x1^x2", "x4^3", "x1^(-2)", "sqrt(x4)", "log(x4)", "atan(x2*x3)",
                           "exp(x1)*cos(x2)", "x1/(x2 - 3)", "-x3*x4", "2^x1"};
  for (const char* src : sources) {
    CAPTURE(src);
    const Expr e = parse(src);
    for (int k = 0; k < 4; ++k) {
      const double exact = differentiate(e, k).eval(p);
      const double fd = testsupport::richardson([&](const Point& q) { return e.eval(q); }, p, k, 1e-3);
      CHECK(std::fabs(exact - fd) <= 1e-8 * std::max(1.0, std::fabs(fd)));
    }
  }
}

TEST_CASE("random expressions: symbolic derivative vs Richardson difference") {
  std::mt19937_64 rng(20240611);
  int compared = 0;
  for (int n = 0; n < 1000; ++n) {
    const Expr e = testsupport::random_expr(rng, 4);
    const Point p = testsupport::random_point(rng);
    const int k = std::uniform_int_distribution<int>(0, 3)(rng);
    double exact = 0.0, fd = 0.0;
    try {
      exact = differentiate(e, k).eval(p);
      fd = testsupport::richardson([&](const Point& q) { return e.eval(q); }, p, k, 1e-5 * 2.0);
    } catch (const DomainError&) {
      continue;
    }
    ++compared;
    CAPTURE(print(e));
    CHECK(std::fabs(exact - fd) <= std::max(1e-6, 1e-6 * std::fabs(fd)));
  }
  CHECK(compared > 950);
}

TEST_CASE("mixed second derivatives commute") {
  std::mt19937_64 rng(99);
  for (int n = 0; n < 200; ++n) {
    const Expr e = testsupport::random_expr(rng, 3);
    const Point p = testsupport::random_point(rng);
    const int i = n % 4, j = (n / 4) % 4;
    const double a = differentiate(differentiate(e, i), j).eval(p);
    const double b = differentiate(differentiate(e, j), i).eval(p);
    CHECK(std::fabs(a - b) <= 1e-9 * std::max(1.0, std::fabs(a)));
  }
}

TEST_CASE("print then parse round-trips") {
  std::mt19937_64 rng(7);
  for (int n = 0; n < 200; ++n) {
    const Expr e = testsupport::random_expr(rng, 4);
    const Expr back = parse(print(e));
    for (int t = 0; t < 100; ++t) {
      const Point p = testsupport::random_point(rng);
      double a = 0.0, b = 0.0;
      bool ea = false, eb = false;
      try { a = e.eval(p); } catch (const DomainError&) { ea = true; }
      try { b = back.eval(p); } catch (const DomainError&) { eb = true; }
      REQUIRE(ea == eb);
      if (!ea) CHECK(a == b);
    }
  }
  CHECK(parse(print(Expr(-2.5))).eval({}) == -2.5);
}

TEST_CASE("builders fold constants and identities") {
  CHECK((Expr(2.0) * Expr(3.0)).is_constant());
  CHECK((Expr(0.0) * x(0)).is_zero());
  CHECK((x(0) * Expr(1.0)).op() == Op::variable);
  CHECK((x(0) + Expr(0.0)).op() == Op::variable);
  CHECK(differentiate(Expr(5.0), 0).is_zero());
  CHECK(differentiate(x(1), 0).is_zero());
  CHECK(!differentiate(x(1), 1).depends_on_variables());
  // Folding never hides a domain error.
  CHECK_THROWS_AS((Expr(1.0) / Expr(0.0)).eval({}), DomainError);
}
