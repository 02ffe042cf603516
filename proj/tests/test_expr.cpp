#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "curvlab/expr.hpp"
#include "curvlab/rng.hpp"

using namespace curvlab;

namespace {
const std::vector<std::string> kXY = {"x1", "x2"};
}

TEST_CASE("parse produces the expected tree shape") {
  Expression e = Expression::parse("x1*x1 + sin(x2)", kXY);
  CHECK(e.to_string() == "((x1 * x1) + sin(x2))");
  Expression f = Expression::parse("2/(1 + x1^2 + x2^2)", kXY);
  std::vector<double> p = {0.5, -0.25};
  CHECK(f.eval_value(p) == doctest::Approx(2.0 / (1.0 + 0.25 + 0.0625)));
}

TEST_CASE("syntax error carries the offset") {
  try {
    Expression::parse("x1 + * x2", kXY);
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.offset == 5);
  }
  CHECK_THROWS_AS(Expression::parse("(x1 + x2", kXY), SyntaxError);
  CHECK_THROWS_AS(Expression::parse("x1 x2", kXY), SyntaxError);
  CHECK_THROWS_AS(Expression::parse("sin x1", kXY), SyntaxError);
  CHECK_THROWS_AS(Expression::parse("", kXY), SyntaxError);
}

TEST_CASE("unknown identifiers are rejected with their name") {
  try {
    Expression::parse("x1 + y2", kXY);
    FAIL("expected UnknownIdentifier");
  } catch (const UnknownIdentifier& e) {
    CHECK(e.name == "y2");
    CHECK(e.offset == 5);
  }
  CHECK_THROWS_AS(Expression::parse("foo(x1)", kXY), UnknownIdentifier);
}

TEST_CASE("precedence and associativity") {
  std::vector<double> p = {2.0, 3.0};
  CHECK(Expression::parse("2^-3", kXY).eval_value(p) == doctest::Approx(0.125));
  CHECK(Expression::parse("-x1^2", kXY).eval_value(p) == doctest::Approx(-4.0));
  CHECK(Expression::parse("2^3^2", kXY).eval_value(p) == doctest::Approx(512.0));
  CHECK(Expression::parse("2*x1+3/x2", kXY).eval_value(p) == doctest::Approx(5.0));
  CHECK(Expression::parse("x1 - x2 - 1", kXY).eval_value(p) == doctest::Approx(-2.0));
  CHECK(Expression::parse("6/2/3", kXY).eval_value(p) == doctest::Approx(1.0));
}

TEST_CASE("value evaluation matches the standard library") {
  std::vector<double> p = {0.8, 1.7};
  auto val = [&](const std::string& s) {
    return Expression::parse(s, kXY).eval_value(p);
  };
  CHECK(val("sin(x1)") == doctest::Approx(std::sin(0.8)));
  CHECK(val("cos(x1)*tan(x2)") == doctest::Approx(std::cos(0.8) * std::tan(1.7)));
  CHECK(val("exp(log(x2))") == doctest::Approx(1.7));
  CHECK(val("sqrt(x1^2 + x2^2)") == doctest::Approx(std::hypot(0.8, 1.7)));
  CHECK(val("x1^0.5") == doctest::Approx(std::sqrt(0.8)));
  CHECK(val("1.5e2 + 2.5e-1") == doctest::Approx(150.25));
}

namespace {

Expression random_expr(Rng& rng, int depth) {
  auto emit = [&](const std::string& s) { return Expression::parse(s, kXY); };
  if (depth == 0) {
    switch (rng.next_u64() % 3) {
      case 0: return emit("x1");
      case 1: return emit("x2");
      default: {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", rng.uniform(0.1, 3.0));
        return emit(buf);
      }
    }
  }
  Expression a = random_expr(rng, depth - 1);
  Expression b = random_expr(rng, depth - 1);
  switch (rng.next_u64() % 6) {
    case 0: return a + b;
    case 1: return a - b;
    case 2: return a * b;
    case 3: return Expression::parse("sin(" + a.to_string() + ")", kXY);
    case 4: return Expression::parse("(" + a.to_string() + ")^2", kXY);
    default: return Expression::parse("exp(" + a.to_string() + ")", kXY);
  }
}

}  // namespace

TEST_CASE("serialize/parse round trip is structurally exact") {
  Rng rng(424242);
  for (int trial = 0; trial < 40; ++trial) {
    Expression e = random_expr(rng, 3);
    std::string text = e.to_string();
    Expression back = Expression::parse(text, kXY);
    CHECK(e.structurally_equal(back));
    CHECK(back.to_string() == text);
  }
}

TEST_CASE("negative literals round trip as single constants") {
  Expression e = Expression::parse("-1.5", kXY);
  CHECK(e.to_string() == "-1.5");
  Expression back = Expression::parse(e.to_string(), kXY);
  CHECK(e.structurally_equal(back));
}

TEST_CASE("jet evaluation through expressions matches direct jet arithmetic") {
  Expression e = Expression::parse("x1^3 + 2*x1*x2", kXY);
  std::vector<double> p = {1.5, -0.5};
  Jet viaExpr = e.eval_jet(p, 3);
  auto layout = JetLayout::get(2, 3);
  Jet x = Jet::variable(layout, 0, p[0]);
  Jet y = Jet::variable(layout, 1, p[1]);
  Jet direct = jet_pow_int(x, 3) + 2.0 * x * y;
  for (int i = 0; i < layout->size(); ++i)
    CHECK(viaExpr[i] == doctest::Approx(direct[i]).epsilon(1e-14));
}

TEST_CASE("variable power falls back to exp(log)") {
  Expression e = Expression::parse("x1^x2", kXY);
  std::vector<double> p = {2.0, 3.0};
  CHECK(e.eval_value(p) == doctest::Approx(8.0));
  // with jets the exponent is genuinely non-constant, so the exp(log) path
  // runs and a negative base is out of domain
  std::vector<double> q = {-2.0, 3.0};
  CHECK_THROWS_AS((void)e.eval_jet(q, 1), DomainError);
  Jet j = e.eval_jet(p, 1);
  // d/dx2 x1^x2 = x1^x2 log(x1)
  CHECK(j.derivative(1).value() == doctest::Approx(8.0 * std::log(2.0)));
}
