#include <doctest.h>

#include <array>

#include "expr_corpus.hpp"
#include "finsler/expr.hpp"

using namespace finsler;
using K = Expr::Kind;

TEST_CASE("precedence and tree shape") {
  const auto e = Expr::parse("4/(1+x1^2+x2^2+x3^2)^2");
  CHECK(e.root().kind == K::Div);
  CHECK(e.root().rhs->kind == K::Pow);
  CHECK(e.root().rhs->value == 2.0);
  CHECK(e.root().rhs->lhs->kind == K::Add);
  CHECK(e.arity() == 3);

  const auto f = Expr::parse("sin(x1)*cos(x2)");
  CHECK(f.root().kind == K::Mul);
  CHECK(f.root().lhs->kind == K::Call);
  CHECK(f.root().lhs->func == Expr::Func::Sin);
  CHECK(f.root().rhs->func == Expr::Func::Cos);

  const auto g = Expr::parse("2*-x1");
  CHECK(g.root().kind == K::Mul);
  CHECK(g.root().rhs->kind == K::Neg);

  CHECK(Expr::parse("-x1^2").root().kind == K::Neg);
  CHECK(Expr::parse("x1-x2-x3").root().lhs->kind == K::Sub);
  CHECK(Expr::parse("2^3^2").eval(std::array<double, 1>{0}) == 512.0);
}

TEST_CASE("evaluation") {
  const std::array<double, 4> x{1.0, 2.0, 3.0, 4.0};
  CHECK(Expr::parse("x1*x2+x3/x4").eval(x) == doctest::Approx(2.75));
  CHECK(Expr::parse("pi").eval(x) == doctest::Approx(3.141592653589793));
  CHECK(Expr::parse("sqrt(x4)*exp(0)*cos(0)").eval(x) == doctest::Approx(2.0));
  CHECK(Expr::constant(1.5).eval(x) == 1.5);
}

TEST_CASE("jet evaluation gives exact derivatives") {
  const auto L = JetLayout::get(2, 0, 2);
  std::vector<Jetd> vars = {Jetd::seed_base(3.0, 1.0, L), Jetd::seed_base(5.0, 0.0, L)};
  const auto d = Expr::parse("x1*x2").eval_jet<double>(vars);
  CHECK(d.value() == 15.0);
  CHECK(d.coeffs()[1] == 5.0);

  const auto L1 = JetLayout::get(1, 0, 2);
  std::vector<Jetd> v1 = {Jetd::seed_base(4.0, 1.0, L1)};
  const auto s = Expr::parse("sqrt(x1)").eval_jet<double>(v1);
  CHECK(s.value() == doctest::Approx(2.0));
  CHECK(s.coeffs()[1] == doctest::Approx(0.25));
  CHECK(s.extract({0, 0, 0, 0}, 2) == doctest::Approx(-1.0 / 32));
}

TEST_CASE("corpus round trip and finite-difference derivatives") {
  const auto r = corpus::check();
  CHECK(r.expressions == 50);
  CHECK(r.round_trip_failures == 0);
  CHECK(r.worst_derivative <= 1e-7);
}

TEST_CASE("parse errors carry locations") {
  auto where = [](const char* text) {
    try {
      Expr::parse(text);
    } catch (const ParseError& e) {
      return e.where();
    }
    FAIL("no parse error for " << text);
    return SourceLocation{};
  };
  CHECK(where("x1 + ").column == 6);
  CHECK(where("x1 * y").column == 6);
  CHECK(where("foo(x1)").column == 1);
  CHECK(where("x1^x2").column == 3);
  CHECK(where("(x1").column == 4);
  CHECK(where("x5").column == 1);
  const auto multi = where("x1 +\n  * x2");
  CHECK(multi.line == 2);
  CHECK(multi.column == 3);
  CHECK_THROWS_AS(Expr::parse(""), ParseError);
  CHECK_THROWS_AS(Expr::parse("1 2"), ParseError);
  CHECK_THROWS_AS(Expr::parse("sqrt()"), ParseError);
}

TEST_CASE("domain errors name the guard and the location") {
  const auto L = JetLayout::get(1, 0, 1);
  std::vector<Jetd> v = {Jetd::seed_base(-1.0, 1.0, L)};
  try {
    Expr::parse("1 + sqrt(x1)").eval_jet<double>(v);
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(e.guard() == "sqrt");
    CHECK(std::string(e.what()).find("column 5") != std::string::npos);
  }
}
