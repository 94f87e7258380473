#include <random>

#include "doctest.h"
#include "grasslab/expr.hpp"

using namespace grasslab;

namespace {

Rat mk(long n, long d) {
  Rat r(n, d);
  r.canonicalize();
  return r;
}

Expr P(const std::string& s) { return parse(s, evol_table()); }

// random polynomial-ratio of small degree in up to five variables
Expr random_expr(std::mt19937_64& rng, int nvars, bool allow_den) {
  static const char* names[] = {"a", "b", "p", "q", "lam"};
  auto rpoly = [&]() {
    Poly r;
    int nt = 1 + static_cast<int>(rng() % 4);
    for (int t = 0; t < nt; ++t) {
      Poly m(mk(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 3)));
      int d = static_cast<int>(rng() % 3);
      for (int k = 0; k < d; ++k) m = m * Poly::var(intern(names[rng() % nvars]));
      r = r + m;
    }
    return r;
  };
  Poly n = rpoly();
  if (!allow_den) return Expr(n);
  Poly d = rpoly();
  if (d.is_zero()) d = Poly(Rat(1));
  return Expr(n, d);
}

}  // namespace

TEST_CASE("parse canonicalizes") {
  CHECK(P("(a^2 - p^2)/(a - p)") == P("a + p"));
  CHECK(print(P("(a^2 - p^2)/(a - p)")) == "a + p");
  Expr e = P("b/p + p^2/a");
  CHECK(e.num() == P("a*b + p^3").num());
  CHECK(e.den() == P("a*p").num());
  VarTable ct = chart_table();
  CHECK(print(parse("u1*v2 - v1*u2", ct)) == "u1*v2 - v1*u2");
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(P("a + "), ParseError);
  CHECK_THROWS_AS(P("a + zz"), ParseError);
  CHECK_THROWS_AS(P("a/(p - p)"), ParseError);
  CHECK_THROWS_AS(P("(a"), ParseError);
  try {
    P("a ++ )");
  } catch (const ParseError& e) {
    CHECK(e.pos == 3);
  }
}

TEST_CASE("diff") {
  CHECK(diff(P("a*q - b*p"), V::a()) == P("q"));
  CHECK(diff(P("b/p + p^2/a"), V::p()) == P("-b/p^2 + 2*p/a"));
  CHECK(diff(P("7/3"), V::a()).is_zero());
}

TEST_CASE("subst and zero test") {
  CHECK(subst(P("a + p"), {{V::a(), Expr()}, {V::p(), Expr()}}).is_zero());
  VarTable t = evol_table();
  t.add("alpha");
  Expr al = Expr::var("alpha");
  Expr r = subst(P("a*q - b*p"), {{V::q(), al * P("b*p/a")}});
  CHECK(r == parse("b*p*(alpha - 1)", t));
  CHECK_THROWS_AS(subst(P("1/a"), {{V::a(), Expr()}}), PoleError);
  CHECK(is_zero(P("a*q - b*p - (a*q - b*p)")));
  CHECK(is_zero(P("(a+p)^2 - a^2 - 2*a*p - p^2")));
  CHECK(!is_zero(P("a*q - b*p")));
}

TEST_CASE("gcd cases") {
  Expr e = P("(a^3*b - a*b^3)/(a^2*b + 2*a*b^2 + b^3)");
  CHECK(e == P("(a^2 - a*b)/(a + b)"));
  Expr f = P("((a*p + q)*(b - q^2)*(a + b + p))/((a*p + q)*(p^2 - b*q)*(a + b + p))");
  CHECK(f == P("(b - q^2)/(p^2 - b*q)"));
  CHECK(P("(a^2*b^2 - p^2*q^2)/(a*b + p*q)") == P("a*b - p*q"));
}

TEST_CASE("random algebraic properties") {
  std::mt19937_64 rng(12345);
  for (int it = 0; it < 150; ++it) {
    Expr e1 = random_expr(rng, 5, true), e2 = random_expr(rng, 5, true);
    CHECK(e1 * e2 == e2 * e1);
    CHECK((e1 + (-e1)).is_zero());
    VarId x = V::a();
    CHECK(diff(e1 * e2, x) == diff(e1, x) * e2 + e1 * diff(e2, x));
    std::map<VarId, Rat> pt;
    for (const char* n : {"a", "b", "p", "q", "lam"})
      pt[intern(n)] = mk(static_cast<long>(rng() % 19) - 9, 1 + static_cast<long>(rng() % 5));
    try {
      Rat v1 = eval(e1, pt), v2 = eval(e2, pt);
      CHECK(eval(e1 + e2, pt) == v1 + v2);
      CHECK(eval(e1 * e2, pt) == v1 * v2);
    } catch (const PoleError&) {
    }
  }
}

TEST_CASE("parse print round trip") {
  std::mt19937_64 rng(777);
  VarTable t = evol_table();
  t.add("lam");
  for (int it = 0; it < 1000; ++it) {
    Expr e = random_expr(rng, 5, it % 2 == 0);
    CHECK(parse(print(e), t) == e);
  }
}
