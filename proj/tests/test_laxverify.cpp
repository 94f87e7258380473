#include "doctest.h"
#include "grasslab/laxverify.hpp"

using namespace grasslab;

namespace {

VarTable lam_table() {
  VarTable t = evol_table();
  t.alias("lam", V::lam());
  return t;
}

Expr L(const std::string& s) { return parse(s, lam_table()); }

SystemEvol evol(const std::string& name) { return corpus_get(name).evol; }

struct Fields {
  JetContext ctx{4};
  VarTable t;
  Fields() {
    t = ctx.table();
    t.alias("lam", V::lam());
  }
  Expr E(const std::string& s) const { return parse(s, t); }
  VectorField4 X() const { return {{E("-lam"), Expr(1L), Expr(0L), E("u_xx")}}; }
  VectorField4 Y() const { return {{E("-(lam^2 + u_x)"), Expr(0L), Expr(1L), E("u_xx*lam + u_xy")}}; }
  RuleSet rules() const { return RuleSet(ctx, {{JetVar{0, 1, 0, 1}, E("u_x*u_xx + u_yy")}}); }
};

}  // namespace

TEST_CASE("linear system accepts any lambda-only pair") {
  SystemEvol lin = evol("linear");
  for (const char* P : {"lam^2", "lam^3/3 - 2*lam", "1/(1 + lam^2)"})
    for (const char* Q : {"lam", "lam^2/2", "3*lam^4"}) CHECK(check_lax_relations(lin, {L(P), L(Q)}).holds());
}

TEST_CASE("dispersion identity") {
  SystemEvol lin = evol("linear");
  // Q_lam^2 = P_lam
  CHECK(check_dispersion_identity(lin, {L("lam^3/3"), L("lam^2/2")}).status == Status::SymbolicProven);
  CHECK(check_dispersion_identity(lin, {L("lam^2"), L("-lam")}).refuted());
  // the zero pair leaves det of the (a,p) Jacobian, which is a for dKP
  auto zero = check_dispersion_identity(evol("dkp"), {Expr(0L), Expr(0L)});
  REQUIRE(zero.refuted());
  CHECK(zero.witness->value != 0);
}

TEST_CASE("dKP-adapted pairs") {
  for (auto& fx : lax_fixtures()) {
    CAPTURE(fx.name);
    SystemEvol s = evol(fx.system);
    CHECK(check_lax_relations(s, fx.pair).status == Status::SymbolicProven);
    CHECK(check_lax_relations(s, fx.pair, Mode::Points).status == Status::PointwiseVerified);
    // the six relations force the dispersion identity
    CHECK(check_dispersion_identity(s, fx.pair).status == Status::SymbolicProven);
  }
  const LaxFixture& bk = lax_fixture("dkp_backlund_lax");
  SystemEvol s = evol(bk.system);
  auto v = check_lax_relations(s, {bk.pair.P, bk.pair.Q + L("lam*a")});
  REQUIRE(v.refuted());
  CHECK(v.witness->value != 0);
  CHECK(check_lax_relations(s, {bk.pair.P + L("b"), bk.pair.Q}, Mode::Points).refuted());
}

TEST_CASE("dKP Lax vector fields commute on solutions") {
  Fields f;
  CHECK(check_vf_commute(f.ctx, f.rules(), f.X(), f.Y()).status == Status::SymbolicProven);
  CHECK(check_vf_commute(f.ctx, f.rules(), f.X(), f.X()).status == Status::SymbolicProven);
  VectorField4 bad = f.Y();
  bad.c[3] = f.E("u_xx*lam");
  auto v = check_vf_commute(f.ctx, f.rules(), f.X(), bad);
  REQUIRE(v.refuted());
  CHECK(v.witness->value != 0);
  CHECK_THROWS_AS(check_vf_commute(f.ctx, RuleSet(f.ctx, {}), f.X(), f.Y()), InsufficientRules);
}

TEST_CASE("bracket is bilinear") {
  Fields f;
  VectorField4 Z{{f.E("u_y*lam"), f.E("u_xy"), Expr(0L), f.E("lam^2 - u_x")}};
  VectorField4 lhs = bracket(f.ctx, f.X(), f.Y() + Z);
  VectorField4 a = bracket(f.ctx, f.X(), f.Y()), b = bracket(f.ctx, f.X(), Z);
  for (int k = 0; k < 4; ++k) CHECK(lhs.c[k] == a.c[k] + b.c[k]);
}

TEST_CASE("lifted Lax fields commute") {
  for (auto& fx : lax_fixtures()) {
    CAPTURE(fx.name);
    SystemEvol s = evol(fx.system);
    JetContext ctx(4);
    RuleSet rules = evolution_rules(s, ctx);
    auto [X, Y] = lax_vector_fields(ctx, fx.pair);
    CHECK(check_vf_commute(ctx, rules, X, Y).holds());
  }
}

TEST_CASE("dispersion parametrisation") {
  Rng rng(4);
  for (int trial = 0; trial < 3; ++trial) {
    // linear f, g: the derivatives are random rationals
    std::string f, g;
    for (const char* v : {"a", "b", "p", "q"}) {
      f += "+(" + rng.rat().get_str() + ")*" + v;
      g += "+(" + rng.rat().get_str() + ")*" + v;
    }
    SystemEvol s{L(f), L(g)};
    auto dp = dispersion_parametrisation(s);
    CHECK(is_zero(dispersion_conic(s, dp.mu, dp.lam)));
  }
  for (const char* name : {"linear", "dkp", "dkp_backlund_evol", "chazy_eta_6_over_s"}) {
    SystemEvol s = evol(name);
    auto dp = dispersion_parametrisation(s);
    CHECK(is_zero(dispersion_conic(s, dp.mu, dp.lam)));
  }
  CHECK_THROWS_AS(dispersion_parametrisation({L("p"), L("a")}), DegenerateDenominator);
}

TEST_CASE("null totally geodesic surfaces") {
  for (auto& fx : lax_fixtures()) {
    CAPTURE(fx.name);
    CHECK(check_null_geodesic(evol(fx.system), fx.pair, {5, {1}}).status == Status::PointwiseVerified);
  }
  const LaxFixture& bk = lax_fixture("dkp_backlund_lax");
  CHECK(check_null_geodesic(evol(bk.system), {L("lam^2 + a*lam"), L("lam^3 - b")}, {5, {1}}).refuted());
  // null but not geodesic: P shifted by a lam-free term
  CHECK(check_null_geodesic(evol(bk.system), {bk.pair.P + L("a*b"), bk.pair.Q}, {5, {1}}).refuted());
  // lam-free pair on the linear system: nullity is the dispersion identity
  SystemEvol lin = evol("linear");
  LaxPair flat{L("a"), L("b")};
  bool null_ok = null_geodesic_conditions(lin, flat).front().second.is_zero();
  CHECK(null_ok == check_dispersion_identity(lin, flat).holds());
}

TEST_CASE("Lax JSON") {
  const LaxFixture& bk = lax_fixture("dkp_backlund_lax");
  LaxPair back = lax_from_json(lax_to_json(bk.pair));
  CHECK(back.P == bk.pair.P);
  CHECK(back.Q == bk.pair.Q);
  auto j = nlohmann::json::parse(R"({"P": "mu^2", "Q": "mu", "lambda_var": "mu"})");
  CHECK(lax_from_json(j).P == L("lam^2"));
}
