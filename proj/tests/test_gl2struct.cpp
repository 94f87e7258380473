#include "doctest.h"
#include "grasslab/gl2struct.hpp"

using namespace grasslab;

namespace {

JetData sampled(const std::string& name, std::uint64_t seed = 1) {
  Sampler smp(corpus_get(name), seed);
  return jet_data(smp.next(3));
}

Tensor random_tensor(std::vector<bool> up, Rng& rng, bool skew) {
  Tensor t(std::move(up));
  for (auto& x : t.c) x = rng.rat();
  if (!skew) return t;
  Tensor s = t;
  for (std::size_t idx = 0; idx < t.c.size(); ++idx) {
    std::size_t i = (idx / 4) % 4, j = idx % 4;
    s.c[idx] = t.c[idx] - t.c[idx - i * 4 - j + j * 4 + i];
  }
  return s;
}

Mat4<Rat> commutator(const Mat4<Rat>& x, const Mat4<Rat>& y) {
  Mat4<Rat> r;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      Rat acc = 0;
      for (int m = 0; m < 4; ++m) acc += x[i][m] * y[m][k] - y[i][m] * x[m][k];
      r[i][k] = acc;
    }
  return r;
}

}  // namespace

TEST_CASE("twisted cubic tangents are Lagrangian for w0") {
  VarTable t{"t"};
  Expr T = parse("t", t);
  std::array<Expr, 4> g{Expr(1L), T, T * T, T * T * T}, dg{Expr(0L), Expr(1L), T * Expr(2L), T * T * Expr(3L)};
  // w0 = dx0 ^ dx3 - 3 dx1 ^ dx2
  Expr w = g[0] * dg[3] - g[3] * dg[0] - Expr(3L) * (g[1] * dg[2] - g[2] * dg[1]);
  CHECK(is_zero(w));
}

TEST_CASE("det Omega (det A)^2 = 9") {
  CHECK(omega_det_identity(corpus_get("dkp").evol) == Expr(9L));
  CHECK(omega_det_identity(corpus_get("chazy_eta_6_over_s").evol) == Expr(9L));
  VarTable t = evol_table();
  CHECK_THROWS_AS(build_frame(SystemEvol{parse("p", t), parse("a", t)}), DegenerateFrame);
}

TEST_CASE("sl(2) operators and Casimir") {
  Rng rng(2);
  for (int trial = 0; trial < 3; ++trial) {
    Frame<Series> fr = build_frame(random_jet(rng, false));
    Sl2Action s = sl2_action(fr);
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) {
        Mat4<Rat> c = commutator(s.A[a], s.A[b]);
        RMat M(16, RVec(4));
        for (int i = 0; i < 16; ++i) {
          for (int g = 0; g < 3; ++g) M[i][g] = s.A[g][i / 4][i % 4];
          M[i][3] = c[i / 4][i % 4];
        }
        CHECK(rank(M) == 3);
      }
    Tensor v({true});
    for (auto& x : v.c) x = rng.rat();
    CHECK(s.casimir(v) == v * Rat(15));
  }
}

TEST_CASE("eigenspace audits") {
  Rng rng(3);
  Sl2Action s = sl2_action(build_frame(random_jet(rng, false)));
  std::vector<std::pair<int, int>> torsion{{3, 2}, {15, 8}, {35, 6}, {63, 8}};
  std::vector<std::pair<int, int>> curvature{{0, 2}, {8, 12}, {24, 25}, {48, 28}, {80, 18}, {120, 11}};
  CHECK(eigen_audit(s, TensorSpace::Torsion) == torsion);
  CHECK(eigen_audit(s, TensorSpace::Curvature) == curvature);
}

TEST_CASE("weight projectors") {
  Rng rng(4);
  Sl2Action s = sl2_action(build_frame(random_jet(rng, false)));
  for (bool curv : {false, true}) {
    std::vector<bool> up = curv ? std::vector<bool>{true, false, false, false} : std::vector<bool>{true, false, false};
    Tensor K = random_tensor(up, rng, true);
    auto parts = weight_components(s, K);
    Tensor sum(up);
    for (auto& [l, P] : parts) {
      sum = sum + P;
      CHECK(s.casimir(P) == P * Rat(l * (l + 2)));
      CHECK(weight_project(s, P, l) == P);
      for (auto& [m, Q] : parts)
        if (m != l) CHECK(weight_project(s, P, m).is_zero());
    }
    CHECK(sum == K);
  }
  Tensor K = random_tensor({true, false, false}, rng, true);
  CHECK_THROWS_AS(weight_project(s, K, 2), std::invalid_argument);
}

TEST_CASE("Bryant connection") {
  SUBCASE("linear system is flat") {
    Connection c = bryant_connection(build_frame(sampled("linear")));
    CHECK(c.T.is_zero());
    CHECK(c.R.is_zero());
  }
  SUBCASE("dKP has torsion in V_7") {
    JetData j = sampled("dkp");
    Frame<Series> fr = build_frame(j);
    Connection c = bryant_connection(fr);
    CHECK_FALSE(c.T.is_zero());
    CHECK(sl2_action(fr).casimir(c.T) == c.T * Rat(63));
  }
  SUBCASE("structure is preserved") {
    Rng rng(6);
    Frame<Series> fr = build_frame(random_jet(rng, false));
    Connection c = bryant_connection(fr);
    for (int al = 0; al < 3; ++al)
      for (int k = 0; k < 4; ++k) {
        RMat M;
        for (int i = 0; i < 4; ++i)
          for (int j = i; j < 4; ++j) {
            Rat x = fr.omega[al][i][j].partial(k).constant_term();
            for (int a = 0; a < 4; ++a)
              x -= c.G(a, i, k).constant_term() * fr.omega[al][a][j].constant_term() +
                   c.G(a, j, k).constant_term() * fr.omega[al][i][a].constant_term();
            M.push_back({fr.omega[0][i][j].constant_term(), fr.omega[1][i][j].constant_term(),
                         fr.omega[2][i][j].constant_term(), x});
          }
        CHECK(rank(M) == 3);
      }
  }
  CHECK(check_bryant_flat(corpus_get("table1_5"), {3, {1}}).holds());
}

TEST_CASE("symmetric connection") {
  auto c = symmetric_connection(build_frame(sampled("linear")));
  REQUIRE(c);
  for (const Series& g : c->gamma) CHECK(g.is_zero());
  CHECK_FALSE(symmetric_connection(build_frame(sampled("dkp"))));
  CHECK(check_symmetric_flat(corpus_get("table1_32"), {3, {1}}).holds());
  auto v = check_symmetric_flat(corpus_get("dkp"), {3, {1}});
  REQUIRE(v.refuted());
  CHECK(v.witness->label == "absent");
}

TEST_CASE("Lee form") {
  // constant Omega
  LeeForm<Series> lf = lee_form(build_frame(sampled("linear")));
  for (int i = 0; i < 4; ++i) CHECK(lf.phi[i].is_zero());
  VarTable t = evol_table();
  for (const char* F : {"a^3", "1/(1 + a)", "a^2/(a - 2)"}) {
    System s = System::evolution("family", parse("p", t), parse(std::string("b - (") + F + ")", t));
    CHECK(check_lee_closed(s, Mode::Symbolic, {}).status == Status::SymbolicProven);
  }
  System quartic = System::evolution("quartic", parse("q", t), parse("b + a^4", t));
  auto v = check_lee_closed(quartic, Mode::Symbolic, {});
  REQUIRE(v.refuted());
  CHECK(v.witness->value != 0);
  CHECK(check_lee_closed(quartic, Mode::Points, {3, {1}}).refuted());
  System lin = System::evolution("shifted", parse("q", t), parse("b + 3*a", t));
  CHECK(check_lee_closed(lin, Mode::Symbolic, {}).holds());
}

TEST_CASE("series and symbolic Lee forms agree") {
  const System& s = corpus_get("chazy_eta_6_over_s");
  Sampler smp(s, 2);
  SamplePoint sp = smp.next(3);
  LeeForm<Series> ls = lee_form(build_frame(jet_data(sp)));
  LeeForm<Expr> le = lee_form(build_frame(s.evol));
  std::map<VarId, Rat> pt{{V::a(), sp.z[0]}, {V::b(), sp.z[1]}, {V::p(), sp.z[2]}, {V::q(), sp.z[3]}};
  for (int i = 0; i < 4; ++i) CHECK(eval(le.phi[i], pt) == ls.phi[i].constant_term());
}

TEST_CASE("torsion squares") {
  Rng rng(8);
  Frame<Series> fr = build_frame(random_jet(rng, false));
  TorsionSquares zero = torsion_squares(fr, Tensor({true, false, false}));
  for (const Tensor* t : {&zero.T2, &zero.alpha, &zero.beta, &zero.gamma, &zero.delta}) CHECK(t->is_zero());
  Connection c = bryant_connection(fr);
  TorsionSquares sq = torsion_squares(fr, c.T);
  CHECK(sq.T2 == sq.alpha * Rat(2));
  // independent of the conformal factor of Omega
  Frame<Series> scaled = fr;
  for (auto& row : scaled.Omega)
    for (auto& x : row) x = x * Rat(3);
  for (auto& row : scaled.Omega_inv)
    for (auto& x : row) x = x * Rat(1, 3);
  TorsionSquares sq3 = torsion_squares(scaled, c.T);
  CHECK(sq3.beta == sq.beta);
  CHECK(sq3.gamma == sq.gamma);
  CHECK(sq3.delta == sq.delta);
}

TEST_CASE("universal identities at non-integrable jets") {
  Rng rng(9);
  for (int trial = 0; trial < 2; ++trial) {
    Gl2Report rep = gl2_report(random_jet(rng, false));
    for (const Relation& r : rep.universal) {
      CAPTURE(r.name);
      CHECK(r.holds());
    }
  }
}

TEST_CASE("curvature relations") {
  CHECK(check_curvature_relations({2, {1}}, true).status == Status::PointwiseVerified);
  auto bad = check_curvature_relations({2, {1}}, false);
  REQUIRE(bad.refuted());
  CHECK(bad.witness->value != 0);
  CHECK(check_curvature_relations(corpus_get("dkp"), {2, {1}}).holds());
  CHECK(check_curvature_relations(corpus_get("chazy_eta_s"), {2, {1}}).refuted());
  // linearly degenerate and integrable: both sides vanish
  Gl2Report rep = gl2_report(sampled("table1_5"));
  CHECK(rep.conn.T.is_zero());
  CHECK(rep.conn.R.is_zero());
  for (const Relation& r : rep.integrability) CHECK(r.holds());
}

TEST_CASE("Omega is parallel after rescaling") {
  CHECK(check_omega_parallel(corpus_get("dkp"), {3, {1}}).holds());
  Frame<Series> fr = build_frame(sampled("dkp"));
  ConformalParallel cp = omega_parallel(fr, bryant_connection(fr));
  CHECK(cp.conformal);
  for (auto& row : cp.dlam)
    for (auto& x : row) CHECK(x == 0);
}

TEST_CASE("series elimination with a skipped column") {
  // x0 has coefficient a (zero at the base point); x1 carries the pivot
  Series a = Series::variable(4, 1, 0, Rat(0));
  Series one = Series::constant(4, 1, Rat(1));
  Series z = one * Rat(0);
  SeriesSolve s = solve_series({{a, one}, {a * Rat(2), one * Rat(2)}}, {one, one * Rat(2)});
  CHECK(s.consistent);
  CHECK(s.rank == 1);
  CHECK((s.x[1] - one).is_zero());
  SeriesSolve bad = solve_series({{a, one}, {z, one}}, {one, one * Rat(2)});
  CHECK_FALSE(bad.consistent);
}
