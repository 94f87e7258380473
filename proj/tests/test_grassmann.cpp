#include <doctest.h>

#include "grasslab/grassmann.hpp"
#include "grasslab/weylgeom.hpp"

using namespace grasslab;

namespace {

struct JetBackend {
  using Elem = Rat;
  const Jet1& pt;
  Rat cst(const Rat& r) const { return r; }
  Rat fd(int which, int z) const { return pt[6 + 4 * which + z]; }
};

Rat symbol_det(const Jet1& pt) { return det3(evol_metric(JetBackend{pt})); }

ChartPoint random_chart(Rng& rng) {
  ChartPoint U;
  for (auto& row : U)
    for (auto& x : row) x = rng.rat();
  return U;
}

Jet1 random_jet(Rng& rng) {
  Jet1 j;
  for (auto& x : j) x = rng.rat();
  return j;
}

}  // namespace

TEST_CASE("chart action basics") {
  Rng rng(11);
  ChartPoint U = random_chart(rng);
  CHECK(act(SL5::identity(), U) == U);

  ChartPoint W{};
  for (auto& row : W)
    for (auto& x : row) x = 0;
  W[0][0] = 2;
  W[1][2] = Rat(1, 3);
  auto S = act(SL5::swap(0, 0), W);
  CHECK(S[0][0] == Rat(1, 2));

  int checked = 0;
  for (int n = 0; n < 200; ++n) {
    SL5 M1 = SL5::random(rng), M2 = SL5::random(rng);
    ChartPoint V = random_chart(rng);
    try {
      auto lhs = act(M1, act(M2, V));
      CHECK(lhs == act(M1 * M2, V));
      ++checked;
    } catch (const ChartBoundary&) {
    }
  }
  CHECK(checked > 150);
}

TEST_CASE("linear block acts as U -> AU") {
  Rng rng(3);
  RMat m(5, RVec(5, Rat(0)));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m[i][j] = rng.rat();
  m[0][0] += 20;
  m[1][1] += 30;
  for (int i = 2; i < 5; ++i) m[i][i] = 1;
  SL5 M = SL5::from_matrix(m);
  ChartPoint U = random_chart(rng);
  auto R = act(M, U);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) CHECK(R[i][j] == m[i][0] * U[0][j] + m[i][1] * U[1][j]);
}

TEST_CASE("tangent action keeps rank one") {
  Rng rng(5);
  ChartPoint Z{};
  for (auto& row : Z)
    for (auto& x : row) x = 0;
  ChartPoint U0 = random_chart(rng);
  CHECK(act_tangent(SL5::identity(), U0, U0) == U0);
  CHECK(act_tangent(SL5::random(rng), U0, Z) == Z);
  int n = 0;
  while (n < 100) {
    SL5 M = SL5::random(rng);
    ChartPoint U = random_chart(rng), dU;
    Rat a = rng.nonzero_rat(), b = rng.rat();
    for (int j = 0; j < 3; ++j) {
      dU[0][j] = a * (j + 1) + rng.rat();
    }
    for (int j = 0; j < 3; ++j) dU[1][j] = b * dU[0][j];
    if (matrix_rank(dU) != 1) continue;
    try {
      CHECK(matrix_rank(act_tangent(M, U, dU)) == 1);
      ++n;
    } catch (const ChartBoundary&) {
    }
  }
}

TEST_CASE("tangent action matches a finite difference of the action") {
  Rng rng(9);
  SL5 M = SL5::random(rng);
  ChartPoint U = random_chart(rng), dU = random_chart(rng);
  // act over degree-1 series in one variable eps
  Chart<Series> Us;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) Us[i][j] = Series::variable(1, 1, 0, Rat(0)) * dU[i][j] + U[i][j];
  auto R = act_generic<Series>(
      M, Us, [](const Rat& r) { return Series::constant(1, 1, r); }, [](const Series& s) { return s.inv(); });
  auto T = act_tangent(M, U, dU);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) CHECK(R[i][j].coeff({1}) == T[i][j]);
}

TEST_CASE("segre ideal is preserved") {
  Rng rng(21);
  for (int n = 0; n < 20; ++n) CHECK(segre_ideal_preserved(SL5::random(rng), random_chart(rng)));
}

TEST_CASE("SL5 json round trip") {
  Rng rng(1);
  SL5 M = SL5::random(rng);
  CHECK(SL5::from_json(M.to_json()) == M);
  CHECK((M * M.inverse()) == SL5::identity());
}

TEST_CASE("transform_system") {
  SystemImplicit s{parse("u3 - v1*u1", chart_table()), parse("v3 - u2 + v2^2", chart_table())};
  auto t = transform_system(s, SL5::identity());
  CHECK((t.F / s.F).is_const());
  CHECK((t.G / s.G).is_const());
  Rng rng(4);
  SL5 M = SL5::random(rng);
  auto back = transform_system(transform_system(s, M), M.inverse());
  // the original equations divide the round trip
  CHECK(divide_exact(back.F.num(), s.F.num()).has_value());
  CHECK(divide_exact(back.G.num(), s.G.num()).has_value());
  // points of the image satisfy the transformed system
  ChartPoint U{};
  U[0] = {Rat(1), Rat(2), Rat(0)};
  U[1] = {Rat(3), Rat(1, 2), Rat(0)};
  U[0][2] = U[0][0] * U[1][0];
  U[1][2] = U[0][1] - U[1][1] * U[1][1];
  auto W = act(M, U);
  std::map<VarId, Rat> at;
  for (int j = 0; j < 3; ++j) {
    at[V::u(j + 1)] = W[0][j];
    at[V::v(j + 1)] = W[1][j];
  }
  auto tr = transform_system(s, M);
  CHECK(eval(tr.F, at) == 0);
  CHECK(eval(tr.G, at) == 0);
}

TEST_CASE("generators") {
  CHECK(generators().size() == 25);
  Expr h = parse("u1^2*v3 + u2*v1 - 3*u3*v2^2", chart_table());
  Expr lhs = generator("X11").apply(h) + generator("X22").apply(h) + generator("X33").apply(h);
  Expr rhs = generator("L11").apply(h) + generator("L22").apply(h);
  CHECK(lhs == rhs);
  for (int k = 0; k < 6; ++k) {
    Expr s = generator("X11").c[k] + generator("X22").c[k] + generator("X33").c[k];
    CHECK(s == generator("L11").c[k] + generator("L22").c[k]);
  }
  SystemEvol lin{parse("p", evol_table()), parse("b", evol_table())};
  for (auto& Y : linear_stabilizer()) CHECK_MESSAGE(annihilates(Y, lin), Y.name);
  CHECK_FALSE(annihilates(generator("U3"), lin));
  CHECK_FALSE(annihilates(generator("P1"), lin));
}

TEST_CASE("prolonged generator rank") {
  Rng rng(77);
  for (int n = 0; n < 10; ++n) {
    Jet1 j = random_jet(rng);
    if (sgn(symbol_det(j)) == 0) continue;
    CHECK(prolonged_generator_rank(j) == 14);
  }
  // f_z = g_z for every z makes the symbol degenerate
  for (int n = 0; n < 5; ++n) {
    Jet1 j = random_jet(rng);
    for (int z = 0; z < 4; ++z) j[10 + z] = j[6 + z];
    CHECK(symbol_det(j) == 0);
    CHECK(prolonged_generator_rank(j) < 14);
  }
  // the linear system u3 = v1, v3 = u2 at the origin
  Jet1 o;
  for (auto& x : o) x = 0;
  o[6 + 2] = 1;
  o[10 + 1] = 1;
  CHECK(sgn(symbol_det(o)) != 0);
  CHECK(prolonged_generator_rank(o) == 14);
}

TEST_CASE("segre directions") {
  ChartPoint E11{}, E22{};
  for (auto* m : {&E11, &E22})
    for (auto& row : *m)
      for (auto& x : row) x = 0;
  E11[0][0] = 1;
  E22[1][1] = 1;
  auto r = segre_directions(E11, E22);
  REQUIRE(r.directions.size() == 2);
  CHECK(r.factorization == "t*s");
  CHECK_THROWS_AS(segre_directions(E11, E11), DegeneratePencil);
  Rng rng(8);
  for (int n = 0; n < 20; ++n) {
    auto q = segre_directions(random_chart(rng), random_chart(rng));
    CHECK(q.directions.size() <= 3);
  }
}
