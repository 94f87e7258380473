#include <algorithm>
#include <set>

#include "doctest.h"
#include "grasslab/classify.hpp"

using namespace grasslab;

namespace {

// Random symmetric second-order data in n pairs.
Jet2 random_jet(int n, Rng& rng) {
  int m = 2 * n;
  auto d1 = std::make_shared<std::vector<Rat>>(2 * m);
  auto d2 = std::make_shared<std::vector<Rat>>(2 * m * m);
  for (auto& x : *d1) x = rng.rat();
  for (int w = 0; w < 2; ++w)
    for (int k = 0; k < m; ++k)
      for (int l = k; l < m; ++l) (*d2)[(w * m + k) * m + l] = (*d2)[(w * m + l) * m + k] = rng.rat();
  Jet2 j;
  j.n = n;
  j.d1 = [d1, m](int w, int k) { return (*d1)[w * m + k]; };
  j.d2 = [d2, m](int w, int k, int l) { return (*d2)[(w * m + k) * m + l]; };
  return j;
}

Rat value_of(const std::vector<std::pair<std::string, Rat>>& rel, const std::string& label) {
  for (auto& [l, v] : rel)
    if (l == label) return v;
  FAIL("missing relation " << label);
  return Rat(0);
}

std::vector<Rat> derivs(const Series& s, int order) {
  std::vector<Rat> out;
  for (auto& e : multi_indices(order)) out.push_back(s.derivative(e));
  return out;
}

}  // namespace

TEST_CASE("symmetrized relations restrict to the 3D family") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Jet2 j = random_jet(2, rng);
    auto ld = ld_relations(j);
    auto sym = ld_relations_sym(j);
    REQUIRE(ld.size() == 8);
    for (std::string h : {"f", "g"})
      for (int i = 1; i <= 2; ++i)
        for (int k = 1; k <= 2; ++k) {
          // Sym(i,i,k) = 2 E(i,k), labels carry sorted indices
          std::array<int, 3> t{i, i, k};
          std::sort(t.begin(), t.end());
          std::string key = "sym_" + h + "[" + std::to_string(t[0]) + "," + std::to_string(t[1]) + "," + std::to_string(t[2]) + "]";
          std::string e = "ld_" + h + "[" + std::to_string(i) + "," + std::to_string(k) + "]";
          CHECK(value_of(sym, key) == 2 * value_of(ld, e));
        }
  }
}

TEST_CASE("2D relations are the one-pair case") {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    Jet2 j = random_jet(1, rng);
    auto ld = ld_relations(j);
    auto two = ld_relations_2d(j);
    CHECK(value_of(ld, "ld_f[1,1]") == 3 * value_of(two, "ld2_f"));
    CHECK(value_of(ld, "ld_g[1,1]") == 3 * value_of(two, "ld2_g"));
  }
}

TEST_CASE("corpus lookup") {
  std::set<std::string> names;
  int table1 = 0;
  for (auto& s : corpus()) {
    CHECK(names.insert(s.name).second);
    if (s.name.rfind("table1_", 0) == 0) ++table1;
  }
  CHECK(table1 == 7);
  CHECK(corpus_get("dkp").evolutionary);
  CHECK_THROWS_AS(corpus_get("nope"), std::out_of_range);
}

TEST_CASE("dKP classification") {
  const System& dkp = corpus_get("dkp");
  CHECK(test_nondegenerate(dkp, Mode::Symbolic).status == Status::SymbolicProven);
  CHECK(test_integrable(dkp, Mode::Symbolic).status == Status::SymbolicProven);
  auto ld = test_linearly_degenerate(dkp);
  REQUIRE(ld.refuted());
  CHECK(ld.witness->value != 0);
  auto lin = test_linearisable(dkp);
  REQUIRE(lin.refuted());
  CHECK(lin.witness->value != 0);
}

TEST_CASE("Chazy family") {
  CHECK(test_integrable(corpus_get("chazy_eta_6_over_s"), Mode::Symbolic).status == Status::SymbolicProven);
  auto bad = test_integrable(corpus_get("chazy_eta_s"));
  REQUIRE(bad.refuted());
  CHECK(bad.witness->value != 0);
}

TEST_CASE("linear and Monge-Ampere systems are linearisable and linearly degenerate") {
  CHECK(test_linearisable(corpus_get("linear"), {}, true).holds());
  CHECK(test_linearly_degenerate(corpus_get("linear")).holds());
  Rng rng(11);
  for (int trial = 0; trial < 3; ++trial) {
    std::array<Rat, 10> a, b;
    for (auto& x : a) x = rng.rat(5, 2);
    for (auto& x : b) x = rng.rat(5, 2);
    SystemImplicit ma = make_monge_ampere(a, b);
    System s = System::implicit("ma", ma.F, ma.G);
    s = s.transformed(find_chart_transform(s, trial));
    PointMode pm{3, {1}};
    if (!test_nondegenerate(s, Mode::Points, pm).holds()) continue;
    CHECK(test_linearisable(s, pm, true).holds());
    CHECK(test_linearly_degenerate(s, pm).holds());
  }
}

TEST_CASE("the [5] canonical form") {
  const System& s = corpus_get("table1_5");
  PointMode pm{5, {1, 2}};
  CHECK(test_nondegenerate(s, Mode::Points, pm).holds());
  CHECK(test_integrable(s, Mode::Points, pm).holds());
  CHECK(test_linearly_degenerate(s, pm).holds());
  CHECK(test_linearisable(s, pm).refuted());
}

TEST_CASE("integrability conditions") {
  auto c = derive_integrability_conditions(std::nullopt, 1);
  CHECK(c.rows == 105);
  CHECK(c.rank == 40);
  CHECK(c.consistent);
  CHECK(c.solved.size() == 40);
  for (const Rat& x : c.apply(std::vector<Rat>(20, Rat(0)))) CHECK(x == 0);

  SUBCASE("agree with third derivatives of an integrable system") {
    Sampler smp(corpus_get("dkp"), 3);
    SamplePoint sp = smp.next(3);
    std::array<Rat, 8> first;
    auto f1 = derivs(sp.f, 1), g1 = derivs(sp.g, 1);
    for (int k = 0; k < 4; ++k) {
      first[k] = f1[k];
      first[4 + k] = g1[k];
    }
    auto cd = derive_integrability_conditions(first, 1);
    REQUIRE(cd.consistent);
    auto second = derivs(sp.f, 2), g2 = derivs(sp.g, 2);
    second.insert(second.end(), g2.begin(), g2.end());
    auto third = derivs(sp.f, 3), g3 = derivs(sp.g, 3);
    third.insert(third.end(), g3.begin(), g3.end());
    CHECK(cd.apply(second) == third);
  }
}

TEST_CASE("Chasles construction") {
  auto r = chasles_diagonal({Rat(0), Rat(1), Rat(2), Rat(3), Rat(4)});
  CHECK(*r.alpha == Rat(4, 3));
  CHECK(*r.beta == Rat(3, 2));
  REQUIRE(r.system);
  Rng rng(9);
  int checked = 0;
  while (checked < 50) {
    std::map<VarId, Rat> xi;
    for (int i = 1; i <= 5; ++i) xi[intern("xi" + std::to_string(i))] = rng.nonzero_rat();
    std::map<VarId, Rat> pt;
    try {
      for (int k = 0; k < 3; ++k) {
        pt[V::u(k + 1)] = eval(r.param[k], xi);
        pt[V::v(k + 1)] = eval(r.param[3 + k], xi);
      }
    } catch (const PoleError&) {
      continue;
    }
    CHECK(eval(r.system->F, pt) == 0);
    CHECK(eval(r.system->G, pt) == 0);
    ++checked;
  }
  CHECK_THROWS_AS(chasles_diagonal({Rat(0), Rat(1), Rat(1), Rat(3), Rat(4)}), std::invalid_argument);
  RMat id(5, RVec(5, Rat(0)));
  for (int i = 0; i < 5; ++i) id[i][i] = 1;
  CHECK_THROWS_AS(chasles_generate(id), std::invalid_argument);
}

TEST_CASE("verdicts survive an SL5 transform") {
  Rng rng(21);
  PointMode pm{3, {1}};
  for (const char* name : {"table1_41", "example2_r_s"}) {
    const System& s = corpus_get(name);
    System t = s.transformed(SL5::random(rng));
    CHECK(test_integrable(t, Mode::Points, pm).status == test_integrable(s, Mode::Points, pm).status);
    CHECK(test_linearly_degenerate(t, pm).status == test_linearly_degenerate(s, pm).status);
  }
}
