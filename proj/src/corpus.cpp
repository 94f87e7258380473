#include <stdexcept>

#include "grasslab/classify.hpp"

namespace grasslab {

namespace {

const char* kChart = R"([["1","0","-2","-1","2"],["2","1","-2","1","2"],["-1","1","0","0","-2"],["1","2","-2","1","-2"],["1","0","1","0","0"]])";
// [32] lands on a singular chart under the matrix above
const char* kChart32 = R"([["2","2","0","-2","-2"],["1","-2","0","1","-1"],["2","2","-1","2","-2"],["2","1","2","0","2"],["-1","2","2","-2","0"]])";

Expected exp(std::optional<bool> nd, std::optional<bool> in, std::optional<bool> ld, std::optional<bool> lin) {
  Expected e;
  e.nondegenerate = nd;
  e.integrable = in;
  e.linearly_degenerate = ld;
  e.linearisable = lin;
  return e;
}

System evo(const std::string& name, const char* f, const char* g, Expected e) {
  System s = System::evolution(name, parse(f, evol_table()), parse(g, evol_table()));
  s.expected = e;
  return s;
}

System imp(const std::string& name, const char* F, const char* G, const char* M, Expected e) {
  std::optional<SL5> T;
  if (M) T = SL5::from_json(M);
  System s = System::implicit(name, parse(F, implicit_table()), parse(G, implicit_table()), T);
  s.expected = e;
  return s;
}

std::vector<System> build() {
  const auto none = std::nullopt;
  Expected lindeg = exp(true, true, true, none);
  std::vector<System> c;
  // axes (x,y,t) -> (x,t,y) so that the pair is solved for t-derivatives
  c.push_back(evo("dkp", "p", "b - 1/2*a^2", exp(true, true, false, false)));
  c.push_back(imp("dkp_implicit", "u3 - 1/2*u1^2 - v2", "v1 - u2", kChart, exp(true, true, false, false)));
  c.push_back(imp("dkp_backlund", "v2 - 1/2*v1^2 - u1", "v3 - 1/3*v1^3 - v1*u1 - u2", kChart,
                  exp(true, true, false, false)));

  // the Backlund pair solved for y-derivatives: axes (x,y,t) -> (x,t,y)
  c.push_back(evo("dkp_backlund_evol", "q - p^3/3 - p*a", "p^2/2 + a", exp(true, true, false, false)));

  c.push_back(imp("table1_11111", "u1*v2 - 4/3*u2*v1", "u1*v3 - 3/2*u3*v1", kChart, lindeg));
  c.push_back(imp("table1_2111", "u1*v2 - u2*v1 - v1*v2", "u1*v3 - u3*v1 - 2*v1*v3", kChart, lindeg));
  c.push_back(imp("table1_221", "u1*v2 - u2*v1 - v1^2", "u1*v3 - u3*v1 - v1*v3", kChart, lindeg));
  c.push_back(imp("table1_311", "u2 - v1*v2", "u3 - (1 - v1)*v3", kChart, lindeg));
  c.push_back(imp("table1_32", "u2 - v1*v2", "u3 - v2 - v1*v3", kChart32, lindeg));
  c.push_back(imp("table1_41", "u1 - v2 + v1^2", "u3 - (1 - v1)*v3", kChart, lindeg));
  c.push_back(imp("table1_5", "u1 - v2 + v1^2", "u2 - v3 + v1*v2", kChart, exp(true, true, true, false)));

  // Backlund pairs with lambda = 2
  c.push_back(imp("table2_2111", "v2 - u2*v1", "2*v3 - u3*v1", kChart, lindeg));
  c.push_back(imp("table2_221a", "v2 - 2*u2*v1", "v3 + (4*u2 - 2*u3)*v1", kChart, lindeg));
  c.push_back(imp("table2_221b", "u2*v3 - 1", "u1 - u2*v1", kChart, lindeg));
  c.push_back(imp("table2_311", "v3 + (2 - u2)*v2", "2*v1 - u1*v2", kChart, lindeg));
  c.push_back(imp("table2_32", "u2*v1 - 1", "u3 - u2*v2", kChart, lindeg));
  c.push_back(imp("table2_41", "v2 + (2 - u1)*v1", "v3 + (4 - 2*u1 + u2)*v1", kChart, lindeg));

  // u_t = v_x, v_t = u_y/v_x + eta(u_x) v_x^2 / 6
  c.push_back(evo("chazy_eta_0", "p", "b/p", exp(true, true, none, none)));
  c.push_back(evo("chazy_eta_6_over_s", "p", "b/p + p^2/a", exp(true, true, none, none)));
  c.push_back(evo("chazy_eta_s", "p", "b/p + a*p^2/6", exp(true, false, none, none)));
  // v_x + u_x u_y r(u_t) = 0, v_t = u_y
  c.push_back(imp("example2_r_1", "v1 + u1*u2", "v3 - u2", kChart, exp(true, true, none, none)));
  c.push_back(imp("example2_r_s", "v1 + u1*u2*u3", "v3 - u2", nullptr, exp(true, false, none, none)));

  c.push_back(evo("linear", "p", "b", exp(true, true, true, true)));
  c.push_back(imp("monge_ampere", "u1*v2 - u2*v1 - v3", "u2*v3 - u3*v2 - u1", kChart, exp(true, true, true, true)));
  return c;
}

}  // namespace

const std::vector<System>& corpus() {
  static const std::vector<System> c = build();
  return c;
}

const System& corpus_get(const std::string& name) {
  for (const System& s : corpus())
    if (s.name == name) return s;
  throw std::out_of_range("no corpus entry named " + name);
}

}  // namespace grasslab
