#include "grasslab/system.hpp"

#include <algorithm>

namespace grasslab {

namespace {

VarId slot_var(int k) { return k < 3 ? V::u(k + 1) : V::v(k - 2); }
Rat& slot(ChartPoint& U, int k) { return U[k / 3][k % 3]; }
const Rat& slot(const ChartPoint& U, int k) { return U[k / 3][k % 3]; }

int slot_of(VarId v) {
  for (int k = 0; k < 6; ++k)
    if (slot_var(k) == v) return k;
  return -1;
}

bool jointly_affine(const Poly& P, int k, int l) {
  VarId a = slot_var(k), b = slot_var(l);
  for (const Term& t : P.terms())
    if (t.m.exp(a) + t.m.exp(b) > 1) return false;
  return true;
}

Series chart_eval(const Poly& P, const Chart<Series>& W) {
  const Series& any = W[0][0];
  auto get = [&](VarId v) -> Series {
    int k = slot_of(v);
    if (k < 0) throw std::invalid_argument("system uses a non-chart variable: " + var_name(v));
    return W[k / 3][k % 3];
  };
  return eval_poly<Series>(P, get, Series(any.nvars(), any.deg()), Series::constant(any.nvars(), any.deg(), Rat(1)));
}

Rat chart_eval(const Poly& P, const ChartPoint& U) {
  auto get = [&](VarId v) -> Rat {
    int k = slot_of(v);
    if (k < 0) throw std::invalid_argument("system uses a non-chart variable: " + var_name(v));
    return slot(U, k);
  };
  return eval_poly<Rat>(P, get, Rat(0), Rat(1));
}

}  // namespace

System System::evolution(std::string name, Expr f, Expr g) {
  System s;
  s.name = std::move(name);
  s.evolutionary = true;
  s.evol = {std::move(f), std::move(g)};
  s.impl = wrap_evolutionary(s.evol);
  return s;
}

System System::implicit(std::string name, Expr F, Expr G, std::optional<SL5> M) {
  System s;
  s.name = std::move(name);
  s.impl = {std::move(F), std::move(G)};
  s.transform = std::move(M);
  return s;
}

System System::transformed(const SL5& M) const {
  System s = *this;
  s.transform = transform ? M * *transform : M;
  return s;
}

const VarTable& implicit_table() {
  static const VarTable t = [] {
    VarTable t = chart_table();
    const char* names[2][3] = {{"u_x", "u_y", "u_t"}, {"v_x", "v_y", "v_t"}};
    for (int i = 1; i <= 3; ++i) {
      t.alias(names[0][i - 1], V::u(i));
      t.alias(names[1][i - 1], V::v(i));
    }
    return t;
  }();
  return t;
}

nlohmann::json sl5_to_json(const SL5& M) { return nlohmann::json::parse(M.to_json()); }
SL5 sl5_from_json(const nlohmann::json& j) { return SL5::from_json(j.dump()); }

System system_from_json(const nlohmann::json& j) {
  std::string name = j.value("name", std::string("unnamed"));
  std::string form = j.at("form").get<std::string>();
  System s;
  if (form == "evolutionary") {
    s = System::evolution(name, parse(j.at("f").get<std::string>(), evol_table()),
                          parse(j.at("g").get<std::string>(), evol_table()));
  } else if (form == "implicit") {
    s = System::implicit(name, parse(j.at("F").get<std::string>(), implicit_table()),
                         parse(j.at("G").get<std::string>(), implicit_table()));
  } else {
    throw std::invalid_argument("unknown form: " + form);
  }
  if (j.contains("transform") && !j.at("transform").is_null()) s.transform = sl5_from_json(j.at("transform"));
  if (j.contains("expected")) {
    auto& e = j.at("expected");
    auto get = [&](const char* k, std::optional<bool>& out) {
      if (e.contains(k)) out = e.at(k).get<bool>();
    };
    get("nondegenerate", s.expected.nondegenerate);
    get("integrable", s.expected.integrable);
    get("linearly_degenerate", s.expected.linearly_degenerate);
    get("linearisable", s.expected.linearisable);
  }
  return s;
}

nlohmann::json system_to_json(const System& s) {
  nlohmann::json j;
  j["name"] = s.name;
  if (s.evolutionary) {
    j["form"] = "evolutionary";
    j["f"] = print(s.evol.f);
    j["g"] = print(s.evol.g);
  } else {
    j["form"] = "implicit";
    j["F"] = print(s.impl.F);
    j["G"] = print(s.impl.G);
  }
  if (s.transform) j["transform"] = sl5_to_json(*s.transform);
  nlohmann::json e = nlohmann::json::object();
  auto put = [&](const char* k, const std::optional<bool>& v) {
    if (v) e[k] = *v;
  };
  put("nondegenerate", s.expected.nondegenerate);
  put("integrable", s.expected.integrable);
  put("linearly_degenerate", s.expected.linearly_degenerate);
  put("linearisable", s.expected.linearisable);
  if (!e.empty()) j["expected"] = e;
  return j;
}

std::vector<Rat> SamplePoint::coords() const {
  return {z[0], z[1], z[2], z[3], f.constant_term(), g.constant_term()};
}

Series taylor(const Expr& e, const std::array<Rat, 4>& z, int deg) {
  std::array<Series, 4> xs;
  for (int k = 0; k < 4; ++k) xs[k] = Series::variable(4, deg, k, z[k]);
  VarId ids[4] = {V::a(), V::b(), V::p(), V::q()};
  auto get = [&](VarId v) -> const Series& {
    for (int k = 0; k < 4; ++k)
      if (ids[k] == v) return xs[k];
    throw std::invalid_argument("unexpected variable " + var_name(v));
  };
  return eval_expr<Series>(e, get, Series(4, deg), Series::constant(4, deg, Rat(1)),
                           [](const Series& s) { return s.inv(); });
}

Sampler::Sampler(const System& sys, std::uint64_t seed) : sys_(sys), rng_(seed) {
  Fp_ = sys.impl.F.num();
  Gp_ = sys.impl.G.num();
  if (sys.transform) inv_ = sys.transform->inverse();
  for (int k = 0; k < 6; ++k)
    for (int l = k + 1; l < 6; ++l)
      if (jointly_affine(Fp_, k, l) && jointly_affine(Gp_, k, l)) pairs_.push_back({k, l});
  // prefer the dependent pair so evolutionary systems are solved directly
  std::stable_partition(pairs_.begin(), pairs_.end(), [](auto& p) { return p[0] == 2 && p[1] == 5; });
}

ChartPoint Sampler::draw_original() {
  if (pairs_.empty()) throw SamplingFailure("no pair of chart coordinates enters the system affinely");
  ChartPoint U;
  for (int k = 0; k < 6; ++k) slot(U, k) = rng_.rat();
  for (auto& pr : pairs_) {
    // F = c1 w1 + c2 w2 + c0 in the pair (w1, w2)
    auto coeffs = [&](const Poly& P) {
      slot(U, pr[0]) = 0;
      slot(U, pr[1]) = 0;
      Rat c0 = chart_eval(P, U);
      slot(U, pr[0]) = 1;
      Rat c1 = chart_eval(P, U) - c0;
      slot(U, pr[0]) = 0;
      slot(U, pr[1]) = 1;
      Rat c2 = chart_eval(P, U) - c0;
      return std::array<Rat, 3>{c0, c1, c2};
    };
    auto cf = coeffs(Fp_), cg = coeffs(Gp_);
    Rat det = cf[1] * cg[2] - cf[2] * cg[1];
    if (sgn(det) == 0) continue;
    // a homogeneous pair pins the point to w = 0, which is not generic
    if (sgn(cf[0]) == 0 && sgn(cg[0]) == 0) continue;
    slot(U, pr[0]) = (-cf[0] * cg[2] + cf[2] * cg[0]) / det;
    slot(U, pr[1]) = (-cf[1] * cg[0] + cf[0] * cg[1]) / det;
    if (sgn(chart_eval(sys_.impl.F.den(), U)) == 0 || sgn(chart_eval(sys_.impl.G.den(), U)) == 0)
      throw SamplingFailure("pole of the system");
    return U;
  }
  throw SamplingFailure("singular affine pair");
}

SamplePoint Sampler::at(const ChartPoint& U, int deg) const {
  SamplePoint sp;
  sp.U = U;
  sp.z = {U[0][0], U[0][1], U[1][0], U[1][1]};
  if (sys_.direct()) {
    sp.f = taylor(sys_.evol.f, sp.z, deg);
    sp.g = taylor(sys_.evol.g, sp.z, deg);
    if (sp.f.constant_term() != U[0][2] || sp.g.constant_term() != U[1][2])
      throw SamplingFailure("chart point is not on the fourfold");
    return sp;
  }
  auto residual = [&](const Chart<Series>& W) {
    if (!inv_) return std::array<Series, 2>{chart_eval(Fp_, W), chart_eval(Gp_, W)};
    const Series& any = W[0][0];
    int n = any.nvars(), d = any.deg();
    auto Wo = act_generic<Series>(
        *inv_, W, [&](const Rat& r) { return Series::constant(n, d, r); },
        [](const Series& s) {
          if (sgn(s.constant_term()) == 0) throw ChartBoundary("chart boundary");
          return s.inv();
        });
    return std::array<Series, 2>{chart_eval(Fp_, Wo), chart_eval(Gp_, Wo)};
  };
  // Jacobian in (u3, v3)
  Chart<Series> W1;
  for (int k = 0; k < 6; ++k) W1[k / 3][k % 3] = Series::variable(6, 1, k, slot(U, k));
  auto r1 = residual(W1);
  if (sgn(r1[0].constant_term()) != 0 || sgn(r1[1].constant_term()) != 0)
    throw SamplingFailure("chart point is not on the fourfold");
  auto d1 = [](const Series& s, int k) {
    std::vector<int> e(6, 0);
    e[k] = 1;
    return s.coeff(e);
  };
  Rat J[2][2] = {{d1(r1[0], 2), d1(r1[0], 5)}, {d1(r1[1], 2), d1(r1[1], 5)}};
  Rat det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
  if (sgn(det) == 0) throw SamplingFailure("implicit Jacobian in (u3, v3) vanishes");
  Rat Ji[2][2] = {{J[1][1] / det, -J[0][1] / det}, {-J[1][0] / det, J[0][0] / det}};
  Series sf = Series::constant(4, deg, U[0][2]), sg = Series::constant(4, deg, U[1][2]);
  Chart<Series> W;
  W[0][0] = Series::variable(4, deg, 0, U[0][0]);
  W[0][1] = Series::variable(4, deg, 1, U[0][1]);
  W[1][0] = Series::variable(4, deg, 2, U[1][0]);
  W[1][1] = Series::variable(4, deg, 3, U[1][1]);
  for (int it = 0; it <= deg + 1; ++it) {
    W[0][2] = sf;
    W[1][2] = sg;
    auto r = residual(W);
    if (r[0].is_zero() && r[1].is_zero()) {
      sp.f = sf;
      sp.g = sg;
      return sp;
    }
    sf -= r[0] * Ji[0][0] + r[1] * Ji[0][1];
    sg -= r[0] * Ji[1][0] + r[1] * Ji[1][1];
  }
  throw SamplingFailure("series solve did not converge");
}

SamplePoint Sampler::next(int deg) {
  for (int attempt = 0; attempt < 400; ++attempt) {
    try {
      if (sys_.direct()) {
        ChartPoint U;
        std::array<Rat, 4> z;
        for (auto& x : z) x = rng_.rat();
        U[0] = {z[0], z[1], Rat(0)};
        U[1] = {z[2], z[3], Rat(0)};
        std::map<VarId, Rat> at{{V::a(), z[0]}, {V::b(), z[1]}, {V::p(), z[2]}, {V::q(), z[3]}};
        U[0][2] = eval(sys_.evol.f, at);
        U[1][2] = eval(sys_.evol.g, at);
        return this->at(U, deg);
      }
      ChartPoint U = draw_original();
      if (sys_.transform) U = act(*sys_.transform, U);
      return this->at(U, deg);
    } catch (const SamplingFailure&) {
    } catch (const std::domain_error&) {  // poles, chart boundary, non-unit series
    }
  }
  throw SamplingFailure("no admissible point found for " + sys_.name);
}

SL5 find_chart_transform(const System& sys, std::uint64_t seed, int tries) {
  Rng rng(seed);
  for (int t = 0; t < tries; ++t) {
    RMat m(5, RVec(5));
    for (auto& row : m)
      for (auto& x : row) x = Rat(rng.range(-2, 2));
    if (sgn(det(m)) == 0) continue;
    SL5 M = SL5::from_matrix(m);
    System s = sys.transformed(M);
    try {
      Sampler smp(s, seed + 1);
      for (int k = 0; k < 3; ++k) smp.next(2);
      return M;
    } catch (const SamplingFailure&) {
    }
  }
  throw SamplingFailure("no chart transform found for " + sys.name);
}

}  // namespace grasslab
