#include "grasslab/classify.hpp"

#include <filesystem>
#include <fstream>

namespace grasslab {

std::string status_name(Status s) {
  switch (s) {
    case Status::SymbolicProven: return "SymbolicProven";
    case Status::PointwiseVerified: return "PointwiseVerified";
    case Status::Refuted: return "Refuted";
    case Status::Indeterminate: return "Indeterminate";
  }
  return "?";
}

Verdict run_points(const System& sys, int deg, const PointMode& mode, const PointCheck& check) {
  Verdict v;
  v.seeds = mode.seeds;
  int skipped = 0;
  for (auto seed : mode.seeds) {
    Sampler smp(sys, seed);
    int done = 0, tries = 0;
    while (done < mode.n && tries < 4 * mode.n + 20) {
      ++tries;
      SamplePoint sp;
      try {
        sp = smp.next(deg);
      } catch (const SamplingFailure& e) {
        v.note = e.what();
        break;
      }
      try {
        Failure f = check(sp);
        ++done;
        ++v.points_checked;
        if (f) {
          v.status = Status::Refuted;
          v.witness = Witness{sp.coords(), f->first, f->second};
          return v;
        }
      } catch (const IndeterminatePoint& e) {
        ++skipped;
        v.note = e.what();
      } catch (const std::domain_error& e) {
        ++skipped;
        v.note = std::string("singular point: ") + e.what();
      }
    }
  }
  v.status = v.points_checked > 0 ? Status::PointwiseVerified : Status::Indeterminate;
  if (skipped) v.note = std::to_string(skipped) + " point(s) skipped: " + v.note;
  return v;
}

Jet2 Jet2::of(const SamplePoint& sp) {
  Jet2 j;
  j.n = 2;
  const Series* s[2] = {&sp.f, &sp.g};
  j.d1 = [s](int w, int k) { return dval(*s[w], k); };
  j.d2 = [s](int w, int k, int l) { return dval(*s[w], k, l); };
  return j;
}

Jet2 Jet2::mirrored() const {
  Jet2 m;
  m.n = n;
  int nn = n;
  auto sw = [nn](int k) { return k < nn ? k + nn : k - nn; };
  auto d1c = d1;
  auto d2c = d2;
  m.d1 = [d1c, sw](int w, int k) { return d1c(1 - w, sw(k)); };
  m.d2 = [d2c, sw](int w, int k, int l) { return d2c(1 - w, sw(k), sw(l)); };
  return m;
}

namespace {

std::string idx_label(const std::string& base, std::initializer_list<int> idx) {
  std::string s = base + "[";
  bool first = true;
  for (int i : idx) {
    s += (first ? "" : ",") + std::to_string(i + 1);
    first = false;
  }
  return s + "]";
}

// One half of the 3D linear degeneracy relations, indices i, j in 0..n-1.
Rat ld27(const Jet2& J, int i, int j) {
  int n = J.n;
  auto F1 = [&](int k) { return J.d1(0, k); };
  auto G1 = [&](int k) { return J.d1(1, k); };
  auto F2 = [&](int k, int l) { return J.d2(0, k, l); };
  auto G2 = [&](int k, int l) { return J.d2(1, k, l); };
  int ui = i, uj = j, vi = n + i, vj = n + j;
  return (F1(uj) - G1(vj)) * F2(ui, ui) + 2 * (F1(ui) - G1(vi)) * F2(ui, uj) + 2 * G1(uj) * F2(ui, vi) +
         2 * G1(ui) * (F2(ui, vj) + F2(uj, vi)) + F1(vj) * G2(ui, ui) + 2 * F1(vi) * G2(ui, uj) +
         G1(uj) * G2(vi, vi) + 2 * G1(ui) * G2(vi, vj);
}

Rat ld_sym_term(const Jet2& J, int i, int j, int k) {
  int n = J.n;
  auto F1 = [&](int a) { return J.d1(0, a); };
  auto G1 = [&](int a) { return J.d1(1, a); };
  auto F2 = [&](int a, int b) { return J.d2(0, a, b); };
  auto G2 = [&](int a, int b) { return J.d2(1, a, b); };
  return (F1(k) - G1(n + k)) * F2(i, j) + G1(k) * (F2(i, n + j) + F2(j, n + i)) + F1(n + k) * G2(i, j) +
         G1(k) * G2(n + i, n + j);
}

Rat ld_sym(const Jet2& J, int i, int j, int k) {
  return ld_sym_term(J, i, j, k) + ld_sym_term(J, i, k, j) + ld_sym_term(J, j, i, k) + ld_sym_term(J, j, k, i) +
         ld_sym_term(J, k, i, j) + ld_sym_term(J, k, j, i);
}

}  // namespace

std::vector<std::pair<std::string, Rat>> ld_relations(const Jet2& j) {
  std::vector<std::pair<std::string, Rat>> out;
  Jet2 m = j.mirrored();
  for (int h = 0; h < 2; ++h)
    for (int a = 0; a < j.n; ++a)
      for (int b = 0; b < j.n; ++b) out.push_back({idx_label(h ? "ld_g" : "ld_f", {a, b}), ld27(h ? m : j, a, b)});
  return out;
}

std::vector<std::pair<std::string, Rat>> ld_relations_sym(const Jet2& j) {
  std::vector<std::pair<std::string, Rat>> out;
  Jet2 m = j.mirrored();
  for (int h = 0; h < 2; ++h)
    for (int a = 0; a < j.n; ++a)
      for (int b = a; b < j.n; ++b)
        for (int c = b; c < j.n; ++c)
          out.push_back({idx_label(h ? "sym_g" : "sym_f", {a, b, c}), ld_sym(h ? m : j, a, b, c)});
  return out;
}

std::vector<std::pair<std::string, Rat>> ld_relations_2d(const Jet2& j) {
  auto rel = [](const Jet2& J) -> Rat {
    Rat fu = J.d1(0, 0), fv = J.d1(0, 1), gu = J.d1(1, 0), gv = J.d1(1, 1);
    return (fu - gv) * J.d2(0, 0, 0) + 2 * gu * J.d2(0, 0, 1) + gu * J.d2(1, 1, 1) + fv * J.d2(1, 0, 0);
  };
  return {{"ld2_f", rel(j)}, {"ld2_g", rel(j.mirrored())}};
}

std::vector<std::pair<std::string, Rat>> linearisability_relations(const Jet2& j) {
  std::vector<std::pair<std::string, Rat>> out;
  auto half = [&](const Jet2& J, const std::string& tag) {
    auto F1 = [&](int k) { return J.d1(0, k); };
    auto G1 = [&](int k) { return J.d1(1, k); };
    auto F2 = [&](int k, int l) { return J.d2(0, k, l); };
    int u1 = 0, u2 = 1, v1 = 2, v2 = 3;
    Rat d[2] = {G1(v1) - F1(u1), G1(v2) - F1(u2)};
    for (int i = 0; i < 2; ++i) {
      int ui = i, vi = 2 + i;
      out.push_back({idx_label(tag + "_uu", {i}), F2(ui, ui) * d[i] - 2 * G1(ui) * F2(ui, vi)});
      out.push_back({idx_label(tag + "_vv", {i}), -F2(vi, vi) * d[i] - 2 * F1(vi) * F2(ui, vi)});
    }
    Rat e1 = -d[0], e2 = -d[1];
    out.push_back({tag + "_u1u2", F2(u1, u2) * d[0] * d[1] - G1(u2) * F2(u1, v1) * d[1] - G1(u1) * F2(u2, v2) * d[0]});
    out.push_back({tag + "_v1v2", F2(v1, v2) * e1 * e2 - F1(v2) * F2(u1, v1) * e2 - F1(v1) * F2(u2, v2) * e1});
    out.push_back({tag + "_mixed", (F2(u1, v2) + F2(u2, v1)) * e1 * e2 - e2 * e2 * F2(u1, v1) - e1 * e1 * F2(u2, v2)});
  };
  half(j, "lin_f");
  half(j.mirrored(), "lin_g");
  return out;
}

namespace {

struct SeriesBackend {
  using Elem = Rat;
  const SamplePoint& sp;
  Rat cst(const Rat& r) const { return r; }
  Rat fd(int which, int z) const { return dval(which ? sp.g : sp.f, z); }
};

std::string jetmono_str(const JetMono& m) {
  if (m.n == 0) return "1";
  std::string s;
  for (int i = 0; i < m.n; ++i) s += (i ? "*" : "") + pjet_name(m.v[i]);
  return s;
}

Failure first_nonzero(const std::vector<std::pair<std::string, Rat>>& rel) {
  for (auto& [l, v] : rel)
    if (sgn(v) != 0) return std::make_pair(l, v);
  return std::nullopt;
}

}  // namespace

Rat symbol_det(const SamplePoint& sp) { return det3(evol_metric(SeriesBackend{sp})); }

Failure ew_residual_failure(const SamplePoint& sp) {
  PointEngine eng(sp.f, sp.g, 4);
  PointBackend pb{eng};
  auto r = einstein_weyl(pb, evol_metric(pb));
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      for (auto& [m, v] : r.residual[i][j].values())
        return std::make_pair("EW[" + std::to_string(i) + "," + std::to_string(j) + "] coefficient of " + jetmono_str(m), v);
  return std::nullopt;
}

Failure cotton_failure(const SamplePoint& sp) {
  PointEngine eng(sp.f, sp.g, 5);
  PointBackend pb{eng};
  auto C = cotton(pb, evol_metric(pb));
  for (int k = 0; k < 27; ++k)
    for (auto& [m, v] : C[k].values())
      return std::make_pair("Cotton[" + std::to_string(k / 9) + "," + std::to_string(k / 3 % 3) + "," +
                                std::to_string(k % 3) + "] coefficient of " + jetmono_str(m),
                            v);
  return std::nullopt;
}

Verdict test_nondegenerate(const System& sys, Mode mode, const PointMode& pm) {
  if (mode == Mode::Symbolic && sys.direct()) {
    Verdict v;
    Mat3<Expr> G;
    try {
      G = symbol_metric(sys.evol);
    } catch (const DegenerateSymbol&) {
      v.status = Status::Refuted;
      v.witness = Witness{{}, "det g", Rat(0)};
      return v;
    }
    Expr d = det3(G);
    v.status = d.is_zero() ? Status::Refuted : Status::SymbolicProven;
    if (d.is_zero()) v.witness = Witness{{}, "det g", Rat(0)};
    v.note = "det g = " + print(d);
    return v;
  }
  // det g is a single function on X: one nonzero value settles it, and only
  // vanishing at every sample counts against it
  Verdict v;
  v.seeds = pm.seeds;
  std::optional<Witness> zero;
  for (auto seed : pm.seeds) {
    Sampler smp(sys, seed);
    for (int k = 0; k < pm.n; ++k) {
      SamplePoint sp;
      try {
        sp = smp.next(1);
      } catch (const SamplingFailure& e) {
        v.note = e.what();
        break;
      }
      ++v.points_checked;
      Rat d = symbol_det(sp);
      if (sgn(d) != 0) {
        v.status = Status::PointwiseVerified;
        return v;
      }
      if (!zero) zero = Witness{sp.coords(), "det g", d};
    }
  }
  v.status = zero ? Status::Refuted : Status::Indeterminate;
  v.witness = zero;
  return v;
}

std::vector<std::pair<std::string, Expr>> ew_residual_symbolic(const SystemEvol& sys) {
  JetContext ctx(4);
  RuleSet rules = evolution_rules(sys, ctx);
  SymBackend be{ctx, &rules, sys.f, sys.g};
  auto r = einstein_weyl(be, evol_metric(be));
  std::vector<std::pair<std::string, Expr>> out;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      if (r.residual[i][j].is_zero()) continue;
      for (auto& [m, c] : extract_coefficients(r.residual[i][j], 1, ctx))
        if (!c.is_zero())
          out.push_back({"EW[" + std::to_string(i) + "," + std::to_string(j) + "] coefficient of " + monomial_str(m), c});
    }
  return out;
}

Verdict test_integrable(const System& sys, Mode mode, const PointMode& pm) {
  if (mode == Mode::Symbolic && sys.direct()) {
    Verdict v;
    if (det3(symbol_metric(sys.evol)).is_zero()) throw DegenerateSymbol("degenerate system");
    auto res = ew_residual_symbolic(sys.evol);
    if (res.empty()) {
      v.status = Status::SymbolicProven;
      return v;
    }
    v.status = Status::Refuted;
    // exhibit a rational point where the coefficient is nonzero
    Rng rng(pm.seeds.empty() ? 1 : pm.seeds[0]);
    for (int t = 0; t < 100; ++t) {
      std::map<VarId, Rat> at{{V::a(), rng.rat()}, {V::b(), rng.rat()}, {V::p(), rng.rat()}, {V::q(), rng.rat()}};
      try {
        Rat val = eval(res.front().second, at);
        if (sgn(val) == 0) continue;
        v.witness = Witness{{at[V::a()], at[V::b()], at[V::p()], at[V::q()]}, res.front().first, val};
        break;
      } catch (const PoleError&) {
      }
    }
    v.note = std::to_string(res.size()) + " nonzero residual coefficient(s)";
    return v;
  }
  return run_points(sys, 3, pm, [](const SamplePoint& sp) -> Failure {
    if (sgn(symbol_det(sp)) == 0) throw IndeterminatePoint("degenerate symbol at sample point");
    return ew_residual_failure(sp);
  });
}

Verdict test_linearly_degenerate(const System& sys, const PointMode& pm) {
  return run_points(sys, 2, pm, [](const SamplePoint& sp) { return first_nonzero(ld_relations(Jet2::of(sp))); });
}

bool linearisability_singular(const Jet2& j) {
  for (int i = 0; i < j.n; ++i)
    if (j.d1(1, j.n + i) == j.d1(0, i)) return true;
  return false;
}

Verdict test_linearisable(const System& sys, const PointMode& pm, bool cotton) {
  Sampler deep(sys, 0);
  return run_points(sys, 2, pm, [&](const SamplePoint& sp) -> Failure {
    Jet2 j = Jet2::of(sp);
    auto f = first_nonzero(linearisability_relations(j));
    if (f) return f;
    // cleared relations lose information where a denominator vanishes
    if (cotton || linearisability_singular(j)) return cotton_failure(deep.at(sp.U, 4));
    return std::nullopt;
  });
}

// ------------------------------------------------------------ conditions

std::vector<std::vector<int>> multi_indices(int order) {
  std::vector<std::vector<int>> out;
  for (int a = order; a >= 0; --a)
    for (int b = order - a; b >= 0; --b)
      for (int p = order - a - b; p >= 0; --p) out.push_back({a, b, p, order - a - b - p});
  return out;
}

namespace {

using ResidualMap = std::map<std::tuple<int, int, JetMono>, Rat>;

ResidualMap residual_at(const std::array<Rat, 8>& first, const std::vector<Rat>& second, const std::vector<Rat>& third) {
  Series s[2] = {Series(4, 3), Series(4, 3)};
  auto m1 = multi_indices(1), m2 = multi_indices(2), m3 = multi_indices(3);
  for (int w = 0; w < 2; ++w) {
    for (int k = 0; k < 4; ++k) s[w].set_derivative(m1[k], first[4 * w + k]);
    for (int k = 0; k < 10; ++k) s[w].set_derivative(m2[k], second[10 * w + k]);
    for (int k = 0; k < 20; ++k) s[w].set_derivative(m3[k], third[20 * w + k]);
  }
  PointEngine eng(s[0], s[1], 4);
  PointBackend pb{eng};
  auto r = einstein_weyl(pb, evol_metric(pb));
  ResidualMap out;
  // (2,2) is fixed by the others through the vanishing trace
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      if (i + j < 4)
        for (auto& [m, v] : r.residual[i][j].values()) out[{i, j, m}] = v;
  return out;
}

}  // namespace

namespace {

using RowMap = std::map<std::tuple<int, int, JetMono>, int>;

void build_linear(const std::array<Rat, 8>& first, const std::vector<Rat>& second, RMat& A, RVec& b, RowMap& rows) {
  std::vector<Rat> zero3(40, Rat(0));
  ResidualMap base = residual_at(first, second, zero3);
  std::vector<ResidualMap> cols;
  rows.clear();
  for (auto& [k, v] : base) rows.emplace(k, 0);
  for (int m = 0; m < 40; ++m) {
    auto t = zero3;
    t[m] = 1;
    cols.push_back(residual_at(first, second, t));
    for (auto& [k, v] : cols.back()) rows.emplace(k, 0);
  }
  int idx = 0;
  for (auto& [k, r] : rows) r = idx++;
  A.assign(rows.size(), RVec(40, Rat(0)));
  b.assign(rows.size(), Rat(0));
  for (auto& [k, v] : base) b[rows[k]] = v;
  for (int m = 0; m < 40; ++m) {
    for (auto& [k, v] : cols[m]) A[rows[k]][m] = v;
    for (std::size_t r = 0; r < rows.size(); ++r) A[r][m] -= b[r];
  }
}

}  // namespace

void integrability_linear_system(const std::array<Rat, 8>& first, const std::vector<Rat>& second, RMat& A, RVec& b) {
  RowMap rows;
  build_linear(first, second, A, b, rows);
}

std::vector<Rat> IntegrabilityConditions::apply(const std::vector<Rat>& s) const {
  std::vector<Rat> out(40, Rat(0));
  for (int m = 0; m < 40; ++m)
    for (std::size_t q = 0; q < quad_index.size(); ++q) {
      if (sgn(quad[m][q]) == 0) continue;
      out[m] += quad[m][q] * s[quad_index[q].first] * s[quad_index[q].second];
    }
  return out;
}

IntegrabilityConditions derive_integrability_conditions(std::optional<std::array<Rat, 8>> first, std::uint64_t seed) {
  IntegrabilityConditions ic;
  Rng rng(seed);
  if (first) {
    ic.first = *first;
  } else {
    for (auto& x : ic.first) x = rng.nonzero_rat();
  }
  auto m2 = multi_indices(2), m3 = multi_indices(3);
  for (int w = 0; w < 2; ++w) {
    for (auto& e : m2) ic.second_names.push_back(var_name(deriv_symbol(w, {e[0], e[1], e[2], e[3]})));
    for (auto& e : m3) ic.third_names.push_back(var_name(deriv_symbol(w, {e[0], e[1], e[2], e[3]})));
  }
  std::vector<Rat> zero2(20, Rat(0)), zero3(40, Rat(0));
  RMat A;
  RVec b;
  RowMap rows;
  build_linear(ic.first, zero2, A, b, rows);
  ic.rows = static_cast<int>(rows.size());
  // quadratic part by polarization
  std::vector<ResidualMap> single(20);
  for (int k = 0; k < 20; ++k) {
    auto s = zero2;
    s[k] = 1;
    single[k] = residual_at(ic.first, s, zero3);
  }
  RMat B(rows.size());
  auto put = [&](const ResidualMap& r, Rat sign, std::size_t col) {
    for (auto& [k, v] : r) {
      auto it = rows.find(k);
      if (it == rows.end()) {
        if (sgn(v) != 0) throw RankDeficient("quadratic residual term outside the linear rows");
        continue;
      }
      B[it->second][col] -= sign * v;
    }
  };
  for (int k = 0; k < 20; ++k)
    for (int l = k; l < 20; ++l) {
      ic.quad_index.push_back({k, l});
      for (auto& row : B) row.push_back(Rat(0));
      std::size_t col = ic.quad_index.size() - 1;
      if (k == l) {
        put(single[k], 1, col);
      } else {
        auto s = zero2;
        s[k] = 1;
        s[l] = 1;
        put(residual_at(ic.first, s, zero3), 1, col);
        put(single[k], -1, col);
        put(single[l], -1, col);
      }
    }
  auto X = bareiss_solve(A, B, &ic.rank);
  if (ic.rank < 40) throw RankDeficient("rank " + std::to_string(ic.rank) + " < 40 at this specialization");
  ic.consistent = X.has_value();
  if (!X) return ic;
  ic.quad = *X;
  std::vector<Expr> svar;
  for (auto& n : ic.second_names) svar.push_back(Expr::var(n));
  for (int m = 0; m < 40; ++m) {
    Expr e(0L);
    for (std::size_t q = 0; q < ic.quad_index.size(); ++q)
      if (sgn(ic.quad[m][q]) != 0) e += Expr(ic.quad[m][q]) * svar[ic.quad_index[q].first] * svar[ic.quad_index[q].second];
    ic.solved.push_back(e);
  }
  return ic;
}

// ------------------------------------------------------------ constructors

SystemImplicit make_monge_ampere(const std::array<Rat, 10>& c1, const std::array<Rat, 10>& c2) {
  auto u = [](int i) { return Expr::var(V::u(i)); };
  auto v = [](int i) { return Expr::var(V::v(i)); };
  auto build = [&](const std::array<Rat, 10>& c) {
    const int pairs[3][2] = {{1, 2}, {1, 3}, {2, 3}};
    Expr e(c[9]);
    for (int k = 0; k < 3; ++k) {
      int i = pairs[k][0], j = pairs[k][1];
      e += Expr(c[k]) * (u(i) * v(j) - u(j) * v(i));
    }
    for (int i = 1; i <= 3; ++i) e += Expr(c[2 + i]) * u(i) + Expr(c[5 + i]) * v(i);
    return e;
  };
  SystemImplicit s{build(c1), build(c2)};
  if (s.F.is_zero() || s.G.is_zero() || (s.F / s.G).is_const())
    throw std::invalid_argument("Monge-Ampere pair is dependent");
  return s;
}

ChaslesResult chasles_generate(const RMat& A) {
  std::array<Expr, 5> xi, eta;
  for (int i = 0; i < 5; ++i) xi[i] = Expr::var("xi" + std::to_string(i + 1));
  for (int j = 0; j < 5; ++j) {
    eta[j] = Expr(0L);
    for (int i = 0; i < 5; ++i)
      if (sgn(A[i][j]) != 0) eta[j] += xi[i] * Expr(A[i][j]);
  }
  auto p = [&](int i, int j) { return xi[i - 1] * eta[j - 1] - xi[j - 1] * eta[i - 1]; };
  Expr p12 = p(1, 2);
  if (p12.is_zero()) throw std::invalid_argument("p12 vanishes identically: lines are undefined");
  ChaslesResult r;
  r.param = {p(3, 2) / p12, p(4, 2) / p12, p(5, 2) / p12, p(1, 3) / p12, p(1, 4) / p12, p(1, 5) / p12};
  return r;
}

ChaslesResult chasles_diagonal(const std::array<Rat, 5>& l) {
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      if (l[i] == l[j]) throw std::invalid_argument("coincident eigenvalues");
  RMat A(5, RVec(5, Rat(0)));
  for (int i = 0; i < 5; ++i) A[i][i] = l[i];
  ChaslesResult r = chasles_generate(A);
  r.alpha = ((l[1] - l[3]) * (l[2] - l[0])) / ((l[1] - l[2]) * (l[3] - l[0]));
  r.beta = ((l[1] - l[4]) * (l[2] - l[0])) / ((l[1] - l[2]) * (l[4] - l[0]));
  auto u = [](int i) { return Expr::var(V::u(i)); };
  auto v = [](int i) { return Expr::var(V::v(i)); };
  // the parametrisation gives alpha u1 v2 = u2 v1 with alpha as above
  r.system = SystemImplicit{Expr(*r.alpha) * u(1) * v(2) - u(2) * v(1), Expr(*r.beta) * u(1) * v(3) - u(3) * v(1)};
  return r;
}

std::vector<System> load_corpus_dir(const std::string& dir) {
  std::vector<std::filesystem::path> files;
  for (auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<System> out;
  for (auto& f : files) {
    std::ifstream in(f);
    out.push_back(system_from_json(nlohmann::json::parse(in)));
  }
  return out;
}

}  // namespace grasslab
