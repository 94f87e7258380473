#include "grasslab/jetspace.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace grasslab {

namespace {

const char kBase[4] = {'a', 'b', 'p', 'q'};

// first-order jet of base coordinate z in (a,b,p,q)
JetVar base_jet(int z) { return JetVar{z / 2, z % 2 == 0 ? 1 : 0, z % 2 == 1 ? 1 : 0, 0}; }

struct JetIndex {
  std::mutex mu;
  std::unordered_map<VarId, JetVar> by_var;
  std::unordered_map<VarId, std::pair<int, Multi4>> derivs;
};

JetIndex& jet_index() {
  static JetIndex j;
  return j;
}

Multi4 add_unit(Multi4 m, int z) {
  m[z]++;
  return m;
}

}  // namespace

VarId deriv_symbol(int which, const Multi4& m) {
  std::string n = which == 0 ? "f" : "g";
  if (m[0] + m[1] + m[2] + m[3] > 0) {
    n += "_";
    for (int z = 0; z < 4; ++z) n.append(m[z], kBase[z]);
  }
  VarId id = intern(n, Role::Deriv);
  auto& ji = jet_index();
  std::lock_guard<std::mutex> lk(ji.mu);
  ji.derivs.emplace(id, std::make_pair(which, m));
  return id;
}

std::optional<std::pair<int, Multi4>> deriv_of(VarId v) {
  auto& ji = jet_index();
  std::lock_guard<std::mutex> lk(ji.mu);
  auto it = ji.derivs.find(v);
  if (it == ji.derivs.end()) return std::nullopt;
  return it->second;
}

JetContext::JetContext(int max_order) : max_order_(max_order) {
  auto& ji = jet_index();
  for (int ord = 1; ord <= max_order; ++ord)
    for (int func = 0; func < 2; ++func)
      for (int k = 0; k <= ord; ++k)
        for (int i = ord - k; i >= 0; --i) {
          JetVar jv{func, i, ord - k - i, k};
          std::string name = jet_spelling(func, jv.i, jv.j, jv.k);
          table_.add(name, Role::Jet);
          VarId id = *table_.lookup(name);
          std::lock_guard<std::mutex> lk(ji.mu);
          ji.by_var.emplace(id, jv);
        }
  table_.alias("u_x", V::a()).alias("u_y", V::b()).alias("v_x", V::p()).alias("v_y", V::q());
  for (int which = 0; which < 2; ++which)
    for (int d = 0; d <= 4; ++d)
      for (int m0 = d; m0 >= 0; --m0)
        for (int m1 = d - m0; m1 >= 0; --m1)
          for (int m2 = d - m0 - m1; m2 >= 0; --m2) {
            Multi4 m{m0, m1, m2, d - m0 - m1 - m2};
            VarId id = deriv_symbol(which, m);
            table_.alias(var_name(id), id);
          }
  table_.add("lam", Role::Spectral);
}

VarId JetContext::var(int func, int i, int j, int k) const {
  if (i + j + k > max_order_) throw OrderOverflow("jet order exceeds " + std::to_string(max_order_));
  if (i + j + k == 0) throw std::invalid_argument("zeroth-order jet is not a coordinate");
  return intern(jet_spelling(func, i, j, k), Role::Jet);
}

std::optional<JetVar> JetContext::jet_of(VarId v) const {
  auto& ji = jet_index();
  std::lock_guard<std::mutex> lk(ji.mu);
  auto it = ji.by_var.find(v);
  if (it == ji.by_var.end()) return std::nullopt;
  if (it->second.order() > max_order_) return std::nullopt;
  return it->second;
}

Expr JetContext::total_derivative(const Expr& e, int dir) const {
  // D(v) for every variable of e, as polynomials
  std::map<VarId, Poly> dv;
  for (VarId v : e.variables()) {
    if (auto jv = jet_of(v)) {
      JetVar n = *jv;
      (dir == 0 ? n.i : dir == 1 ? n.j : n.k)++;
      dv[v] = Poly::var(var(n));
    } else if (auto d = deriv_of(v)) {
      Poly s;
      for (int z = 0; z < 4; ++z) {
        JetVar n = base_jet(z);
        (dir == 0 ? n.i : dir == 1 ? n.j : n.k)++;
        s += Poly::var(deriv_symbol(d->first, add_unit(d->second, z))) * Poly::var(var(n));
      }
      dv[v] = s;
    }
  }
  auto Dpoly = [&](const Poly& P) {
    Poly r;
    for (auto& [v, d] : dv) {
      if (!P.has_var(v)) continue;
      r += P.diff(v) * d;
    }
    return r;
  };
  if (e.den().is_const()) return Expr(Dpoly(e.num()) * Rat(1 / e.den().const_value()));
  return Expr(Dpoly(e.num()) * e.den() - e.num() * Dpoly(e.den()), e.den() * e.den());
}

RuleSet::RuleSet(const JetContext& ctx, std::vector<RewriteRule> rules) : ctx_(ctx), rules_(std::move(rules)) {}

std::optional<Expr> RuleSet::reduced_jet(const JetVar& jv) const {
  VarId id = ctx_.var(jv);
  auto it = memo_.find(id);
  if (it != memo_.end()) return it->second;
  for (const auto& r : rules_) {
    const JetVar& l = r.lhs;
    if (l.func != jv.func || l.i > jv.i || l.j > jv.j || l.k > jv.k) continue;
    Expr out;
    if (l == jv) {
      out = r.rhs;
    } else {
      JetVar prev = jv;
      int dir;
      if (jv.i > l.i) {
        prev.i--;
        dir = 0;
      } else if (jv.j > l.j) {
        prev.j--;
        dir = 1;
      } else {
        prev.k--;
        dir = 2;
      }
      out = reduce(ctx_.total_derivative(*reduced_jet(prev), dir));
    }
    memo_[id] = out;
    return out;
  }
  return std::nullopt;
}

Expr RuleSet::reduce(const Expr& e) const {
  Expr cur = e;
  while (true) {
    std::optional<JetVar> best;
    for (VarId v : cur.variables()) {
      auto jv = ctx_.jet_of(v);
      if (!jv) continue;
      bool hit = false;
      for (const auto& r : rules_)
        if (r.lhs.func == jv->func && r.lhs.i <= jv->i && r.lhs.j <= jv->j && r.lhs.k <= jv->k) hit = true;
      if (hit && (!best || jv->order() < best->order())) best = jv;
    }
    if (!best) return cur;
    Expr rep = *reduced_jet(*best);
    cur = subst(cur, {{ctx_.var(*best), rep}});
  }
}

RuleSet evolution_rules(const SystemEvol& sys, const JetContext& ctx) {
  return RuleSet(ctx, {{JetVar{0, 0, 0, 1}, sys.f}, {JetVar{1, 0, 0, 1}, sys.g}});
}

Expr reduce_on_solution(const Expr& e, const SystemEvol& sys, const JetContext& ctx) {
  return evolution_rules(sys, ctx).reduce(e);
}

std::map<JetMonomial, Expr> extract_coefficients(const Expr& e, int base_order, const JetContext& ctx) {
  auto high = [&](VarId v) {
    auto jv = ctx.jet_of(v);
    return jv && jv->order() > base_order;
  };
  for (VarId v : e.den().variables())
    if (high(v)) throw std::invalid_argument("expression is not polynomial in the higher jets");
  std::map<JetMonomial, std::vector<Term>> groups;
  for (const auto& t : e.num().terms()) {
    JetMonomial hm;
    Mono low;
    for (const auto& f : t.m.factors()) {
      if (high(f.v))
        hm.push_back({f.v, f.e});
      else
        low = low * Mono::var(f.v, f.e);
    }
    groups[hm].push_back({low, t.c});
  }
  std::map<JetMonomial, Expr> out;
  for (auto& [m, ts] : groups) out[m] = Expr(Poly::from_terms(std::move(ts)), e.den());
  return out;
}

std::string monomial_str(const JetMonomial& m) {
  if (m.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  for (auto& [v, e] : m) {
    if (!first) os << "*";
    first = false;
    os << var_name(v);
    if (e > 1) os << "^" << e;
  }
  return os.str();
}

namespace {
VarId chart_of_base(int z) { return z == 0 ? V::u(1) : z == 1 ? V::u(2) : z == 2 ? V::v(1) : V::v(2); }
}  // namespace

ImplicitJets::ImplicitJets(const SystemImplicit& sys) : sys_(sys) {
  Expr J = diff(sys.F, V::u(3)) * diff(sys.G, V::v(3)) - diff(sys.F, V::v(3)) * diff(sys.G, V::u(3));
  if (J.is_zero()) throw SingularJacobian("singular Jacobian: system is not solvable for (u3, v3)");
}

Expr ImplicitJets::dz(const Expr& h, int z) {
  Expr r = diff(h, chart_of_base(z));
  Expr hu = diff(h, V::u(3)), hv = diff(h, V::v(3));
  if (!hu.is_zero()) r += hu * get(0, add_unit(Multi4{0, 0, 0, 0}, z));
  if (!hv.is_zero()) r += hv * get(1, add_unit(Multi4{0, 0, 0, 0}, z));
  return r;
}

Expr ImplicitJets::get(int which, const Multi4& m) {
  int ord = m[0] + m[1] + m[2] + m[3];
  if (ord == 0) return Expr::var(which == 0 ? V::u(3) : V::v(3));
  auto key = std::make_pair(which, m);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  Expr out;
  if (ord == 1) {
    int z = 0;
    while (m[z] == 0) ++z;
    VarId x = chart_of_base(z);
    Expr Fu = diff(sys_.F, V::u(3)), Fv = diff(sys_.F, V::v(3));
    Expr Gu = diff(sys_.G, V::u(3)), Gv = diff(sys_.G, V::v(3));
    Expr Fz = diff(sys_.F, x), Gz = diff(sys_.G, x);
    Expr det = Fu * Gv - Fv * Gu;
    // [Fu Fv; Gu Gv] [f_z; g_z] = -[Fz; Gz]
    Expr fz = -(Gv * Fz - Fv * Gz) / det;
    Expr gz = -(Fu * Gz - Gu * Fz) / det;
    memo_[{0, m}] = fz;
    memo_[{1, m}] = gz;
    return which == 0 ? fz : gz;
  }
  int z = 0;
  while (m[z] == 0) ++z;
  Multi4 prev = m;
  prev[z]--;
  out = dz(get(which, prev), z);
  memo_[key] = out;
  return out;
}

SystemImplicit wrap_evolutionary(const SystemEvol& s) {
  return SystemImplicit{Expr::var(V::u(3)) - evol_to_chart(s.f), Expr::var(V::v(3)) - evol_to_chart(s.g)};
}

Expr evol_to_chart(const Expr& e) {
  return subst(e, {{V::a(), Expr::var(V::u(1))},
                   {V::b(), Expr::var(V::u(2))},
                   {V::p(), Expr::var(V::v(1))},
                   {V::q(), Expr::var(V::v(2))}});
}

Expr chart_to_evol(const Expr& e) {
  return subst(e, {{V::u(1), Expr::var(V::a())},
                   {V::u(2), Expr::var(V::b())},
                   {V::v(1), Expr::var(V::p())},
                   {V::v(2), Expr::var(V::q())}});
}

}  // namespace grasslab
