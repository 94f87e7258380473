#include "grasslab/laxverify.hpp"

#include <sstream>

namespace grasslab {

namespace {

VarId base_var(int z) { return z == 0 ? V::a() : z == 1 ? V::b() : z == 2 ? V::p() : V::q(); }

Expr d(const Expr& e, VarId v) { return diff(e, v); }

std::string assignment(const std::vector<VarId>& vars, const std::vector<Rat>& vals) {
  std::ostringstream os;
  for (std::size_t i = 0; i < vars.size(); ++i) os << (i ? ", " : "") << var_name(vars[i]) << "=" << vals[i].get_str();
  return os.str();
}

// Random rational point where e is finite and nonzero, if one turns up.
std::optional<std::pair<std::vector<Rat>, Rat>> nonzero_at(const Expr& e, Rng& rng, std::vector<VarId>& vars,
                                                          int tries = 40) {
  vars = e.variables();
  for (int t = 0; t < tries; ++t) {
    std::map<VarId, Rat> pt;
    std::vector<Rat> vals;
    for (VarId v : vars) vals.push_back(pt[v] = rng.rat());
    try {
      Rat val = eval(e, pt);
      if (sgn(val) != 0) return std::make_pair(vals, val);
    } catch (const PoleError&) {
    }
  }
  return std::nullopt;
}

Verdict decide(const std::vector<std::pair<std::string, Expr>>& exprs, Mode mode, const PointMode& pm) {
  Verdict v;
  v.seeds = pm.seeds;
  for (auto seed : pm.seeds) {
    Rng rng(seed);
    for (auto& [name, e] : exprs) {
      if (mode == Mode::Symbolic && e.is_zero()) continue;
      std::vector<VarId> vars;
      if (mode == Mode::Symbolic) {
        // nonzero rational function: it is nonzero at almost every point
        auto w = nonzero_at(e, rng, vars, 200);
        v.status = Status::Refuted;
        if (w) {
          v.witness = Witness{w->first, name, w->second};
          v.note = "at " + assignment(vars, w->first);
        } else {
          v.note = name + " is not identically zero";
        }
        return v;
      }
      vars = e.variables();
      for (int k = 0; k < pm.n; ++k) {
        std::map<VarId, Rat> pt;
        std::vector<Rat> vals;
        for (VarId x : vars) vals.push_back(pt[x] = rng.rat());
        Rat val;
        try {
          val = eval(e, pt);
        } catch (const PoleError&) {
          continue;
        }
        ++v.points_checked;
        if (sgn(val) != 0) {
          v.status = Status::Refuted;
          v.witness = Witness{vals, name, val};
          v.note = "at " + assignment(vars, vals);
          return v;
        }
      }
    }
    if (mode == Mode::Symbolic) break;
  }
  v.status = mode == Mode::Symbolic ? Status::SymbolicProven
             : v.points_checked > 0 ? Status::PointwiseVerified
                                    : Status::Indeterminate;
  return v;
}

}  // namespace

const std::vector<LaxFixture>& lax_fixtures() {
  static const std::vector<LaxFixture> fx = [] {
    VarTable t = evol_table();
    t.alias("lam", V::lam());
    auto P = [&](const char* s) { return parse(s, t); };
    // S_y = S_x^2 + v_x S_x, S_t = 4/3 S_x^3 + 2 v_x S_x^2 + (u_x + v_x^2) S_x with y and t swapped
    return std::vector<LaxFixture>{
        {"dkp_backlund_lax", "dkp_backlund_evol", {P("4/3*lam^3 + 2*p*lam^2 + (a + p^2)*lam"), P("lam^2 + p*lam")}},
        {"dkp_lax", "dkp", {P("lam^3/3 + a*lam + p"), P("lam^2/2 + a")}},
        {"linear_lax", "linear", {P("lam^3/3"), P("lam^2/2")}},
    };
  }();
  return fx;
}

const LaxFixture& lax_fixture(const std::string& name) {
  for (auto& f : lax_fixtures())
    if (f.name == name) return f;
  throw std::out_of_range("no Lax fixture named " + name);
}

LaxPair lax_from_json(const nlohmann::json& j) {
  VarTable t = evol_table();
  std::string lam = j.value("lambda_var", "lam");
  t.alias(lam, V::lam());
  return {parse(j.at("P").get<std::string>(), t), parse(j.at("Q").get<std::string>(), t)};
}

nlohmann::json lax_to_json(const LaxPair& l) { return {{"P", print(l.P)}, {"Q", print(l.Q)}, {"lambda_var", "lam"}}; }

std::vector<std::pair<std::string, Expr>> lax_relations(const SystemEvol& s, const LaxPair& l) {
  VarId a = V::a(), b = V::b(), p = V::p(), q = V::q(), lam = V::lam();
  Expr fa = d(s.f, a), fb = d(s.f, b), fp = d(s.f, p), fq = d(s.f, q);
  Expr ga = d(s.g, a), gb = d(s.g, b), gp = d(s.g, p), gq = d(s.g, q);
  Expr Pa = d(l.P, a), Pb = d(l.P, b), Pp = d(l.P, p), Pq = d(l.P, q), Pl = d(l.P, lam);
  Expr Qa = d(l.Q, a), Qb = d(l.Q, b), Qp = d(l.Q, p), Qq = d(l.Q, q), Ql = d(l.Q, lam);
  return {
      {"lax_a", fa * Pa + ga * Pp + Pl * Qa - Ql * Pa},
      {"lax_p", fp * Pa + gp * Pp + Pl * Qp - Ql * Pp},
      {"lax_Qa", Qa - (fb * Pa + fa * Pb + gb * Pp + ga * Pq + Pl * Qb - Ql * Pb)},
      {"lax_Qp", Qp - (fq * Pa + fp * Pb + gq * Pp + gp * Pq + Pl * Qq - Ql * Pq)},
      {"lax_Qb", Qb - (fb * Pb + gb * Pq)},
      {"lax_Qq", Qq - (fq * Pb + gq * Pq)},
  };
}

Expr dispersion_identity(const SystemEvol& s, const LaxPair& l) {
  VarId a = V::a(), b = V::b(), p = V::p(), q = V::q(), lam = V::lam();
  Expr Pl = d(l.P, lam), Ql = d(l.Q, lam);
  Expr m00 = d(s.f, a) + d(s.f, b) * Pl - Ql, m01 = d(s.f, p) + d(s.f, q) * Pl;
  Expr m10 = d(s.g, a) + d(s.g, b) * Pl, m11 = d(s.g, p) + d(s.g, q) * Pl - Ql;
  return m00 * m11 - m01 * m10;
}

Verdict check_lax_relations(const SystemEvol& sys, const LaxPair& lax, Mode mode, const PointMode& pm) {
  return decide(lax_relations(sys, lax), mode, pm);
}

Verdict check_dispersion_identity(const SystemEvol& sys, const LaxPair& lax, Mode mode, const PointMode& pm) {
  return decide({{"dispersion", dispersion_identity(sys, lax)}}, mode, pm);
}

Expr VectorField4::apply(const JetContext& ctx, const Expr& h) const {
  Expr r;
  for (int i = 0; i < 3; ++i)
    if (!c[i].is_zero()) r += c[i] * ctx.total_derivative(h, i);
  if (!c[3].is_zero()) r += c[3] * diff(h, V::lam());
  return r;
}

VectorField4 VectorField4::operator+(const VectorField4& o) const {
  VectorField4 r;
  for (int i = 0; i < 4; ++i) r.c[i] = c[i] + o.c[i];
  return r;
}

VectorField4 bracket(const JetContext& ctx, const VectorField4& X, const VectorField4& Y) {
  VectorField4 r;
  for (int k = 0; k < 4; ++k) r.c[k] = X.apply(ctx, Y.c[k]) - Y.apply(ctx, X.c[k]);
  return r;
}

Verdict check_vf_commute(const JetContext& ctx, const RuleSet& rules, const VectorField4& X, const VectorField4& Y) {
  VectorField4 B = bracket(ctx, X, Y);
  static const char* names[4] = {"[X,Y]^x", "[X,Y]^y", "[X,Y]^t", "[X,Y]^lam"};
  std::vector<std::pair<std::string, Expr>> out;
  for (int k = 0; k < 4; ++k) {
    Expr r = rules.reduce(B.c[k]);
    for (VarId v : r.variables())
      if (auto jv = ctx.jet_of(v); jv && jv->k > 0)
        throw InsufficientRules("jet " + var_name(v) + " is not eliminated by the rules");
    out.push_back({names[k], r});
  }
  return decide(out, Mode::Symbolic, {1, {1}});
}

std::pair<VectorField4, VectorField4> lax_vector_fields(const JetContext& ctx, const LaxPair& lax) {
  auto field = [&](const Expr& R, int dir) {
    VectorField4 F;
    F.c[0] = -diff(R, V::lam());
    F.c[dir] = Expr(1L);
    Expr lam_dot;
    for (int z = 0; z < 4; ++z) {
      // (a, b, p, q)_x
      int func = z < 2 ? 0 : 1;
      int i = 2 - (z % 2), j = z % 2;
      lam_dot += diff(R, base_var(z)) * Expr::var(ctx.var(func, i, j, 0));
    }
    F.c[3] = lam_dot;
    return F;
  };
  return {field(lax.P, 1), field(lax.Q, 2)};
}

DispersionParam dispersion_parametrisation(const SystemEvol& s) {
  VarId a = V::a(), b = V::b(), p = V::p(), q = V::q();
  Expr fa = d(s.f, a), fb = d(s.f, b), fp = d(s.f, p), fq = d(s.f, q);
  Expr ga = d(s.g, a), gb = d(s.g, b), gp = d(s.g, p), gq = d(s.g, q);
  DispersionParam r;
  r.phi = intern("phi");
  Expr ph = Expr::var(r.phi);
  Expr den = fq + (fb - gq) * ph - gb * ph * ph;
  if (den.is_zero()) throw DegenerateDenominator("f_q + (f_b - g_q) phi - g_b phi^2 vanishes identically");
  r.mu = -(fp + (fa - gp) * ph - ga * ph * ph) / den;
  r.lam = ((fq + fb * ph) * (gp + ga * ph) - (fp + fa * ph) * (gq + gb * ph)) / den;
  return r;
}

Expr dispersion_conic(const SystemEvol& s, const Expr& mu, const Expr& lam) {
  VarId a = V::a(), b = V::b(), p = V::p(), q = V::q();
  Expr fa = d(s.f, a), fb = d(s.f, b), fp = d(s.f, p), fq = d(s.f, q);
  Expr ga = d(s.g, a), gb = d(s.g, b), gp = d(s.g, p), gq = d(s.g, q);
  return (lam - fa - mu * fb) * (lam - gp - mu * gq) - (fp + mu * fq) * (ga + mu * gb);
}

std::vector<std::pair<std::string, Expr>> null_geodesic_conditions(const SystemEvol& sys, const LaxPair& lax) {
  JetContext ctx(4);
  RuleSet rules = evolution_rules(sys, ctx);
  SymBackend be{ctx, &rules, sys.f, sys.g};
  auto G = evol_metric(be);
  auto H = inverse3(be, G);
  auto w = weyl_omega(be, G, H);
  auto W = weyl_connection(be, G, H, w);

  Expr Pl = diff(lax.P, V::lam()), Ql = diff(lax.Q, V::lam());
  std::array<Expr, 3> theta = {Expr(1L), Pl, Ql};
  std::vector<std::pair<std::string, Expr>> out;
  Expr n;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) n += G[i][j] * theta[i] * theta[j];
  out.push_back({"g(theta,theta)", n});

  auto [X, Y] = lax_vector_fields(ctx, lax);
  const char* tag[2] = {"X", "Y"};
  int k = 0;
  for (const VectorField4* F : {&X, &Y}) {
    // the lam-component of the lifted field is the derivative of lam along the projection
    std::array<Expr, 3> Dth;
    for (int m = 0; m < 3; ++m) {
      Expr acc = rules.reduce(F->apply(ctx, theta[m]));
      for (int i = 0; i < 3; ++i)
        for (int l = 0; l < 3; ++l)
          if (!F->c[i].is_zero()) acc -= F->c[i] * W[l][i][m] * theta[l];
      Dth[m] = acc;
    }
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        out.push_back({std::string("D_") + tag[k] + "theta^theta[" + std::to_string(i) + std::to_string(j) + "]",
                       rules.reduce(Dth[i] * theta[j] - Dth[j] * theta[i])});
    ++k;
  }
  return out;
}

Verdict check_null_geodesic(const SystemEvol& sys, const LaxPair& lax, const PointMode& pm) {
  return decide(null_geodesic_conditions(sys, lax), Mode::Points, pm);
}

}  // namespace grasslab
