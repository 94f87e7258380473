#include "grasslab/grassmann.hpp"

#include <map>
#include <mutex>
#include <sstream>

#include "json.hpp"

namespace grasslab {

SL5 SL5::identity() {
  SL5 r;
  for (int i = 0; i < 5; ++i) r.m[i][i] = 1;
  return r;
}

SL5 SL5::from_matrix(const RMat& m) {
  if (m.size() != 5) throw std::invalid_argument("SL5: expected a 5x5 matrix");
  for (auto& row : m)
    if (row.size() != 5) throw std::invalid_argument("SL5: expected a 5x5 matrix");
  SL5 r;
  r.m = m;
  r.scale = det(m);
  if (sgn(r.scale) == 0) throw std::invalid_argument("SL5: singular matrix");
  return r;
}

SL5 SL5::random(Rng& rng) {
  for (;;) {
    RMat m(5, RVec(5));
    for (auto& row : m)
      for (auto& x : row) x = rng.rat();
    Rat d = det(m);
    if (sgn(d) != 0) return from_matrix(m);
  }
}

SL5 SL5::swap(int i, int j) {
  RMat m(5, RVec(5, Rat(0)));
  for (int k = 0; k < 5; ++k) m[k][k] = 1;
  int a = i, b = 2 + j;
  m[a][a] = m[b][b] = 0;
  m[a][b] = m[b][a] = 1;
  return from_matrix(m);
}

SL5 SL5::operator*(const SL5& o) const {
  SL5 r;
  r.m = matmul(m, o.m);
  r.scale = scale * o.scale;
  return r;
}

SL5 SL5::inverse() const {
  auto inv = grasslab::inverse(m);
  if (!inv) throw std::invalid_argument("SL5: singular matrix");
  SL5 r;
  r.m = *inv;
  r.scale = 1 / scale;
  return r;
}

std::string SL5::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (auto& row : m) {
    nlohmann::json jr = nlohmann::json::array();
    for (auto& x : row) jr.push_back(rat_str(x));
    j.push_back(jr);
  }
  return j.dump();
}

SL5 SL5::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  RMat m;
  for (auto& row : j) {
    RVec r;
    for (auto& x : row) r.push_back(x.is_string() ? parse_rat(x.get<std::string>()) : Rat(x.get<long>()));
    m.push_back(r);
  }
  return from_matrix(m);
}

ChartPoint act(const SL5& M, const ChartPoint& U) {
  return act_generic<Rat>(
      M, U, [](const Rat& r) { return r; },
      [](const Rat& d) {
        if (sgn(d) == 0) throw ChartBoundary("CU+D is singular");
        return Rat(1 / d);
      });
}

namespace {

RMat chart_mat(const ChartPoint& U) {
  RMat r(2, RVec(3));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = U[i][j];
  return r;
}

RMat block(const SL5& M, int r0, int c0, int nr, int nc) {
  RMat r(nr, RVec(nc));
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) r[i][j] = M.m[r0 + i][c0 + j];
  return r;
}

RMat add(RMat a, const RMat& b, int sign = 1) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] += sign > 0 ? b[i][j] : -b[i][j];
  return a;
}

}  // namespace

ChartPoint act_tangent(const SL5& M, const ChartPoint& U, const ChartPoint& dU) {
  ChartPoint Ut = act(M, U);
  RMat W = add(matmul(block(M, 2, 0, 3, 2), chart_mat(U)), block(M, 2, 2, 3, 3));
  auto Wi = inverse(W);
  if (!Wi) throw ChartBoundary("CU+D is singular");
  RMat L = add(block(M, 0, 0, 2, 2), matmul(chart_mat(Ut), block(M, 2, 0, 3, 2)), -1);
  RMat r = matmul(matmul(L, chart_mat(dU)), *Wi);
  ChartPoint out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = r[i][j];
  return out;
}

int matrix_rank(const ChartPoint& U) { return rank(chart_mat(U)); }

namespace {

// den^d * P(N / den) with d the total degree of P in the chart variables.
Poly homogenized_subst(const Poly& P, const std::map<VarId, Poly>& N, const Poly& den) {
  unsigned d = 0;
  for (const Term& t : P.terms()) {
    unsigned e = 0;
    for (auto& f : t.m.factors())
      if (N.count(f.v)) e += f.e;
    d = std::max(d, e);
  }
  std::map<std::pair<VarId, unsigned>, Poly> pw;
  auto power = [&](VarId v, unsigned e) -> const Poly& {
    auto key = std::make_pair(v, e);
    auto it = pw.find(key);
    if (it == pw.end()) it = pw.emplace(key, N.at(v).pow(e)).first;
    return it->second;
  };
  std::vector<Poly> den_pw{Poly(1L)};
  while (den_pw.size() <= d) den_pw.push_back(den_pw.back() * den);
  Poly out;
  for (const Term& t : P.terms()) {
    Poly r(t.c);
    unsigned e = 0;
    for (auto& f : t.m.factors()) {
      if (N.count(f.v)) {
        r = r * power(f.v, f.e);
        e += f.e;
      } else {
        r = r * Poly::var(f.v, f.e);
      }
    }
    out = out + r * den_pw[d - e];
  }
  return out;
}

}  // namespace

SystemImplicit transform_system(const SystemImplicit& sys, const SL5& M) {
  SL5 Mi = M.inverse();
  Chart<Poly> U;
  for (int j = 0; j < 3; ++j) {
    U[0][j] = Poly::var(V::u(j + 1));
    U[1][j] = Poly::var(V::v(j + 1));
  }
  Poly den;
  auto num = act_generic<Poly>(
      Mi, U, [](const Rat& r) { return Poly(r); },
      [&](const Poly& d) {
        den = d;
        return Poly(1L);
      });
  std::map<VarId, Poly> N;
  for (int j = 0; j < 3; ++j) {
    N[V::u(j + 1)] = num[0][j];
    N[V::v(j + 1)] = num[1][j];
  }
  auto tr = [&](const Expr& e) { return Expr(homogenized_subst(e.num(), N, den).primitive()); };
  return SystemImplicit{tr(sys.F), tr(sys.G)};
}

// ---------------------------------------------------------------- generators

namespace {

VarId wvar(int k) { return k < 3 ? V::u(k + 1) : V::v(k - 2); }

std::vector<VectorField> build_generators() {
  std::vector<VectorField> out;
  auto u = [](int i) { return Expr::var(V::u(i + 1)); };
  auto v = [](int i) { return Expr::var(V::v(i + 1)); };
  auto blank = [](std::string n) {
    VectorField f;
    f.name = std::move(n);
    for (auto& c : f.c) c = Expr(0L);
    return f;
  };
  for (int i = 0; i < 3; ++i) {
    auto f = blank("U" + std::to_string(i + 1));
    f.c[i] = Expr(1L);
    out.push_back(f);
  }
  for (int i = 0; i < 3; ++i) {
    auto f = blank("V" + std::to_string(i + 1));
    f.c[3 + i] = Expr(1L);
    out.push_back(f);
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      auto f = blank("X" + std::to_string(i + 1) + std::to_string(j + 1));
      f.c[j] = u(i);
      f.c[3 + j] = v(i);
      out.push_back(f);
    }
  auto L11 = blank("L11"), L12 = blank("L12"), L21 = blank("L21"), L22 = blank("L22");
  for (int k = 0; k < 3; ++k) {
    L11.c[k] = u(k);
    L12.c[3 + k] = u(k);
    L21.c[k] = v(k);
    L22.c[3 + k] = v(k);
  }
  out.insert(out.end(), {L11, L12, L21, L22});
  for (int i = 0; i < 3; ++i) {
    auto f = blank("P" + std::to_string(i + 1));
    for (int k = 0; k < 3; ++k) {
      f.c[k] = u(i) * u(k);
      f.c[3 + k] = v(i) * u(k);
    }
    out.push_back(f);
  }
  for (int i = 0; i < 3; ++i) {
    auto f = blank("Q" + std::to_string(i + 1));
    for (int k = 0; k < 3; ++k) {
      f.c[k] = u(i) * v(k);
      f.c[3 + k] = v(i) * v(k);
    }
    out.push_back(f);
  }
  return out;
}

}  // namespace

Expr VectorField::apply(const Expr& h) const {
  Expr r(0L);
  for (int k = 0; k < 6; ++k)
    if (!c[k].is_zero()) r += c[k] * diff(h, wvar(k));
  return r;
}

const std::vector<VectorField>& generators() {
  static const std::vector<VectorField> g = build_generators();
  return g;
}

const VectorField& generator(const std::string& name) {
  for (auto& f : generators())
    if (f.name == name) return f;
  throw std::invalid_argument("unknown generator " + name);
}

VectorField combine(const std::vector<std::pair<Rat, std::string>>& terms) {
  VectorField r;
  for (auto& c : r.c) c = Expr(0L);
  for (auto& [k, n] : terms) {
    const auto& g = generator(n);
    for (int i = 0; i < 6; ++i) r.c[i] += g.c[i] * Expr(k);
    if (!r.name.empty()) r.name += " + ";
    r.name += (k == 1 ? std::string() : rat_str(k) + "*") + n;
  }
  return r;
}

std::vector<VectorField> linear_stabilizer() {
  return {
      combine({{1, "U1"}}),
      combine({{1, "V2"}}),
      combine({{1, "U2"}, {1, "V3"}}),
      combine({{1, "U3"}, {1, "V1"}}),
      combine({{1, "X13"}, {2, "X32"}, {1, "L12"}}),
      combine({{1, "X23"}, {2, "X31"}, {1, "L21"}}),
      combine({{1, "X11"}, {1, "X22"}, {1, "X33"}}),
      combine({{1, "X11"}, {-1, "X22"}, {1, "L11"}}),
  };
}

bool annihilates(const VectorField& Y, const SystemEvol& sys) {
  SystemImplicit w = wrap_evolutionary(sys);
  std::map<VarId, Expr> on{{V::u(3), evol_to_chart(sys.f)}, {V::v(3), evol_to_chart(sys.g)}};
  return is_zero(subst(Y.apply(w.F), on)) && is_zero(subst(Y.apply(w.G), on));
}

namespace {

// Coefficients of every generator and their first partials.
struct GenTables {
  std::vector<std::array<Expr, 6>> c;
  std::vector<std::array<std::array<Expr, 6>, 6>> dc;  // dc[g][k][w]
};

const GenTables& gen_tables() {
  static const GenTables t = [] {
    GenTables t;
    for (auto& g : generators()) {
      t.c.push_back(g.c);
      std::array<std::array<Expr, 6>, 6> d;
      for (int k = 0; k < 6; ++k)
        for (int w = 0; w < 6; ++w) d[k][w] = diff(g.c[k], wvar(w));
      t.dc.push_back(d);
    }
    return t;
  }();
  return t;
}

}  // namespace

RMat prolonged_generator_matrix(const Jet1& pt) {
  // base z = (u1,u2,v1,v2) -> chart slots (0,1,3,4); f -> slot 2, g -> slot 5
  static const int zslot[4] = {0, 1, 3, 4};
  std::map<VarId, Rat> at{{V::u(1), pt[0]}, {V::u(2), pt[1]}, {V::v(1), pt[2]},
                          {V::v(2), pt[3]}, {V::u(3), pt[4]}, {V::v(3), pt[5]}};
  const Rat* fz = &pt[6];
  const Rat* gz = &pt[10];
  const auto& T = gen_tables();
  RMat out;
  for (std::size_t n = 0; n < T.c.size(); ++n) {
    Rat val[6], dv[6][6];
    for (int k = 0; k < 6; ++k) {
      val[k] = eval(T.c[n][k], at);
      for (int w = 0; w < 6; ++w) dv[k][w] = eval(T.dc[n][k][w], at);
    }
    // total derivative D_j of coefficient k
    auto D = [&](int k, int j) -> Rat { return dv[k][zslot[j]] + fz[j] * dv[k][2] + gz[j] * dv[k][5]; };
    RVec row;
    for (int j = 0; j < 4; ++j) row.push_back(val[zslot[j]]);
    row.push_back(val[2]);
    row.push_back(val[5]);
    for (int dep = 0; dep < 2; ++dep) {
      const Rat* dz = dep == 0 ? fz : gz;
      int slot = dep == 0 ? 2 : 5;
      for (int j = 0; j < 4; ++j) {
        Rat r = D(slot, j);
        for (int k = 0; k < 4; ++k) r -= dz[k] * D(zslot[k], j);
        row.push_back(r);
      }
    }
    out.push_back(row);
  }
  return out;
}

int prolonged_generator_rank(const Jet1& pt) { return rank(prolonged_generator_matrix(pt)); }

// ---------------------------------------------------------------- Segre

namespace {

using UPoly = std::vector<Rat>;  // ascending coefficients

void trim(UPoly& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

UPoly urem(UPoly a, const UPoly& b) {
  while (a.size() >= b.size() && !a.empty()) {
    Rat f = a.back() / b.back();
    std::size_t sh = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[sh + i] -= f * b[i];
    a.pop_back();
    trim(a);
  }
  return a;
}

UPoly ugcd(UPoly a, UPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    UPoly r = urem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Rat l = a.back();
    for (auto& x : a) x /= l;
  }
  return a;
}

bool rat_sqrt(const Rat& x, Rat& out) {
  if (sgn(x) < 0) return false;
  mpz_class n = x.get_num(), d = x.get_den();
  mpz_class rn = sqrt(n), rd = sqrt(d);
  if (rn * rn != n || rd * rd != d) return false;
  out = Rat(rn, rd);
  out.canonicalize();
  return true;
}

std::string lin_factor(const Rat& r) {  // s - r t
  if (sgn(r) == 0) return "s";
  std::string c = rat_str(abs(r));
  return std::string("(s ") + (sgn(r) > 0 ? "- " : "+ ") + (c == "1" ? "" : c + "*") + "t)";
}

}  // namespace

SegreResult segre_directions(const ChartPoint& M1, const ChartPoint& M2) {
  std::vector<std::array<Rat, 3>> forms;  // (s^2, st, t^2)
  for (int j = 0; j < 3; ++j)
    for (int k = j + 1; k < 3; ++k) {
      std::array<Rat, 3> f;
      f[0] = M1[0][j] * M1[1][k] - M1[0][k] * M1[1][j];
      f[1] = M1[0][j] * M2[1][k] + M2[0][j] * M1[1][k] - M1[0][k] * M2[1][j] - M2[0][k] * M1[1][j];
      f[2] = M2[0][j] * M2[1][k] - M2[0][k] * M2[1][j];
      if (sgn(f[0]) || sgn(f[1]) || sgn(f[2])) forms.push_back(f);
    }
  if (forms.empty()) throw DegeneratePencil("every member of the pencil has rank at most one");
  int tpow = 2;
  UPoly g;
  bool first = true;
  for (auto& f : forms) {
    int z = sgn(f[0]) ? 0 : (sgn(f[1]) ? 1 : 2);
    tpow = std::min(tpow, z);
    UPoly p{f[2], f[1], f[0]};
    trim(p);
    g = first ? ugcd(p, {}) : ugcd(g, p);
    first = false;
  }
  SegreResult r;
  int gd = static_cast<int>(g.size()) - 1;
  r.degree = tpow + gd;
  // homogeneous form t^tpow * g(s/t) t^gd, listed from s^degree down
  r.form.assign(r.degree + 1, Rat(0));
  for (int i = 0; i <= gd; ++i) r.form[gd - i] = g[i];
  std::vector<std::string> fac;
  if (tpow == 1) fac.push_back("t");
  if (tpow == 2) fac.push_back("t^2");
  if (tpow > 0) r.directions.push_back({Rat(1), Rat(0)});
  if (gd == 1) {
    Rat root = -g[0];
    r.directions.push_back({root, Rat(1)});
    fac.push_back(lin_factor(root));
  } else if (gd == 2) {
    Rat b = g[1], c = g[0], disc = b * b - 4 * c, sq;
    if (rat_sqrt(disc, sq)) {
      Rat r1 = (-b + sq) / 2, r2 = (-b - sq) / 2;
      r.directions.push_back({r1, Rat(1)});
      if (r1 != r2) r.directions.push_back({r2, Rat(1)});
      fac.push_back(lin_factor(r1));
      fac.push_back(lin_factor(r2));
    } else {
      std::ostringstream os;
      os << "(s^2";
      if (sgn(b)) os << (sgn(b) > 0 ? " + " : " - ") << rat_str(abs(b)) << "*s*t";
      if (sgn(c)) os << (sgn(c) > 0 ? " + " : " - ") << rat_str(abs(c)) << "*t^2";
      os << ")";
      fac.push_back(os.str());
    }
  }
  for (std::size_t i = 0; i < fac.size(); ++i) r.factorization += (i ? "*" : "") + fac[i];
  if (fac.empty()) r.factorization = "1";
  return r;
}

namespace {

int qidx(int a, int b) {  // upper-triangle index in 6 variables
  if (a > b) std::swap(a, b);
  return a * 6 - a * (a - 1) / 2 + (b - a);
}

RVec quadric_of(const RVec& l1, const RVec& l2, const RVec& l3, const RVec& l4) {
  RVec q(21, Rat(0));
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) q[qidx(a, b)] += l1[a] * l2[b] - l3[a] * l4[b];
  return q;
}

}  // namespace

std::vector<RVec> segre_quadrics(const SL5& M, const ChartPoint& U) {
  // J[r][c]: component r of the image of unit direction c (r,c in du1..dv3)
  RMat J(6, RVec(6));
  for (int c = 0; c < 6; ++c) {
    ChartPoint e{};
    for (auto& row : e)
      for (auto& x : row) x = 0;
    e[c / 3][c % 3] = 1;
    ChartPoint im = act_tangent(M, U, e);
    for (int r = 0; r < 6; ++r) J[r][c] = im[r / 3][r % 3];
  }
  std::vector<RVec> out;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) out.push_back(quadric_of(J[i], J[3 + j], J[3 + i], J[j]));
  return out;
}

bool segre_ideal_preserved(const SL5& M, const ChartPoint& U) {
  RMat basis;  // columns are the original quadrics
  std::vector<RVec> orig;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      RVec e(6, Rat(0)), f(6, Rat(0)), g(6, Rat(0)), h(6, Rat(0));
      e[i] = 1;
      f[3 + j] = 1;
      g[3 + i] = 1;
      h[j] = 1;
      orig.push_back(quadric_of(e, f, g, h));
    }
  RMat A(21, RVec(3));
  for (int r = 0; r < 21; ++r)
    for (int c = 0; c < 3; ++c) A[r][c] = orig[c][r];
  for (auto& q : segre_quadrics(M, U))
    if (!solve(A, q)) return false;
  return true;
}

}  // namespace grasslab
