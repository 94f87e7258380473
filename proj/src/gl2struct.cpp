#include "grasslab/gl2struct.hpp"

#include <algorithm>
#include <stdexcept>

namespace grasslab {

namespace {

VarId coord(int i) {
  static const std::array<VarId, 4> v{V::a(), V::b(), V::p(), V::q()};
  return v[i];
}

bool zero(const Rat& r) { return sgn(r) == 0; }
bool zero(const Series& s) { return s.is_zero(); }
bool zero(const Expr& e) { return e.is_zero(); }
bool unit(const Series& s) { return sgn(s.constant_term()) != 0; }
bool unit(const Expr& e) { return !e.is_zero(); }
bool unit(const Rat& r) { return sgn(r) != 0; }
Series invert(const Series& s) { return s.inv(); }
Expr invert(const Expr& e) { return e.inv(); }
Rat invert(const Rat& r) { return 1 / r; }
Series deriv(const Series& s, int i) { return s.partial(i); }
Expr deriv(const Expr& e, int i) { return diff(e, coord(i)); }

Series zero_like(const Series& x) { return x * Rat(0); }
Expr zero_like(const Expr&) { return Expr(0L); }
Rat zero_like(const Rat&) { return Rat(0); }

template <class S>
using M3 = std::array<std::array<S, 3>, 3>;

const Mat4<Rat>& w0() {
  static const Mat4<Rat> m = [] {
    Mat4<Rat> r{};
    r[0][3] = 1;
    r[1][2] = -3;
    r[2][1] = 3;
    r[3][0] = -1;
    return r;
  }();
  return m;
}

const Mat4<Rat>& w0_inv() {
  static const Mat4<Rat> m = [] {
    Mat4<Rat> r{};
    r[0][3] = -1;
    r[1][2] = Rat(1, 3);
    r[2][1] = Rat(-1, 3);
    r[3][0] = 1;
    return r;
  }();
  return m;
}

template <class S>
Mat4<S> lift(const Mat4<Rat>& m, const S& z) {
  Mat4<S> r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i][j] = z + m[i][j];
  return r;
}

template <class S>
Mat4<S> mul(const Mat4<S>& x, const Mat4<S>& y) {
  Mat4<S> r;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      S acc = zero_like(x[0][0]) + zero_like(y[0][0]);
      for (int j = 0; j < 4; ++j)
        if (!zero(x[i][j]) && !zero(y[j][k])) acc += x[i][j] * y[j][k];
      r[i][k] = acc;
    }
  return r;
}

template <class S>
Mat4<S> transpose(const Mat4<S>& m) {
  Mat4<S> r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i][j] = m[j][i];
  return r;
}

template <class S>
S minor_det(const M3<S>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

template <class S>
S det4(const Mat4<S>& m) {
  S acc = zero_like(m[0][0]);
  for (int c = 0; c < 4; ++c) {
    if (zero(m[0][c])) continue;
    M3<S> mi;
    for (int i = 1; i < 4; ++i)
      for (int j = 0, jj = 0; j < 4; ++j)
        if (j != c) mi[i - 1][jj++] = m[i][j];
    S t = m[0][c] * minor_det(mi);
    if (c % 2) acc -= t;
    else acc += t;
  }
  return acc;
}

template <class S>
Mat4<S> inverse4(const Mat4<S>& m, const S& det) {
  S di = invert(det);
  Mat4<S> r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      M3<S> mi;
      for (int a = 0, aa = 0; a < 4; ++a) {
        if (a == i) continue;
        for (int b = 0, bb = 0; b < 4; ++b)
          if (b != j) mi[aa][bb++] = m[a][b];
        ++aa;
      }
      S c = minor_det(mi) * di;
      r[j][i] = (i + j) % 2 ? -c : c;
    }
  return r;
}

template <class S>
M3<S> inverse_3x3(const M3<S>& m) {
  S d = minor_det(m);
  if (!unit(d)) throw SingularConnection("degenerate Killing form");
  S di = invert(d);
  M3<S> r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int a0 = (i + 1) % 3, a1 = (i + 2) % 3, b0 = (j + 1) % 3, b1 = (j + 2) % 3;
      r[j][i] = (m[a0][b0] * m[a1][b1] - m[a0][b1] * m[a1][b0]) * di;
    }
  return r;
}

template <class S>
Frame<S> make_frame(const S& f, const S& g) {
  std::array<S, 4> df, dg;
  for (int i = 0; i < 4; ++i) {
    df[i] = deriv(f, i);
    dg[i] = deriv(g, i);
  }
  S z = zero_like(df[0]);
  auto e = [&](int k) {
    std::array<S, 4> v;
    for (int i = 0; i < 4; ++i) v[i] = i == k ? z + Rat(1) : z;
    return v;
  };
  auto quad = [&](const std::array<S, 4>& u1, const std::array<S, 4>& w1, const std::array<S, 4>& u2,
                  const std::array<S, 4>& w2) {
    Mat4<S> m;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m[i][j] = u1[i] * w1[j] + u1[j] * w1[i] - u2[i] * w2[j] - u2[j] * w2[i];
    return m;
  };
  Frame<S> fr;
  fr.omega[0] = quad(e(0), e(3), e(1), e(2));
  fr.omega[1] = quad(e(0), dg, e(2), df);
  fr.omega[2] = quad(e(1), dg, e(3), df);
  const S &fa = df[0], &fb = df[1], &fp = df[2], &fq = df[3];
  const S &ga = dg[0], &gb = dg[1], &gp = dg[2], &gq = dg[3];
  fr.A[0] = {gb, -ga, z, z};
  fr.A[1] = {gq - fb, fa - gp, gb, -ga};
  fr.A[2] = {-fq, fp, gq - fb, fa - gp};
  fr.A[3] = {z, z, -fq, fp};
  fr.detA = det4(fr.A);
  if (!unit(fr.detA)) throw DegenerateFrame("det A vanishes: the dispersion conic is reducible");
  Mat4<S> Ai = inverse4(fr.A, fr.detA);
  fr.Omega = mul(mul(Ai, lift(w0(), z)), transpose(Ai));
  fr.Omega_inv = mul(mul(transpose(fr.A), lift(w0_inv(), z)), fr.A);
  for (int a = 0; a < 3; ++a) fr.ops[a] = mul(fr.Omega_inv, fr.omega[a]);
  return fr;
}

const int kTriples[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};

template <class S>
LeeForm<S> make_lee(const Frame<S>& fr) {
  const Mat4<S>& O = fr.Omega;
  std::array<Mat4<S>, 4> dO;
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) dO[k][i][j] = deriv(O[i][j], k);
  S z = zero_like(dO[0][0][0]);
  Mat4<S> M;
  std::array<S, 4> rhs;
  for (int t = 0; t < 4; ++t) {
    int i = kTriples[t][0], j = kTriples[t][1], k = kTriples[t][2];
    for (int m = 0; m < 4; ++m) M[t][m] = z;
    M[t][i] = M[t][i] + O[j][k];
    M[t][j] = M[t][j] + O[k][i];
    M[t][k] = M[t][k] + O[i][j];
    rhs[t] = dO[i][j][k] + dO[j][k][i] + dO[k][i][j];
  }
  S d = det4(M);
  if (!unit(d)) throw DegenerateFrame("Omega is degenerate");
  Mat4<S> Mi = inverse4(M, d);
  LeeForm<S> lf;
  for (int i = 0; i < 4; ++i) {
    S acc = z;
    for (int t = 0; t < 4; ++t)
      if (!zero(Mi[i][t]) && !zero(rhs[t])) acc += Mi[i][t] * rhs[t];
    lf.phi[i] = acc;
  }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) lf.dphi[i][j] = i == j ? zero_like(deriv(lf.phi[0], 0)) : deriv(lf.phi[j], i) - deriv(lf.phi[i], j);
  return lf;
}

template <class S>
std::vector<S> act_raw(const std::vector<bool>& up, const std::vector<S>& K, const Mat4<S>& X) {
  int r = static_cast<int>(up.size());
  std::vector<S> out(K.size(), zero_like(K[0]) + zero_like(X[0][0]));
  for (std::size_t idx = 0; idx < K.size(); ++idx) {
    if (zero(K[idx])) continue;
    std::size_t stride = 1;
    for (int s = r - 1; s >= 0; --s, stride *= 4) {
      int digit = static_cast<int>((idx / stride) % 4);
      for (int o = 0; o < 4; ++o) {
        std::size_t tgt = idx + o * stride - digit * stride;
        if (up[s]) {
          if (!zero(X[o][digit])) out[tgt] += X[o][digit] * K[idx];
        } else if (!zero(X[digit][o])) {
          out[tgt] -= X[digit][o] * K[idx];
        }
      }
    }
  }
  return out;
}

template <class S>
std::vector<S> casimir_raw(const std::vector<bool>& up, const std::vector<S>& K, const std::array<Mat4<S>, 3>& A,
                           const M3<S>& B_inv) {
  std::array<std::vector<S>, 3> Y;
  for (int b = 0; b < 3; ++b) Y[b] = act_raw(up, K, A[b]);
  S z = zero_like(Y[0][0]) + zero_like(B_inv[0][0]);
  std::vector<S> out(K.size(), z);
  for (int a = 0; a < 3; ++a) {
    std::vector<S> Z(K.size(), z);
    for (int b = 0; b < 3; ++b) {
      if (zero(B_inv[a][b])) continue;
      for (std::size_t i = 0; i < K.size(); ++i)
        if (!zero(Y[b][i])) Z[i] += B_inv[a][b] * Y[b][i];
    }
    std::vector<S> W = act_raw(up, Z, A[a]);
    for (std::size_t i = 0; i < K.size(); ++i) out[i] += W[i];
  }
  for (auto& x : out) x = x * Rat(20);
  return out;
}

template <class S>
M3<S> killing(const std::array<Mat4<S>, 3>& A) {
  M3<S> B;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      S acc = zero_like(A[0][0][0]);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) acc += A[a][i][j] * A[b][j][i];
      B[a][b] = acc;
    }
  return B;
}

Mat4<Series> truncate(const Mat4<Series>& m, int d) {
  Mat4<Series> r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i][j] = m[i][j].truncate(d);
  return r;
}

Mat4<Rat> values(const Mat4<Series>& m) {
  Mat4<Rat> r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i][j] = m[i][j].constant_term();
  return r;
}

std::size_t flat(const std::vector<int>& idx) {
  std::size_t k = 0;
  for (int i : idx) k = k * 4 + i;
  return k;
}

// Particular solution X_k of nabla_k omega^a in span(omega^b), one direction
// at a time; X_k[a][i] = Gamma^a_{ik}.
std::array<Mat4<Series>, 4> particular(const std::array<Mat4<Series>, 3>& omega, int D) {
  std::array<Mat4<Series>, 3> w;
  for (int a = 0; a < 3; ++a) w[a] = truncate(omega[a], D);
  Series z = zero_like(w[0][0][0]);
  std::array<Mat4<Series>, 4> X;
  for (int k = 0; k < 4; ++k) {
    std::vector<std::vector<Series>> M;
    std::vector<Series> rhs;
    for (int al = 0; al < 3; ++al)
      for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
          std::vector<Series> row(25, z);
          for (int a = 0; a < 4; ++a) {
            row[a * 4 + i] -= w[al][a][j];
            row[a * 4 + j] -= w[al][i][a];
          }
          for (int b = 0; b < 3; ++b) row[16 + al * 3 + b] = -w[b][i][j];
          M.push_back(std::move(row));
          rhs.push_back(-omega[al][i][j].partial(k).truncate(D));
        }
    SeriesSolve sol = solve_series(M, rhs);
    if (!sol.consistent || sol.rank != 21)
      throw SingularConnection("structure-preserving condition has rank " + std::to_string(sol.rank));
    for (int a = 0; a < 4; ++a)
      for (int i = 0; i < 4; ++i) X[k][a][i] = sol.x[a * 4 + i];
  }
  return X;
}

struct Gauge {
  std::array<Mat4<Series>, 4> X;
  std::array<Mat4<Series>, 4> E;  // Id and the sl(2) operators
  std::vector<std::vector<Series>> T_cols;  // torsion of the 16 gauge directions, 64 components each
  std::vector<Series> T0;
  int D = 0;
};

Gauge gauge_space(const Frame<Series>& fr) {
  Gauge g;
  g.D = fr.omega[1][0][0].deg() - 1;
  if (g.D < 0) throw std::invalid_argument("frame degree too low for a connection");
  g.X = particular(fr.omega, g.D);
  Series z = zero_like(g.X[0][0][0]);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g.E[0][i][j] = i == j ? z + Rat(1) : z;
  for (int a = 0; a < 3; ++a) g.E[a + 1] = truncate(fr.ops[a], g.D);
  g.T0.assign(64, z);
  for (int a = 0; a < 4; ++a)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) g.T0[flat({a, i, j})] = g.X[i][a][j] - g.X[j][a][i];
  for (int k = 0; k < 4; ++k)
    for (int m = 0; m < 4; ++m) {
      std::vector<Series> t(64, z);
      for (int a = 0; a < 4; ++a)
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) {
            if (i == k) t[flat({a, i, j})] += g.E[m][a][j];
            if (j == k) t[flat({a, i, j})] -= g.E[m][a][i];
          }
      g.T_cols.push_back(std::move(t));
    }
  return g;
}

std::vector<Series> gamma_of(const Gauge& g, const std::vector<Series>& s) {
  std::vector<Series> gamma(64);
  for (int a = 0; a < 4; ++a)
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) {
        Series x = g.X[k][a][i];
        for (int m = 0; m < 4; ++m)
          if (!s[k * 4 + m].is_zero()) x += s[k * 4 + m] * g.E[m][a][i];
        gamma[(a * 4 + i) * 4 + k] = x;
      }
  return gamma;
}

Connection finish(std::vector<Series> gamma) {
  Connection c;
  c.gamma = std::move(gamma);
  std::vector<Rat> G(64);
  std::vector<std::array<Rat, 4>> dG(64);
  for (int n = 0; n < 64; ++n) {
    G[n] = c.gamma[n].constant_term();
    for (int l = 0; l < 4; ++l) dG[n][l] = c.gamma[n].partial(l).constant_term();
  }
  auto gi = [](int a, int i, int k) { return (a * 4 + i) * 4 + k; };
  c.T = Tensor({true, false, false});
  std::vector<std::array<Rat, 4>> dT(64);
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        c.T.at({k, i, j}) = G[gi(k, j, i)] - G[gi(k, i, j)];
        for (int l = 0; l < 4; ++l) dT[flat({k, i, j})][l] = dG[gi(k, j, i)][l] - dG[gi(k, i, j)][l];
      }
  c.R = Tensor({true, false, false, false});
  c.dT = Tensor({true, false, false, false});
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          Rat r = dG[gi(k, l, j)][i] - dG[gi(k, l, i)][j];
          Rat n = dT[flat({k, i, j})][l];
          for (int a = 0; a < 4; ++a) {
            r += G[gi(a, l, j)] * G[gi(k, a, i)] - G[gi(a, l, i)] * G[gi(k, a, j)];
            n += G[gi(k, a, l)] * c.T.at({a, i, j}) - G[gi(a, i, l)] * c.T.at({k, a, j}) -
                 G[gi(a, j, l)] * c.T.at({k, i, a});
          }
          c.R.at({k, l, i, j}) = r;
          c.dT.at({k, l, i, j}) = n;
        }
  return c;
}

std::size_t tensor_size(std::size_t r) { return std::size_t(1) << (2 * r); }

long lam_of(int l) { return static_cast<long>(l) * (l + 2); }

Failure first_failure(const std::vector<Relation>& rels) {
  for (const Relation& r : rels)
    if (!r.holds()) return std::make_pair(r.name, r.witness());
  return std::nullopt;
}

Failure tensor_failure(const std::string& label, const Tensor& t) {
  for (std::size_t i = 0; i < t.c.size(); ++i)
    if (sgn(t.c[i]) != 0) return std::make_pair(label, t.c[i]);
  return std::nullopt;
}

}  // namespace

JetData jet_data(const SamplePoint& sp) { return {sp.f.truncate(std::min(3, sp.f.deg())), sp.g.truncate(std::min(3, sp.g.deg()))}; }

JetData jet_data(const std::array<Rat, 8>& first, const std::vector<Rat>& second, const std::vector<Rat>& third) {
  if (second.size() != 20 || third.size() != 40) throw std::invalid_argument("expected 20 second and 40 third derivatives");
  JetData j{Series(4, 3), Series(4, 3)};
  auto m1 = multi_indices(1), m2 = multi_indices(2), m3 = multi_indices(3);
  for (int w = 0; w < 2; ++w) {
    Series& s = w == 0 ? j.f : j.g;
    for (std::size_t k = 0; k < m1.size(); ++k) s.set_derivative(m1[k], first[w * 4 + k]);
    for (std::size_t k = 0; k < m2.size(); ++k) s.set_derivative(m2[k], second[w * 10 + k]);
    for (std::size_t k = 0; k < m3.size(); ++k) s.set_derivative(m3[k], third[w * 20 + k]);
  }
  return j;
}

std::array<Rat, 8> first_derivatives(const JetData& j) {
  std::array<Rat, 8> out;
  auto m1 = multi_indices(1);
  for (int k = 0; k < 4; ++k) {
    out[k] = j.f.derivative(m1[k]);
    out[4 + k] = j.g.derivative(m1[k]);
  }
  return out;
}

Frame<Series> build_frame(const JetData& j) { return make_frame(j.f, j.g); }
Frame<Expr> build_frame(const SystemEvol& sys) { return make_frame(sys.f, sys.g); }
LeeForm<Series> lee_form(const Frame<Series>& fr) { return make_lee(fr); }
LeeForm<Expr> lee_form(const Frame<Expr>& fr) { return make_lee(fr); }

Expr omega_det_identity(const SystemEvol& sys) {
  Frame<Expr> fr = build_frame(sys);
  return det4(fr.Omega) * fr.detA * fr.detA;
}

Tensor::Tensor(std::vector<bool> slots) : up(std::move(slots)), c(tensor_size(up.size()), Rat(0)) {}

Rat& Tensor::at(std::initializer_list<int> idx) { return c[flat(idx)]; }
const Rat& Tensor::at(std::initializer_list<int> idx) const { return c[flat(idx)]; }

bool Tensor::is_zero() const {
  return std::all_of(c.begin(), c.end(), [](const Rat& x) { return sgn(x) == 0; });
}

bool Tensor::skew_last2() const {
  if (rank() < 2) return false;
  for (std::size_t idx = 0; idx < c.size(); ++idx) {
    std::size_t i = (idx / 4) % 4, j = idx % 4;
    std::size_t swapped = idx - i * 4 - j + j * 4 + i;
    if (c[idx] != -c[swapped]) return false;
  }
  return true;
}

Tensor Tensor::operator+(const Tensor& o) const {
  Tensor r = *this;
  for (std::size_t i = 0; i < c.size(); ++i) r.c[i] += o.c[i];
  return r;
}

Tensor Tensor::operator-(const Tensor& o) const {
  Tensor r = *this;
  for (std::size_t i = 0; i < c.size(); ++i) r.c[i] -= o.c[i];
  return r;
}

Tensor Tensor::operator*(const Rat& s) const {
  Tensor r = *this;
  for (auto& x : r.c) x *= s;
  return r;
}

Tensor Sl2Action::act(int alpha, const Tensor& K) const {
  Tensor r(K.up);
  r.c = act_raw(K.up, K.c, A[alpha]);
  return r;
}

Tensor Sl2Action::casimir(const Tensor& K) const {
  M3<Rat> bi;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) bi[a][b] = B_inv[a][b];
  Tensor r(K.up);
  r.c = casimir_raw(K.up, K.c, A, bi);
  return r;
}

Sl2Action sl2_action(const Frame<Series>& fr) {
  Sl2Action s;
  for (int a = 0; a < 3; ++a) s.A[a] = values(fr.ops[a]);
  M3<Rat> B = killing(s.A);
  M3<Rat> Bi = inverse_3x3(B);
  s.B.assign(3, RVec(3));
  s.B_inv.assign(3, RVec(3));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      s.B[a][b] = B[a][b];
      s.B_inv[a][b] = Bi[a][b];
    }
  return s;
}

std::vector<int> ambient_weights(const Tensor& K) {
  bool skew = K.skew_last2();
  switch (K.rank()) {
    case 1:
      return {3};
    case 2:
      return {0, 2, 4, 6};
    case 3:
      return skew ? std::vector<int>{1, 3, 5, 7} : std::vector<int>{1, 3, 5, 7, 9};
    case 4:
      return skew ? std::vector<int>{0, 2, 4, 6, 8, 10} : std::vector<int>{0, 2, 4, 6, 8, 10, 12};
    default:
      throw std::invalid_argument("no weight list for tensors of rank " + std::to_string(K.rank()));
  }
}

std::map<int, Tensor> weight_components(const Sl2Action& s, const Tensor& K) {
  std::vector<int> ws = ambient_weights(K);
  std::size_t n = ws.size();
  std::vector<Tensor> kry{K};
  for (std::size_t j = 1; j < n; ++j) kry.push_back(s.casimir(kry.back()));
  std::map<int, Tensor> out;
  for (int l : ws) {
    std::vector<Rat> poly{Rat(1)};
    for (int m : ws) {
      if (m == l) continue;
      Rat den(lam_of(l) - lam_of(m));
      std::vector<Rat> next(poly.size() + 1, Rat(0));
      for (std::size_t j = 0; j < poly.size(); ++j) {
        next[j + 1] += poly[j] / den;
        next[j] -= poly[j] * Rat(lam_of(m)) / den;
      }
      poly = std::move(next);
    }
    Tensor acc(K.up);
    for (std::size_t j = 0; j < n; ++j)
      if (sgn(poly[j]) != 0) acc = acc + kry[j] * poly[j];
    out.emplace(l, std::move(acc));
  }
  return out;
}

Tensor weight_project(const Sl2Action& s, const Tensor& K, int l) {
  std::vector<int> ws = ambient_weights(K);
  if (std::find(ws.begin(), ws.end(), l) == ws.end())
    throw std::invalid_argument("weight " + std::to_string(l) + " does not occur in this tensor space");
  return weight_components(s, K).at(l);
}

std::vector<std::pair<int, int>> eigen_audit(const Sl2Action& s, TensorSpace space) {
  bool torsion = space == TensorSpace::Torsion;
  std::vector<bool> up = torsion ? std::vector<bool>{true, false, false} : std::vector<bool>{true, false, false, false};
  std::vector<std::vector<int>> basis;
  int heads = torsion ? 4 : 16;
  for (int h = 0; h < heads; ++h)
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        basis.push_back(torsion ? std::vector<int>{h, i, j} : std::vector<int>{h / 4, h % 4, i, j});
  auto swapped = [](std::vector<int> v) {
    std::swap(v[v.size() - 1], v[v.size() - 2]);
    return v;
  };
  std::size_t n = basis.size();
  RMat M(n, RVec(n, Rat(0)));
  for (std::size_t b = 0; b < n; ++b) {
    Tensor e(up);
    e.c[flat(basis[b])] = 1;
    e.c[flat(swapped(basis[b]))] = -1;
    Tensor ce = s.casimir(e);
    for (std::size_t r = 0; r < n; ++r) M[r][b] = ce.c[flat(basis[r])];
  }
  std::vector<std::pair<int, int>> out;
  for (int l : torsion ? std::vector<int>{1, 3, 5, 7} : std::vector<int>{0, 2, 4, 6, 8, 10}) {
    RMat shifted = M;
    for (std::size_t i = 0; i < n; ++i) shifted[i][i] -= lam_of(l);
    int dim = static_cast<int>(n) - rank(shifted);
    if (dim > 0) out.emplace_back(static_cast<int>(lam_of(l)), dim);
  }
  return out;
}

Connection bryant_connection(const Frame<Series>& fr) {
  Gauge g = gauge_space(fr);
  std::array<Mat4<Series>, 3> ops;
  for (int a = 0; a < 3; ++a) ops[a] = truncate(fr.ops[a], g.D);
  M3<Series> Bi = inverse_3x3(killing(ops));
  const std::vector<bool> up{true, false, false};
  auto shifted_casimir = [&](const std::vector<Series>& t) {
    std::vector<Series> c = casimir_raw(up, t, ops, Bi);
    for (std::size_t i = 0; i < t.size(); ++i) c[i] -= t[i] * Rat(63);
    return c;
  };
  std::vector<std::vector<Series>> cols;
  for (auto& t : g.T_cols) cols.push_back(shifted_casimir(t));
  std::vector<Series> c0 = shifted_casimir(g.T0);
  std::vector<std::vector<Series>> M;
  std::vector<Series> rhs;
  for (int a = 0; a < 4; ++a)
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        std::size_t n = flat({a, i, j});
        std::vector<Series> row;
        for (auto& c : cols) row.push_back(c[n]);
        M.push_back(std::move(row));
        rhs.push_back(-c0[n]);
      }
  SeriesSolve sol = solve_series(M, rhs);
  if (!sol.consistent || sol.rank != 16)
    throw SingularConnection("torsion normalization has rank " + std::to_string(sol.rank));
  return finish(gamma_of(g, sol.x));
}

std::optional<Connection> symmetric_connection(const Frame<Series>& fr) {
  Gauge g = gauge_space(fr);
  std::vector<std::vector<Series>> M;
  std::vector<Series> rhs;
  for (int a = 0; a < 4; ++a)
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        std::size_t n = flat({a, i, j});
        std::vector<Series> row;
        for (auto& c : g.T_cols) row.push_back(c[n]);
        M.push_back(std::move(row));
        rhs.push_back(-g.T0[n]);
      }
  SeriesSolve sol = solve_series(M, rhs);
  if (!sol.consistent) return std::nullopt;
  if (sol.rank != 16) throw SingularConnection("symmetric connection is not unique here");
  return finish(gamma_of(g, sol.x));
}

ConformalParallel omega_parallel(const Frame<Series>& fr, const Connection& c) {
  const Mat4<Series>& O = fr.Omega;
  ConformalParallel cp;
  int i0 = -1, j0 = -1;
  for (int i = 0; i < 4 && i0 < 0; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (unit(O[i][j])) {
        i0 = i;
        j0 = j;
        break;
      }
  if (i0 < 0) throw DegenerateFrame("Omega vanishes");
  Series inv0 = O[i0][j0].inv();
  cp.conformal = true;
  for (int k = 0; k < 4; ++k) {
    Mat4<Series> N;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        Series x = O[i][j].partial(k);
        for (int a = 0; a < 4; ++a) x -= c.G(a, i, k) * O[a][j] + c.G(a, j, k) * O[i][a];
        N[i][j] = x;
      }
    cp.lam[k] = N[i0][j0] * inv0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        Series d = N[i][j] - cp.lam[k] * O[i][j];
        if (!cp.conformal || d.is_zero()) continue;
        cp.conformal = false;
        for (std::size_t n = 0; n < d.size(); ++n)
          if (sgn(d[n]) != 0) {
            cp.defect = d[n];
            break;
          }
      }
  }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      cp.dlam[i][j] = cp.lam[j].partial(i).constant_term() - cp.lam[i].partial(j).constant_term();
  return cp;
}

TorsionSquares torsion_squares(const Frame<Series>& fr, const Tensor& T) {
  Mat4<Rat> O = values(fr.Omega), Oi = values(fr.Omega_inv);
  // W[a][i][j] = Omega^{ab} T^c_{bi} Omega_{cj}
  std::vector<Rat> W(64, Rat(0)), Z(64, Rat(0));
  for (int a = 0; a < 4; ++a)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        Rat w = 0;
        for (int b = 0; b < 4; ++b)
          for (int c = 0; c < 4; ++c) w += Oi[a][b] * T.at({c, b, i}) * O[c][j];
        W[flat({a, i, j})] = w;
      }
  // Z[k][l][c] = Omega^{ka} T^b_{al} Omega_{bc}
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l)
      for (int c = 0; c < 4; ++c) {
        Rat z = 0;
        for (int a = 0; a < 4; ++a)
          for (int b = 0; b < 4; ++b) z += Oi[k][a] * T.at({b, a, l}) * O[b][c];
        Z[flat({k, l, c})] = z;
      }
  const std::vector<bool> up{true, false, false, false};
  TorsionSquares sq{Tensor(up), Tensor(up), Tensor(up), Tensor(up), Tensor(up)};
  Rat half(1, 2);
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          Rat t2 = 0, al = 0, be = 0, ga = 0, de = 0;
          for (int a = 0; a < 4; ++a) {
            t2 += T.at({k, l, a}) * T.at({a, i, j});
            al += T.at({k, l, a}) * (W[flat({a, i, j})] - W[flat({a, j, i})]);
            be += T.at({k, i, a}) * W[flat({a, j, l})] - T.at({k, j, a}) * W[flat({a, i, l})];
            ga += T.at({k, j, a}) * W[flat({a, l, i})] - T.at({k, i, a}) * W[flat({a, l, j})];
            de += Z[flat({k, l, a})] * T.at({a, i, j});
          }
          sq.T2.at({k, l, i, j}) = t2;
          sq.alpha.at({k, l, i, j}) = al * half;
          sq.beta.at({k, l, i, j}) = be * half;
          sq.gamma.at({k, l, i, j}) = ga * half;
          sq.delta.at({k, l, i, j}) = de;
        }
  return sq;
}

Rat Relation::witness() const {
  for (const Rat& x : residual.c)
    if (sgn(x) != 0) return x;
  return Rat(0);
}

Gl2Report gl2_report(const JetData& j) {
  Frame<Series> fr = build_frame(j);
  Gl2Report rep;
  rep.conn = bryant_connection(fr);
  rep.sq = torsion_squares(fr, rep.conn.T);
  Sl2Action s = sl2_action(fr);
  auto R = weight_components(s, rep.conn.R);
  auto N = weight_components(s, rep.conn.dT);
  auto a = weight_components(s, rep.sq.alpha);
  auto b = weight_components(s, rep.sq.beta);
  auto g = weight_components(s, rep.sq.gamma);
  auto d = weight_components(s, rep.sq.delta);
  auto q = [](long n, long m = 1) { return Rat(n, m); };
  rep.integrability = {
      {"R_(0)", R[0]},
      {"R_(4)", R[4]},
      {"nablaT_(4)", N[4]},
      {"nablaT_(8)", N[8]},
      {"nablaT_(10)", N[10] + a[10] * q(28)},
      {"R_(2)", R[2] - (a[2] * q(44, 3) + b[2] * q(2) - g[2] * q(40, 3) - d[2] * q(2))},
      {"R_(6)", R[6] + a[6] * q(24) + b[6] * q(30) + g[6] * q(60) + d[6] * q(24)},
      {"nablaT_(6)", N[6] + a[6] * q(8) + b[6] * q(8) + g[6] * q(16) + d[6] * q(4)},
  };
  rep.universal = {
      {"R_(0)", R[0]},
      {"T2 - 2 T2_alpha", rep.sq.T2 - rep.sq.alpha * q(2)},
      {"T2_beta_(10)", b[10]},
      {"T2_delta_(10)", d[10]},
      {"T2_gamma_(10) + T2_alpha_(10)", g[10] + a[10]},
  };
  return rep;
}

JetData random_jet(Rng& rng, bool integrable) {
  std::array<Rat, 8> first;
  for (auto& x : first) x = rng.nonzero_rat();
  std::vector<Rat> second(20), third(40);
  for (auto& x : second) x = rng.rat();
  if (integrable) {
    RMat A;
    RVec b;
    integrability_linear_system(first, second, A, b);
    RMat rhs(b.size(), RVec(1));
    for (std::size_t i = 0; i < b.size(); ++i) rhs[i][0] = -b[i];
    int rk = 0;
    auto sol = bareiss_solve(A, rhs, &rk);
    if (!sol) throw RankDeficient("integrability conditions have rank " + std::to_string(rk) + " here");
    for (int m = 0; m < 40; ++m) third[m] = (*sol)[m][0];
  } else {
    for (auto& x : third) x = rng.rat();
  }
  return jet_data(first, second, third);
}

Verdict check_curvature_relations(const PointMode& pm, bool integrable) {
  Verdict v;
  v.seeds = pm.seeds;
  for (std::uint64_t seed : pm.seeds) {
    Rng rng(seed);
    int got = 0;
    for (int tries = 0; got < pm.n && tries < 20 * pm.n + 20; ++tries) {
      JetData j;
      Gl2Report rep;
      try {
        j = random_jet(rng, integrable);
        rep = gl2_report(j);
      } catch (const std::domain_error&) {
        continue;
      } catch (const RankDeficient&) {
        continue;
      }
      ++got;
      ++v.points_checked;
      if (Failure f = first_failure(rep.integrability)) {
        auto first = first_derivatives(j);
        v.status = Status::Refuted;
        v.witness = Witness{std::vector<Rat>(first.begin(), first.end()), f->first, f->second};
        v.note = "witness point lists f_a,f_b,f_p,f_q,g_a,g_b,g_p,g_q";
        return v;
      }
    }
  }
  v.status = v.points_checked > 0 ? Status::PointwiseVerified : Status::Indeterminate;
  return v;
}

Verdict check_curvature_relations(const System& sys, const PointMode& pm) {
  return run_points(sys, 3, pm, [](const SamplePoint& sp) { return first_failure(gl2_report(jet_data(sp)).integrability); });
}

Verdict check_universal_identities(const System& sys, const PointMode& pm) {
  return run_points(sys, 3, pm, [](const SamplePoint& sp) { return first_failure(gl2_report(jet_data(sp)).universal); });
}

Verdict check_bryant_flat(const System& sys, const PointMode& pm) {
  return run_points(sys, 3, pm, [](const SamplePoint& sp) -> Failure {
    Connection c = bryant_connection(build_frame(jet_data(sp)));
    if (Failure f = tensor_failure("T", c.T)) return f;
    return tensor_failure("R", c.R);
  });
}

Verdict check_symmetric_flat(const System& sys, const PointMode& pm) {
  return run_points(sys, 3, pm, [](const SamplePoint& sp) -> Failure {
    Frame<Series> fr = build_frame(jet_data(sp));
    auto c = symmetric_connection(fr);
    if (!c) {
      Connection b = bryant_connection(fr);
      if (Failure f = tensor_failure("absent", b.T)) return f;
      throw IndeterminatePoint("no symmetric connection although the Bryant torsion vanishes");
    }
    return tensor_failure("R", c->R);
  });
}

Verdict check_lee_closed(const System& sys, Mode mode, const PointMode& pm) {
  if (mode == Mode::Symbolic && sys.direct()) {
    Verdict v;
    LeeForm<Expr> lf = lee_form(build_frame(sys.evol));
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        if (is_zero(lf.dphi[i][j])) continue;
        v.status = Status::Refuted;
        Rng rng(pm.seeds.empty() ? 0 : pm.seeds[0]);
        for (int tries = 0; tries < 200; ++tries) {
          std::map<VarId, Rat> pt;
          for (int k = 0; k < 4; ++k) pt[coord(k)] = rng.rat();
          try {
            Rat val = eval(lf.dphi[i][j], pt);
            if (sgn(val) == 0) continue;
            std::vector<Rat> w{pt[coord(0)], pt[coord(1)], pt[coord(2)], pt[coord(3)], eval(sys.evol.f, pt),
                               eval(sys.evol.g, pt)};
            v.witness = Witness{w, "dphi[" + std::to_string(i) + "," + std::to_string(j) + "]", val};
            return v;
          } catch (const PoleError&) {
          }
        }
        v.note = "dphi[" + std::to_string(i) + "," + std::to_string(j) + "] = " + print(lf.dphi[i][j]);
        return v;
      }
    v.status = Status::SymbolicProven;
    return v;
  }
  Verdict v = run_points(sys, 3, pm, [](const SamplePoint& sp) -> Failure {
    LeeForm<Series> lf = lee_form(build_frame(jet_data(sp)));
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (sgn(lf.dphi[i][j].constant_term()) != 0)
          return std::make_pair("dphi[" + std::to_string(i) + "," + std::to_string(j) + "]", lf.dphi[i][j].constant_term());
    return std::nullopt;
  });
  if (mode == Mode::Symbolic) v.note = "no closed form for this system; checked at points";
  return v;
}

Verdict check_omega_parallel(const System& sys, const PointMode& pm) {
  return run_points(sys, 3, pm, [](const SamplePoint& sp) -> Failure {
    Frame<Series> fr = build_frame(jet_data(sp));
    Connection c = bryant_connection(fr);
    ConformalParallel cp = omega_parallel(fr, c);
    if (!cp.conformal) return std::make_pair(std::string("nabla Omega - lam Omega"), cp.defect);
    LeeForm<Series> lf = lee_form(fr);
    for (int k = 0; k < 4; ++k) {
      Series d = cp.lam[k] - lf.phi[k];
      for (std::size_t n = 0; n < d.size(); ++n)
        if (sgn(d[n]) != 0) return std::make_pair("lam - phi [" + std::to_string(k) + "]", d[n]);
    }
    return std::nullopt;
  });
}

}  // namespace grasslab
