#pragma once
#include <array>

#include "grasslab/jetspace.hpp"
#include "grasslab/pointjet.hpp"

namespace grasslab {

template <class E>
using Mat3 = std::array<std::array<E, 3>, 3>;

struct DegenerateSymbol : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Contravariant symbol metric of u_t = f, v_t = g, indices (x, y, t).
template <class B>
Mat3<typename B::Elem> evol_metric(const B& be) {
  using E = typename B::Elem;
  E fa = be.fd(0, 0), fb = be.fd(0, 1), fp = be.fd(0, 2), fq = be.fd(0, 3);
  E ga = be.fd(1, 0), gb = be.fd(1, 1), gp = be.fd(1, 2), gq = be.fd(1, 3);
  Rat h(1, 2), mh(-1, 2);
  Mat3<E> G;
  G[0][0] = fa * gp - fp * ga;
  G[0][1] = (fa * gq - fq * ga + fb * gp - fp * gb) * h;
  G[0][2] = (fa + gp) * mh;
  G[1][1] = fb * gq - fq * gb;
  G[1][2] = (fb + gq) * mh;
  G[2][2] = be.cst(Rat(1));
  G[1][0] = G[0][1];
  G[2][0] = G[0][2];
  G[2][1] = G[1][2];
  return G;
}

template <class E>
E det3(const Mat3<E>& G) {
  return G[0][0] * (G[1][1] * G[2][2] - G[1][2] * G[2][1]) - G[0][1] * (G[1][0] * G[2][2] - G[1][2] * G[2][0]) +
         G[0][2] * (G[1][0] * G[2][1] - G[1][1] * G[2][0]);
}

template <class B>
Mat3<typename B::Elem> inverse3(const B& be, const Mat3<typename B::Elem>& G) {
  using E = typename B::Elem;
  Mat3<E> C;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int i1 = (i + 1) % 3, i2 = (i + 2) % 3, j1 = (j + 1) % 3, j2 = (j + 2) % 3;
      C[i][j] = G[i1][j1] * G[i2][j2] - G[i1][j2] * G[i2][j1];
    }
  E det = G[0][0] * C[0][0] + G[0][1] * C[0][1] + G[0][2] * C[0][2];
  E id = be.inv(det);
  Mat3<E> H;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) H[i][j] = C[j][i] * id;
  return H;
}

// omega_k = 2 H_kj D_s G^{js} - tr(H D_k G)
template <class B>
std::array<typename B::Elem, 3> weyl_omega(const B& be, const Mat3<typename B::Elem>& G,
                                           const Mat3<typename B::Elem>& H) {
  using E = typename B::Elem;
  std::array<Mat3<E>, 3> DG;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        DG[k][i][j] = be.D(G[i][j], k);
        DG[k][j][i] = DG[k][i][j];
      }
  std::array<E, 3> div;
  for (int j = 0; j < 3; ++j) div[j] = DG[0][j][0] + DG[1][j][1] + DG[2][j][2];
  std::array<E, 3> w;
  for (int k = 0; k < 3; ++k) {
    E acc = be.cst(Rat(0));
    for (int j = 0; j < 3; ++j) acc += H[k][j] * div[j] * Rat(2);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) acc -= H[i][j] * DG[k][j][i];
    w[k] = acc;
  }
  return w;
}

template <class E>
using Chr3 = std::array<Mat3<E>, 3>;  // Gamma[k][i][j] = Γ^k_ij

template <class B>
Chr3<typename B::Elem> levi_civita(const B& be, const Mat3<typename B::Elem>& G, const Mat3<typename B::Elem>& H) {
  using E = typename B::Elem;
  std::array<Mat3<E>, 3> DH;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        DH[k][i][j] = be.D(H[i][j], k);
        DH[k][j][i] = DH[k][i][j];
      }
  Chr3<E> Gam;
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        E acc = be.cst(Rat(0));
        for (int l = 0; l < 3; ++l) acc += G[k][l] * (DH[i][l][j] + DH[j][l][i] - DH[l][i][j]);
        Gam[k][i][j] = acc * Rat(1, 2);
        Gam[k][j][i] = Gam[k][i][j];
      }
  return Gam;
}

template <class B>
Chr3<typename B::Elem> weyl_connection(const B& be, const Mat3<typename B::Elem>& G,
                                       const Mat3<typename B::Elem>& H, const std::array<typename B::Elem, 3>& w) {
  using E = typename B::Elem;
  Chr3<E> W = levi_civita(be, G, H);
  std::array<E, 3> wu;
  for (int k = 0; k < 3; ++k) wu[k] = G[k][0] * w[0] + G[k][1] * w[1] + G[k][2] * w[2];
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        E corr = H[i][j] * wu[k] * Rat(-1);
        if (k == i) corr += w[j];
        if (k == j) corr += w[i];
        W[k][i][j] -= corr * Rat(1, 2);
      }
  return W;
}

// R_lj = R^a_laj with R^k_lij = ∂_iΓ^k_lj − ∂_jΓ^k_li + Γ^a_lj Γ^k_ai − Γ^a_li Γ^k_aj
template <class B>
Mat3<typename B::Elem> ricci(const B& be, const Chr3<typename B::Elem>& W) {
  using E = typename B::Elem;
  std::array<E, 3> tr;
  for (int l = 0; l < 3; ++l) tr[l] = W[0][l][0] + W[1][l][1] + W[2][l][2];
  std::array<E, 3> Dtr[3];
  for (int l = 0; l < 3; ++l)
    for (int j = 0; j < 3; ++j) Dtr[l][j] = be.D(tr[l], j);
  Mat3<E> Ric;
  for (int l = 0; l < 3; ++l)
    for (int j = 0; j < 3; ++j) {
      E acc = be.cst(Rat(0)) - Dtr[l][j];
      for (int a = 0; a < 3; ++a) acc += be.D(W[a][l][j], a);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) acc += W[b][l][j] * W[a][b][a] - W[b][l][a] * W[a][b][j];
      Ric[l][j] = acc;
    }
  return Ric;
}

template <class B>
struct WeylResult {
  Mat3<typename B::Elem> G, H;
  std::array<typename B::Elem, 3> omega;
  Chr3<typename B::Elem> W;
  Mat3<typename B::Elem> residual;
};

// Trace-free symmetrized Ricci of the Weyl connection of (g, ω).
template <class B>
WeylResult<B> einstein_weyl(const B& be, const Mat3<typename B::Elem>& G) {
  using E = typename B::Elem;
  WeylResult<B> r;
  r.G = G;
  r.H = inverse3(be, G);
  r.omega = weyl_omega(be, r.G, r.H);
  r.W = weyl_connection(be, r.G, r.H, r.omega);
  Mat3<E> Ric = ricci(be, r.W);
  Mat3<E> S;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) S[i][j] = (Ric[i][j] + Ric[j][i]) * Rat(1, 2);
  E tr = be.cst(Rat(0));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) tr += G[i][j] * S[i][j];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.residual[i][j] = S[i][j] - r.H[i][j] * tr * Rat(1, 3);
  return r;
}

// C_pqr = ∇_r S_pq − ∇_q S_pr, S the Schouten tensor of the Levi-Civita connection.
template <class B>
std::array<typename B::Elem, 27> cotton(const B& be, const Mat3<typename B::Elem>& G) {
  using E = typename B::Elem;
  Mat3<E> H = inverse3(be, G);
  Chr3<E> Gam = levi_civita(be, G, H);
  Mat3<E> Ric = ricci(be, Gam);
  E R = be.cst(Rat(0));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) R += G[i][j] * Ric[i][j];
  Mat3<E> S;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) S[i][j] = (Ric[i][j] + Ric[j][i]) * Rat(1, 2) - H[i][j] * R * Rat(1, 4);
  // nabla[r][p][q]
  std::array<Mat3<E>, 3> nab;
  for (int r = 0; r < 3; ++r)
    for (int p = 0; p < 3; ++p)
      for (int q = p; q < 3; ++q) {
        E acc = be.D(S[p][q], r);
        for (int a = 0; a < 3; ++a) acc -= Gam[a][r][p] * S[a][q] + Gam[a][r][q] * S[p][a];
        nab[r][p][q] = acc;
        nab[r][q][p] = acc;
      }
  std::array<E, 27> C;
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q)
      for (int r = 0; r < 3; ++r) C[p * 9 + q * 3 + r] = nab[r][p][q] - nab[q][p][r];
  return C;
}

// Symbolic presentations.
Mat3<Expr> symbol_metric(const SystemEvol& sys);
// Implicit-form metric with chart variables renamed to first-order jets
// (u1,u2,u3 -> u_x,u_y,u_t; v likewise).
Mat3<Expr> symbol_metric(const SystemImplicit& sys);
std::array<Expr, 3> weyl_covector(const Mat3<Expr>& g_up, const JetContext& ctx);

}  // namespace grasslab
