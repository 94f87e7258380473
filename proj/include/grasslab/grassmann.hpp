#pragma once
#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "grasslab/jetspace.hpp"
#include "grasslab/linalg.hpp"
#include "grasslab/rng.hpp"

namespace grasslab {

// Affine chart of Gr(3,5): rows (u1,u2,u3) and (v1,v2,v3).
template <class T>
using Chart = std::array<std::array<T, 3>, 2>;
using ChartPoint = Chart<Rat>;

struct ChartBoundary : std::domain_error {
  using std::domain_error::domain_error;
};

// 5x5 matrix with blocks A (2x2), B (2x3), C (3x2), D (3x3). Not normalized
// to determinant one; the fractional-linear action ignores scale.
struct SL5 {
  RMat m = RMat(5, RVec(5, Rat(0)));
  Rat scale = 1;  // determinant of m

  static SL5 identity();
  static SL5 from_matrix(const RMat& m);  // throws if singular
  static SL5 random(Rng& rng);
  // Swaps the dependent row i (0 = u, 1 = v) with the independent column j.
  static SL5 swap(int i, int j);

  const Rat& A(int i, int j) const { return m[i][j]; }
  const Rat& B(int i, int j) const { return m[i][2 + j]; }
  const Rat& C(int i, int j) const { return m[2 + i][j]; }
  const Rat& D(int i, int j) const { return m[2 + i][2 + j]; }

  SL5 operator*(const SL5& o) const;
  SL5 inverse() const;
  bool operator==(const SL5& o) const { return m == o.m; }

  std::string to_json() const;
  static SL5 from_json(const std::string& text);
};

// (AU+B)(CU+D)^{-1} over any commutative ring T with constants built by
// mk(Rat) and inversion supplied by inv(T). The 3x3 inverse uses the adjugate.
template <class T, class Mk, class Inv>
Chart<T> act_generic(const SL5& M, const Chart<T>& U, Mk&& mk, Inv&& inv) {
  std::array<std::array<T, 3>, 3> W;  // CU + D
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) W[i][j] = U[0][j] * M.C(i, 0) + U[1][j] * M.C(i, 1) + mk(M.D(i, j));
  std::array<std::array<T, 3>, 2> N;  // AU + B
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) N[i][j] = U[0][j] * M.A(i, 0) + U[1][j] * M.A(i, 1) + mk(M.B(i, j));
  auto cof = [&](int r, int c) -> T {
    int r0 = (r + 1) % 3, r1 = (r + 2) % 3, c0 = (c + 1) % 3, c1 = (c + 2) % 3;
    return W[r0][c0] * W[r1][c1] - W[r0][c1] * W[r1][c0];
  };
  std::array<std::array<T, 3>, 3> adj;  // adj[j][i] = cofactor(i, j)
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) adj[j][i] = cof(i, j);
  T det = W[0][0] * adj[0][0] + W[0][1] * adj[1][0] + W[0][2] * adj[2][0];
  T di = inv(det);
  Chart<T> out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) {
      T s = N[i][0] * adj[0][j] + N[i][1] * adj[1][j] + N[i][2] * adj[2][j];
      out[i][j] = s * di;
    }
  return out;
}

ChartPoint act(const SL5& M, const ChartPoint& U);  // ChartBoundary if CU+D singular
ChartPoint act_tangent(const SL5& M, const ChartPoint& U, const ChartPoint& dU);
int matrix_rank(const ChartPoint& U);

// F(act(M^{-1}, U)), G likewise, with denominators cleared.
SystemImplicit transform_system(const SystemImplicit& sys, const SL5& M);

// A vector field on the chart: coefficients of d/du1..d/du3, d/dv1..d/dv3.
struct VectorField {
  std::string name;
  std::array<Expr, 6> c;
  Expr apply(const Expr& h) const;
};

// U1..U3, V1..V3, X11..X33, L11, L12, L21, L22, P1..P3, Q1..Q3 (25 fields
// spanning 24 dimensions).
const std::vector<VectorField>& generators();
const VectorField& generator(const std::string& name);
VectorField combine(const std::vector<std::pair<Rat, std::string>>& terms);
// Stabilizer of u3 = v1, v3 = u2.
std::vector<VectorField> linear_stabilizer();
// Y(F) and Y(G) vanish on the system (checked after solving for u3, v3).
bool annihilates(const VectorField& Y, const SystemEvol& sys);

// 1-jet point ordered (u1,u2,v1,v2, f,g, f_u1,f_u2,f_v1,f_v2, g_u1,g_u2,g_v1,g_v2).
using Jet1 = std::array<Rat, 14>;
RMat prolonged_generator_matrix(const Jet1& pt);
int prolonged_generator_rank(const Jet1& pt);

// Rank-one directions on the pencil s*M1 + t*M2.
struct SegreResult {
  int degree = 0;                 // of the common factor of the 2x2 minors
  std::vector<Rat> form;          // coefficients of s^d, s^{d-1} t, ..., t^d
  std::string factorization;
  std::vector<std::pair<Rat, Rat>> directions;  // rational (s : t)
};
struct DegeneratePencil : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
SegreResult segre_directions(const ChartPoint& M1, const ChartPoint& M2);

// Coefficients (21, upper triangle in du1..du3,dv1..dv3) of the quadric
// du_i dv_j - dv_i du_j pulled back by act_tangent(M, U, .).
std::vector<RVec> segre_quadrics(const SL5& M, const ChartPoint& U);
bool segre_ideal_preserved(const SL5& M, const ChartPoint& U);

}  // namespace grasslab
