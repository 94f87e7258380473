#include "grasslab/weylgeom.hpp"

namespace grasslab {

Mat3<Expr> symbol_metric(const SystemEvol& sys) {
  JetContext ctx(4);
  SymBackend be{ctx, nullptr, sys.f, sys.g};
  Mat3<Expr> G = evol_metric(be);
  if (det3(G).is_zero()) throw DegenerateSymbol("degenerate symbol: det g = 0");
  return G;
}

Mat3<Expr> symbol_metric(const SystemImplicit& sys) {
  VarId u[3] = {V::u(1), V::u(2), V::u(3)}, v[3] = {V::v(1), V::v(2), V::v(3)};
  Mat3<Expr> G;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      G[i][j] = (diff(sys.F, u[i]) * diff(sys.G, v[j]) + diff(sys.F, u[j]) * diff(sys.G, v[i]) -
                 diff(sys.F, v[i]) * diff(sys.G, u[j]) - diff(sys.F, v[j]) * diff(sys.G, u[i])) *
                Expr(Rat(1, 2));
  JetContext ctx(4);
  std::map<VarId, Expr> ren;
  for (int i = 0; i < 3; ++i) {
    ren[u[i]] = Expr::var(ctx.var(0, i == 0, i == 1, i == 2));
    ren[v[i]] = Expr::var(ctx.var(1, i == 0, i == 1, i == 2));
  }
  for (auto& row : G)
    for (auto& e : row) e = subst(e, ren);
  if (det3(G).is_zero()) throw DegenerateSymbol("degenerate symbol: det g = 0");
  return G;
}

std::array<Expr, 3> weyl_covector(const Mat3<Expr>& g_up, const JetContext& ctx) {
  SymBackend be{ctx, nullptr, Expr(), Expr()};
  Mat3<Expr> H = inverse3(be, g_up);
  return weyl_omega(be, g_up, H);
}

}  // namespace grasslab
