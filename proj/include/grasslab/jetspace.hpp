#pragma once
#include <array>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "grasslab/expr.hpp"

namespace grasslab {

struct JetVar {
  int func;  // 0 = u, 1 = v
  int i, j, k;
  int order() const { return i + j + k; }
  bool operator==(const JetVar& o) const { return func == o.func && i == o.i && j == o.j && k == o.k; }
};

struct OrderOverflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Multi-index over the base coordinates (a,b,p,q).
using Multi4 = std::array<int, 4>;

// Derivative symbols f, f_a, f_ab, g_pq, ... (which = 0 for f, 1 for g).
VarId deriv_symbol(int which, const Multi4& m);
std::optional<std::pair<int, Multi4>> deriv_of(VarId v);

class JetContext {
 public:
  explicit JetContext(int max_order = 4);
  int max_order() const { return max_order_; }
  VarId var(int func, int i, int j, int k) const;
  VarId var(const JetVar& jv) const { return var(jv.func, jv.i, jv.j, jv.k); }
  std::optional<JetVar> jet_of(VarId v) const;
  // jets, aliases u_x,u_y,v_x,v_y, derivative symbols up to order 4, lam
  const VarTable& table() const { return table_; }
  // dir: 0 = x, 1 = y, 2 = t
  Expr total_derivative(const Expr& e, int dir) const;

 private:
  int max_order_;
  VarTable table_;
};

struct RewriteRule {
  JetVar lhs;
  Expr rhs;
};

// Oriented rewriting of jets that are prolongations of a rule's left side.
// The lowest-order reducible jet is rewritten first, one at a time.
class RuleSet {
 public:
  RuleSet(const JetContext& ctx, std::vector<RewriteRule> rules);
  Expr reduce(const Expr& e) const;
  // reduced form of one jet (nullopt when no rule applies)
  std::optional<Expr> reduced_jet(const JetVar& jv) const;

 private:
  const JetContext& ctx_;
  std::vector<RewriteRule> rules_;
  mutable std::map<VarId, Expr> memo_;
};

struct SystemEvol {
  Expr f, g;  // in a,b,p,q
};

struct SystemImplicit {
  Expr F, G;  // in u1..v3
};

RuleSet evolution_rules(const SystemEvol& sys, const JetContext& ctx);
Expr reduce_on_solution(const Expr& e, const SystemEvol& sys, const JetContext& ctx);

using JetMonomial = std::vector<std::pair<VarId, unsigned>>;
// Splits e into monomials in jets of order > base_order with coefficients
// free of them. Throws if e is not polynomial in those jets.
std::map<JetMonomial, Expr> extract_coefficients(const Expr& e, int base_order, const JetContext& ctx);
std::string monomial_str(const JetMonomial& m);

struct SingularJacobian : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Derivatives of the implicitly defined u3 = f, v3 = g with respect to
// (a,b,p,q) = (u1,u2,v1,v2), computed lazily by implicit differentiation.
class ImplicitJets {
 public:
  explicit ImplicitJets(const SystemImplicit& sys);
  Expr get(int which, const Multi4& m);

 private:
  Expr dz(const Expr& h, int z);
  SystemImplicit sys_;
  std::map<std::pair<int, Multi4>, Expr> memo_;
};

// Wraps an evolutionary system as u3 - f, v3 - g in chart variables.
SystemImplicit wrap_evolutionary(const SystemEvol& s);
// Renames a,b,p,q to u1,u2,v1,v2 and back.
Expr evol_to_chart(const Expr& e);
Expr chart_to_evol(const Expr& e);

}  // namespace grasslab
