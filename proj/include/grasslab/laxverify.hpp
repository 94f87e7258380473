#pragma once
#include <array>

#include "grasslab/classify.hpp"

namespace grasslab {

// S_y = P(lam, a, b, p, q), S_t = Q(lam, a, b, p, q) with lam = S_x.
struct LaxPair {
  Expr P, Q;
};

struct LaxFixture {
  std::string name, system;  // system: corpus entry
  LaxPair pair;
};
const std::vector<LaxFixture>& lax_fixtures();
const LaxFixture& lax_fixture(const std::string& name);

LaxPair lax_from_json(const nlohmann::json& j);
nlohmann::json lax_to_json(const LaxPair& l);

// The six first-order compatibility relations; all vanish for a Lax pair.
std::vector<std::pair<std::string, Expr>> lax_relations(const SystemEvol& sys, const LaxPair& lax);
// det[(f,g)_(a,p) + (f,g)_(b,q) P_lam - Q_lam I]
Expr dispersion_identity(const SystemEvol& sys, const LaxPair& lax);

// Symbolic mode decides each expression exactly; point mode evaluates at
// random rational (lam, a, b, p, q). Refutations carry a point witness.
Verdict check_lax_relations(const SystemEvol& sys, const LaxPair& lax, Mode mode = Mode::Symbolic,
                            const PointMode& pm = {});
Verdict check_dispersion_identity(const SystemEvol& sys, const LaxPair& lax, Mode mode = Mode::Symbolic,
                                  const PointMode& pm = {});

// Vector field on (x, y, t, lam) with coefficients in jets and lam.
struct VectorField4 {
  std::array<Expr, 4> c;  // d_x, d_y, d_t, d_lam
  Expr apply(const JetContext& ctx, const Expr& h) const;
  VectorField4 operator+(const VectorField4& o) const;
};
VectorField4 bracket(const JetContext& ctx, const VectorField4& X, const VectorField4& Y);

struct InsufficientRules : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// [X, Y] reduced by the rules. Throws InsufficientRules when a t-jet
// survives the reduction.
Verdict check_vf_commute(const JetContext& ctx, const RuleSet& rules, const VectorField4& X, const VectorField4& Y);

// X = d_y - P_lam d_x + (P_a a_x + ...) d_lam and the same with Q, d_t.
std::pair<VectorField4, VectorField4> lax_vector_fields(const JetContext& ctx, const LaxPair& lax);

// Rational parametrisation (mu(phi), lam(phi)) of the dispersion conic.
struct DispersionParam {
  Expr mu, lam;
  VarId phi;
};
struct DegenerateDenominator : std::runtime_error {
  using std::runtime_error::runtime_error;
};
DispersionParam dispersion_parametrisation(const SystemEvol& sys);
// (lam - f_a - mu f_b)(lam - g_p - mu g_q) - (f_p + mu f_q)(g_a + mu g_b)
Expr dispersion_conic(const SystemEvol& sys, const Expr& mu, const Expr& lam);

// theta = dx + P_lam dy + Q_lam dt: g(theta, theta) = 0 and
// D_Xh theta ^ theta = D_Yh theta ^ theta = 0 for the Weyl connection,
// with Xh = d_y - P_lam d_x, Yh = d_t - Q_lam d_x; evaluated at random points.
Verdict check_null_geodesic(const SystemEvol& sys, const LaxPair& lax, const PointMode& pm = {});
// The conditions above as expressions reduced on solutions.
std::vector<std::pair<std::string, Expr>> null_geodesic_conditions(const SystemEvol& sys, const LaxPair& lax);

}  // namespace grasslab
