#pragma once
#include <functional>
#include <optional>
#include <string>

#include "grasslab/system.hpp"
#include "grasslab/weylgeom.hpp"

namespace grasslab {

enum class Status { SymbolicProven, PointwiseVerified, Refuted, Indeterminate };
std::string status_name(Status s);

struct Witness {
  std::vector<Rat> point;  // (a,b,p,q,f,g) in the chart the test ran in
  std::string label;       // which relation or coefficient
  Rat value;               // its nonzero value there
};

struct Verdict {
  Status status = Status::Indeterminate;
  int points_checked = 0;
  std::vector<std::uint64_t> seeds;
  std::optional<Witness> witness;
  std::string note;
  bool holds() const { return status == Status::SymbolicProven || status == Status::PointwiseVerified; }
  bool refuted() const { return status == Status::Refuted; }
};

struct PointMode {
  int n = 7;
  std::vector<std::uint64_t> seeds{1, 2};
};

// Failure of a pointwise check: (label, nonzero value). A check may throw
// Indeterminate to skip a point.
using Failure = std::optional<std::pair<std::string, Rat>>;
using PointCheck = std::function<Failure(const SamplePoint&)>;
struct IndeterminatePoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};
Verdict run_points(const System& sys, int deg, const PointMode& mode, const PointCheck& check);

// Derivatives of f, g up to order 2 in n pairs (u_1..u_n, v_1..v_n).
// Index k < n is u_{k+1}; k >= n is v_{k-n+1}.
struct Jet2 {
  int n = 2;
  std::function<Rat(int which, int k)> d1;
  std::function<Rat(int which, int k, int l)> d2;
  static Jet2 of(const SamplePoint& sp);
  Jet2 mirrored() const;  // f <-> g together with u <-> v
};

// Linear degeneracy: the 8 relations in 3D (both halves), the symmetrized
// family for general n, and the two 2D constraints.
std::vector<std::pair<std::string, Rat>> ld_relations(const Jet2& j);
std::vector<std::pair<std::string, Rat>> ld_relations_sym(const Jet2& j);
std::vector<std::pair<std::string, Rat>> ld_relations_2d(const Jet2& j);
// Second-order linearisability relations with denominators cleared. They
// stay necessary where some g_{v_i} - f_{u_i} vanishes but stop being
// sufficient; linearisability_singular flags such points.
std::vector<std::pair<std::string, Rat>> linearisability_relations(const Jet2& j);
bool linearisability_singular(const Jet2& j);

Rat symbol_det(const SamplePoint& sp);
Failure ew_residual_failure(const SamplePoint& sp);
Failure cotton_failure(const SamplePoint& sp);

enum class Mode { Symbolic, Points };

Verdict test_nondegenerate(const System& sys, Mode mode = Mode::Points, const PointMode& pm = {});
Verdict test_integrable(const System& sys, Mode mode = Mode::Points, const PointMode& pm = {});
Verdict test_linearly_degenerate(const System& sys, const PointMode& pm = {});
// Checks the second-order relations; the Cotton tensor is evaluated as well
// when cotton = true or at points where the relations are singular.
Verdict test_linearisable(const System& sys, const PointMode& pm = {}, bool cotton = false);

// Symbolic Einstein-Weyl residual coefficients for a solved system; empty
// when integrable.
std::vector<std::pair<std::string, Expr>> ew_residual_symbolic(const SystemEvol& sys);

// Third derivatives of f, g as quadratic forms in the 20 second derivatives,
// with first derivatives specialized to rationals.
struct IntegrabilityConditions {
  std::array<Rat, 8> first;  // f_a,f_b,f_p,f_q,g_a,g_b,g_p,g_q
  int rows = 0, rank = 0;
  bool consistent = false;
  std::vector<std::string> third_names;   // 40 names, f_aaa ...
  std::vector<std::string> second_names;  // 20 names
  std::vector<Expr> solved;               // 40 quadratic forms in second-derivative symbols
  RMat quad;                              // 40 x 210 coefficients on s_k s_l, k <= l
  std::vector<std::pair<int, int>> quad_index;
  // Evaluates the solved third derivatives for given second derivatives.
  std::vector<Rat> apply(const std::vector<Rat>& second) const;
};
struct RankDeficient : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Residual coefficient matrix (rows x 40) and constant column at the given
// derivative data (first: 8 values, second: 20, third ignored).
void integrability_linear_system(const std::array<Rat, 8>& first, const std::vector<Rat>& second, RMat& A, RVec& b);
IntegrabilityConditions derive_integrability_conditions(std::optional<std::array<Rat, 8>> first, std::uint64_t seed);
// Multi-indices over (a,b,p,q) of the given order in a fixed order.
std::vector<std::vector<int>> multi_indices(int order);

// Monge-Ampere pair from coefficients of (minors 12,13,23; u1..u3; v1..v3; 1).
SystemImplicit make_monge_ampere(const std::array<Rat, 10>& first, const std::array<Rat, 10>& second);

struct ChaslesResult {
  std::array<Expr, 6> param;  // u1,u2,u3,v1,v2,v3 in xi1..xi5
  std::optional<Rat> alpha, beta;  // system: alpha u1 v2 = u2 v1, beta u1 v3 = u3 v1
  std::optional<SystemImplicit> system;  // diagonal case
};
ChaslesResult chasles_generate(const RMat& A);
ChaslesResult chasles_diagonal(const std::array<Rat, 5>& lambda);

// Built-in fixtures; names like "dkp", "table1_5", "chazy_eta_6_over_s".
const std::vector<System>& corpus();
const System& corpus_get(const std::string& name);
std::vector<System> load_corpus_dir(const std::string& dir);

}  // namespace grasslab
