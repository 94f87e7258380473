#pragma once
#include <array>
#include <map>

#include "grasslab/classify.hpp"

namespace grasslab {

template <class S>
using Mat4 = std::array<std::array<S, 4>, 4>;

// Taylor data of u_t = f, v_t = g at a point of X, in offsets of (a,b,p,q).
// Degree 3 is enough for curvature, nabla T and d(phi).
struct JetData {
  Series f, g;
};
JetData jet_data(const SamplePoint& sp);
// Derivative values in multi_indices order, f before g (8, 20 and 40 values).
JetData jet_data(const std::array<Rat, 8>& first, const std::vector<Rat>& second, const std::vector<Rat>& third);
std::array<Rat, 8> first_derivatives(const JetData& j);

// det A = 0: the dispersion conic is reducible.
struct DegenerateFrame : std::domain_error {
  using std::domain_error::domain_error;
};

template <class S>
struct Frame {
  std::array<Mat4<S>, 3> omega;  // da dq - db dp, da dg - dp df, db dg - dq df
  Mat4<S> A;                     // tangent cubic: (1, t, t^2, t^3) A
  S detA;
  Mat4<S> Omega;                 // A^-1 w0 A^-T
  Mat4<S> Omega_inv;             // Omega_inv Omega = Id
  std::array<Mat4<S>, 3> ops;    // (A^alpha)^k_i = Omega^{ka} omega^alpha_{ai}
};
Frame<Series> build_frame(const JetData& j);
Frame<Expr> build_frame(const SystemEvol& sys);

// dOmega = phi ^ Omega; dphi[i][j] = d_i phi_j - d_j phi_i.
template <class S>
struct LeeForm {
  std::array<S, 4> phi;
  Mat4<S> dphi;
};
LeeForm<Series> lee_form(const Frame<Series>& fr);
LeeForm<Expr> lee_form(const Frame<Expr>& fr);

// det(Omega) (det A)^2, which is 9.
Expr omega_det_identity(const SystemEvol& sys);

// Rational tensor on the tangent space. up[s] marks contravariant slots;
// components are row-major over the slots.
struct Tensor {
  std::vector<bool> up;
  std::vector<Rat> c;
  Tensor() = default;
  explicit Tensor(std::vector<bool> slots);
  int rank() const { return static_cast<int>(up.size()); }
  Rat& at(std::initializer_list<int> idx);
  const Rat& at(std::initializer_list<int> idx) const;
  bool is_zero() const;
  bool skew_last2() const;
  Tensor operator+(const Tensor& o) const;
  Tensor operator-(const Tensor& o) const;
  Tensor operator*(const Rat& r) const;
  bool operator==(const Tensor& o) const { return up == o.up && c == o.c; }
};

// The sl(2) action at the point; C = 20 B#_{ab} A^a A^b.
struct Sl2Action {
  std::array<Mat4<Rat>, 3> A;
  RMat B, B_inv;  // B^{ab} = tr A^a A^b
  Tensor act(int alpha, const Tensor& K) const;
  Tensor casimir(const Tensor& K) const;
};
Sl2Action sl2_action(const Frame<Series>& fr);

// Weights l that can occur in the space of K (C = l(l+2) on V_l). Tensors
// skew in their last two slots get the tighter lists 1..7 and 0..10.
std::vector<int> ambient_weights(const Tensor& K);
// Product of (C - l'(l'+2)) / (l(l+2) - l'(l'+2)) over the other weights.
Tensor weight_project(const Sl2Action& s, const Tensor& K, int l);
std::map<int, Tensor> weight_components(const Sl2Action& s, const Tensor& K);

enum class TensorSpace { Torsion, Curvature };  // L^2 t* (x) t and t (x) t* (x) L^2 t*
// (eigenvalue of C, eigenspace dimension), ascending
std::vector<std::pair<int, int>> eigen_audit(const Sl2Action& s, TensorSpace space);

struct SingularConnection : std::domain_error {
  using std::domain_error::domain_error;
};

// nabla_k d_i = Gamma^a_{ik} d_a; T^k_{ij} = Gamma^k_{ji} - Gamma^k_{ij};
// R^k_{lij} = d_i Gamma^k_{lj} - d_j Gamma^k_{li} + Gamma^a_{lj} Gamma^k_{ai} - Gamma^a_{li} Gamma^k_{aj};
// (nabla T)^k_{lij} = d_l T^k_{ij} + Gamma^k_{al} T^a_{ij} - Gamma^a_{il} T^k_{aj} - Gamma^a_{jl} T^k_{ia}.
struct Connection {
  std::vector<Series> gamma;  // Gamma^a_{ik} at (a*4 + i)*4 + k
  Tensor T, R, dT;            // at the point
  const Series& G(int a, int i, int k) const { return gamma[(a * 4 + i) * 4 + k]; }
};
// nabla omega^a in span(omega^b) and C T = 63 T. Needs a frame of degree >= 2.
Connection bryant_connection(const Frame<Series>& fr);
// The torsion-free connection preserving the structure, when it exists.
std::optional<Connection> symmetric_connection(const Frame<Series>& fr);

// nabla Omega = lam (x) Omega to first order at the point; defect is the
// first nonzero coefficient of nabla Omega - lam (x) Omega.
struct ConformalParallel {
  bool conformal = false;
  Rat defect;
  std::array<Series, 4> lam;
  Mat4<Rat> dlam;
};
ConformalParallel omega_parallel(const Frame<Series>& fr, const Connection& c);

// [i j] carries weight 1/2.
//   T2^k_{lij}    = T^k_{la} T^a_{ij}
//   alpha^k_{lij} = T^k_{la} Omega^{ab} T^c_{b[i} Omega_{cj]}
//   beta^k_{lij}  = T^k_{[ia} Omega^{ab} T^c_{bj]} Omega_{cl}
//   gamma^k_{lij} = T^k_{[ja} Omega^{ab} T^c_{bl} Omega_{ci]}
//   delta^k_{lij} = Omega^{ka} T^b_{al} Omega_{bc} T^c_{ij}
// The beta/gamma labels are the ones for which beta_(10) = 0 and
// gamma_(10) = -alpha_(10) hold on every fourfold.
struct TorsionSquares {
  Tensor T2, alpha, beta, gamma, delta;
};
TorsionSquares torsion_squares(const Frame<Series>& fr, const Tensor& T);

struct Relation {
  std::string name;
  Tensor residual;
  bool holds() const { return residual.is_zero(); }
  Rat witness() const;  // first nonzero component, 0 when it holds
};

struct Gl2Report {
  Connection conn;
  TorsionSquares sq;
  std::vector<Relation> integrability;  // equivalent to integrability
  std::vector<Relation> universal;      // hold for every fourfold
};
Gl2Report gl2_report(const JetData& j);

// Jet with random first and second derivatives; third derivatives solved
// from the integrability conditions, or random when integrable is false.
// Throws RankDeficient at special first-order data.
JetData random_jet(Rng& rng, bool integrable);

// The integrability relations at random jets (no system needed).
Verdict check_curvature_relations(const PointMode& pm, bool integrable = true);
// The same relations, or the universal identities, at sampled points.
Verdict check_curvature_relations(const System& sys, const PointMode& pm);
Verdict check_universal_identities(const System& sys, const PointMode& pm);
// T = R = 0 for the Bryant connection.
Verdict check_bryant_flat(const System& sys, const PointMode& pm);
// A symmetric connection exists and is flat. Failures are labelled
// "absent" (witness: a Bryant torsion component) or by a curvature component.
Verdict check_symmetric_flat(const System& sys, const PointMode& pm);
// d(phi) = 0; symbolic mode needs a solved system without transform.
Verdict check_lee_closed(const System& sys, Mode mode, const PointMode& pm);
// nabla Omega = lam (x) Omega with lam = phi, so that the symplectic
// rescaling of Omega is parallel.
Verdict check_omega_parallel(const System& sys, const PointMode& pm);

}  // namespace grasslab
