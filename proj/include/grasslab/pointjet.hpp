#pragma once
#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "grasslab/jetspace.hpp"
#include "grasslab/series.hpp"

namespace grasslab {

// xy-jets of order >= 2 get small integer ids.
struct PJet {
  int func, i, j;
};
int pjet_id(int func, int i, int j);
PJet pjet_of(int id);
std::string pjet_name(int id);

struct JetMono {
  std::uint8_t n = 0;
  std::array<std::uint8_t, 8> v{};  // sorted ids
  bool operator<(const JetMono& o) const;
  bool operator==(const JetMono& o) const;
  JetMono operator*(const JetMono& o) const;
  JetMono without_one(std::uint8_t id) const;
};

// Polynomial in higher xy-jets with series coefficients in (a,b,p,q).
class JetPoly {
 public:
  JetPoly() = default;
  explicit JetPoly(const Series& s);
  static JetPoly jet(int id, int nvars, int deg);

  const std::map<JetMono, Series>& terms() const { return t_; }
  std::map<JetMono, Series>& terms() { return t_; }
  bool jet_free() const;
  const Series& scalar() const;  // requires jet_free and nonempty

  JetPoly operator-() const;
  JetPoly operator+(const JetPoly& o) const;
  JetPoly operator-(const JetPoly& o) const;
  JetPoly operator*(const JetPoly& o) const;
  JetPoly operator*(const Rat& r) const;
  JetPoly& operator+=(const JetPoly& o);
  JetPoly& operator-=(const JetPoly& o);
  void add_term(const JetMono& m, const Series& c);

  // constant terms of all coefficients (the value at the base point)
  std::map<JetMono, Rat> values() const;
  bool value_zero() const;

 private:
  std::map<JetMono, Series> t_;
};

// Point-mode engine: f, g known as Taylor series at a point; total
// derivatives act on JetPoly with u_t, v_t eliminated on the fly.
class PointEngine {
 public:
  PointEngine(Series f, Series g, int max_order);
  int max_order() const { return max_order_; }
  const Series& f() const { return f_; }
  const Series& g() const { return g_; }
  int deg() const { return f_.deg(); }

  JetPoly cst(const Rat& r) const;
  JetPoly base(const Series& s) const { return JetPoly(s); }
  JetPoly D(const JetPoly& P, int dir) const;
  JetPoly inv(const JetPoly& P) const;

 private:
  const JetPoly& d_jet(int func, int i, int j, int dir) const;
  const JetPoly& reduced_t(int func, int i, int j) const;
  Series f_, g_;
  int max_order_;
  mutable std::map<std::array<int, 4>, JetPoly> cache_;
  mutable std::map<std::array<int, 3>, JetPoly> tcache_;
};

// Backend adaptors used by the geometry templates.
struct PointBackend {
  using Elem = JetPoly;
  const PointEngine& eng;
  Elem cst(const Rat& r) const { return eng.cst(r); }
  Elem fd(int which, int z) const { return JetPoly((which ? eng.g() : eng.f()).partial(z)); }
  Elem D(const Elem& e, int dir) const { return eng.D(e, dir); }
  Elem inv(const Elem& e) const { return eng.inv(e); }
};

struct SymBackend {
  using Elem = Expr;
  const JetContext& ctx;
  const RuleSet* rules;  // may be null (no reduction)
  Expr f, g;
  Elem cst(const Rat& r) const { return Expr(r); }
  Elem fd(int which, int z) const;
  Elem D(const Elem& e, int dir) const;
  Elem inv(const Elem& e) const { return e.inv(); }
};

}  // namespace grasslab
