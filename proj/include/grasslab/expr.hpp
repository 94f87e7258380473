#pragma once
#include <map>
#include <stdexcept>
#include <string>

#include "grasslab/poly.hpp"

namespace grasslab {

struct ParseError : std::runtime_error {
  std::size_t pos;
  ParseError(const std::string& msg, std::size_t at)
      : std::runtime_error(msg + " at position " + std::to_string(at)), pos(at) {}
};

struct PoleError : std::domain_error {
  using std::domain_error::domain_error;
};

// Canonical rational function num/den: coprime, den monic in grlex.
class Expr {
 public:
  Expr() = default;
  Expr(const Rat& c) : num_(c), den_(Rat(1)) {}  // NOLINT
  Expr(long c) : Expr(Rat(c)) {}                  // NOLINT
  Expr(const Poly& p) : num_(p), den_(Rat(1)) {}  // NOLINT
  Expr(const Poly& n, const Poly& d);             // canonicalizes
  static Expr var(VarId v) { return Expr(Poly::var(v)); }
  static Expr var(const std::string& name) { return var(intern(name)); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_const() const { return num_.is_const() && den_.is_const(); }
  bool is_poly() const { return den_.is_const(); }
  Rat const_value() const;

  Expr operator-() const;
  Expr operator+(const Expr& o) const;
  Expr operator-(const Expr& o) const;
  Expr operator*(const Expr& o) const;
  Expr operator/(const Expr& o) const;
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }
  Expr& operator/=(const Expr& o) { return *this = *this / o; }
  Expr pow(int n) const;
  Expr inv() const;

  bool operator==(const Expr& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Expr& o) const { return !(*this == o); }

  std::vector<VarId> variables() const;
  bool has_var(VarId v) const { return num_.has_var(v) || den_.has_var(v); }
  std::string str() const;

 private:
  Poly num_;
  Poly den_{Rat(1)};
};

Expr parse(const std::string& text, const VarTable& vars);
std::string print(const Expr& e);

Expr diff(const Expr& e, VarId x);
Expr subst(const Expr& e, const std::map<VarId, Expr>& bindings);
bool is_zero(const Expr& e);
Rat eval(const Expr& e, const std::map<VarId, Rat>& pt);  // PoleError if den vanishes

// Evaluates with variables supplied by get(VarId); T needs +,*,*Rat and inv(T).
template <class T, class Get, class Inv>
T eval_expr(const Expr& e, Get&& get, const T& zero, const T& one, Inv&& inv) {
  T n = eval_poly<T>(e.num(), get, zero, one);
  if (e.den().is_const()) return n * Rat(1 / e.den().const_value());
  return n * inv(eval_poly<T>(e.den(), get, zero, one));
}

}  // namespace grasslab
