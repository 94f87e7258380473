#pragma once
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "grasslab/rat.hpp"
#include "grasslab/vars.hpp"

namespace grasslab {

struct VarExp {
  VarId v;
  std::uint32_t e;
  bool operator==(const VarExp& o) const { return v == o.v && e == o.e; }
};

class Mono {
 public:
  Mono() = default;
  static Mono var(VarId v, std::uint32_t e = 1);

  bool is_one() const { return f_.empty(); }
  std::uint32_t degree() const { return deg_; }
  std::uint32_t exp(VarId v) const;
  const std::vector<VarExp>& factors() const { return f_; }

  bool divides(const Mono& m) const;
  Mono operator/(const Mono& m) const;  // requires m.divides(*this)
  Mono operator*(const Mono& m) const;
  Mono gcd(const Mono& m) const;
  Mono without(VarId v) const;
  std::size_t hash() const;
  bool operator==(const Mono& o) const { return deg_ == o.deg_ && f_ == o.f_; }
  bool operator!=(const Mono& o) const { return !(*this == o); }

 private:
  std::vector<VarExp> f_;  // ascending var id, positive exponents
  std::uint32_t deg_ = 0;
};

// Graded lex: total degree first, then the exponent of the earliest variable.
int grlex_cmp(const Mono& x, const Mono& y);

struct Term {
  Mono m;
  Rat c;
};

class Poly {
 public:
  Poly() = default;
  Poly(const Rat& c);  // NOLINT(google-explicit-constructor)
  Poly(long c) : Poly(Rat(c)) {}  // NOLINT
  static Poly var(VarId v, std::uint32_t e = 1);
  static Poly term(const Mono& m, const Rat& c);
  static Poly from_sorted(std::vector<Term> terms);  // descending, combined, nonzero
  static Poly from_terms(std::vector<Term> terms);   // any order, merges duplicates

  bool is_zero() const { return t_.empty(); }
  bool is_const() const { return t_.empty() || (t_.size() == 1 && t_[0].m.is_one()); }
  Rat const_value() const;  // requires is_const
  std::size_t size() const { return t_.size(); }
  const std::vector<Term>& terms() const { return t_; }
  const Rat& lc() const { return t_.front().c; }
  const Mono& lm() const { return t_.front().m; }

  Poly operator-() const;
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(const Rat& c) const;
  Poly mul_term(const Mono& m, const Rat& c) const;
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  Poly pow(unsigned n) const;

  Poly diff(VarId v) const;
  std::uint32_t degree(VarId v) const;
  std::uint32_t total_degree() const;
  std::vector<VarId> variables() const;  // ascending
  bool has_var(VarId v) const;
  Mono mono_content() const;             // gcd of all monomials
  Poly div_mono(const Mono& m) const;    // requires m divides every monomial

  // Coefficients as polynomials in the remaining variables, index = power.
  std::vector<Poly> coeffs_in(VarId v) const;
  static Poly from_coeffs(VarId v, const std::vector<Poly>& cs);

  Poly monic() const;      // lc = 1
  Poly primitive() const;  // integer coprime coefficients, positive lc

  bool operator==(const Poly& o) const;
  bool operator!=(const Poly& o) const { return !(*this == o); }
  std::size_t hash() const;

  Rat eval(const std::map<VarId, Rat>& pt) const;  // throws if a variable is unbound
  std::string str() const;

 private:
  std::vector<Term> t_;  // strictly descending in grlex
};

// Evaluates P with variables supplied by get(VarId) -> const T&.
template <class T, class Get>
T eval_poly(const Poly& P, Get&& get, const T& zero, const T& one) {
  std::unordered_map<VarId, std::vector<T>> pw;
  T acc = zero;
  for (const Term& t : P.terms()) {
    T m = one;
    bool first = true;
    for (const VarExp& ve : t.m.factors()) {
      auto& v = pw[ve.v];
      if (v.empty()) {
        v.push_back(one);
        v.push_back(get(ve.v));
      }
      while (v.size() <= ve.e) v.push_back(v.back() * v[1]);
      if (first) {
        m = v[ve.e];
        first = false;
      } else {
        m = m * v[ve.e];
      }
    }
    acc = acc + m * t.c;
  }
  return acc;
}

std::optional<Poly> divide_exact(const Poly& a, const Poly& b);
Poly poly_gcd(const Poly& a, const Poly& b);  // monic (or 0 if both are 0)

}  // namespace grasslab
