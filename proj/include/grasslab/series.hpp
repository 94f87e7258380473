#pragma once
#include <vector>

#include "grasslab/rat.hpp"

namespace grasslab {

// Monomials in n variables up to total degree D, graded then lex. The index
// of a monomial of degree <= d does not depend on D, so series of different
// truncation degrees share one table.
struct MonoTable {
  int nvars = 0, D = 0;
  std::vector<std::vector<int>> exps;
  std::vector<int> deg_of;
  std::vector<int> count;  // count[d] = number of monomials of degree <= d
  std::vector<int> mul;    // size N*N, -1 when the degree exceeds D
  std::vector<int> down;   // size N*nvars, index of m / x_i or -1
  std::vector<int> up;     // size N*nvars, index of m * x_i or -1
  int N() const { return static_cast<int>(exps.size()); }
  int index(const std::vector<int>& e) const;
};

const MonoTable& mono_table(int nvars, int D);

// Truncated multivariate Taylor series with rational coefficients.
class Series {
 public:
  Series() = default;
  Series(int nvars, int deg);
  static Series constant(int nvars, int deg, const Rat& c);
  static Series variable(int nvars, int deg, int i, const Rat& at);  // at + x_i

  int nvars() const { return n_; }
  int deg() const { return d_; }
  bool valid() const { return n_ > 0 && d_ >= 0; }
  std::size_t size() const { return c_.size(); }
  const Rat& operator[](std::size_t k) const { return c_[k]; }
  Rat& operator[](std::size_t k) { return c_[k]; }
  const Rat& constant_term() const { return c_[0]; }
  bool is_zero() const;
  bool is_constant() const;  // all non-constant coefficients vanish

  Series operator-() const;
  Series operator+(const Series& o) const;
  Series operator-(const Series& o) const;
  Series operator*(const Series& o) const;
  Series operator*(const Rat& r) const;
  Series operator+(const Rat& r) const;
  Series& operator+=(const Series& o);
  Series& operator-=(const Series& o);
  Series inv() const;
  Series partial(int i) const;  // degree drops by one
  Series truncate(int d) const;
  // coefficient of the monomial with the given exponents (Taylor coefficient)
  Rat coeff(const std::vector<int>& e) const;
  void set_coeff(const std::vector<int>& e, const Rat& r);
  // ∂^e at the base point = coeff * e!
  Rat derivative(const std::vector<int>& e) const;
  void set_derivative(const std::vector<int>& e, const Rat& r);

 private:
  int n_ = 0, d_ = -1;
  std::vector<Rat> c_;
};

inline Series operator*(const Rat& r, const Series& s) { return s * r; }

Rat factorial_weight(const std::vector<int>& e);  // prod e_i!

}  // namespace grasslab
