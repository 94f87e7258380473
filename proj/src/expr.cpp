#include "grasslab/expr.hpp"

#include <algorithm>

namespace grasslab {

namespace {

void canon(Poly& n, Poly& d) {
  if (d.is_zero()) throw PoleError("denominator vanished");
  if (n.is_zero()) {
    d = Poly(Rat(1));
    return;
  }
  if (!d.is_const()) {
    Poly g = poly_gcd(n, d);
    if (!g.is_const()) {
      n = *divide_exact(n, g);
      d = *divide_exact(d, g);
    }
  }
  if (d.lc() != 1) {
    Rat s = 1 / d.lc();
    n = n * s;
    d = d * s;
  }
}

}  // namespace

Expr::Expr(const Poly& n, const Poly& d) : num_(n), den_(d) { canon(num_, den_); }

Rat Expr::const_value() const {
  if (!is_const()) throw std::logic_error("expression is not constant: " + str());
  return num_.const_value() / den_.const_value();
}

Expr Expr::operator-() const {
  Expr r = *this;
  r.num_ = -r.num_;
  return r;
}

Expr Expr::operator+(const Expr& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  Expr r;
  if (den_ == o.den_) {
    r.num_ = num_ + o.num_;
    r.den_ = den_;
    if (den_.is_const()) return r;
    canon(r.num_, r.den_);
    return r;
  }
  if (den_.is_const() || o.den_.is_const()) {
    // one side polynomial: no new common factors can appear
    r.num_ = num_ * o.den_ + o.num_ * den_;
    r.den_ = den_ * o.den_;
    if (r.num_.is_zero()) r.den_ = Poly(Rat(1));
    return r;
  }
  Poly g = poly_gcd(den_, o.den_);
  Poly d1 = *divide_exact(den_, g), d2 = *divide_exact(o.den_, g);
  r.num_ = num_ * d2 + o.num_ * d1;
  r.den_ = den_ * d2;
  if (g.is_const()) {
    if (r.num_.is_zero()) r.den_ = Poly(Rat(1));
    return r;
  }
  canon(r.num_, r.den_);
  return r;
}

Expr Expr::operator-(const Expr& o) const { return *this + (-o); }

Expr Expr::operator*(const Expr& o) const {
  if (is_zero() || o.is_zero()) return Expr();
  Expr r;
  if (den_.is_const() && o.den_.is_const()) {
    r.num_ = num_ * o.num_;
    r.den_ = Poly(Rat(1));
    return r;
  }
  Poly n1 = num_, d1 = den_, n2 = o.num_, d2 = o.den_;
  Poly g1 = poly_gcd(n1, d2);
  if (!g1.is_const()) {
    n1 = *divide_exact(n1, g1);
    d2 = *divide_exact(d2, g1);
  }
  Poly g2 = poly_gcd(n2, d1);
  if (!g2.is_const()) {
    n2 = *divide_exact(n2, g2);
    d1 = *divide_exact(d1, g2);
  }
  r.num_ = n1 * n2;
  r.den_ = d1 * d2;
  Rat s = 1 / r.den_.lc();
  r.num_ = r.num_ * s;
  r.den_ = r.den_ * s;
  return r;
}

Expr Expr::inv() const {
  if (is_zero()) throw PoleError("division by the zero polynomial");
  return Expr(den_, num_);
}

Expr Expr::operator/(const Expr& o) const { return *this * o.inv(); }

Expr Expr::pow(int n) const {
  if (n < 0) return inv().pow(-n);
  Expr r;
  r.num_ = num_.pow(static_cast<unsigned>(n));
  r.den_ = den_.pow(static_cast<unsigned>(n));
  return r;
}

std::vector<VarId> Expr::variables() const {
  auto a = num_.variables();
  auto b = den_.variables();
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

std::string Expr::str() const { return print(*this); }

std::string print(const Expr& e) {
  if (e.den().is_const()) return e.num().str();
  std::string n = e.num().str();
  std::string d = e.den().str();
  const Poly& N = e.num();
  const Poly& D = e.den();
  if (!(N.size() == 1 && N.lc() == 1)) n = "(" + n + ")";
  if (!(D.size() == 1 && D.lc() == 1 && D.lm().factors().size() == 1)) d = "(" + d + ")";
  return n + "/" + d;
}

Expr diff(const Expr& e, VarId x) {
  if (!e.has_var(x)) return Expr();
  if (e.den().is_const()) return Expr(e.num().diff(x) * Rat(1 / e.den().const_value()));
  const Poly& n = e.num();
  const Poly& d = e.den();
  return Expr(n.diff(x) * d - n * d.diff(x), d * d);
}

Expr subst(const Expr& e, const std::map<VarId, Expr>& bindings) {
  auto get = [&](VarId v) -> Expr {
    auto it = bindings.find(v);
    return it == bindings.end() ? Expr::var(v) : it->second;
  };
  Expr n = eval_poly<Expr>(e.num(), get, Expr(), Expr(Rat(1)));
  Expr d = eval_poly<Expr>(e.den(), get, Expr(), Expr(Rat(1)));
  if (d.is_zero()) throw PoleError("denominator vanished");
  return n / d;
}

bool is_zero(const Expr& e) { return e.is_zero(); }

Rat eval(const Expr& e, const std::map<VarId, Rat>& pt) {
  Rat d = e.den().eval(pt);
  if (d == 0) throw PoleError("denominator vanished");
  return e.num().eval(pt) / d;
}

}  // namespace grasslab
