#include "grasslab/poly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace grasslab {

Mono Mono::var(VarId v, std::uint32_t e) {
  Mono m;
  if (e) {
    m.f_.push_back({v, e});
    m.deg_ = e;
  }
  return m;
}

std::uint32_t Mono::exp(VarId v) const {
  for (const auto& x : f_)
    if (x.v == v) return x.e;
  return 0;
}

bool Mono::divides(const Mono& m) const {
  if (deg_ > m.deg_) return false;
  std::size_t j = 0;
  for (const auto& x : f_) {
    while (j < m.f_.size() && m.f_[j].v < x.v) ++j;
    if (j == m.f_.size() || m.f_[j].v != x.v || m.f_[j].e < x.e) return false;
  }
  return true;
}

Mono Mono::operator/(const Mono& m) const {
  Mono r;
  std::size_t j = 0;
  for (const auto& x : f_) {
    std::uint32_t e = x.e;
    if (j < m.f_.size() && m.f_[j].v == x.v) e -= m.f_[j++].e;
    if (e) r.f_.push_back({x.v, e});
  }
  r.deg_ = deg_ - m.deg_;
  return r;
}

Mono Mono::operator*(const Mono& m) const {
  Mono r;
  r.f_.reserve(f_.size() + m.f_.size());
  std::size_t i = 0, j = 0;
  while (i < f_.size() || j < m.f_.size()) {
    if (j == m.f_.size() || (i < f_.size() && f_[i].v < m.f_[j].v)) {
      r.f_.push_back(f_[i++]);
    } else if (i == f_.size() || m.f_[j].v < f_[i].v) {
      r.f_.push_back(m.f_[j++]);
    } else {
      r.f_.push_back({f_[i].v, f_[i].e + m.f_[j].e});
      ++i;
      ++j;
    }
  }
  r.deg_ = deg_ + m.deg_;
  return r;
}

Mono Mono::gcd(const Mono& m) const {
  Mono r;
  std::size_t j = 0;
  for (const auto& x : f_) {
    while (j < m.f_.size() && m.f_[j].v < x.v) ++j;
    if (j < m.f_.size() && m.f_[j].v == x.v) {
      std::uint32_t e = std::min(x.e, m.f_[j].e);
      r.f_.push_back({x.v, e});
      r.deg_ += e;
    }
  }
  return r;
}

Mono Mono::without(VarId v) const {
  Mono r;
  for (const auto& x : f_)
    if (x.v != v) {
      r.f_.push_back(x);
      r.deg_ += x.e;
    }
  return r;
}

std::size_t Mono::hash() const {
  std::size_t h = 1469598103934665603ull;
  for (const auto& x : f_) {
    h ^= x.v * 0x9E3779B97F4A7C15ull + x.e;
    h *= 1099511628211ull;
  }
  return h;
}

int grlex_cmp(const Mono& x, const Mono& y) {
  if (x.degree() != y.degree()) return x.degree() > y.degree() ? 1 : -1;
  const auto& a = x.factors();
  const auto& b = y.factors();
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].v != b[i].v) return a[i].v < b[i].v ? 1 : -1;
    if (a[i].e != b[i].e) return a[i].e > b[i].e ? 1 : -1;
  }
  if (a.size() != b.size()) return a.size() > b.size() ? 1 : -1;
  return 0;
}

Poly::Poly(const Rat& c) {
  if (c != 0) t_.push_back({Mono(), c});
}

Poly Poly::var(VarId v, std::uint32_t e) { return term(Mono::var(v, e), Rat(1)); }

Poly Poly::term(const Mono& m, const Rat& c) {
  Poly p;
  if (c != 0) p.t_.push_back({m, c});
  return p;
}

Poly Poly::from_sorted(std::vector<Term> terms) {
  Poly p;
  p.t_ = std::move(terms);
  return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& x, const Term& y) { return grlex_cmp(x.m, y.m) > 0; });
  Poly p;
  for (auto& t : terms) {
    if (!p.t_.empty() && p.t_.back().m == t.m) {
      p.t_.back().c += t.c;
      if (p.t_.back().c == 0) p.t_.pop_back();
    } else if (t.c != 0) {
      p.t_.push_back(std::move(t));
    }
  }
  return p;
}

Rat Poly::const_value() const {
  if (t_.empty()) return Rat(0);
  if (!t_[0].m.is_one()) throw std::logic_error("polynomial is not constant");
  return t_[0].c;
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& t : r.t_) t.c = -t.c;
  return r;
}

static Poly merge(const Poly& a, const Poly& b, bool sub) {
  const auto& x = a.terms();
  const auto& y = b.terms();
  std::vector<Term> out;
  out.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    int c = grlex_cmp(x[i].m, y[j].m);
    if (c > 0) {
      out.push_back(x[i++]);
    } else if (c < 0) {
      out.push_back(y[j++]);
      if (sub) out.back().c = -out.back().c;
    } else {
      Rat s = sub ? Rat(x[i].c - y[j].c) : Rat(x[i].c + y[j].c);
      if (s != 0) out.push_back({x[i].m, s});
      ++i;
      ++j;
    }
  }
  for (; i < x.size(); ++i) out.push_back(x[i]);
  for (; j < y.size(); ++j) {
    out.push_back(y[j]);
    if (sub) out.back().c = -out.back().c;
  }
  return Poly::from_sorted(std::move(out));
}

Poly Poly::operator+(const Poly& o) const { return merge(*this, o, false); }
Poly Poly::operator-(const Poly& o) const { return merge(*this, o, true); }

Poly Poly::operator*(const Rat& c) const {
  if (c == 0) return Poly();
  Poly r = *this;
  for (auto& t : r.t_) t.c *= c;
  return r;
}

Poly Poly::mul_term(const Mono& m, const Rat& c) const {
  if (c == 0) return Poly();
  Poly r;
  r.t_.reserve(t_.size());
  for (const auto& t : t_) r.t_.push_back({t.m * m, t.c * c});
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  if (is_zero() || o.is_zero()) return Poly();
  if (o.t_.size() == 1) return mul_term(o.t_[0].m, o.t_[0].c);
  if (t_.size() == 1) return o.mul_term(t_[0].m, t_[0].c);
  std::vector<Term> prods;
  prods.reserve(t_.size() * o.t_.size());
  for (const auto& x : t_)
    for (const auto& y : o.t_) prods.push_back({x.m * y.m, x.c * y.c});
  return from_terms(std::move(prods));
}

Poly Poly::pow(unsigned n) const {
  Poly r(Rat(1)), b = *this;
  while (n) {
    if (n & 1) r = r * b;
    n >>= 1;
    if (n) b = b * b;
  }
  return r;
}

Poly Poly::diff(VarId v) const {
  std::vector<Term> out;
  for (const auto& t : t_) {
    std::uint32_t e = t.m.exp(v);
    if (!e) continue;
    out.push_back({t.m / Mono::var(v), t.c * e});
  }
  return from_terms(std::move(out));
}

std::uint32_t Poly::degree(VarId v) const {
  std::uint32_t d = 0;
  for (const auto& t : t_) d = std::max(d, t.m.exp(v));
  return d;
}

std::uint32_t Poly::total_degree() const { return t_.empty() ? 0 : t_[0].m.degree(); }

std::vector<VarId> Poly::variables() const {
  std::vector<VarId> vs;
  for (const auto& t : t_)
    for (const auto& f : t.m.factors()) vs.push_back(f.v);
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

bool Poly::has_var(VarId v) const {
  for (const auto& t : t_)
    if (t.m.exp(v)) return true;
  return false;
}

Mono Poly::mono_content() const {
  if (t_.empty()) return Mono();
  Mono g = t_[0].m;
  for (std::size_t i = 1; i < t_.size() && !g.is_one(); ++i) g = g.gcd(t_[i].m);
  return g;
}

Poly Poly::div_mono(const Mono& m) const {
  if (m.is_one()) return *this;
  Poly r;
  r.t_.reserve(t_.size());
  for (const auto& t : t_) r.t_.push_back({t.m / m, t.c});
  return r;
}

std::vector<Poly> Poly::coeffs_in(VarId v) const {
  std::vector<std::vector<Term>> buckets(degree(v) + 1);
  for (const auto& t : t_) {
    std::uint32_t e = t.m.exp(v);
    buckets[e].push_back({t.m.without(v), t.c});
  }
  std::vector<Poly> out;
  out.reserve(buckets.size());
  // removing one variable keeps the relative grlex order only within a
  // fixed exponent of v, which is what each bucket holds
  for (auto& b : buckets) out.push_back(from_terms(std::move(b)));
  return out;
}

Poly Poly::from_coeffs(VarId v, const std::vector<Poly>& cs) {
  std::vector<Term> all;
  for (std::size_t e = 0; e < cs.size(); ++e) {
    Mono m = Mono::var(v, static_cast<std::uint32_t>(e));
    for (const auto& t : cs[e].terms()) all.push_back({t.m * m, t.c});
  }
  return from_terms(std::move(all));
}

Poly Poly::monic() const {
  if (t_.empty() || t_[0].c == 1) return *this;
  Rat inv = 1 / t_[0].c;
  return *this * inv;
}

Poly Poly::primitive() const {
  if (t_.empty()) return *this;
  mpz_class l = 1, g = 0;
  for (const auto& t : t_) {
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.c.get_den_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.c.get_num_mpz_t());
  }
  Rat s(l, g);
  s.canonicalize();
  if (t_[0].c < 0) s = -s;
  if (s == 1) return *this;
  return *this * s;
}

bool Poly::operator==(const Poly& o) const {
  if (t_.size() != o.t_.size()) return false;
  for (std::size_t i = 0; i < t_.size(); ++i)
    if (t_[i].c != o.t_[i].c || t_[i].m != o.t_[i].m) return false;
  return true;
}

std::size_t Poly::hash() const {
  std::size_t h = t_.size();
  for (const auto& t : t_) {
    h = h * 31 + t.m.hash();
    h ^= std::hash<std::string>()(t.c.get_str()) + 0x9e3779b9 + (h << 6) + (h >> 2);
  }
  return h;
}

Rat Poly::eval(const std::map<VarId, Rat>& pt) const {
  return eval_poly<Rat>(
      *this,
      [&](VarId v) -> const Rat& {
        auto it = pt.find(v);
        if (it == pt.end()) throw std::invalid_argument("unbound variable " + var_name(v));
        return it->second;
      },
      Rat(0), Rat(1));
}

std::string Poly::str() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : t_) {
    Rat c = t.c;
    bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    bool unit = (c == 1);
    if (t.m.is_one()) {
      os << c.get_str();
      continue;
    }
    if (!unit) os << c.get_str() << "*";
    bool f2 = true;
    for (const auto& f : t.m.factors()) {
      if (!f2) os << "*";
      f2 = false;
      os << var_name(f.v);
      if (f.e > 1) os << "^" << f.e;
    }
  }
  return os.str();
}

std::optional<Poly> divide_exact(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("division by zero polynomial");
  if (a.is_zero()) return Poly();
  if (b.is_const()) return a * Rat(1 / b.const_value());
  if (b.size() == 1) {
    const Mono& m = b.lm();
    for (const auto& t : a.terms())
      if (!m.divides(t.m)) return std::nullopt;
    return a.div_mono(m) * Rat(1 / b.lc());
  }
  if (a.total_degree() < b.total_degree()) return std::nullopt;
  std::vector<Term> q;
  Poly r = a;
  Rat ilc = 1 / b.lc();
  while (!r.is_zero()) {
    if (!b.lm().divides(r.lm())) return std::nullopt;
    Mono m = r.lm() / b.lm();
    Rat c = r.lc() * ilc;
    q.push_back({m, c});
    r = r - b.mul_term(m, c);
  }
  return Poly::from_terms(std::move(q));
}

}  // namespace grasslab
