#include <algorithm>
#include <unordered_map>

#include "grasslab/poly.hpp"

namespace grasslab {

namespace {

using PV = std::vector<Poly>;  // dense coefficients in the main variable

void trim(PV& v) {
  while (!v.empty() && v.back().is_zero()) v.pop_back();
}

// Univariate Euclid over Q on dense Rat vectors.
std::vector<Rat> uni_gcd(std::vector<Rat> a, std::vector<Rat> b) {
  auto trimr = [](std::vector<Rat>& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
  };
  trimr(a);
  trimr(b);
  if (a.size() < b.size()) std::swap(a, b);
  while (!b.empty()) {
    // a mod b
    Rat ilc = 1 / b.back();
    while (a.size() >= b.size()) {
      Rat c = a.back() * ilc;
      std::size_t sh = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) a[sh + i] -= c * b[i];
      a.pop_back();
      trimr(a);
      if (a.empty()) break;
    }
    std::swap(a, b);
    if (!a.empty()) {
      Rat il = 1 / a.back();
      for (auto& x : a) x *= il;
    }
  }
  Rat il = 1 / a.back();
  for (auto& x : a) x *= il;
  return a;
}

Poly gcd_impl(const Poly& A, const Poly& B);

Poly gcd_list(Poly g, const PV& cs) {
  for (const auto& c : cs) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? c.monic() : gcd_impl(g, c);
    if (g.is_const()) return Poly(Rat(1));
  }
  return g;
}

PV prem(PV a, const PV& b) {
  const Poly& lb = b.back();
  while (a.size() >= b.size()) {
    Poly c = a.back();
    std::size_t sh = a.size() - b.size();
    for (auto& x : a) x = x * lb;
    for (std::size_t i = 0; i < b.size(); ++i) a[sh + i] = a[sh + i] - c * b[i];
    a.pop_back();
    trim(a);
    if (a.empty()) break;
  }
  return a;
}

// Removes the content w.r.t. the main variable and normalizes rational scale.
PV prim_part(PV v) {
  Poly c = gcd_list(Poly(), v);
  if (!c.is_const()) {
    for (auto& x : v) x = *divide_exact(x, c);
  }
  // rational normalization across all coefficients
  mpz_class l = 1, g = 0;
  for (auto& x : v)
    for (auto& t : x.terms()) {
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.c.get_den_mpz_t());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.c.get_num_mpz_t());
    }
  if (g != 0) {
    Rat s(l, g);
    s.canonicalize();
    if (s != 1)
      for (auto& x : v) x = x * s;
  }
  return v;
}

Poly uni_case(const Poly& A, const Poly& B, VarId x) {
  auto dense = [&](const Poly& P) {
    std::vector<Rat> v(P.degree(x) + 1);
    for (const auto& t : P.terms()) v[t.m.exp(x)] = t.c;
    return v;
  };
  auto g = uni_gcd(dense(A), dense(B));
  std::vector<Term> ts;
  for (std::size_t e = 0; e < g.size(); ++e)
    if (g[e] != 0) ts.push_back({Mono::var(x, static_cast<std::uint32_t>(e)), g[e]});
  return Poly::from_terms(std::move(ts));
}

Poly gcd_nomono(const Poly& A, const Poly& B) {
  if (A.is_const() || B.is_const()) return Poly(Rat(1));
  if (A.monic() == B.monic()) return A.monic();
  auto va = A.variables();
  auto vb = B.variables();
  for (VarId x : va)
    if (!std::binary_search(vb.begin(), vb.end(), x)) return gcd_list(B.monic(), A.coeffs_in(x));
  for (VarId x : vb)
    if (!std::binary_search(va.begin(), va.end(), x)) return gcd_list(A.monic(), B.coeffs_in(x));
  if (va.size() == 1) return uni_case(A, B, va[0]);
  // trial division by the smaller candidate
  {
    const Poly& s = A.size() <= B.size() ? A : B;
    const Poly& l = A.size() <= B.size() ? B : A;
    if (divide_exact(l, s)) return s.monic();
  }
  VarId x = va[0];
  std::uint32_t best = ~0u;
  for (VarId v : va) {
    std::uint32_t d = std::max(A.degree(v), B.degree(v));
    if (d < best) {
      best = d;
      x = v;
    }
  }
  PV ca = A.coeffs_in(x), cb = B.coeffs_in(x);
  Poly conta = gcd_list(Poly(), ca), contb = gcd_list(Poly(), cb);
  Poly c = gcd_impl(conta, contb);
  if (!conta.is_const())
    for (auto& t : ca) t = *divide_exact(t, conta);
  if (!contb.is_const())
    for (auto& t : cb) t = *divide_exact(t, contb);
  if (ca.size() < cb.size()) std::swap(ca, cb);
  ca = prim_part(ca);
  cb = prim_part(cb);
  while (true) {
    PV r = prem(ca, cb);
    if (r.empty()) break;
    if (r.size() == 1) {
      cb = {Poly(Rat(1))};
      break;
    }
    ca = std::move(cb);
    cb = prim_part(std::move(r));
  }
  Poly g = Poly::from_coeffs(x, prim_part(cb));
  return (c * g).monic();
}

struct Key {
  Poly a, b;
  bool operator==(const Key& o) const { return a == o.a && b == o.b; }
};
struct KeyHash {
  std::size_t operator()(const Key& k) const { return k.a.hash() * 1000003u ^ k.b.hash(); }
};

thread_local std::unordered_map<Key, Poly, KeyHash> memo;

Poly gcd_impl(const Poly& A, const Poly& B) {
  if (A.is_zero()) return B.monic();
  if (B.is_zero()) return A.monic();
  if (A.is_const() || B.is_const()) return Poly(Rat(1));
  Mono ma = A.mono_content(), mb = B.mono_content();
  Mono m = ma.gcd(mb);
  if (A.size() == 1 || B.size() == 1) return Poly::term(m, Rat(1));
  bool small = A.size() * B.size() < 16;
  Key k{A, B};
  if (!small) {
    if (k.b.hash() < k.a.hash()) std::swap(k.a, k.b);
    auto it = memo.find(k);
    if (it != memo.end()) return it->second;
  }
  Poly g = gcd_nomono(A.div_mono(ma), B.div_mono(mb));
  Poly r = g.mul_term(m, Rat(1)).monic();
  if (!small) {
    if (memo.size() > 20000) memo.clear();
    memo.emplace(std::move(k), r);
  }
  return r;
}

}  // namespace

Poly poly_gcd(const Poly& a, const Poly& b) {
  if (a.is_zero() && b.is_zero()) return Poly();
  return gcd_impl(a, b);
}

}  // namespace grasslab
