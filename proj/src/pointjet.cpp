#include "grasslab/pointjet.hpp"

#include <algorithm>
#include <stdexcept>

namespace grasslab {

namespace {
constexpr int kMaxJetOrder = 7;
}

int pjet_id(int func, int i, int j) {
  int o = i + j;
  if (o < 2 || o > kMaxJetOrder) throw OrderOverflow("point jet order out of range");
  // orders 2..o-1 occupy 2*(k+1) ids each
  int off = 0;
  for (int k = 2; k < o; ++k) off += 2 * (k + 1);
  return off + func * (o + 1) + (o - i);
}

PJet pjet_of(int id) {
  int o = 2;
  while (id >= 2 * (o + 1)) {
    id -= 2 * (o + 1);
    ++o;
  }
  int func = id / (o + 1);
  int i = o - id % (o + 1);
  return PJet{func, i, o - i};
}

std::string pjet_name(int id) {
  PJet p = pjet_of(id);
  return jet_spelling(p.func, p.i, p.j, 0);
}

bool JetMono::operator<(const JetMono& o) const {
  if (n != o.n) return n < o.n;
  for (int k = 0; k < n; ++k)
    if (v[k] != o.v[k]) return v[k] < o.v[k];
  return false;
}

bool JetMono::operator==(const JetMono& o) const {
  if (n != o.n) return false;
  for (int k = 0; k < n; ++k)
    if (v[k] != o.v[k]) return false;
  return true;
}

JetMono JetMono::operator*(const JetMono& o) const {
  if (n + o.n > 8) throw std::length_error("jet monomial degree exceeds 8");
  JetMono r;
  r.n = static_cast<std::uint8_t>(n + o.n);
  std::merge(v.begin(), v.begin() + n, o.v.begin(), o.v.begin() + o.n, r.v.begin());
  return r;
}

JetMono JetMono::without_one(std::uint8_t id) const {
  JetMono r;
  bool done = false;
  for (int k = 0; k < n; ++k) {
    if (!done && v[k] == id) {
      done = true;
      continue;
    }
    r.v[r.n++] = v[k];
  }
  return r;
}

JetPoly::JetPoly(const Series& s) {
  if (!s.is_zero()) t_.emplace(JetMono(), s);
}

JetPoly JetPoly::jet(int id, int nvars, int deg) {
  JetPoly r;
  JetMono m;
  m.n = 1;
  m.v[0] = static_cast<std::uint8_t>(id);
  r.t_.emplace(m, Series::constant(nvars, deg, Rat(1)));
  return r;
}

bool JetPoly::jet_free() const { return t_.empty() || (t_.size() == 1 && t_.begin()->first.n == 0); }

const Series& JetPoly::scalar() const {
  if (t_.empty() || !jet_free()) throw std::logic_error("JetPoly is not a nonzero scalar");
  return t_.begin()->second;
}

void JetPoly::add_term(const JetMono& m, const Series& c) {
  auto it = t_.find(m);
  if (it == t_.end()) {
    t_.emplace(m, c);
  } else {
    it->second += c;
  }
}

JetPoly JetPoly::operator-() const {
  JetPoly r = *this;
  for (auto& [m, c] : r.t_) c = -c;
  return r;
}

JetPoly& JetPoly::operator+=(const JetPoly& o) {
  for (auto& [m, c] : o.t_) add_term(m, c);
  return *this;
}

JetPoly& JetPoly::operator-=(const JetPoly& o) {
  for (auto& [m, c] : o.t_) add_term(m, -c);
  return *this;
}

JetPoly JetPoly::operator+(const JetPoly& o) const {
  JetPoly r = *this;
  r += o;
  return r;
}

JetPoly JetPoly::operator-(const JetPoly& o) const {
  JetPoly r = *this;
  r -= o;
  return r;
}

JetPoly JetPoly::operator*(const JetPoly& o) const {
  JetPoly r;
  for (auto& [m1, c1] : t_)
    for (auto& [m2, c2] : o.t_) r.add_term(m1 * m2, c1 * c2);
  return r;
}

JetPoly JetPoly::operator*(const Rat& s) const {
  JetPoly r = *this;
  for (auto& [m, c] : r.t_) c = c * s;
  return r;
}

std::map<JetMono, Rat> JetPoly::values() const {
  std::map<JetMono, Rat> out;
  for (auto& [m, c] : t_) {
    if (c.deg() < 0) throw std::logic_error("coefficient truncated below degree 0");
    if (sgn(c.constant_term()) != 0) out[m] = c.constant_term();
  }
  return out;
}

bool JetPoly::value_zero() const { return values().empty(); }

PointEngine::PointEngine(Series f, Series g, int max_order)
    : f_(std::move(f)), g_(std::move(g)), max_order_(max_order) {}

JetPoly PointEngine::cst(const Rat& r) const { return JetPoly(Series::constant(4, f_.deg(), r)); }

const JetPoly& PointEngine::reduced_t(int func, int i, int j) const {
  std::array<int, 3> key{func, i, j};
  auto it = tcache_.find(key);
  if (it != tcache_.end()) return it->second;
  JetPoly r;
  if (i == 0 && j == 0)
    r = JetPoly(func ? g_ : f_);
  else if (i > 0)
    r = D(reduced_t(func, i - 1, j), 0);
  else
    r = D(reduced_t(func, i, j - 1), 1);
  return tcache_.emplace(key, std::move(r)).first->second;
}

// total derivative of the jet (func, i, j) (order >= 1) in direction dir
const JetPoly& PointEngine::d_jet(int func, int i, int j, int dir) const {
  std::array<int, 4> key{func, i, j, dir};
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  JetPoly r;
  if (dir == 2) {
    r = reduced_t(func, i, j);
  } else {
    int ni = i + (dir == 0), nj = j + (dir == 1);
    if (ni + nj > max_order_) throw OrderOverflow("jet order exceeds " + std::to_string(max_order_));
    r = JetPoly::jet(pjet_id(func, ni, nj), 4, f_.deg());
  }
  return cache_.emplace(key, std::move(r)).first->second;
}

JetPoly PointEngine::D(const JetPoly& P, int dir) const {
  JetPoly out;
  static const int bf[4] = {0, 0, 1, 1}, bi[4] = {1, 0, 1, 0}, bj[4] = {0, 1, 0, 1};
  for (auto& [m, c] : P.terms()) {
    if (c.deg() >= 1) {
      for (int z = 0; z < 4; ++z) {
        Series dc = c.partial(z);
        if (dc.is_zero()) continue;
        const JetPoly& dz = d_jet(bf[z], bi[z], bj[z], dir);
        for (auto& [m2, c2] : dz.terms()) out.add_term(m * m2, dc * c2);
      }
    } else if (!c.is_zero()) {
      throw std::logic_error("series truncation exhausted by total derivative");
    }
    for (int k = 0; k < m.n; ++k) {
      if (k > 0 && m.v[k] == m.v[k - 1]) continue;
      int mult = 1;
      while (k + mult < m.n && m.v[k + mult] == m.v[k]) ++mult;
      PJet pj = pjet_of(m.v[k]);
      JetMono rest = m.without_one(m.v[k]);
      const JetPoly& dj = d_jet(pj.func, pj.i, pj.j, dir);
      Series cm = c * Rat(mult);
      for (auto& [m2, c2] : dj.terms()) out.add_term(rest * m2, cm * c2);
    }
  }
  // drop exact zeros
  for (auto it = out.terms().begin(); it != out.terms().end();) {
    if (it->second.is_zero())
      it = out.terms().erase(it);
    else
      ++it;
  }
  return out;
}

JetPoly PointEngine::inv(const JetPoly& P) const { return JetPoly(P.scalar().inv()); }

Expr SymBackend::fd(int which, int z) const {
  VarId v = z == 0 ? V::a() : z == 1 ? V::b() : z == 2 ? V::p() : V::q();
  return diff(which ? g : f, v);
}

Expr SymBackend::D(const Expr& e, int dir) const {
  Expr r = ctx.total_derivative(e, dir);
  return rules ? rules->reduce(r) : r;
}

}  // namespace grasslab
