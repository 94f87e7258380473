#include "grasslab/series.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace grasslab {

namespace {

std::unique_ptr<MonoTable> build(int n, int D) {
  auto t = std::make_unique<MonoTable>();
  t->nvars = n;
  t->D = D;
  // enumerate degree by degree, lex descending in the first variable
  std::vector<int> e(n, 0);
  for (int d = 0; d <= D; ++d) {
    std::vector<std::vector<int>> layer;
    std::vector<int> cur(n, 0);
    auto rec = [&](auto&& self, int i, int left) -> void {
      if (i == n - 1) {
        cur[i] = left;
        layer.push_back(cur);
        return;
      }
      for (int k = left; k >= 0; --k) {
        cur[i] = k;
        self(self, i + 1, left - k);
      }
    };
    rec(rec, 0, d);
    for (auto& x : layer) {
      t->exps.push_back(x);
      t->deg_of.push_back(d);
    }
    t->count.push_back(static_cast<int>(t->exps.size()));
  }
  int N = t->N();
  std::map<std::vector<int>, int> idx;
  for (int i = 0; i < N; ++i) idx[t->exps[i]] = i;
  t->mul.assign(static_cast<std::size_t>(N) * N, -1);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (t->deg_of[i] + t->deg_of[j] > D) continue;
      std::vector<int> s(n);
      for (int k = 0; k < n; ++k) s[k] = t->exps[i][k] + t->exps[j][k];
      t->mul[static_cast<std::size_t>(i) * N + j] = idx[s];
    }
  t->down.assign(static_cast<std::size_t>(N) * n, -1);
  t->up.assign(static_cast<std::size_t>(N) * n, -1);
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < n; ++k) {
      std::vector<int> s = t->exps[i];
      if (s[k] > 0) {
        s[k]--;
        t->down[static_cast<std::size_t>(i) * n + k] = idx[s];
        s[k]++;
      }
      s[k]++;
      auto it = idx.find(s);
      if (it != idx.end()) t->up[static_cast<std::size_t>(i) * n + k] = it->second;
    }
  return t;
}

struct Cache {
  std::mutex mu;
  std::map<int, std::unique_ptr<MonoTable>> tabs;  // by nvars, grown on demand
  std::vector<std::unique_ptr<MonoTable>> retired;
};

Cache& cache() {
  static Cache c;
  return c;
}

}  // namespace

int MonoTable::index(const std::vector<int>& e) const {
  // position of e inside its degree layer
  int d = 0;
  for (int x : e) d += x;
  if (d > D) return -1;
  int base = d == 0 ? 0 : count[d - 1];
  int end = count[d];
  for (int i = base; i < end; ++i)
    if (exps[i] == e) return i;
  return -1;
}

const MonoTable& mono_table(int nvars, int D) {
  auto& c = cache();
  std::lock_guard<std::mutex> lk(c.mu);
  auto& slot = c.tabs[nvars];
  if (!slot || slot->D < D) {
    int nd = slot ? std::max(D, slot->D + 1) : std::max(D, 4);
    if (slot) c.retired.push_back(std::move(slot));
    slot = build(nvars, nd);
  }
  return *slot;
}

Rat factorial_weight(const std::vector<int>& e) {
  mpz_class f = 1;
  for (int x : e)
    for (int k = 2; k <= x; ++k) f *= k;
  return Rat(f);
}

Series::Series(int nvars, int deg) : n_(nvars), d_(deg) {
  if (deg < 0) throw std::logic_error("series truncated below degree 0");
  c_.assign(mono_table(nvars, deg).count[deg], Rat(0));
}

Series Series::constant(int nvars, int deg, const Rat& c) {
  Series s(nvars, deg);
  s.c_[0] = c;
  return s;
}

Series Series::variable(int nvars, int deg, int i, const Rat& at) {
  Series s(nvars, deg);
  s.c_[0] = at;
  if (deg >= 1) s.c_[1 + i] = 1;
  return s;
}

bool Series::is_zero() const {
  for (const auto& x : c_)
    if (sgn(x) != 0) return false;
  return true;
}

bool Series::is_constant() const {
  for (std::size_t k = 1; k < c_.size(); ++k)
    if (sgn(c_[k]) != 0) return false;
  return true;
}

Series Series::operator-() const {
  Series r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

Series Series::operator+(const Series& o) const {
  Series r = d_ <= o.d_ ? *this : o;
  const Series& other = d_ <= o.d_ ? o : *this;
  for (std::size_t k = 0; k < r.c_.size(); ++k) r.c_[k] += other.c_[k];
  return r;
}

Series& Series::operator+=(const Series& o) { return *this = *this + o; }
Series& Series::operator-=(const Series& o) { return *this = *this - o; }

Series Series::operator-(const Series& o) const {
  if (d_ <= o.d_) {
    Series r = *this;
    for (std::size_t k = 0; k < r.c_.size(); ++k) r.c_[k] -= o.c_[k];
    return r;
  }
  Series r = -o;
  for (std::size_t k = 0; k < r.c_.size(); ++k) r.c_[k] += c_[k];
  return r;
}

Series Series::operator*(const Series& o) const {
  int d = std::min(d_, o.d_);
  const MonoTable& t = mono_table(n_, d);
  Series r(n_, d);
  int cnt = t.count[d];
  int N = t.N();
  Rat tmp;
  for (int i = 0; i < cnt; ++i) {
    if (sgn(c_[i]) == 0) continue;
    int lim = t.count[d - t.deg_of[i]];
    const int* row = &t.mul[static_cast<std::size_t>(i) * N];
    for (int j = 0; j < lim; ++j) {
      if (sgn(o.c_[j]) == 0) continue;
      mpq_mul(tmp.get_mpq_t(), c_[i].get_mpq_t(), o.c_[j].get_mpq_t());
      r.c_[row[j]] += tmp;
    }
  }
  return r;
}

Series Series::operator*(const Rat& s) const {
  Series r = *this;
  if (sgn(s) == 0) {
    for (auto& x : r.c_) x = 0;
    return r;
  }
  for (auto& x : r.c_)
    if (sgn(x) != 0) x *= s;
  return r;
}

Series Series::operator+(const Rat& s) const {
  Series r = *this;
  r.c_[0] += s;
  return r;
}

Series Series::inv() const {
  if (sgn(c_[0]) == 0) throw std::domain_error("series inverse of a non-unit");
  Rat i0 = 1 / c_[0];
  Series rest = *this;
  rest.c_[0] = 0;
  Series step = rest * (-i0);
  Series acc = Series::constant(n_, d_, Rat(1));
  Series term = acc;
  for (int k = 1; k <= d_; ++k) {
    term = term * step;
    acc += term;
  }
  return acc * i0;
}

Series Series::partial(int i) const {
  if (d_ < 1) throw std::logic_error("series derivative exhausts truncation degree");
  const MonoTable& t = mono_table(n_, d_);
  Series r(n_, d_ - 1);
  int cnt = t.count[d_];
  for (int k = 0; k < cnt; ++k) {
    if (sgn(c_[k]) == 0) continue;
    int e = t.exps[k][i];
    if (!e) continue;
    r.c_[t.down[static_cast<std::size_t>(k) * n_ + i]] += c_[k] * e;
  }
  return r;
}

Series Series::truncate(int d) const {
  if (d >= d_) return *this;
  Series r(n_, d);
  for (std::size_t k = 0; k < r.c_.size(); ++k) r.c_[k] = c_[k];
  return r;
}

Rat Series::coeff(const std::vector<int>& e) const {
  int k = mono_table(n_, d_).index(e);
  if (k < 0 || k >= static_cast<int>(c_.size())) throw std::out_of_range("coefficient beyond truncation");
  return c_[k];
}

void Series::set_coeff(const std::vector<int>& e, const Rat& r) {
  int k = mono_table(n_, d_).index(e);
  if (k < 0 || k >= static_cast<int>(c_.size())) throw std::out_of_range("coefficient beyond truncation");
  c_[k] = r;
}

Rat Series::derivative(const std::vector<int>& e) const { return coeff(e) * factorial_weight(e); }

void Series::set_derivative(const std::vector<int>& e, const Rat& r) {
  set_coeff(e, r / factorial_weight(e));
}

}  // namespace grasslab
