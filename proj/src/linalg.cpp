#include "grasslab/linalg.hpp"

#include <stdexcept>

namespace grasslab {

namespace {

// Row echelon form in place; returns pivot columns.
std::vector<int> echelon(RMat& A, RVec* b) {
  std::vector<int> piv;
  std::size_t m = A.size();
  std::size_t n = m ? A[0].size() : 0;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t p = r;
    while (p < m && sgn(A[p][c]) == 0) ++p;
    if (p == m) continue;
    std::swap(A[p], A[r]);
    if (b) std::swap((*b)[p], (*b)[r]);
    Rat inv = 1 / A[r][c];
    for (std::size_t k = c; k < n; ++k) A[r][k] *= inv;
    if (b) (*b)[r] *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || sgn(A[i][c]) == 0) continue;
      Rat f = A[i][c];
      for (std::size_t k = c; k < n; ++k)
        if (sgn(A[r][k]) != 0) A[i][k] -= f * A[r][k];
      if (b) (*b)[i] -= f * (*b)[r];
    }
    piv.push_back(static_cast<int>(c));
    ++r;
  }
  return piv;
}

}  // namespace

int rank(RMat A) { return static_cast<int>(echelon(A, nullptr).size()); }

Rat det(RMat A) {
  std::size_t n = A.size();
  Rat d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(A[p][c]) == 0) ++p;
    if (p == n) return Rat(0);
    if (p != c) {
      std::swap(A[p], A[c]);
      d = -d;
    }
    d *= A[c][c];
    Rat inv = 1 / A[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (sgn(A[i][c]) == 0) continue;
      Rat f = A[i][c] * inv;
      for (std::size_t k = c; k < n; ++k) A[i][k] -= f * A[c][k];
    }
  }
  return d;
}

std::optional<RMat> inverse(RMat A) {
  std::size_t n = A.size();
  for (std::size_t i = 0; i < n; ++i) {
    A[i].resize(2 * n, Rat(0));
    A[i][n + i] = 1;
  }
  auto piv = echelon(A, nullptr);
  if (piv.size() < n || piv[n - 1] != static_cast<int>(n - 1)) return std::nullopt;
  RMat r(n, RVec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r[i][j] = A[i][n + j];
  return r;
}

RMat nullspace(const RMat& A0) {
  RMat A = A0;
  std::size_t n = A.empty() ? 0 : A[0].size();
  auto piv = echelon(A, nullptr);
  std::vector<bool> is_piv(n, false);
  for (int c : piv) is_piv[c] = true;
  RMat out;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_piv[f]) continue;
    RVec v(n, Rat(0));
    v[f] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -A[r][f];
    out.push_back(v);
  }
  return out;
}

std::optional<RVec> solve(RMat A, RVec b) {
  std::size_t n = A.empty() ? 0 : A[0].size();
  auto piv = echelon(A, &b);
  for (std::size_t r = piv.size(); r < A.size(); ++r)
    if (sgn(b[r]) != 0) return std::nullopt;
  RVec x(n, Rat(0));
  for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = b[r];
  return x;
}

RMat matmul(const RMat& A, const RMat& B) {
  std::size_t m = A.size(), k = B.size(), n = B.empty() ? 0 : B[0].size();
  RMat C(m, RVec(n, Rat(0)));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t t = 0; t < k; ++t) {
      if (sgn(A[i][t]) == 0) continue;
      for (std::size_t j = 0; j < n; ++j) C[i][j] += A[i][t] * B[t][j];
    }
  return C;
}

std::optional<RMat> bareiss_solve(const RMat& A, const RMat& B, int* rank_out) {
  std::size_t m = A.size(), n = m ? A[0].size() : 0, r = m ? B[0].size() : 0;
  // integer rows [A | B]
  std::vector<std::vector<mpz_class>> M(m, std::vector<mpz_class>(n + r));
  for (std::size_t i = 0; i < m; ++i) {
    mpz_class l = 1;
    for (auto& x : A[i]) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    for (auto& x : B[i]) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    for (std::size_t j = 0; j < n; ++j) M[i][j] = Rat(A[i][j] * Rat(l)).get_num();
    for (std::size_t j = 0; j < r; ++j) M[i][n + j] = Rat(B[i][j] * Rat(l)).get_num();
  }
  mpz_class prev = 1;
  std::size_t row = 0;
  std::vector<std::size_t> pivc;
  for (std::size_t c = 0; c < n && row < m; ++c) {
    std::size_t p = row;
    while (p < m && M[p][c] == 0) ++p;
    if (p == m) continue;
    std::swap(M[p], M[row]);
    for (std::size_t i = row + 1; i < m; ++i) {
      for (std::size_t j = c + 1; j < n + r; ++j) {
        M[i][j] = M[row][c] * M[i][j] - M[i][c] * M[row][j];
        mpz_divexact(M[i][j].get_mpz_t(), M[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      M[i][c] = 0;
    }
    prev = M[row][c];
    pivc.push_back(c);
    ++row;
  }
  if (rank_out) *rank_out = static_cast<int>(row);
  if (row < n) return std::nullopt;
  for (std::size_t i = row; i < m; ++i)
    for (std::size_t j = n; j < n + r; ++j)
      if (M[i][j] != 0) return std::nullopt;
  // back substitution
  RMat X(n, RVec(r, Rat(0)));
  for (std::size_t k = n; k-- > 0;) {
    for (std::size_t j = 0; j < r; ++j) {
      Rat s = Rat(M[k][n + j]);
      for (std::size_t t = k + 1; t < n; ++t) s -= Rat(M[k][t]) * X[t][j];
      X[k][j] = s / Rat(M[k][k]);
    }
  }
  return X;
}

SeriesSolve solve_series(std::vector<std::vector<Series>> A, std::vector<Series> b) {
  SeriesSolve out;
  std::size_t m = A.size(), n = m ? A[0].size() : 0;
  std::vector<int> piv;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t p = r;
    while (p < m && sgn(A[p][c].constant_term()) == 0) ++p;
    if (p == m) continue;
    std::swap(A[p], A[r]);
    std::swap(b[p], b[r]);
    Series inv = A[r][c].inv();
    // skipped columns can hold non-unit entries, so every column is updated
    for (std::size_t k = 0; k < n; ++k)
      if (!A[r][k].is_zero()) A[r][k] = A[r][k] * inv;
    b[r] = b[r] * inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || A[i][c].is_zero()) continue;
      Series f = A[i][c];
      for (std::size_t k = 0; k < n; ++k)
        if (!A[r][k].is_zero()) A[i][k] -= f * A[r][k];
      b[i] -= f * b[r];
    }
    piv.push_back(static_cast<int>(c));
    ++r;
  }
  out.rank = static_cast<int>(r);
  out.consistent = true;
  for (std::size_t i = r; i < m; ++i) {
    for (std::size_t k = 0; k < n; ++k)
      if (!A[i][k].is_zero()) out.consistent = false;
    if (!b[i].is_zero()) out.consistent = false;
  }
  int deg = 1 << 20;
  for (auto& s : b) deg = std::min(deg, s.deg());
  out.x.assign(n, Series(b.empty() ? 4 : b[0].nvars(), b.empty() ? 0 : deg));
  for (std::size_t i = 0; i < r; ++i) out.x[piv[i]] = b[i];
  return out;
}

}  // namespace grasslab
