#pragma once
#include <optional>
#include <vector>

#include "grasslab/series.hpp"

namespace grasslab {

using RVec = std::vector<Rat>;
using RMat = std::vector<RVec>;

int rank(RMat A);
Rat det(RMat A);
std::optional<RMat> inverse(RMat A);
RMat nullspace(const RMat& A);  // basis vectors as rows
// Some solution of A x = b, or nullopt when inconsistent.
std::optional<RVec> solve(RMat A, RVec b);
RMat matmul(const RMat& A, const RMat& B);

// Fraction-free (Bareiss) elimination of A X = B with integer-scaled rows.
// Returns nullopt unless rank A equals the column count and the system is
// consistent; rank_out receives rank A either way.
std::optional<RMat> bareiss_solve(const RMat& A, const RMat& B, int* rank_out);

// Elimination over truncated series using pivots with nonzero constant term.
// Leftover rows must vanish identically, otherwise the system is reported
// inconsistent. Free unknowns are set to zero.
struct SeriesSolve {
  bool consistent = false;
  int rank = 0;
  std::vector<Series> x;
};
SeriesSolve solve_series(std::vector<std::vector<Series>> A, std::vector<Series> b);

}  // namespace grasslab
