#pragma once
#include <cstdint>
#include <random>

#include "grasslab/rat.hpp"

namespace grasslab {

// Deterministic source of small random rationals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  long range(long lo, long hi) {  // inclusive
    return lo + static_cast<long>(g_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  Rat rat(long maxnum = 9, long maxden = 4) {
    Rat r(range(-maxnum, maxnum), range(1, maxden));
    r.canonicalize();
    return r;
  }
  Rat nonzero_rat(long maxnum = 9, long maxden = 4) {
    Rat r;
    do r = rat(maxnum, maxden);
    while (sgn(r) == 0);
    return r;
  }
  std::mt19937_64& engine() { return g_; }

 private:
  std::mt19937_64 g_;
};

}  // namespace grasslab
