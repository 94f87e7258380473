#pragma once
#include <optional>
#include <string>

#include "grasslab/grassmann.hpp"
#include "json.hpp"

namespace grasslab {

struct Expected {
  std::optional<bool> nondegenerate, integrable, linearly_degenerate, linearisable;
};

// A first-order system, either solved (u_t = f, v_t = g in a,b,p,q) or
// implicit (F = G = 0 in u1..v3). A transform M replaces the fourfold X by
// its image M.X; the solved form of the image is only known through series.
struct System {
  std::string name;
  bool evolutionary = false;
  SystemEvol evol;
  SystemImplicit impl;  // always set; u3 - f, v3 - g for evolutionary input
  std::optional<SL5> transform;
  Expected expected;

  static System evolution(std::string name, Expr f, Expr g);
  static System implicit(std::string name, Expr F, Expr G, std::optional<SL5> M = std::nullopt);
  // M applied on top of any existing transform
  System transformed(const SL5& M) const;
  bool direct() const { return evolutionary && !transform; }
};

// u1..v3 plus u_x,u_y,u_t,v_x,v_y,v_t aliases
const VarTable& implicit_table();

System system_from_json(const nlohmann::json& j);
nlohmann::json system_to_json(const System& s);
nlohmann::json sl5_to_json(const SL5& M);
SL5 sl5_from_json(const nlohmann::json& j);

// A point on the fourfold with Taylor series of the solved form there.
struct SamplePoint {
  std::array<Rat, 4> z;  // (a,b,p,q) = (u1,u2,v1,v2) of the (transformed) chart
  Series f, g;            // u3, v3 as series in offsets of z
  ChartPoint U;           // same point as a chart matrix
  std::vector<Rat> coords() const;  // (a,b,p,q,f,g)
};

struct SamplingFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Sampler {
 public:
  Sampler(const System& sys, std::uint64_t seed);
  // Throws SamplingFailure after too many rejected draws.
  SamplePoint next(int deg);
  // Series of (f, g) at a known chart point on the (transformed) fourfold.
  SamplePoint at(const ChartPoint& U, int deg) const;

 private:
  ChartPoint draw_original();
  const System& sys_;
  Rng rng_;
  Poly Fp_, Gp_;
  std::vector<std::array<int, 2>> pairs_;  // chart slots in which F, G are jointly affine
  std::optional<SL5> inv_;
};

// Taylor series of a rational function of a,b,p,q at z.
Series taylor(const Expr& e, const std::array<Rat, 4>& z, int deg);

// Derivative of a sampled series by a multi-index over (a,b,p,q).
inline Rat dval(const Series& s, int i0, int i1 = -1, int i2 = -1, int i3 = -1) {
  std::vector<int> e(4, 0);
  for (int i : {i0, i1, i2, i3})
    if (i >= 0) ++e[i];
  return s.derivative(e);
}

// Random SL5 element under which sys has a solvable chart at sampled points.
SL5 find_chart_transform(const System& sys, std::uint64_t seed, int tries = 200);

}  // namespace grasslab
