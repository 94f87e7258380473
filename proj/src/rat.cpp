#include "grasslab/rat.hpp"

#include <stdexcept>

namespace grasslab {

Rat parse_rat(const std::string& s) {
  std::string t = s;
  if (!t.empty() && t[0] == '+') t = t.substr(1);
  Rat r;
  if (r.set_str(t, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  r.canonicalize();
  return r;
}

std::string rat_str(const Rat& r) { return r.get_str(); }

}  // namespace grasslab
