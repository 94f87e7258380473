#pragma once
#include <gmpxx.h>

#include <string>

namespace grasslab {

using Rat = mpq_class;

// Accepts "-3", "7/2", "+4/6" (result is canonicalized).
Rat parse_rat(const std::string& s);
std::string rat_str(const Rat& r);

}  // namespace grasslab
