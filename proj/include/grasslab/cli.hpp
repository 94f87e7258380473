#pragma once
#include <iosfwd>
#include <string>

#include "grasslab/gl2struct.hpp"
#include "grasslab/laxverify.hpp"

namespace grasslab {

struct CliOptions {
  Mode mode = Mode::Points;
  int points = 7;
  std::uint64_t seed = 0;  // point seeds are seed + 1 and seed + 2
  int max_order = 4;
  bool timing = false;
  bool gl2 = true;  // include the GL(2) summary in analyze reports
  PointMode point_mode() const { return {points, {seed + 1, seed + 2}}; }
};

nlohmann::json verdict_json(const Verdict& v);

// Reports carry "schema": 1 and "match" (verdicts agree with "expected").
nlohmann::json analyze_report(const System& sys, const CliOptions& o);
nlohmann::json gl2_summary(const System& sys, const CliOptions& o);
nlohmann::json lax_report(const nlohmann::json& fixture, const CliOptions& o);
nlohmann::json derive_conditions_report(const CliOptions& o, std::optional<std::array<Rat, 8>> first);
nlohmann::json chasles_report(const std::array<Rat, 5>& lambda);
nlohmann::json transform_report(const System& sys, const SL5& M);

// Writes every built-in system to dir/<name>.json and the Lax fixtures to
// dir/lax/<name>.json.
void export_corpus(const std::string& dir);

// Exit status: 0 when results match expectations, 1 on mismatch, 2 on error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace grasslab
