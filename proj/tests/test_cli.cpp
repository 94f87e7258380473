#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "grasslab/cli.hpp"

using namespace grasslab;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
  json report() const { return json::parse(out); }
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "grasslab");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(GRASSLAB_CORPUS_DIR) + "/" + name + ".json"; }

std::string temp_file(const std::string& name, const std::string& text) {
  auto p = std::filesystem::temp_directory_path() / ("grasslab_test_" + name);
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST_CASE("analyze reports match expectations and are deterministic") {
  Run a = cli({"analyze", fixture("dkp"), "--points", "2", "--no-gl2"});
  CHECK(a.code == 0);
  json r = a.report();
  CHECK(r["schema"] == 1);
  CHECK(r["match"] == true);
  CHECK(r["verdicts"]["linearly_degenerate"]["status"] == "Refuted");
  CHECK(r["geometry"]["det_Omega_det_A_squared"] == "9");
  CHECK_FALSE(r.contains("timing_ms"));
  Run b = cli({"analyze", fixture("dkp"), "--points", "2", "--no-gl2"});
  CHECK(a.out == b.out);
  CHECK(cli({"analyze", fixture("dkp"), "--points", "2", "--no-gl2", "--timing"}).report().contains("timing_ms"));
}

TEST_CASE("a mutated fixture is red with a witness") {
  json j = system_to_json(corpus_get("table1_5"));
  j["G"] = "3*v1*v2 + u2 - v3";
  Run r = cli({"analyze", temp_file("mutated.json", j.dump()), "--points", "2", "--no-gl2"});
  CHECK(r.code == 1);
  json rep = r.report();
  CHECK(rep["match"] == false);
  CHECK(rep["verdicts"]["integrable"]["witness"]["value"] != "0");
}

TEST_CASE("errors exit with 2") {
  CHECK(cli({"analyze", temp_file("garbage.json", "not json")}).code == 2);
  CHECK(cli({"analyze", temp_file("missing_g.json", R"({"form": "evolutionary", "f": "p"})")}).code == 2);
  Run p = cli({"analyze", temp_file("bad_expr.json", R"({"form": "evolutionary", "f": "p +* a", "g": "b"})")});
  CHECK(p.code == 2);
  CHECK(p.err.find("parse") != std::string::npos);
  Run d = cli({"analyze", temp_file("degenerate.json", R"({"form": "evolutionary", "f": "p", "g": "q"})")});
  CHECK(d.code == 2);
  CHECK(d.err.find("degenerate") != std::string::npos);
  CHECK(cli({"analyze", "/nonexistent/system.json"}).code == 2);
  CHECK(cli({"bogus"}).code == 2);
  CHECK(cli({"analyze", fixture("dkp"), "--max-order", "2"}).code == 2);
  CHECK(cli({"chasles", "--eigenvalues", "0,1,1,3,4"}).code == 2);
}

TEST_CASE("corpus filter") {
  Run r = cli({"corpus", "run", "--filter", "table1", "--points", "1"});
  json rep = r.report();
  CHECK(rep["summary"]["total"] == 7);
  CHECK(rep["entries"].size() == 7);
}

TEST_CASE("derive-conditions") {
  Run r = cli({"derive-conditions", "--seed", "3"});
  CHECK(r.code == 0);
  json rep = r.report();
  CHECK(rep["rank"] == 40);
  CHECK(rep["rows"] == 105);
  CHECK(rep["conditions"].size() == 40);
  for (auto& v : rep["at_zero_second"]) CHECK(v == "0");
  Run g = cli({"derive-conditions", "--first", "1,0,0,0,0,1,0,0"});
  CHECK(g.code == 2);
}

TEST_CASE("chasles and transform") {
  json c = cli({"chasles", "--eigenvalues", "0,1,2,3,4"}).report();
  CHECK(c["alpha"] == "4/3");
  CHECK(c["beta"] == "3/2");
  std::string m = temp_file("swap.json", R"([["0","0","1","0","0"],["0","1","0","0","0"],["1","0","0","0","0"],["0","0","0","1","0"],["0","0","0","0","1"]])");
  Run t = cli({"transform", fixture("linear"), "--matrix", m});
  CHECK(t.code == 0);
  System back = system_from_json(t.report()["system"]);
  REQUIRE(back.transform);
  CHECK(back.transform->m[0][2] == 1);
}

TEST_CASE("lax verify") {
  Run ok = cli({"lax", "verify", fixture("lax/dkp_lax"), "--points", "2", "--mode", "symbolic"});
  CHECK(ok.code == 0);
  CHECK(ok.report()["verdicts"]["relations"]["status"] == "SymbolicProven");
  json bad = lax_to_json(lax_fixture("dkp_lax").pair);
  bad["system"] = "dkp";
  bad["Q"] = bad["Q"].get<std::string>() + " + lam*a";
  CHECK(cli({"lax", "verify", temp_file("bad_lax.json", bad.dump()), "--points", "2"}).code == 1);
  bad["expected"] = false;
  CHECK(cli({"lax", "verify", temp_file("bad_lax2.json", bad.dump()), "--points", "2"}).code == 0);
}

TEST_CASE("gl2 report") {
  Run r = cli({"gl2", fixture("table1_5"), "--points", "1"});
  CHECK(r.code == 0);
  json s = r.report()["summary"];
  CHECK(s["bryant_torsion_zero"]["status"] == "PointwiseVerified");
  CHECK(s["curvature_relations_hold"] == true);
  CHECK(s["eigen_audit"]["torsion"].size() == 4);
  json d = cli({"gl2", fixture("chazy_eta_s"), "--points", "1"}).report()["summary"];
  CHECK(d["curvature_relations_hold"] == false);
}
