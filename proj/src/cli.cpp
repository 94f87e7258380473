#include "grasslab/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

namespace grasslab {

using nlohmann::json;

namespace {

json rats(const std::vector<Rat>& v) {
  json j = json::array();
  for (const Rat& x : v) j.push_back(x.get_str());
  return j;
}

json witness_json(const Witness& w) { return {{"label", w.label}, {"value", w.value.get_str()}, {"point", rats(w.point)}}; }

template <class M>
json matrix_json(const M& m) {
  json j = json::array();
  for (auto& row : m) {
    json r = json::array();
    for (auto& x : row) r.push_back(print(x));
    j.push_back(r);
  }
  return j;
}

std::string mode_name(Mode m) { return m == Mode::Symbolic ? "symbolic" : "points"; }

void header(json& r, const std::string& command, const CliOptions& o) {
  r["schema"] = 1;
  r["command"] = command;
  r["mode"] = mode_name(o.mode);
  r["points"] = o.points;
  r["seeds"] = o.point_mode().seeds;
  r["max_order"] = o.max_order;
}

Failure first_nonzero(const std::string& label, const Tensor& t) {
  for (std::size_t i = 0; i < t.c.size(); ++i)
    if (sgn(t.c[i]) != 0) return std::make_pair(label + "[" + std::to_string(i) + "]", t.c[i]);
  return std::nullopt;
}

json audit_json(const std::vector<std::pair<int, int>>& a) {
  json j = json::array();
  for (auto& [ev, dim] : a) j.push_back({{"eigenvalue", ev}, {"dim", dim}});
  return j;
}

// Compares a verdict against an expected truth value.
bool agrees(const Verdict& v, bool expected) { return expected ? v.holds() : v.refuted(); }

System read_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return system_from_json(json::parse(in));
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return json::parse(in);
}

}  // namespace

json verdict_json(const Verdict& v) {
  json j{{"status", status_name(v.status)}, {"points_checked", v.points_checked}};
  if (!v.seeds.empty()) j["seeds"] = v.seeds;
  if (v.witness) j["witness"] = witness_json(*v.witness);
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

json gl2_summary(const System& sys, const CliOptions& o) {
  std::map<std::string, std::optional<Witness>> first;
  std::vector<std::string> rel_names, uni_names;
  json audit;
  auto record = [&](const std::string& key, const Failure& f, const SamplePoint& sp) {
    auto& slot = first[key];
    if (f && !slot) slot = Witness{sp.coords(), f->first, f->second};
  };
  auto relation_failure = [](const Relation& r) -> Failure {
    if (r.holds()) return std::nullopt;
    return std::make_pair(r.name, r.witness());
  };
  Verdict base = run_points(sys, 3, o.point_mode(), [&](const SamplePoint& sp) -> Failure {
    JetData jd = jet_data(sp);
    Gl2Report rep = gl2_report(jd);
    Frame<Series> fr = build_frame(jd);
    if (audit.is_null()) {
      Sl2Action s = sl2_action(fr);
      audit = {{"torsion", audit_json(eigen_audit(s, TensorSpace::Torsion))},
               {"curvature", audit_json(eigen_audit(s, TensorSpace::Curvature))}};
    }
    record("bryant_torsion_zero", first_nonzero("T", rep.conn.T), sp);
    record("bryant_curvature_zero", first_nonzero("R", rep.conn.R), sp);
    auto sc = symmetric_connection(fr);
    record("symmetric_connection_flat", sc ? first_nonzero("R", sc->R) : first_nonzero("absent", rep.conn.T), sp);
    LeeForm<Series> lf = lee_form(fr);
    Failure lee;
    for (int i = 0; i < 4 && !lee; ++i)
      for (int j = i + 1; j < 4 && !lee; ++j)
        if (sgn(lf.dphi[i][j].constant_term()) != 0)
          lee = std::make_pair("dphi[" + std::to_string(i) + "," + std::to_string(j) + "]", lf.dphi[i][j].constant_term());
    record("lee_form_closed", lee, sp);
    ConformalParallel cp = omega_parallel(fr, rep.conn);
    Failure par;
    if (!cp.conformal) par = std::make_pair(std::string("nabla Omega - lam Omega"), cp.defect);
    for (int k = 0; k < 4 && !par; ++k) {
      Series d = cp.lam[k] - lf.phi[k];
      for (std::size_t n = 0; n < d.size() && !par; ++n)
        if (sgn(d[n]) != 0) par = std::make_pair("lam - phi [" + std::to_string(k) + "]", d[n]);
    }
    record("omega_conformally_parallel", par, sp);
    if (rel_names.empty()) {
      for (auto& r : rep.integrability) rel_names.push_back(r.name);
      for (auto& r : rep.universal) uni_names.push_back(r.name);
    }
    for (auto& r : rep.integrability) record("rel:" + r.name, relation_failure(r), sp);
    for (auto& r : rep.universal) record("uni:" + r.name, relation_failure(r), sp);
    return std::nullopt;
  });
  auto item = [&](const std::string& key) {
    Verdict v = base;
    auto it = first.find(key);
    if (it != first.end() && it->second) {
      v.status = Status::Refuted;
      v.witness = it->second;
    }
    return verdict_json(v);
  };
  json s;
  for (const char* k : {"bryant_torsion_zero", "bryant_curvature_zero", "symmetric_connection_flat", "lee_form_closed",
                        "omega_conformally_parallel"})
    s[k] = item(k);
  json rel = json::object(), uni = json::object();
  bool all_hold = base.points_checked > 0;
  for (auto& n : rel_names) {
    rel[n] = item("rel:" + n);
    if (rel[n]["status"] != "PointwiseVerified") all_hold = false;
  }
  for (auto& n : uni_names) uni[n] = item("uni:" + n);
  s["curvature_relations"] = rel;
  s["universal_identities"] = uni;
  s["curvature_relations_hold"] = all_hold;
  s["eigen_audit"] = audit;
  s["points_checked"] = base.points_checked;
  if (!base.note.empty()) s["note"] = base.note;
  return s;
}

json analyze_report(const System& sys, const CliOptions& o) {
  PointMode pm = o.point_mode();
  json r;
  header(r, "analyze", o);
  r["system"] = sys.name;
  std::map<std::string, Verdict> verdicts;
  verdicts["nondegenerate"] = test_nondegenerate(sys, o.mode, pm);
  bool degenerate = verdicts["nondegenerate"].refuted();
  if (!degenerate) {
    verdicts["integrable"] = test_integrable(sys, o.mode, pm);
    verdicts["linearly_degenerate"] = test_linearly_degenerate(sys, pm);
    verdicts["linearisable"] = test_linearisable(sys, pm);
  }
  json vj = json::object();
  for (auto& [k, v] : verdicts) vj[k] = verdict_json(v);
  r["verdicts"] = vj;

  if (!degenerate) {
    json g = json::object();
    if (sys.direct()) {
      g["metric"] = matrix_json(symbol_metric(sys.evol));
      try {
        Frame<Expr> fr = build_frame(sys.evol);
        g["det_A"] = print(fr.detA);
        g["det_Omega_det_A_squared"] = print(omega_det_identity(sys.evol));
      } catch (const DegenerateFrame&) {
        g["det_A"] = "0";
      }
    } else if (!sys.transform) {
      auto G = symbol_metric(sys.impl);
      g["metric"] = matrix_json(G);
      JetContext ctx(o.max_order);
      g["weyl_covector"] = matrix_json(std::array<std::array<Expr, 3>, 1>{weyl_covector(G, ctx)})[0];
    }
    g["lee_form"] = verdict_json(check_lee_closed(sys, o.mode, pm));
    if (o.gl2) g["gl2"] = gl2_summary(sys, o);
    r["geometry"] = g;
  }

  json exp = json::object(), mismatches = json::array();
  auto cmp = [&](const char* key, const std::optional<bool>& e) {
    if (!e) return;
    exp[key] = *e;
    auto it = verdicts.find(key);
    if (it == verdicts.end() || !agrees(it->second, *e)) mismatches.push_back(key);
  };
  cmp("nondegenerate", sys.expected.nondegenerate);
  cmp("integrable", sys.expected.integrable);
  cmp("linearly_degenerate", sys.expected.linearly_degenerate);
  cmp("linearisable", sys.expected.linearisable);
  r["expected"] = exp;
  r["mismatches"] = mismatches;
  r["match"] = mismatches.empty();
  return r;
}

json lax_report(const json& fixture, const CliOptions& o) {
  const json& sj = fixture.at("system");
  System sys = sj.is_string() ? corpus_get(sj.get<std::string>()) : system_from_json(sj);
  if (!sys.direct()) throw std::invalid_argument("Lax verification needs a solved system without transform");
  LaxPair lp = lax_from_json(fixture);
  PointMode pm = o.point_mode();
  json r;
  header(r, "lax verify", o);
  r["system"] = sys.name;
  r["P"] = print(lp.P);
  r["Q"] = print(lp.Q);
  Verdict rel = check_lax_relations(sys.evol, lp, o.mode, pm);
  Verdict disp = check_dispersion_identity(sys.evol, lp, o.mode, pm);
  Verdict geo = check_null_geodesic(sys.evol, lp, pm);
  r["verdicts"] = {{"relations", verdict_json(rel)}, {"dispersion_identity", verdict_json(disp)},
                   {"null_geodesic", verdict_json(geo)}};
  bool valid = rel.holds() && disp.holds() && geo.holds();
  bool expected = fixture.value("expected", true);
  r["valid"] = valid;
  r["expected"] = expected;
  r["match"] = valid == expected;
  return r;
}

json derive_conditions_report(const CliOptions& o, std::optional<std::array<Rat, 8>> first) {
  int retries = 0;
  IntegrabilityConditions ic;
  for (;;) {
    try {
      ic = derive_integrability_conditions(first, o.seed + retries);
      break;
    } catch (const RankDeficient&) {
      if (first || ++retries > 100) throw;
    }
  }
  json r;
  r["schema"] = 1;
  r["command"] = "derive-conditions";
  r["seed"] = o.seed;
  r["retries"] = retries;
  r["first"] = rats(std::vector<Rat>(ic.first.begin(), ic.first.end()));
  r["rows"] = ic.rows;
  r["rank"] = ic.rank;
  r["consistent"] = ic.consistent;
  json conds = json::array();
  for (std::size_t m = 0; m < ic.solved.size(); ++m) conds.push_back({{"name", ic.third_names[m]}, {"value", print(ic.solved[m])}});
  r["conditions"] = conds;
  if (ic.consistent) r["at_zero_second"] = rats(ic.apply(std::vector<Rat>(20, Rat(0))));
  r["match"] = ic.consistent && ic.rank == 40;
  return r;
}

json chasles_report(const std::array<Rat, 5>& lambda) {
  ChaslesResult c = chasles_diagonal(lambda);
  json r;
  r["schema"] = 1;
  r["command"] = "chasles";
  r["eigenvalues"] = rats(std::vector<Rat>(lambda.begin(), lambda.end()));
  const char* names[6] = {"u1", "u2", "u3", "v1", "v2", "v3"};
  json p;
  for (int k = 0; k < 6; ++k) p[names[k]] = print(c.param[k]);
  r["parametrisation"] = p;
  if (c.alpha) r["alpha"] = c.alpha->get_str();
  if (c.beta) r["beta"] = c.beta->get_str();
  if (c.system) r["system"] = {{"form", "implicit"}, {"F", print(c.system->F)}, {"G", print(c.system->G)}};
  r["match"] = true;
  return r;
}

json transform_report(const System& sys, const SL5& M) {
  System t = sys.transformed(M);
  SystemImplicit im = transform_system(sys.impl, *t.transform);
  json r;
  r["schema"] = 1;
  r["command"] = "transform";
  r["system"] = system_to_json(t);
  r["implicit"] = {{"F", print(im.F)}, {"G", print(im.G)}};
  r["match"] = true;
  return r;
}

void export_corpus(const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(dir) / "lax");
  for (const System& s : corpus()) std::ofstream(fs::path(dir) / (s.name + ".json")) << system_to_json(s).dump(2) << '\n';
  for (const LaxFixture& fx : lax_fixtures()) {
    json j = lax_to_json(fx.pair);
    j["name"] = fx.name;
    j["system"] = fx.system;
    std::ofstream(fs::path(dir) / "lax" / (fx.name + ".json")) << j.dump(2) << '\n';
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact symbolic analysis of first-order two-component systems in three dimensions", "grasslab"};
  app.require_subcommand(1);
  app.fallthrough();
  CliOptions o;
  std::string mode = "points", json_path;
  app.add_option("--mode", mode, "points or symbolic")->check(CLI::IsMember({"points", "symbolic"}));
  app.add_option("--points", o.points, "points per seed")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "base seed");
  app.add_option("--max-order", o.max_order, "highest jet order");
  app.add_option("--json", json_path, "also write the report here");
  app.add_flag("--timing", o.timing, "add wall-clock time to the report");

  std::string file, matrix, filter, dir, first_s, eigen_s;
  bool no_gl2 = false, corpus_gl2 = false;
  auto* analyze = app.add_subcommand("analyze", "classify a system file");
  analyze->add_option("file", file)->required();
  analyze->add_flag("--no-gl2", no_gl2, "skip the GL(2) summary");
  auto* derive = app.add_subcommand("derive-conditions", "solve for third derivatives in terms of second ones");
  derive->add_option("--first", first_s, "8 comma-separated first derivatives f_a,f_b,f_p,f_q,g_a,g_b,g_p,g_q");
  auto* gl2 = app.add_subcommand("gl2", "GL(2) structure report");
  gl2->add_option("file", file)->required();
  auto* lax = app.add_subcommand("lax", "dispersionless Lax pairs");
  lax->require_subcommand(1);
  lax->fallthrough();
  auto* lax_verify = lax->add_subcommand("verify", "check a Lax fixture");
  lax_verify->add_option("file", file)->required();
  auto* chasles = app.add_subcommand("chasles", "diagonal Chasles construction");
  chasles->add_option("--eigenvalues", eigen_s, "5 comma-separated rationals")->required();
  auto* transform = app.add_subcommand("transform", "apply an SL(5) matrix");
  transform->add_option("file", file)->required();
  transform->add_option("--matrix", matrix, "JSON 5x5 matrix")->required();
  auto* corpus_cmd = app.add_subcommand("corpus", "built-in fixtures");
  corpus_cmd->require_subcommand(1);
  corpus_cmd->fallthrough();
  auto* corpus_run = corpus_cmd->add_subcommand("run", "analyze every fixture against its expectations");
  corpus_run->add_option("--filter", filter, "substring of fixture names");
  corpus_run->add_option("--dir", dir, "load fixtures from JSON files instead");
  corpus_run->add_flag("--gl2", corpus_gl2, "include GL(2) summaries");
  auto* corpus_export = corpus_cmd->add_subcommand("export", "write fixtures as JSON");
  corpus_export->add_option("--dir", dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  o.mode = mode == "symbolic" ? Mode::Symbolic : Mode::Points;
  if (o.max_order < 4) {
    err << "error (usage): --max-order must be at least 4 (third-order jets and one more total derivative)\n";
    return 2;
  }

  auto t0 = std::chrono::steady_clock::now();
  json r;
  try {
    if (analyze->parsed()) {
      o.gl2 = !no_gl2;
      r = analyze_report(read_system(file), o);
      if (r["verdicts"]["nondegenerate"]["status"] == "Refuted" && !r["expected"].contains("nondegenerate"))
        err << "error (degenerate system): the characteristic conic is reducible\n";
    } else if (derive->parsed()) {
      std::optional<std::array<Rat, 8>> first;
      if (!first_s.empty()) {
        auto parts = CLI::detail::split(first_s, ',');
        if (parts.size() != 8) throw std::invalid_argument("--first needs 8 values");
        first.emplace();
        for (int k = 0; k < 8; ++k) (*first)[k] = parse_rat(CLI::detail::trim_copy(parts[k]));
      }
      r = derive_conditions_report(o, first);
    } else if (gl2->parsed()) {
      System sys = read_system(file);
      header(r, "gl2", o);
      r["system"] = sys.name;
      r["summary"] = gl2_summary(sys, o);
      bool holds = r["summary"]["curvature_relations_hold"];
      r["match"] = !sys.expected.integrable || *sys.expected.integrable == holds;
    } else if (lax_verify->parsed()) {
      r = lax_report(read_json(file), o);
    } else if (chasles->parsed()) {
      auto parts = CLI::detail::split(eigen_s, ',');
      if (parts.size() != 5) throw std::invalid_argument("--eigenvalues needs 5 values");
      std::array<Rat, 5> lam;
      for (int k = 0; k < 5; ++k) lam[k] = parse_rat(CLI::detail::trim_copy(parts[k]));
      r = chasles_report(lam);
    } else if (transform->parsed()) {
      r = transform_report(read_system(file), sl5_from_json(read_json(matrix)));
    } else if (corpus_export->parsed()) {
      export_corpus(dir);
      r = {{"schema", 1}, {"command", "corpus export"}, {"dir", dir}, {"match", true}};
    } else if (corpus_run->parsed()) {
      o.gl2 = corpus_gl2;
      std::vector<System> systems = dir.empty() ? corpus() : load_corpus_dir(dir);
      header(r, "corpus run", o);
      json entries = json::array(), failed = json::array();
      for (const System& s : systems) {
        if (s.name.find(filter) == std::string::npos) continue;
        json e;
        try {
          e = analyze_report(s, o);
        } catch (const std::exception& ex) {
          e = {{"system", s.name}, {"error", ex.what()}, {"match", false}};
        }
        if (!e["match"].get<bool>()) failed.push_back(s.name);
        e.erase("schema");
        e.erase("command");
        entries.push_back(e);
      }
      r["entries"] = entries;
      r["summary"] = {{"total", entries.size()}, {"passed", entries.size() - failed.size()}, {"failed", failed}};
      r["match"] = failed.empty();
    }
  } catch (const ParseError& e) {
    err << "error (parse): " << e.what() << '\n';
    return 2;
  } catch (const DegenerateSymbol& e) {
    err << "error (degenerate system): " << e.what() << '\n';
    return 2;
  } catch (const DegenerateFrame& e) {
    err << "error (degenerate system): " << e.what() << '\n';
    return 2;
  } catch (const ChartBoundary& e) {
    err << "error (chart): " << e.what() << '\n';
    return 2;
  } catch (const SamplingFailure& e) {
    err << "error (chart): " << e.what() << '\n';
    return 2;
  } catch (const json::exception& e) {
    err << "error (malformed input): " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  if (o.timing)
    r["timing_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  std::string text = r.dump(2);
  out << text << '\n';
  if (!json_path.empty()) std::ofstream(json_path) << text << '\n';
  if (analyze->parsed() && r["verdicts"]["nondegenerate"]["status"] == "Refuted" &&
      !r["expected"].contains("nondegenerate"))
    return 2;
  return r.value("match", false) ? 0 : 1;
}

}  // namespace grasslab
