#define DOCTEST_CONFIG_IMPLEMENT
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "testutil.hpp"
#include "tropgraph/independence.hpp"
#include "tropgraph/io.hpp"

using namespace tropgraph;

namespace {

std::string g_binary;

const std::string& work_dir() {
  static std::string dir = [] {
    char tmpl[] = "/tmp/tropcliXXXXXX";
    char* d = mkdtemp(tmpl);
    REQUIRE(d != nullptr);
    return std::string(d);
  }();
  return dir;
}

std::string write_doc(const std::string& name, const std::string& content) {
  std::string path = work_dir() + "/" + name;
  std::ofstream out(path);
  REQUIRE(out.good());
  out << content;
  return path;
}

std::string write_doc(const std::string& name, const Json& doc) {
  return write_doc(name, dump_json(doc));
}

struct Run {
  int code = -1;
  std::string out;
};

Run run_cli(const std::string& args) {
  std::string cmd = g_binary + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  Run r;
  std::size_t k;
  while ((k = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, k);
  int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

Json parse_out(const Run& r) { return Json::parse(r.out); }

// The unit-edge family {0, x}.
Semimodule unit_family() {
  Semimodule m;
  m.graph = make_graph({"u", "v"}, {{"e", {0, 1}, rat(1)}}, "u");
  TropFunction zero, x;
  zero.name = "zero";
  zero.edges[0] = constant_profile(rat(1), rat(0));
  x.name = "x";
  x.edges[0] = affine_profile(rat(1), 1, rat(0));
  m.gens = {zero, x};
  validate_semimodule(m);
  return m;
}

CSPInstance fixture_csp() {
  CSPInstance csp;
  csp.n = 3;
  csp.avg = {{1, 2, 3}};
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      if (i != j) csp.a[{i, j}] = -1;
  return csp;
}

}  // namespace

// ---- wire-format round trips (library level) ---------------------------------

TEST_CASE("graph documents round-trip") {
  testutil::Rng rng(7);
  for (int t = 0; t < 25; ++t) {
    MetricGraph g = testutil::random_graph(rng, 5, 7);
    Json doc = graph_to_json(g);
    MetricGraph back = graph_from_json(doc);
    CHECK(graph_to_json(back) == doc);
  }
  CHECK_THROWS_AS(graph_from_json(Json{{"vertices", Json::array()}}),
                  std::invalid_argument);
  Json bad = graph_to_json(unit_family().graph);
  bad["edges"][0]["ends"][1] = "nope";
  CHECK_THROWS_AS(graph_from_json(bad), std::invalid_argument);
  bad = graph_to_json(unit_family().graph);
  bad["edges"][0]["length"] = "1/0";
  CHECK_THROWS_AS(graph_from_json(bad), std::invalid_argument);
}

TEST_CASE("function and divisor documents round-trip") {
  testutil::Rng rng(11);
  for (int t = 0; t < 25; ++t) {
    MetricGraph g = testutil::random_graph(rng, 4, 5);
    TropFunction f = testutil::random_total_function(rng, g, "f");
    Json doc = function_to_json(g, f);
    TropFunction back = function_from_json(g, doc);
    CHECK(function_to_json(g, back) == doc);

    Divisor d = divisor_of(g, f);
    Json dd = divisor_to_json(g, d);
    Divisor dback = divisor_from_json(g, dd);
    CHECK(divisor_to_json(g, dback) == dd);
    CHECK(dback.degree() == 0);
  }
  MetricGraph g = unit_family().graph;
  Json bad = {{"name", "f"},
              {"edges", {{"zzz", {{"breaks", {"0", "1"}}, {"slopes", {0}},
                                  {"start_value", "0"}}}}}};
  CHECK_THROWS_AS(function_from_json(g, bad), std::invalid_argument);
  CHECK_THROWS_AS(divisor_from_json(g, Json{{"nope", 1}}), std::invalid_argument);
}

TEST_CASE("semimodule and game documents round-trip") {
  testutil::Rng rng(13);
  for (int t = 0; t < 15; ++t) {
    Semimodule m = testutil::random_semimodule(rng, 4, 5, 4);
    Json doc = semimodule_to_json(m);
    Semimodule back = semimodule_from_json(doc);
    CHECK(semimodule_to_json(back) == doc);
  }
  for (int t = 0; t < 15; ++t) {
    StochGame g = testutil::random_game(rng, 4, 3, 3);
    Json doc = game_to_json(g);
    StochGame back = game_from_json(doc);
    CHECK(game_to_json(back) == doc);
    DecideResult r = decide_sign(g, {.max_iters = 200});
    if (r.cert) {
      Json cd = certificate_to_json(*r.cert);
      GameCertificate cback = certificate_from_json(cd);
      CHECK(certificate_to_json(cback) == cd);
      CHECK(verify_certificate(back, cback));
    }
  }
  Json bad = game_to_json(testutil::random_game(rng, 3, 2, 2));
  bad["states"].push_back("extra");  // no action table for it
  CHECK_THROWS_AS(game_from_json(bad), std::invalid_argument);
  CHECK_THROWS_AS(certificate_from_json(Json{{"kind", "odd"}, {"c", {"0"}}}),
                  std::invalid_argument);
}

TEST_CASE("constraint system documents round-trip") {
  testutil::Rng rng(17);
  for (int t = 0; t < 15; ++t) {
    auto [csp, c] = testutil::random_feasible_csp(rng, 3 + static_cast<int>(rng.i(0, 2)), 2, 2);
    Json doc = csp_to_json(csp);
    CSPInstance back = csp_from_json(doc);
    CHECK(csp_to_json(back) == doc);
  }
  Json doc = csp_to_json(fixture_csp());
  doc["a"].erase("2,3");
  CHECK_THROWS_AS(csp_from_json(doc), std::invalid_argument);
  doc = csp_to_json(fixture_csp());
  doc["a"]["1;2"] = 0;
  CHECK_THROWS_AS(csp_from_json(doc), std::invalid_argument);
}

// ---- the binary ----------------------------------------------------------------

TEST_CASE("independence verdicts, certificates, and exit codes") {
  Semimodule m = unit_family();
  std::string graph = write_doc("graph.json", graph_to_json(m.graph));
  std::string f0 = write_doc("f0.json", function_to_json(m.graph, m.gens[0]));
  std::string fx = write_doc("fx.json", function_to_json(m.graph, m.gens[1]));

  Run r = run_cli("indep " + graph + " " + f0 + " " + fx +
                  " --emit-cert --emit-points");
  REQUIRE(r.code == 0);
  Json doc = parse_out(r);
  CHECK(doc["verdict"] == "independent");
  CHECK(doc["bounds"] == Json::array({"1/2", "1/2"}));
  CHECK(doc["certificate"]["kind"] == "eigenpair");
  CHECK(doc["certificate"]["rho"] == "1/2");
  CHECK(doc["points"].size() == 2);
  CHECK(doc["permutation"]["unique"] == true);

  // The emitted certificate re-verifies through `game verify`.
  GameBuild gb = build_game(m);
  std::string game = write_doc("game.json", game_to_json(gb.game));
  std::string cert = write_doc("cert.json", doc["certificate"]);
  Run rv = run_cli("game verify " + game + " --cert " + cert);
  CHECK(rv.code == 0);
  CHECK(parse_out(rv)["valid"] == true);

  // Dependent family: the emitted coefficients re-verify exactly.
  testutil::Rng rng(5);
  Semimodule dep = testutil::random_dependent_family(rng, 3);
  std::string bundle = write_doc("dep.json", semimodule_to_json(dep));
  Run rd = run_cli("indep " + bundle);
  REQUIRE(rd.code == 0);
  Json dd = parse_out(rd);
  CHECK(dd["verdict"] == "dependent");
  std::vector<Rat> coeffs;
  for (const Json& c : dd["coefficients"])
    coeffs.push_back(parse_rat(c.get<std::string>()));
  CHECK(min_attained_twice(dep.graph, dep.gens, coeffs).ok);

  CHECK(run_cli("indep " + graph + " " + f0).code == 1);  // one function
  CHECK(run_cli("indep " + work_dir() + "/missing.json").code == 1);
  CHECK(run_cli("indep " + bundle + " " + f0).code == 1);  // bundle + extras
}

TEST_CASE("rank command and bundled graph references") {
  Semimodule m = unit_family();
  Json doc = semimodule_to_json(m);
  std::string mod = write_doc("mod.json", doc);
  Run r = run_cli("rank " + mod);
  REQUIRE(r.code == 0);
  Json out = parse_out(r);
  CHECK(out["exact"] == true);
  CHECK(out["lo"] == 2);
  CHECK(out["evidence"].size() > 0);

  // Graph by relative file reference.
  write_doc("refgraph.json", graph_to_json(m.graph));
  doc["graph"] = "refgraph.json";
  std::string modref = write_doc("modref.json", doc);
  CHECK(run_cli("rank " + modref).code == 0);
  CHECK(run_cli("indep " + modref).code == 0);

  Semimodule single = m;
  single.gens.pop_back();
  std::string one = write_doc("one.json", semimodule_to_json(single));
  Run r1 = run_cli("rank " + one);
  CHECK(r1.code == 0);
  CHECK(parse_out(r1)["lo"] == 1);
}

TEST_CASE("game solve, oracle, and failure modes") {
  // Self-loop of payoff 3: mean payoff 3 everywhere.
  StochGame loop;
  loop.states = {"s"};
  loop.acts = {{{"a", {{"stay", rat(3), {{0, rat(1)}}}}}}};
  validate_game(loop);
  std::string game = write_doc("loop.json", game_to_json(loop));
  Run r = run_cli("game solve " + game);
  REQUIRE(r.code == 0);
  CHECK(parse_out(r)["verdict"] == "positive");
  Run ro = run_cli("game oracle " + game);
  REQUIRE(ro.code == 0);
  CHECK(parse_out(ro)["chi"] == Json::array({"3"}));
  CHECK(parse_out(ro)["sign"] == "positive");

  // Mixed signs stay unresolved: exit 2; the oracle reports "mixed".
  StochGame mixed;
  mixed.states = {"p", "n"};
  mixed.acts = {{{"a", {{"stay", rat(1), {{0, rat(1)}}}}}},
                {{"a", {{"stay", rat(-1), {{1, rat(1)}}}}}}};
  validate_game(mixed);
  std::string mg = write_doc("mixed.json", game_to_json(mixed));
  CHECK(run_cli("game solve " + mg).code == 2);
  Run rm = run_cli("game oracle " + mg);
  CHECK(parse_out(rm)["sign"] == "mixed");

  // A wrong certificate is rejected with exit 1.
  std::string bad = write_doc(
      "badcert.json", Json{{"kind", "eigenpair"}, {"c", {"0"}}, {"rho", "2"}});
  Run rb = run_cli("game verify " + game + " --cert " + bad);
  CHECK(rb.code == 1);
  CHECK(parse_out(rb)["valid"] == false);

  // Strategy space beyond the oracle cap: input error with a message.
  StochGame big;
  for (int i = 0; i < 10; ++i) big.states.push_back("s" + std::to_string(i));
  big.acts.resize(10);
  for (int i = 0; i < 10; ++i) {
    StochGame::MaxAct ma;
    ma.name = "a";
    for (int k = 0; k < 4; ++k)
      ma.mins.push_back({"r" + std::to_string(k), rat(0), {{(i + 1) % 10, rat(1)}}});
    big.acts[i].push_back(ma);
  }
  validate_game(big);
  std::string bigf = write_doc("big.json", game_to_json(big));
  CHECK(run_cli("game oracle " + bigf).code == 1);
}

TEST_CASE("gadget commands") {
  std::string csp = write_doc("csp.json", csp_to_json(fixture_csp()));
  Run r = run_cli("gadget csp " + csp);
  REQUIRE(r.code == 0);
  Json doc = parse_out(r);
  CHECK(doc["scale"] == 2);
  CHECK(doc["graph"]["vertices"].size() == 14);
  CHECK(doc["functions"].size() == 11);
  CHECK(doc["provenance"]["edges"].contains("E_1_2_3"));

  Run rc = run_cli("gadget csp " + csp + " --complete");
  REQUIRE(rc.code == 0);
  Json cdoc = parse_out(rc);
  CHECK(cdoc["added_edges"] == 90);
  // The emitted semimodule is a valid total family.
  Semimodule m = semimodule_from_json(cdoc["semimodule"]);
  CHECK(m.gens.size() == 11);

  CSPInstance bad = fixture_csp();
  bad.a[{1, 2}] = 5;  // a_12 + a_21 > 0
  std::string badf = write_doc("badcsp.json", csp_to_json(bad));
  CHECK(run_cli("gadget csp " + badf).code == 1);

  std::string mat = write_doc("mat.json", std::string("[[0,1],[1,0]]\n"));
  Run rmat = run_cli("gadget matrix " + mat);
  REQUIRE(rmat.code == 0);
  Json mdoc = parse_out(rmat);
  CHECK(mdoc["eval_matrix"]["rows"] ==
        Json::parse(R"([["0","1"],["1","0"],["0","0"]])"));
  CHECK(mdoc["eval_matrix"]["points"] == Json::parse(R"(["v1","v2","e_1_2@1"])"));

  std::string badmat = write_doc("badmat.json", std::string("[[0,2]]\n"));
  CHECK(run_cli("gadget matrix " + badmat).code == 1);
}

TEST_CASE("eval and divisor commands") {
  Semimodule m = unit_family();
  std::string graph = write_doc("graph.json", graph_to_json(m.graph));
  std::string fx = write_doc("fx.json", function_to_json(m.graph, m.gens[1]));

  Run r = run_cli("eval " + graph + " " + fx + " e@1/2");
  REQUIRE(r.code == 0);
  CHECK(parse_out(r)["value"] == "1/2");
  CHECK(parse_out(run_cli("eval " + graph + " " + fx + " v"))["value"] == "1");
  CHECK(run_cli("eval " + graph + " " + fx + " nowhere").code == 1);

  // A partial function evaluates to infinity off its support.
  TropFunction part;
  part.name = "part";
  part.isolated[0] = rat(7);
  MetricGraph g2 = make_graph({"u", "v"}, {}, "u");
  std::string graph2 = write_doc("graph2.json", graph_to_json(g2));
  std::string pf = write_doc("part.json", function_to_json(g2, part));
  CHECK(parse_out(run_cli("eval " + graph2 + " " + pf + " v"))["value"] == "inf");

  Run rd = run_cli("divisor " + graph + " " + fx);
  REQUIRE(rd.code == 0);
  Json dd = parse_out(rd);
  CHECK(dd["divisor"] == Json{{"u", -1}, {"v", 1}});
  CHECK(dd["degree"] == 0);
  CHECK(dd["effective"] == false);

  std::string du = write_doc("du.json", Json{{"u", 1}});
  Run rm = run_cli("divisor " + graph + " " + fx + " --membership " + du);
  CHECK(parse_out(rm)["membership"] == true);

  std::string f0 = write_doc("f0.json", function_to_json(m.graph, m.gens[0]));
  Json cd = parse_out(run_cli("divisor " + graph + " " + f0));
  CHECK(cd["divisor"] == Json::object());
  CHECK(cd["effective"] == true);

  // Divisors demand total functions.
  TropFunction half;
  half.name = "half";
  half.isolated[0] = rat(0);
  std::string hf = write_doc("half.json", function_to_json(m.graph, half));
  CHECK(run_cli("divisor " + graph + " " + hf).code == 1);
}

TEST_CASE("deterministic output and iteration budget plumbing") {
  Semimodule m = unit_family();
  std::string mod = write_doc("mod.json", semimodule_to_json(m));
  Run a = run_cli("indep " + mod + " --emit-cert --emit-points");
  Run b = run_cli("indep " + mod + " --emit-cert --emit-points");
  CHECK(a.out == b.out);

  std::string csp = write_doc("csp.json", csp_to_json(fixture_csp()));
  Run ca = run_cli("gadget csp " + csp + " --complete");
  Run cb = run_cli("gadget csp " + csp + " --complete");
  CHECK(ca.out == cb.out);

  GameBuild gb = build_game(m);
  std::string game = write_doc("game.json", game_to_json(gb.game));
  std::string starved = "TROPGRAPH_MAX_ITERS=1 " + g_binary + " game solve " + game;
  CHECK(run_cli("game solve " + game).code == 0);
  {
    FILE* p = popen((starved + " >/dev/null 2>&1; echo $?").c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[16] = {0};
    REQUIRE(fgets(buf, sizeof buf, p) != nullptr);
    pclose(p);
    CHECK(std::stoi(buf) == 2);  // honest unresolved under a starved budget
  }
  {
    std::string override_cmd = "TROPGRAPH_MAX_ITERS=1 " + g_binary +
                               " game solve " + game +
                               " --max-iters 100 >/dev/null 2>&1; echo $?";
    FILE* p = popen(override_cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[16] = {0};
    REQUIRE(fgets(buf, sizeof buf, p) != nullptr);
    pclose(p);
    CHECK(std::stoi(buf) == 0);  // the flag outranks the environment
  }

  std::string svg = work_dir() + "/fam.svg";
  CHECK(run_cli("indep " + mod + " --plot " + svg).code == 0);
  std::ifstream in(svg);
  std::string first;
  std::getline(in, first);
  CHECK(first.substr(0, 4) == "<svg");
}

int main(int argc, char** argv) {
  doctest::Context ctx;
  std::vector<const char*> pass;
  pass.push_back(argv[0]);
  for (int i = 1; i < argc; ++i) {
    if (g_binary.empty() && argv[i][0] != '-') {
      g_binary = argv[i];
      continue;
    }
    pass.push_back(argv[i]);
  }
  ctx.applyCommandLine(static_cast<int>(pass.size()), pass.data());
  if (g_binary.empty()) {
    std::fprintf(stderr, "usage: test_cli <path to tropgraph binary> [doctest args]\n");
    return 1;
  }
  return ctx.run();
}
