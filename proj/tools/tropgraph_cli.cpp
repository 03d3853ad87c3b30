// Command-line front end: exact tropical independence, ranks, game solving,
// gadget compilation, evaluation, and divisors.  Machine-readable JSON goes
// to stdout (byte-identical for identical inputs); one-line summaries go to
// stderr.  Exit codes: 0 = verdict reached, 2 = honestly unresolved within
// budget, 1 = input error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tropgraph/gadgets.hpp"
#include "tropgraph/independence.hpp"
#include "tropgraph/io.hpp"

using namespace tropgraph;

namespace {

long iteration_cap_default() {
  const char* env = std::getenv("TROPGRAPH_MAX_ITERS");
  if (!env) return 10000;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (!end || *end != '\0' || v <= 0)
    throw std::invalid_argument("TROPGRAPH_MAX_ITERS must be a positive integer");
  return v;
}

std::string dirname_of(const std::string& path) {
  std::filesystem::path p(path);
  auto parent = p.parent_path();
  return parent.empty() ? std::string(".") : parent.string();
}

void emit(const Json& doc) { std::cout << dump_json(doc); }

Json bounds_json(const std::pair<Rat, Rat>& b) {
  return Json::array({rat_json(b.first), rat_json(b.second)});
}

// ---- presentational SVG sketches --------------------------------------------

std::string fmt2(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

// One panel per edge: every generator's profile as a colored polyline and the
// family's lower envelope dashed on top.  Purely presentational.
std::string family_svg(const Semimodule& m) {
  static const char* palette[] = {"#1b6ca8", "#c23b22", "#2e8540", "#8e44ad",
                                  "#b7791f", "#0e7c7b", "#99404f", "#5d6d7e"};
  const double width = 800, panel = 150, pad = 34, plot_w = width - 2 * pad;
  TropFunction env;
  bool have_env = false;
  if (!m.gens.empty()) {
    std::vector<Trop> zeros(m.gens.size(), Trop(Rat(0)));
    env = combine(m, zeros);
    have_env = true;
  }
  std::string out;
  double total_h = pad + (panel + pad) * m.graph.num_edges();
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt2(width) +
         "\" height=\"" + fmt2(total_h) + "\" font-family=\"monospace\">\n";
  for (int e = 0; e < m.graph.num_edges(); ++e) {
    double top = pad + (panel + pad) * e;
    double len = m.graph.edges[e].length.get_d();
    double lo = 0, hi = 0;
    bool first = true;
    auto see = [&](const EdgeProfile& p) {
      for (const Rat& b : p.breaks) {
        double y = p.value_at(b).get_d();
        if (first || y < lo) lo = y;
        if (first || y > hi) hi = y;
        first = false;
      }
    };
    for (const TropFunction& f : m.gens)
      if (f.edges.count(e)) see(f.edges.at(e));
    if (first || hi - lo < 1e-9) hi = lo + 1;
    auto px = [&](double x) { return pad + plot_w * (x / len); };
    auto py = [&](double y) {
      return top + panel - panel * ((y - lo) / (hi - lo));
    };
    auto polyline = [&](const EdgeProfile& p, const std::string& stroke,
                        const std::string& extra) {
      std::string pts;
      for (const Rat& b : p.breaks) {
        if (!pts.empty()) pts += " ";
        pts += fmt2(px(b.get_d())) + "," + fmt2(py(p.value_at(b).get_d()));
      }
      return "  <polyline fill=\"none\" stroke=\"" + stroke + "\" " + extra +
             " points=\"" + pts + "\"/>\n";
    };
    out += "  <text x=\"" + fmt2(pad) + "\" y=\"" + fmt2(top - 8) +
           "\" font-size=\"12\">" + m.graph.edges[e].name + "</text>\n";
    out += "  <rect x=\"" + fmt2(pad) + "\" y=\"" + fmt2(top) + "\" width=\"" +
           fmt2(plot_w) + "\" height=\"" + fmt2(panel) +
           "\" fill=\"none\" stroke=\"#999\"/>\n";
    for (std::size_t i = 0; i < m.gens.size(); ++i)
      if (m.gens[i].edges.count(e))
        out += polyline(m.gens[i].edges.at(e), palette[i % 8],
                        "stroke-width=\"1.5\"");
    if (have_env && env.edges.count(e))
      out += polyline(env.edges.at(e), "#000",
                      "stroke-width=\"1\" stroke-dasharray=\"5,3\"");
  }
  out += "</svg>\n";
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write file: " + path);
  out << content;
}

// ---- command handlers --------------------------------------------------------

// Positional files: either one self-contained document with "graph" +
// "generators", or a graph file followed by one function file per member.
Semimodule load_family(const std::vector<std::string>& files) {
  if (files.empty()) throw std::invalid_argument("no input files");
  Json first = load_json(files[0]);
  if (first.is_object() && first.contains("generators")) {
    if (files.size() > 1)
      throw std::invalid_argument(
          "a bundled document takes no extra function files");
    return semimodule_from_json(first, dirname_of(files[0]));
  }
  Semimodule m;
  m.graph = graph_from_json(first);
  for (std::size_t i = 1; i < files.size(); ++i)
    m.gens.push_back(function_from_json(m.graph, load_json(files[i])));
  validate_semimodule(m);
  return m;
}

int cmd_indep(const std::vector<std::string>& files, long max_iters,
              bool emit_cert, bool emit_points, const std::string& plot) {
  Semimodule m = load_family(files);
  if (m.gens.size() < 2)
    throw std::invalid_argument("independence needs at least two functions");
  if (!plot.empty()) write_file(plot, family_svg(m));
  IndependenceVerdict v = check_independence(m, max_iters);
  Json doc;
  doc["command"] = "indep";
  const char* names[] = {"independent", "dependent", "unresolved"};
  doc["verdict"] = names[v.kind];
  doc["bounds"] = bounds_json(v.bounds);
  doc["iterations"] = v.iterations;
  if (emit_cert && v.cert) doc["certificate"] = certificate_to_json(*v.cert);
  if (v.kind == IndependenceVerdict::Independent && emit_points) {
    doc["points"] = Json::array();
    for (const PointRef& p : v.points)
      doc["points"].push_back(point_str(m.graph, p));
    doc["minimizers"] = v.minimizers;
    if (m.gens.size() <= 9) {
      PermutationCheck pc = unique_permutation_check(m, v.points);
      Json jp;
      jp["unique"] = pc.unique;
      jp["min_sum"] = trop_json(pc.min_sum);
      jp["count"] = pc.count;
      doc["permutation"] = jp;
    }
  }
  if (v.kind == IndependenceVerdict::Dependent) {
    doc["coefficients"] = Json::array();
    for (const Rat& c : v.coefficients) doc["coefficients"].push_back(rat_json(c));
  }
  emit(doc);
  std::cerr << "indep: " << names[v.kind] << " (bounds ["
            << rat_str(v.bounds.first) << ", " << rat_str(v.bounds.second)
            << "], " << v.iterations << " iterations)\n";
  return v.kind == IndependenceVerdict::Unresolved ? 2 : 0;
}

int cmd_rank(const std::string& file, long budget) {
  Semimodule m = semimodule_from_json(load_json(file), dirname_of(file));
  TroprankOptions opts;
  opts.dss_budget = budget;
  TroprankResult r = troprank(m, opts);
  Json doc;
  doc["command"] = "rank";
  doc["exact"] = r.exact;
  doc["lo"] = r.lo;
  doc["hi"] = r.hi;
  doc["evidence"] = r.evidence;
  emit(doc);
  if (r.exact)
    std::cerr << "rank: " << r.lo << " (exact)\n";
  else
    std::cerr << "rank: in [" << r.lo << ", " << r.hi << "] (budget exhausted)\n";
  return r.exact ? 0 : 2;
}

int cmd_game_solve(const std::string& file, long max_iters, unsigned long seed) {
  StochGame g = game_from_json(load_json(file));
  DecideOptions opts;
  opts.max_iters = max_iters;
  opts.seed = seed;
  DecideResult r = decide_sign(g, opts);
  Json doc;
  doc["command"] = "game-solve";
  const char* names[] = {"positive", "nonpositive", "unresolved"};
  doc["verdict"] = names[r.verdict];
  doc["bounds"] = bounds_json(r.bounds);
  doc["iterations"] = r.iterations;
  if (r.cert) doc["certificate"] = certificate_to_json(*r.cert);
  emit(doc);
  std::cerr << "game solve: " << names[r.verdict] << "\n";
  return r.verdict == DecideResult::Unresolved ? 2 : 0;
}

int cmd_game_verify(const std::string& file, const std::string& cert_file) {
  StochGame g = game_from_json(load_json(file));
  GameCertificate cert = certificate_from_json(load_json(cert_file));
  bool valid = verify_certificate(g, cert);
  Json doc;
  doc["command"] = "game-verify";
  doc["valid"] = valid;
  emit(doc);
  std::cerr << "game verify: " << (valid ? "accepted" : "rejected") << "\n";
  return valid ? 0 : 1;
}

int cmd_game_oracle(const std::string& file) {
  StochGame g = game_from_json(load_json(file));
  Vec chi = brute_force_mean_payoff(g);
  bool pos = true, nonpos = true;
  for (const Rat& x : chi) {
    if (x <= 0) pos = false;
    if (x > 0) nonpos = false;
  }
  Json doc;
  doc["command"] = "game-oracle";
  doc["chi"] = Json::array();
  for (const Rat& x : chi) doc["chi"].push_back(rat_json(x));
  doc["sign"] = pos ? "positive" : (nonpos ? "nonpositive" : "mixed");
  emit(doc);
  std::cerr << "game oracle: " << doc["sign"].get<std::string>() << "\n";
  return 0;
}

int cmd_gadget_csp(const std::string& file, bool complete) {
  CSPInstance csp = csp_from_json(load_json(file));
  GeneralizedInstance gi = csp_to_generalized(csp);
  Json body = complete ? completed_to_json(complete_instance(gi))
                       : generalized_to_json(gi);
  Json doc;
  doc["command"] = "gadget-csp";
  for (const auto& [k, v] : body.items()) doc[k] = v;
  emit(doc);
  std::cerr << "gadget csp: compiled (scale " << gi.M << ")\n";
  return 0;
}

int cmd_gadget_matrix(const std::string& file) {
  Json j = load_json(file);
  if (!j.is_array()) throw std::invalid_argument("matrix: expected a JSON array of rows");
  std::vector<std::vector<int>> a;
  for (const Json& row : j) {
    if (!row.is_array()) throw std::invalid_argument("matrix: rows must be arrays");
    std::vector<int> r;
    for (const Json& x : row) {
      if (!x.is_number_integer())
        throw std::invalid_argument("matrix: entries must be integers");
      r.push_back(x.get<int>());
    }
    a.push_back(std::move(r));
  }
  MatrixGadget gadget = matrix_gadget(a);
  Json doc;
  doc["command"] = "gadget-matrix";
  doc["semimodule"] = semimodule_to_json(gadget.m);
  doc["eval_matrix"] = eval_matrix_to_json(gadget.m.graph, gadget.b);
  emit(doc);
  std::cerr << "gadget matrix: compiled (" << gadget.b.rows.size() << " points)\n";
  return 0;
}

int cmd_eval(const std::string& graph_file, const std::string& fn_file,
             const std::string& point) {
  MetricGraph g = graph_from_json(load_json(graph_file));
  TropFunction f = function_from_json(g, load_json(fn_file));
  PointRef p = parse_point(g, point);
  Trop val = evaluate(g, f, p);
  Json doc;
  doc["command"] = "eval";
  doc["point"] = point_str(g, p);
  doc["value"] = trop_json(val);
  emit(doc);
  std::cerr << "eval: " << doc["value"].get<std::string>() << "\n";
  return 0;
}

int cmd_divisor(const std::string& graph_file, const std::string& fn_file,
                const std::string& membership_file) {
  MetricGraph g = graph_from_json(load_json(graph_file));
  TropFunction f = function_from_json(g, load_json(fn_file));
  Divisor d = divisor_of(g, f);
  Json doc;
  doc["command"] = "divisor";
  doc["function"] = f.name;
  doc["divisor"] = divisor_to_json(g, d);
  doc["degree"] = d.degree();
  doc["effective"] = d.effective();
  if (!membership_file.empty()) {
    Divisor dd = divisor_from_json(g, load_json(membership_file));
    doc["membership"] = in_riemann_roch(g, f, dd);
  }
  emit(doc);
  std::cerr << "divisor: degree " << d.degree() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  CLI::App app{
      "Exact tropical linear independence on metric graphs: verdicts with "
      "game certificates, tropical ranks, hardness gadgets, and divisors."};
  app.require_subcommand(1);

  std::vector<std::string> files;
  std::string file, cert_file, point, membership_file, plot;
  long max_iters = -1;  // resolved after parsing (flag > env > default)
  long budget = 2000000;
  unsigned long seed = 0;
  bool emit_cert = false, emit_points = false, complete = false;

  CLI::App* indep = app.add_subcommand(
      "indep", "Decide tropical independence of a family of functions");
  indep->add_option("files", files,
                    "bundled document, or graph file followed by function files")
      ->required()
      ->expected(-1);
  indep->add_option("--max-iters", max_iters, "iteration budget");
  indep->add_flag("--emit-cert", emit_cert, "include the game certificate");
  indep->add_flag("--emit-points", emit_points,
                  "include witness points and the permutation check");
  indep->add_option("--plot", plot, "write an SVG sketch of the family");

  CLI::App* rank = app.add_subcommand("rank", "Tropical rank of a semimodule");
  rank->add_option("file", file, "semimodule document")->required();
  rank->add_option("--budget", budget, "submatrix checks allowed");

  CLI::App* game = app.add_subcommand("game", "Mean-payoff game operations");
  game->require_subcommand(1);
  CLI::App* solve = game->add_subcommand("solve", "decide the escape-rate sign");
  solve->add_option("file", file, "game document")->required();
  solve->add_option("--max-iters", max_iters, "iteration budget");
  solve->add_option("--seed", seed, "seed for randomized probes");
  CLI::App* verify = game->add_subcommand("verify", "check a certificate");
  verify->add_option("file", file, "game document")->required();
  verify->add_option("--cert", cert_file, "certificate document")->required();
  CLI::App* oracle =
      game->add_subcommand("oracle", "exact mean payoffs by strategy enumeration");
  oracle->add_option("file", file, "game document")->required();

  CLI::App* gadget = app.add_subcommand("gadget", "Hardness gadget compilers");
  gadget->require_subcommand(1);
  CLI::App* gcsp = gadget->add_subcommand(
      "csp", "compile a constraint system to a dependence instance");
  gcsp->add_option("file", file, "constraint system document")->required();
  gcsp->add_flag("--complete", complete,
                 "join the components and extend the members");
  CLI::App* gmatrix = gadget->add_subcommand(
      "matrix", "compile a 0/1 matrix to a two-slope semimodule");
  gmatrix->add_option("file", file, "JSON array of 0/1 rows")->required();

  CLI::App* eval = app.add_subcommand("eval", "Evaluate a function at a point");
  eval->add_option("graph", file, "graph document")->required();
  std::string fn_file;
  eval->add_option("function", fn_file, "function document")->required();
  eval->add_option("point", point, "vertex name or edge@offset")->required();

  CLI::App* divisor = app.add_subcommand("divisor", "Divisor of a total function");
  divisor->add_option("graph", file, "graph document")->required();
  divisor->add_option("function", fn_file, "function document")->required();
  divisor->add_option("--membership", membership_file,
                      "divisor document D for the R(D) membership check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (max_iters < 0) max_iters = iteration_cap_default();
    if (app.got_subcommand(indep))
      return cmd_indep(files, max_iters, emit_cert, emit_points, plot);
    if (app.got_subcommand(rank)) return cmd_rank(file, budget);
    if (app.got_subcommand(game)) {
      if (game->got_subcommand(solve)) return cmd_game_solve(file, max_iters, seed);
      if (game->got_subcommand(verify)) return cmd_game_verify(file, cert_file);
      return cmd_game_oracle(file);
    }
    if (app.got_subcommand(gadget)) {
      if (gadget->got_subcommand(gcsp)) return cmd_gadget_csp(file, complete);
      return cmd_gadget_matrix(file);
    }
    if (app.got_subcommand(eval)) return cmd_eval(file, fn_file, point);
    if (app.got_subcommand(divisor))
      return cmd_divisor(file, fn_file, membership_file);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
