#include "tropgraph/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tropgraph {

namespace {

[[noreturn]] void fail(const std::string& ctx, const std::string& what) {
  throw std::invalid_argument(ctx + ": " + what);
}

const Json& need(const Json& j, const char* key, const std::string& ctx) {
  if (!j.is_object()) fail(ctx, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(ctx, std::string("missing key '") + key + "'");
  return *it;
}

std::string need_string(const Json& j, const std::string& ctx) {
  if (!j.is_string()) fail(ctx, "expected a string");
  return j.get<std::string>();
}

long need_int(const Json& j, const std::string& ctx) {
  if (!j.is_number_integer()) fail(ctx, "expected an integer");
  return j.get<long>();
}

const Json& need_array(const Json& j, const std::string& ctx) {
  if (!j.is_array()) fail(ctx, "expected an array");
  return j;
}

// Object-valued key that may legitimately be absent (treated as empty).
Json opt_object(const Json& j, const char* key, const std::string& ctx) {
  auto it = j.find(key);
  if (it == j.end()) return Json::object();
  if (!it->is_object()) fail(ctx + "." + key, "expected an object");
  return *it;
}

std::string tri_name(const char* prefix, const CSPInstance::Triple& t) {
  return std::string(prefix) + std::to_string(t[0]) + "_" + std::to_string(t[1]) +
         "_" + std::to_string(t[2]);
}

std::string pair_name(const char* prefix, const std::pair<int, int>& p) {
  return std::string(prefix) + std::to_string(p.first) + "_" +
         std::to_string(p.second);
}

// Legend explaining every id a compiled constraint instance emits.
Json gadget_provenance(int n, const std::vector<CSPInstance::Triple>& avg,
                       const std::vector<CSPInstance::Triple>& mins,
                       const std::vector<std::pair<int, int>>& pairs, long M) {
  Json edges = Json::object(), vertices = Json::object(), fns = Json::object();
  for (int i = 1; i <= n; ++i)
    fns["f" + std::to_string(i)] = "family member " + std::to_string(i);
  for (const auto& t : avg) {
    std::string c = "c_" + std::to_string(t[0]) + " >= (c_" + std::to_string(t[1]) +
                    " + c_" + std::to_string(t[2]) + ")/2";
    edges[tri_name("E_", t)] =
        "averaging edge for " + c + ", chart [-" + std::to_string(M) + ", " +
        std::to_string(M) + "]";
    vertices[tri_name("EL_", t)] = "left endpoint of " + tri_name("E_", t);
    vertices[tri_name("ER_", t)] = "right endpoint of " + tri_name("E_", t);
    fns[tri_name("fp_", t)] = "auxiliary ramp of slope -1 on " + tri_name("E_", t);
    fns[tri_name("fm_", t)] = "auxiliary ramp of slope +1 on " + tri_name("E_", t);
  }
  for (const auto& t : mins) {
    std::string c = "c_" + std::to_string(t[0]) + " >= min(c_" +
                    std::to_string(t[1]) + ", c_" + std::to_string(t[2]) + ")";
    vertices[tri_name("v_", t)] = "minimum vertex for " + c;
    vertices[tri_name("vp_", t)] =
        "companion minimum vertex (member " + std::to_string(t[0]) + " absent)";
    fns[tri_name("g_", t)] =
        "auxiliary member on " + tri_name("v_", t) + " and " + tri_name("vp_", t);
  }
  for (const auto& p : pairs) {
    std::string c = "c_" + std::to_string(p.first) + " >= a_" +
                    std::to_string(p.first) + "_" + std::to_string(p.second) +
                    " + c_" + std::to_string(p.second);
    vertices[pair_name("w_", p)] = "offset vertex for " + c;
    vertices[pair_name("wp_", p)] =
        "companion offset vertex (member " + std::to_string(p.first) + " absent)";
    fns[pair_name("h_", p)] =
        "auxiliary member on " + pair_name("w_", p) + " and " + pair_name("wp_", p);
  }
  Json prov;
  prov["edges"] = edges;
  prov["vertices"] = vertices;
  prov["functions"] = fns;
  return prov;
}

}  // namespace

// ---- scalars ----------------------------------------------------------------

Json rat_json(const Rat& q) { return rat_str(q); }

Rat rat_from_json(const Json& j, const std::string& ctx) {
  if (!j.is_string()) fail(ctx, "expected a rational string \"p\" or \"p/q\"");
  try {
    return parse_rat(j.get<std::string>());
  } catch (const std::invalid_argument& e) {
    fail(ctx, e.what());
  }
}

Json trop_json(const Trop& t) {
  return t.finite() ? Json(rat_str(t.value())) : Json("inf");
}

Trop trop_from_json(const Json& j, const std::string& ctx) {
  if (j.is_string() && j.get<std::string>() == "inf") return Trop::infinity();
  return Trop(rat_from_json(j, ctx));
}

// ---- graphs -----------------------------------------------------------------

Json graph_to_json(const MetricGraph& g) {
  Json j;
  j["vertices"] = Json::array();
  for (const std::string& v : g.vertices) j["vertices"].push_back(v);
  j["edges"] = Json::array();
  for (const MetricGraph::Edge& e : g.edges) {
    Json je;
    je["id"] = e.name;
    je["ends"] = Json::array({g.vertices[e.ends[0]], g.vertices[e.ends[1]]});
    je["length"] = rat_json(e.length);
    j["edges"].push_back(je);
  }
  j["basepoint"] = g.vertices[g.basepoint];
  return j;
}

MetricGraph graph_from_json(const Json& j) {
  const std::string ctx = "graph";
  std::vector<std::string> names;
  for (const Json& v : need_array(need(j, "vertices", ctx), ctx + ".vertices"))
    names.push_back(need_string(v, ctx + ".vertices[]"));
  std::map<std::string, int> index;
  for (int i = 0; i < static_cast<int>(names.size()); ++i) index[names[i]] = i;

  std::vector<MetricGraph::Edge> edges;
  for (const Json& je : need_array(need(j, "edges", ctx), ctx + ".edges")) {
    const std::string ectx = ctx + ".edges[" + std::to_string(edges.size()) + "]";
    MetricGraph::Edge e;
    e.name = need_string(need(je, "id", ectx), ectx + ".id");
    const Json& ends = need_array(need(je, "ends", ectx), ectx + ".ends");
    if (ends.size() != 2) fail(ectx + ".ends", "expected exactly two vertex ids");
    for (int s = 0; s < 2; ++s) {
      std::string vn = need_string(ends[s], ectx + ".ends[]");
      auto it = index.find(vn);
      if (it == index.end()) fail(ectx + ".ends", "unknown vertex '" + vn + "'");
      e.ends[s] = it->second;
    }
    e.length = rat_from_json(need(je, "length", ectx), ectx + ".length");
    edges.push_back(std::move(e));
  }
  std::string base = need_string(need(j, "basepoint", ctx), ctx + ".basepoint");
  try {
    return make_graph(std::move(names), std::move(edges), base);
  } catch (const std::invalid_argument& e) {
    fail(ctx, e.what());
  }
}

// ---- functions ----------------------------------------------------------------

Json function_to_json(const MetricGraph& g, const TropFunction& f) {
  Json j;
  j["name"] = f.name;
  if (!f.edges.empty()) {
    Json edges = Json::object();
    for (const auto& [e, prof] : f.edges) {
      Json jp;
      jp["breaks"] = Json::array();
      for (const Rat& b : prof.breaks) jp["breaks"].push_back(rat_json(b));
      jp["slopes"] = Json::array();
      for (long s : prof.slopes) jp["slopes"].push_back(s);
      jp["start_value"] = rat_json(prof.start_value);
      edges[g.edges[e].name] = jp;
    }
    j["edges"] = edges;
  }
  if (!f.isolated.empty()) {
    Json iso = Json::object();
    for (const auto& [v, val] : f.isolated) iso[g.vertices[v]] = rat_json(val);
    j["isolated"] = iso;
  }
  return j;
}

TropFunction function_from_json(const MetricGraph& g, const Json& j) {
  const std::string ctx = "function";
  TropFunction f;
  f.name = need_string(need(j, "name", ctx), ctx + ".name");
  const Json edges_obj = opt_object(j, "edges", ctx);
  for (const auto& [ename, jp] : edges_obj.items()) {
    const std::string ectx = ctx + ".edges." + ename;
    auto it = g.edge_index.find(ename);
    if (it == g.edge_index.end()) fail(ectx, "unknown edge");
    EdgeProfile prof;
    for (const Json& b : need_array(need(jp, "breaks", ectx), ectx + ".breaks"))
      prof.breaks.push_back(rat_from_json(b, ectx + ".breaks[]"));
    for (const Json& s : need_array(need(jp, "slopes", ectx), ectx + ".slopes"))
      prof.slopes.push_back(need_int(s, ectx + ".slopes[]"));
    prof.start_value = rat_from_json(need(jp, "start_value", ectx), ectx + ".start_value");
    f.edges[it->second] = std::move(prof);
  }
  const Json iso_obj = opt_object(j, "isolated", ctx);
  for (const auto& [vname, jv] : iso_obj.items()) {
    const std::string vctx = ctx + ".isolated." + vname;
    auto it = g.vertex_index.find(vname);
    if (it == g.vertex_index.end()) fail(vctx, "unknown vertex");
    f.isolated[it->second] = rat_from_json(jv, vctx);
  }
  try {
    validate_function(g, f);
  } catch (const std::invalid_argument& e) {
    fail(ctx + " '" + f.name + "'", e.what());
  }
  return f;
}

// ---- divisors -----------------------------------------------------------------

Json divisor_to_json(const MetricGraph& g, const Divisor& d) {
  Json j = Json::object();
  for (const auto& [p, k] : d.coeff) j[point_str(g, p)] = k;
  return j;
}

Divisor divisor_from_json(const MetricGraph& g, const Json& j) {
  const std::string ctx = "divisor";
  if (!j.is_object()) fail(ctx, "expected an object");
  Divisor d;
  for (const auto& [key, val] : j.items()) {
    PointRef p;
    try {
      p = parse_point(g, key);
    } catch (const std::invalid_argument& e) {
      fail(ctx + "." + key, e.what());
    }
    d.add(p, need_int(val, ctx + "." + key));
  }
  return d;
}

// ---- semimodules and evaluation matrices ---------------------------------------

Json semimodule_to_json(const Semimodule& m) {
  Json j;
  j["graph"] = graph_to_json(m.graph);
  j["generators"] = Json::array();
  for (const TropFunction& f : m.gens)
    j["generators"].push_back(function_to_json(m.graph, f));
  return j;
}

Semimodule semimodule_from_json(const Json& j, const std::string& base_dir) {
  const std::string ctx = "semimodule";
  const Json& jg = need(j, "graph", ctx);
  Semimodule m;
  if (jg.is_string()) {
    std::filesystem::path p(jg.get<std::string>());
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    m.graph = graph_from_json(load_json(p.string()));
  } else {
    m.graph = graph_from_json(jg);
  }
  for (const Json& jf :
       need_array(need(j, "generators", ctx), ctx + ".generators"))
    m.gens.push_back(function_from_json(m.graph, jf));
  try {
    validate_semimodule(m);
  } catch (const std::invalid_argument& e) {
    fail(ctx, e.what());
  }
  return m;
}

Json eval_matrix_to_json(const MetricGraph& g, const EvalMatrix& b) {
  Json j;
  j["points"] = Json::array();
  for (const PointRef& p : b.points) j["points"].push_back(point_str(g, p));
  j["rows"] = Json::array();
  for (const std::vector<Rat>& row : b.rows) {
    Json jr = Json::array();
    for (const Rat& v : row) jr.push_back(rat_json(v));
    j["rows"].push_back(jr);
  }
  return j;
}

// ---- games and certificates -----------------------------------------------------

Json game_to_json(const StochGame& g) {
  Json j;
  j["states"] = Json::array();
  for (const std::string& s : g.states) j["states"].push_back(s);
  Json acts = Json::object();
  for (int i = 0; i < g.num_states(); ++i) {
    Json as = Json::object();
    for (const StochGame::MaxAct& ma : g.acts[i]) {
      Json ms = Json::object();
      for (const StochGame::MinAct& mi : ma.mins) {
        Json jm;
        jm["payoff"] = rat_json(mi.payoff);
        jm["transitions"] = Json::array();
        for (const auto& [to, pr] : mi.trans)
          jm["transitions"].push_back(Json::array({g.states[to], rat_json(pr)}));
        ms[mi.name] = jm;
      }
      as[ma.name] = ms;
    }
    acts[g.states[i]] = as;
  }
  j["max_actions"] = acts;
  return j;
}

StochGame game_from_json(const Json& j) {
  const std::string ctx = "game";
  StochGame g;
  std::map<std::string, int> index;
  for (const Json& s : need_array(need(j, "states", ctx), ctx + ".states")) {
    std::string name = need_string(s, ctx + ".states[]");
    if (index.count(name)) fail(ctx + ".states", "duplicate state '" + name + "'");
    index[name] = static_cast<int>(g.states.size());
    g.states.push_back(name);
  }
  const Json& acts = need(j, "max_actions", ctx);
  if (!acts.is_object()) fail(ctx + ".max_actions", "expected an object");
  for (const auto& [sname, _] : acts.items())
    if (!index.count(sname))
      fail(ctx + ".max_actions", "unknown state '" + sname + "'");
  g.acts.resize(g.states.size());
  for (int i = 0; i < g.num_states(); ++i) {
    const std::string sctx = ctx + ".max_actions." + g.states[i];
    auto it = acts.find(g.states[i]);
    if (it == acts.end()) fail(sctx, "state has no action table");
    if (!it->is_object()) fail(sctx, "expected an object");
    for (const auto& [aname, jms] : it->items()) {
      StochGame::MaxAct ma;
      ma.name = aname;
      if (!jms.is_object()) fail(sctx + "." + aname, "expected an object");
      for (const auto& [mname, jm] : jms.items()) {
        const std::string mctx = sctx + "." + aname + "." + mname;
        StochGame::MinAct mi;
        mi.name = mname;
        mi.payoff = rat_from_json(need(jm, "payoff", mctx), mctx + ".payoff");
        for (const Json& jt :
             need_array(need(jm, "transitions", mctx), mctx + ".transitions")) {
          if (!jt.is_array() || jt.size() != 2)
            fail(mctx + ".transitions", "expected [state, probability] pairs");
          std::string to = need_string(jt[0], mctx + ".transitions[]");
          auto ti = index.find(to);
          if (ti == index.end())
            fail(mctx + ".transitions", "unknown state '" + to + "'");
          mi.trans.emplace_back(ti->second,
                                rat_from_json(jt[1], mctx + ".transitions[]"));
        }
        ma.mins.push_back(std::move(mi));
      }
      g.acts[i].push_back(std::move(ma));
    }
  }
  try {
    validate_game(g);
  } catch (const std::invalid_argument& e) {
    fail(ctx, e.what());
  }
  return g;
}

Json certificate_to_json(const GameCertificate& cert) {
  Json j;
  switch (cert.kind) {
    case GameCertificate::Eigenpair: j["kind"] = "eigenpair"; break;
    case GameCertificate::StrictSuper: j["kind"] = "strict_super"; break;
    case GameCertificate::Sub: j["kind"] = "sub"; break;
  }
  j["c"] = Json::array();
  for (const Rat& q : cert.c) j["c"].push_back(rat_json(q));
  if (cert.kind == GameCertificate::Eigenpair) j["rho"] = rat_json(cert.rho);
  return j;
}

GameCertificate certificate_from_json(const Json& j) {
  const std::string ctx = "certificate";
  GameCertificate cert;
  std::string kind = need_string(need(j, "kind", ctx), ctx + ".kind");
  if (kind == "eigenpair") cert.kind = GameCertificate::Eigenpair;
  else if (kind == "strict_super") cert.kind = GameCertificate::StrictSuper;
  else if (kind == "sub") cert.kind = GameCertificate::Sub;
  else fail(ctx + ".kind", "unknown kind '" + kind + "'");
  for (const Json& q : need_array(need(j, "c", ctx), ctx + ".c"))
    cert.c.push_back(rat_from_json(q, ctx + ".c[]"));
  if (cert.kind == GameCertificate::Eigenpair)
    cert.rho = rat_from_json(need(j, "rho", ctx), ctx + ".rho");
  return cert;
}

// ---- constraint systems -----------------------------------------------------------

Json csp_to_json(const CSPInstance& csp) {
  Json j;
  j["n"] = csp.n;
  j["avg"] = Json::array();
  for (const auto& t : csp.avg) j["avg"].push_back(Json::array({t[0], t[1], t[2]}));
  j["min"] = Json::array();
  for (const auto& t : csp.mins) j["min"].push_back(Json::array({t[0], t[1], t[2]}));
  Json a = Json::object();
  for (const auto& [p, v] : csp.a)
    a[std::to_string(p.first) + "," + std::to_string(p.second)] = v;
  j["a"] = a;
  return j;
}

CSPInstance csp_from_json(const Json& j) {
  const std::string ctx = "csp";
  CSPInstance csp;
  csp.n = static_cast<int>(need_int(need(j, "n", ctx), ctx + ".n"));
  auto read_triples = [&](const char* key, std::vector<CSPInstance::Triple>& out) {
    auto it = j.find(key);
    if (it == j.end()) return;
    for (const Json& jt : need_array(*it, ctx + "." + key)) {
      if (!jt.is_array() || jt.size() != 3)
        fail(ctx + "." + key, "expected [i, j, k] triples");
      CSPInstance::Triple t;
      for (int s = 0; s < 3; ++s)
        t[s] = static_cast<int>(need_int(jt[s], ctx + "." + key + "[]"));
      out.push_back(t);
    }
  };
  read_triples("avg", csp.avg);
  read_triples("min", csp.mins);
  const Json& a = need(j, "a", ctx);
  if (!a.is_object()) fail(ctx + ".a", "expected an object");
  for (const auto& [key, val] : a.items()) {
    const std::string actx = ctx + ".a." + key;
    std::size_t comma = key.find(',');
    if (comma == std::string::npos || comma == 0 || comma + 1 == key.size())
      fail(actx, "key must be 'i,j'");
    int i = 0, jj = 0;
    try {
      std::size_t used = 0;
      i = std::stoi(key.substr(0, comma), &used);
      if (used != comma) throw std::invalid_argument("trailing characters");
      jj = std::stoi(key.substr(comma + 1), &used);
      if (used != key.size() - comma - 1) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      fail(actx, "key must be 'i,j' with integer indices");
    }
    csp.a[{i, jj}] = need_int(val, actx);
  }
  CSPReport rep = validate_csp(csp);
  if (!rep.ok) fail(ctx, rep.errors.front());
  return csp;
}

// ---- gadget documents ---------------------------------------------------------------

Json generalized_to_json(const GeneralizedInstance& gi) {
  Json j;
  j["scale"] = gi.M;
  j["graph"] = graph_to_json(gi.graph);
  j["functions"] = Json::array();
  for (const TropFunction& f : gi.fns)
    j["functions"].push_back(function_to_json(gi.graph, f));
  j["provenance"] = gadget_provenance(gi.n, gi.avg, gi.mins, gi.pairs, gi.M);
  return j;
}

Json completed_to_json(const CompletedInstance& ci) {
  Json j;
  j["scale"] = ci.M;
  j["added_edges"] = ci.added_edges;
  j["semimodule"] = semimodule_to_json(ci.m);
  Json prov = gadget_provenance(ci.n, ci.avg, ci.mins, ci.pairs, ci.M);
  prov["completion"] =
      "edges named add_<u>_<v> (length 2) join formerly disconnected vertex "
      "pairs; original members continue onto them as tents that rise to the "
      "plateau value 4M with slopes +-3M";
  j["provenance"] = prov;
  return j;
}

// ---- documents ----------------------------------------------------------------------

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read file: " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace tropgraph
