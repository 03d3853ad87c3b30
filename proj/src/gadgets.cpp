#include "tropgraph/gadgets.hpp"

#include <algorithm>
#include <set>

namespace tropgraph {

namespace {

std::string tri_tag(const CSPInstance::Triple& t) {
  return std::to_string(t[0]) + "_" + std::to_string(t[1]) + "_" + std::to_string(t[2]);
}

std::string pair_tag(const std::pair<int, int>& p) {
  return std::to_string(p.first) + "_" + std::to_string(p.second);
}

void check_triples(const std::vector<CSPInstance::Triple>& ts, int n,
                   const std::string& what, CSPReport& rep) {
  std::set<CSPInstance::Triple> seen;
  for (const auto& t : ts) {
    for (int x : t)
      if (x < 1 || x > n) rep.errors.push_back(what + " " + tri_tag(t) + ": index out of range");
    if (t[0] == t[1] || t[0] == t[2] || t[1] == t[2])
      rep.errors.push_back(what + " " + tri_tag(t) + ": entries not distinct");
    if (t[1] >= t[2]) rep.errors.push_back(what + " " + tri_tag(t) + ": needs j < k");
    if (!seen.insert(t).second) rep.errors.push_back(what + " " + tri_tag(t) + ": duplicate");
  }
}

}  // namespace

CSPReport validate_csp(const CSPInstance& csp) {
  CSPReport rep;
  if (csp.n < 2) rep.errors.push_back("need at least two variables");
  check_triples(csp.avg, csp.n, "avg", rep);
  check_triples(csp.mins, csp.n, "min", rep);
  for (int i = 1; i <= csp.n; ++i)
    for (int j = 1; j <= csp.n; ++j)
      if (i != j && !csp.a.count({i, j}))
        rep.errors.push_back("a missing pair " + pair_tag({i, j}));
  for (const auto& [p, v] : csp.a) {
    if (p.first == p.second || p.first < 1 || p.first > csp.n || p.second < 1 ||
        p.second > csp.n) {
      rep.errors.push_back("a has bad pair " + pair_tag(p));
      continue;
    }
    auto it = csp.a.find({p.second, p.first});
    if (it != csp.a.end() && v + it->second > 0)
      rep.errors.push_back("a_" + pair_tag(p) + " + a_" + pair_tag({p.second, p.first}) +
                           " > 0: trivially unsatisfiable");
  }
  rep.ok = rep.errors.empty();
  return rep;
}

long csp_scale(const CSPInstance& csp) {
  long mn = 0;
  for (const auto& [p, v] : csp.a) mn = std::min(mn, v);
  return -mn + 1;
}

bool feasible_witness_check(const CSPInstance& csp, const std::vector<Rat>& c) {
  if (static_cast<int>(c.size()) != csp.n)
    throw std::invalid_argument("feasible_witness_check: wrong size");
  auto at = [&](int i) { return c[i - 1]; };
  for (const auto& t : csp.avg)
    if (Rat(2 * at(t[0])) < Rat(at(t[1]) + at(t[2]))) return false;
  for (const auto& t : csp.mins)
    if (at(t[0]) < rat_min(at(t[1]), at(t[2]))) return false;
  for (const auto& [p, v] : csp.a)
    if (at(p.first) < Rat(v + at(p.second))) return false;
  return true;
}

GeneralizedInstance csp_to_generalized(const CSPInstance& csp) {
  CSPReport rep = validate_csp(csp);
  if (!rep.ok) throw std::invalid_argument("csp_to_generalized: " + rep.errors.front());

  GeneralizedInstance gi;
  gi.n = csp.n;
  gi.avg = csp.avg;
  gi.mins = csp.mins;
  for (const auto& [p, v] : csp.a) gi.pairs.push_back(p);
  gi.M = csp_scale(csp);
  const Rat len = rat(2 * gi.M);

  std::vector<std::string> vnames;
  std::vector<MetricGraph::Edge> edges;
  for (const auto& t : csp.avg) {
    int l = static_cast<int>(vnames.size());
    vnames.push_back("EL_" + tri_tag(t));
    vnames.push_back("ER_" + tri_tag(t));
    edges.push_back({"E_" + tri_tag(t), {l, l + 1}, len});
  }
  for (const auto& t : csp.mins) {
    vnames.push_back("v_" + tri_tag(t));
    vnames.push_back("vp_" + tri_tag(t));
  }
  for (const auto& p : gi.pairs) {
    vnames.push_back("w_" + pair_tag(p));
    vnames.push_back("wp_" + pair_tag(p));
  }
  gi.graph = make_graph(vnames, edges, vnames.front());
  auto vid = [&](const std::string& s) { return gi.graph.vertex_index.at(s); };

  // On the edge of an average triple (i, j, k), the chart is x = t - M:
  // x itself is the profile (+1 from -M), -x the reverse (-1 from M).
  EdgeProfile plus_x = affine_profile(len, 1, rat(-gi.M));
  EdgeProfile minus_x = affine_profile(len, -1, rat(gi.M));

  for (int i = 1; i <= csp.n; ++i) {
    TropFunction f;
    f.name = "f" + std::to_string(i);
    for (const auto& t : csp.avg) {
      int e = gi.graph.edge_index.at("E_" + tri_tag(t));
      if (t[0] == i) f.edges[e] = constant_profile(len, rat(0));
      else if (t[1] == i) f.edges[e] = minus_x;
      else if (t[2] == i) f.edges[e] = plus_x;
    }
    for (const auto& t : csp.mins) {
      if (t[0] == i || t[1] == i || t[2] == i) f.isolated[vid("v_" + tri_tag(t))] = rat(0);
      if (t[1] == i || t[2] == i) f.isolated[vid("vp_" + tri_tag(t))] = rat(0);
    }
    for (const auto& p : gi.pairs) {
      if (p.first == i) f.isolated[vid("w_" + pair_tag(p))] = rat(0);
      if (p.second == i) {
        Rat aji = rat(csp.a.at(p));
        f.isolated[vid("w_" + pair_tag(p))] = aji;
        f.isolated[vid("wp_" + pair_tag(p))] = aji;
      }
    }
    gi.fns.push_back(std::move(f));
  }
  for (const auto& t : csp.avg) {
    int e = gi.graph.edge_index.at("E_" + tri_tag(t));
    TropFunction fp, fm;
    fp.name = "fp_" + tri_tag(t);
    fp.edges[e] = minus_x;
    fm.name = "fm_" + tri_tag(t);
    fm.edges[e] = plus_x;
    gi.fns.push_back(std::move(fp));
    gi.fns.push_back(std::move(fm));
  }
  for (const auto& t : csp.mins) {
    TropFunction g;
    g.name = "g_" + tri_tag(t);
    g.isolated[vid("v_" + tri_tag(t))] = rat(0);
    g.isolated[vid("vp_" + tri_tag(t))] = rat(0);
    gi.fns.push_back(std::move(g));
  }
  for (const auto& p : gi.pairs) {
    TropFunction h;
    h.name = "h_" + pair_tag(p);
    h.isolated[vid("w_" + pair_tag(p))] = rat(0);
    h.isolated[vid("wp_" + pair_tag(p))] = rat(0);
    gi.fns.push_back(std::move(h));
  }
  for (TropFunction& f : gi.fns) validate_function(gi.graph, f);
  return gi;
}

PropertyCoeffs canonical_coeffs(const CSPInstance& csp, const std::vector<Rat>& c) {
  if (!feasible_witness_check(csp, c))
    throw std::invalid_argument("canonical_coeffs: c does not satisfy the constraints");
  PropertyCoeffs co;
  co.c = c;
  Rat shift = vec_min(co.c);
  for (Rat& x : co.c) x -= shift;
  auto at = [&](int i) { return co.c[i - 1]; };
  for (const auto& t : csp.avg) {
    co.cplus.push_back(at(t[1]));
    co.cminus.push_back(at(t[2]));
  }
  for (const auto& t : csp.mins) co.d.push_back(rat_min(at(t[1]), at(t[2])));
  for (const auto& [p, v] : csp.a) co.dprime.push_back(Rat(v + at(p.second)));

  const Rat M = rat(csp_scale(csp));
  auto in_box = [&](const Rat& x, const Rat& lo) { return x >= lo && x <= M; };
  for (const Rat& x : co.c)
    if (!in_box(x, rat(0))) throw std::logic_error("canonical_coeffs: c outside [0, M]");
  for (const Rat& x : co.cplus)
    if (!in_box(x, rat(0))) throw std::logic_error("canonical_coeffs: c+ outside [0, M]");
  for (const Rat& x : co.cminus)
    if (!in_box(x, rat(0))) throw std::logic_error("canonical_coeffs: c- outside [0, M]");
  for (const Rat& x : co.d)
    if (!in_box(x, rat(0))) throw std::logic_error("canonical_coeffs: d outside [0, M]");
  for (const Rat& x : co.dprime)
    if (!in_box(x, Rat(-M))) throw std::logic_error("canonical_coeffs: d' outside [-M, M]");
  return co;
}

namespace {

std::vector<Rat> concat_coeffs(const PropertyCoeffs& co, std::size_t n, std::size_t ni,
                               std::size_t nj, std::size_t nk) {
  if (co.c.size() != n || co.cplus.size() != ni || co.cminus.size() != ni ||
      co.d.size() != nj || co.dprime.size() != nk)
    throw std::invalid_argument("property_D_check: coefficient length mismatch");
  std::vector<Rat> cs = co.c;
  for (std::size_t t = 0; t < ni; ++t) {
    cs.push_back(co.cplus[t]);
    cs.push_back(co.cminus[t]);
  }
  cs.insert(cs.end(), co.d.begin(), co.d.end());
  cs.insert(cs.end(), co.dprime.begin(), co.dprime.end());
  return cs;
}

}  // namespace

MinTwiceResult property_D_check(const GeneralizedInstance& gi, const PropertyCoeffs& co) {
  std::vector<Rat> cs =
      concat_coeffs(co, gi.n, gi.avg.size(), gi.mins.size(), gi.pairs.size());
  return min_attained_twice(gi.graph, gi.fns, cs);
}

MinTwiceResult property_D_check(const CompletedInstance& ci, const PropertyCoeffs& co) {
  std::vector<Rat> cs =
      concat_coeffs(co, ci.n, ci.avg.size(), ci.mins.size(), ci.pairs.size());
  return min_attained_twice(ci.m.graph, ci.m.gens, cs);
}

CompletedInstance complete_instance(const GeneralizedInstance& gi) {
  CompletedInstance ci;
  ci.M = gi.M;
  ci.n = gi.n;
  ci.avg = gi.avg;
  ci.mins = gi.mins;
  ci.pairs = gi.pairs;

  const long M = gi.M;
  const Rat plateau = rat(4 * M);
  const int nv = gi.graph.num_vertices();
  const int ne = gi.graph.num_edges();

  std::set<std::pair<int, int>> joined;
  std::vector<MetricGraph::Edge> edges = gi.graph.edges;
  for (const auto& e : gi.graph.edges)
    joined.insert(std::minmax(e.ends[0], e.ends[1]));
  for (int u = 0; u < nv; ++u)
    for (int v = u + 1; v < nv; ++v)
      if (!joined.count({u, v})) {
        edges.push_back(
            {"add_" + std::to_string(u) + "_" + std::to_string(v), {u, v}, rat(2)});
        ++ci.added_edges;
      }
  MetricGraph g = make_graph(gi.graph.vertices, std::move(edges),
                             gi.graph.vertices[gi.graph.basepoint]);
  GraphReport grep = validate_graph(g);
  if (!grep.ok || !grep.connected)
    throw std::logic_error("complete_instance: completion is not connected");

  for (const TropFunction& src : gi.fns) {
    // Values at every original vertex: the function's own value on its
    // support, the plateau outside it.
    std::vector<Rat> val(nv);
    for (int v = 0; v < nv; ++v) {
      Trop t = evaluate(gi.graph, src, PointRef::at_vertex(v));
      val[v] = t.finite() ? t.value() : plateau;
      if (t.finite() && (t.value() < rat(-M) || t.value() > plateau))
        throw std::logic_error("complete_instance: value outside [-M, 4M]");
    }
    TropFunction ext;
    ext.name = src.name;
    for (int e = 0; e < ne; ++e) {
      auto it = src.edges.find(e);
      ext.edges[e] =
          it != src.edges.end() ? it->second : constant_profile(g.edges[e].length, plateau);
    }
    // Tents on the added edges: up with slope 3M from ends[0], down into
    // ends[1]; the crossing is interior because endpoint values differ by
    // at most 5M < 6M.
    for (int e = ne; e < g.num_edges(); ++e) {
      Rat a = val[g.edges[e].ends[0]], b = val[g.edges[e].ends[1]];
      EdgeProfile tent;
      tent.start_value = a;
      tent.breaks = {rat(0), Rat((b - a + rat(6 * M)) / rat(6 * M)), rat(2)};
      tent.slopes = {3 * M, -3 * M};
      tent.canonicalize();
      ext.edges[e] = tent;
    }
    ci.m.gens.push_back(std::move(ext));
  }
  ci.m.graph = std::move(g);
  validate_semimodule(ci.m);
  return ci;
}

FeasibilityResult csp_feasibility(const CSPInstance& csp, long max_iters) {
  CSPReport rep = validate_csp(csp);
  if (!rep.ok) throw std::invalid_argument("csp_feasibility: " + rep.errors.front());

  StochGame sg;
  for (int i = 1; i <= csp.n; ++i) sg.states.push_back("c" + std::to_string(i));
  sg.acts.resize(csp.n);
  auto reply = [](std::string name, Rat payoff,
                  std::vector<std::pair<int, Rat>> trans) {
    StochGame::MinAct b;
    b.name = std::move(name);
    b.payoff = std::move(payoff);
    b.trans = std::move(trans);
    return b;
  };
  for (const auto& t : csp.avg) {
    StochGame::MaxAct act;
    act.name = "avg_" + tri_tag(t);
    act.mins.push_back(
        reply("half", rat(0), {{t[1] - 1, rat(1, 2)}, {t[2] - 1, rat(1, 2)}}));
    sg.acts[t[0] - 1].push_back(std::move(act));
  }
  for (const auto& t : csp.mins) {
    StochGame::MaxAct act;
    act.name = "min_" + tri_tag(t);
    act.mins.push_back(reply("lo", rat(0), {{t[1] - 1, rat(1)}}));
    act.mins.push_back(reply("hi", rat(0), {{t[2] - 1, rat(1)}}));
    sg.acts[t[0] - 1].push_back(std::move(act));
  }
  for (const auto& [p, v] : csp.a) {
    StochGame::MaxAct act;
    act.name = "off_" + pair_tag(p);
    act.mins.push_back(reply("go", rat(v), {{p.second - 1, rat(1)}}));
    sg.acts[p.first - 1].push_back(std::move(act));
  }
  validate_game(sg);

  DecideOptions opts;
  opts.max_iters = max_iters;
  DecideResult dr = decide_sign(sg, opts);

  FeasibilityResult fr;
  fr.cert = dr.cert;
  fr.bounds = dr.bounds;
  fr.iterations = dr.iterations;
  switch (dr.verdict) {
    case DecideResult::Positive:
      fr.kind = FeasibilityResult::Infeasible;
      break;
    case DecideResult::NonPositive: {
      fr.kind = FeasibilityResult::Feasible;
      fr.witness = dr.cert->c;
      if (!feasible_witness_check(csp, fr.witness))
        throw std::logic_error("csp_feasibility: sub-certificate fails the constraints");
      break;
    }
    case DecideResult::Unresolved:
      fr.kind = FeasibilityResult::Unresolved;
      break;
  }
  return fr;
}

MatrixGadget matrix_gadget(const std::vector<std::vector<int>>& a) {
  const int m = static_cast<int>(a.size());
  if (m < 2) throw std::invalid_argument("matrix_gadget: need at least two rows");
  const int n = static_cast<int>(a[0].size());
  if (n < 1) throw std::invalid_argument("matrix_gadget: need at least one column");
  for (const auto& row : a) {
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("matrix_gadget: ragged matrix");
    for (int x : row)
      if (x != 0 && x != 1) throw std::invalid_argument("matrix_gadget: entries must be 0/1");
  }

  std::vector<std::string> vnames;
  for (int i = 1; i <= m; ++i) vnames.push_back("v" + std::to_string(i));
  std::vector<MetricGraph::Edge> edges;
  for (int i = 0; i < m; ++i)
    for (int s = i + 1; s < m; ++s)
      edges.push_back({"e_" + std::to_string(i + 1) + "_" + std::to_string(s + 1),
                       {i, s},
                       rat(2)});

  MatrixGadget out;
  out.m.graph = make_graph(vnames, edges, vnames.front());
  for (int j = 0; j < n; ++j) {
    TropFunction f;
    f.name = "f" + std::to_string(j + 1);
    int e = 0;
    for (int i = 0; i < m; ++i)
      for (int s = i + 1; s < m; ++s, ++e) {
        long ai = a[i][j], as = a[s][j], mid = std::min(ai, as);
        EdgeProfile p;
        p.start_value = rat(ai);
        p.breaks = {rat(0), rat(1), rat(2)};
        p.slopes = {mid - ai, as - mid};
        p.canonicalize();
        f.edges[e] = p;
      }
    out.m.gens.push_back(std::move(f));
  }
  validate_semimodule(out.m);

  std::vector<PointRef> pts;
  for (int i = 0; i < m; ++i) pts.push_back(PointRef::at_vertex(i));
  for (int e = 0; e < out.m.graph.num_edges(); ++e)
    pts.push_back(PointRef::interior(e, rat(1)));
  out.b = evaluation_matrix(out.m, pts);
  return out;
}

}  // namespace tropgraph
