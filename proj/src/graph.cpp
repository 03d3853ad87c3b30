#include "tropgraph/graph.hpp"

#include <algorithm>

namespace tropgraph {

void MetricGraph::reindex() {
  vertex_index.clear();
  edge_index.clear();
  for (int v = 0; v < num_vertices(); ++v) vertex_index[vertices[v]] = v;
  for (int e = 0; e < num_edges(); ++e) edge_index[edges[e].name] = e;
}

static bool name_ok(const std::string& s) {
  return !s.empty() && s.find('@') == std::string::npos;
}

MetricGraph make_graph(std::vector<std::string> vertex_names,
                       std::vector<MetricGraph::Edge> edges,
                       const std::string& basepoint_name) {
  MetricGraph g;
  g.vertices = std::move(vertex_names);
  g.edges = std::move(edges);
  if (g.vertices.empty()) throw std::invalid_argument("graph has no vertices");
  for (const std::string& n : g.vertices)
    if (!name_ok(n)) throw std::invalid_argument("bad vertex name '" + n + "'");
  for (const MetricGraph::Edge& e : g.edges) {
    if (!name_ok(e.name)) throw std::invalid_argument("bad edge name '" + e.name + "'");
    for (int s = 0; s < 2; ++s)
      if (e.ends[s] < 0 || e.ends[s] >= g.num_vertices())
        throw std::invalid_argument("edge '" + e.name + "' has a dangling endpoint");
    if (!(e.length > 0))
      throw std::invalid_argument("edge '" + e.name + "' has non-positive length");
  }
  g.reindex();
  if (static_cast<int>(g.vertex_index.size()) != g.num_vertices())
    throw std::invalid_argument("duplicate vertex name");
  if (static_cast<int>(g.edge_index.size()) != g.num_edges())
    throw std::invalid_argument("duplicate edge name");
  auto it = g.vertex_index.find(basepoint_name);
  if (it == g.vertex_index.end())
    throw std::invalid_argument("basepoint '" + basepoint_name + "' is not a vertex");
  g.basepoint = it->second;
  return g;
}

GraphReport validate_graph(const MetricGraph& g) {
  GraphReport r;
  auto err = [&r](const std::string& m) {
    r.ok = false;
    r.errors.push_back(m);
  };
  if (g.vertices.empty()) err("graph has no vertices");
  for (const std::string& n : g.vertices)
    if (!name_ok(n)) err("bad vertex name '" + n + "'");
  for (const MetricGraph::Edge& e : g.edges) {
    if (!name_ok(e.name)) err("bad edge name '" + e.name + "'");
    for (int s = 0; s < 2; ++s)
      if (e.ends[s] < 0 || e.ends[s] >= g.num_vertices())
        err("edge '" + e.name + "' has a dangling endpoint");
    if (!(e.length > 0)) err("edge '" + e.name + "' has non-positive length");
  }
  if (g.basepoint < 0 || g.basepoint >= g.num_vertices()) err("basepoint out of range");

  // Connectivity by union-find over the vertex set.
  std::vector<int> parent(g.vertices.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  auto find = [&parent](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const MetricGraph::Edge& e : g.edges) {
    if (e.ends[0] < 0 || e.ends[0] >= g.num_vertices()) continue;
    if (e.ends[1] < 0 || e.ends[1] >= g.num_vertices()) continue;
    parent[find(e.ends[0])] = find(e.ends[1]);
  }
  int components = 0;
  for (std::size_t i = 0; i < parent.size(); ++i)
    if (find(static_cast<int>(i)) == static_cast<int>(i)) ++components;
  r.connected = components <= 1;
  return r;
}

PointRef canonical_point(const MetricGraph& g, int edge, const Rat& offset) {
  if (edge < 0 || edge >= g.num_edges()) throw std::invalid_argument("edge id out of range");
  const MetricGraph::Edge& e = g.edges[edge];
  if (offset < 0 || offset > e.length)
    throw std::invalid_argument("offset outside [0, length] on edge '" + e.name + "'");
  if (offset == 0) return PointRef::at_vertex(e.ends[0]);
  if (offset == e.length) return PointRef::at_vertex(e.ends[1]);
  return PointRef::interior(edge, offset);
}

std::string point_str(const MetricGraph& g, const PointRef& p) {
  if (p.is_vertex()) {
    if (p.vertex < 0 || p.vertex >= g.num_vertices())
      throw std::invalid_argument("vertex id out of range");
    return g.vertices[p.vertex];
  }
  if (p.edge < 0 || p.edge >= g.num_edges()) throw std::invalid_argument("edge id out of range");
  return g.edges[p.edge].name + "@" + rat_str(p.offset);
}

PointRef parse_point(const MetricGraph& g, const std::string& s) {
  std::size_t at = s.find('@');
  if (at == std::string::npos) {
    auto it = g.vertex_index.find(s);
    if (it == g.vertex_index.end())
      throw std::invalid_argument("unknown vertex '" + s + "'");
    return PointRef::at_vertex(it->second);
  }
  std::string ename = s.substr(0, at);
  auto it = g.edge_index.find(ename);
  if (it == g.edge_index.end()) throw std::invalid_argument("unknown edge '" + ename + "'");
  Rat off = parse_rat(s.substr(at + 1));
  return canonical_point(g, it->second, off);
}

std::vector<Direction> incident_directions(const MetricGraph& g, const PointRef& p) {
  std::vector<Direction> out;
  if (p.is_vertex()) {
    if (p.vertex < 0 || p.vertex >= g.num_vertices())
      throw std::invalid_argument("vertex id out of range");
    for (int e = 0; e < g.num_edges(); ++e) {
      if (g.edges[e].ends[0] == p.vertex) out.push_back({p, e, true});
      if (g.edges[e].ends[1] == p.vertex) out.push_back({p, e, false});
    }
  } else {
    if (p.edge < 0 || p.edge >= g.num_edges())
      throw std::invalid_argument("edge id out of range");
    if (!(p.offset > 0) || !(p.offset < g.edges[p.edge].length))
      throw std::invalid_argument("interior point offset out of range");
    out.push_back({p, p.edge, false});
    out.push_back({p, p.edge, true});
  }
  return out;
}

}  // namespace tropgraph
