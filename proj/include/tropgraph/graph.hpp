#pragma once

// Metric graphs: finite multigraphs (loops and parallel edges allowed) whose
// edges carry positive rational lengths.  Each edge is identified with the
// interval [0, length], oriented from ends[0] to ends[1]; points of the graph
// are vertices or interior positions (edge, offset) with 0 < offset < length.

#include <map>
#include <string>
#include <vector>

#include "tropgraph/rational.hpp"

namespace tropgraph {

struct MetricGraph {
  struct Edge {
    std::string name;
    int ends[2];  // vertex indices; ends[0] == ends[1] for a loop
    Rat length;   // > 0
  };

  std::vector<std::string> vertices;  // index is the vertex id
  std::vector<Edge> edges;            // index is the edge id
  int basepoint = 0;                  // vertex index

  std::map<std::string, int> vertex_index;
  std::map<std::string, int> edge_index;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  // Rebuild the name lookup tables (called by make_graph / the JSON loader).
  void reindex();
};

// Builds a graph and throws std::invalid_argument on structural defects:
// empty vertex set, duplicate or malformed names (names must be nonempty and
// must not contain '@', which the point syntax reserves), dangling endpoints,
// non-positive lengths, bad basepoint.  Connectivity is NOT required here;
// it is reported by validate_graph so callers can decide.
MetricGraph make_graph(std::vector<std::string> vertex_names,
                       std::vector<MetricGraph::Edge> edges,
                       const std::string& basepoint_name);

struct GraphReport {
  bool ok = true;         // structural invariants hold
  bool connected = true;  // single component (vacuous for <= 1 vertex)
  std::vector<std::string> errors;
};

// Full report; never throws on content (only on internal inconsistency).
GraphReport validate_graph(const MetricGraph& g);

// A point of the graph: either a vertex or an interior point of an edge.
struct PointRef {
  int edge = -1;    // -1 when the point is a vertex
  int vertex = -1;  // valid when edge < 0
  Rat offset;       // valid when edge >= 0; 0 < offset < length

  bool is_vertex() const { return edge < 0; }
  static PointRef at_vertex(int v) {
    PointRef p;
    p.vertex = v;
    return p;
  }
  static PointRef interior(int e, const Rat& off) {
    PointRef p;
    p.edge = e;
    p.offset = off;
    return p;
  }

  friend bool operator==(const PointRef& a, const PointRef& b) {
    if (a.is_vertex() != b.is_vertex()) return false;
    if (a.is_vertex()) return a.vertex == b.vertex;
    return a.edge == b.edge && a.offset == b.offset;
  }
  friend bool operator!=(const PointRef& a, const PointRef& b) { return !(a == b); }
  // Vertices first (by index), then interior points by (edge, offset).
  friend bool operator<(const PointRef& a, const PointRef& b) {
    if (a.is_vertex() != b.is_vertex()) return a.is_vertex();
    if (a.is_vertex()) return a.vertex < b.vertex;
    if (a.edge != b.edge) return a.edge < b.edge;
    return a.offset < b.offset;
  }
};

// Normalizes (edge, offset) with 0 <= offset <= length: offsets 0 / length
// collapse to the corresponding endpoint vertex.  Throws if out of range.
PointRef canonical_point(const MetricGraph& g, int edge, const Rat& offset);

// "name" for a vertex, "edge@offset" for an interior point.
std::string point_str(const MetricGraph& g, const PointRef& p);
PointRef parse_point(const MetricGraph& g, const std::string& s);

// An outgoing tangent direction at a point: travel on `edge` toward end1
// (increasing offset) or toward end0.  At a vertex there is one direction per
// incident edge endpoint (a loop contributes two); at an interior point there
// are exactly two.
struct Direction {
  PointRef at;
  int edge;
  bool toward_end1;
};

std::vector<Direction> incident_directions(const MetricGraph& g, const PointRef& p);

}  // namespace tropgraph
