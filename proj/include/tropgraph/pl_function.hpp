#pragma once

// Piecewise-linear functions with integer slopes on a metric graph, allowed to
// be +infinity outside their support.  The support of a function is a union of
// closed edges plus isolated vertices; on its support the function is
// continuous, and at a vertex every incident supported edge reports the same
// value (checked by validate_function).

#include <map>
#include <vector>

#include "tropgraph/graph.hpp"
#include "tropgraph/rational.hpp"

namespace tropgraph {

// Restriction of a function to one edge, in the edge's [0, length] coordinate.
// breaks[0] = 0 < breaks[1] < ... < breaks[k] = length, slopes[i] (an integer)
// applies on [breaks[i], breaks[i+1]], and the value at offset 0 is
// start_value.
struct EdgeProfile {
  std::vector<Rat> breaks;
  std::vector<long> slopes;
  Rat start_value;

  Rat value_at(const Rat& t) const;
  Rat end_value() const;
  long slope_left_of(const Rat& t) const;   // slope on the piece ending at t; requires t > 0
  long slope_right_of(const Rat& t) const;  // slope on the piece starting at t; requires t < length
  void canonicalize();                           // merge adjacent pieces with equal slope
};

EdgeProfile affine_profile(const Rat& length, long slope, const Rat& start_value);
EdgeProfile constant_profile(const Rat& length, const Rat& value);

struct TropFunction {
  std::string name;
  std::map<int, EdgeProfile> edges;  // edge id -> profile over the whole edge
  std::map<int, Rat> isolated;       // vertex id -> value, for vertices not covered by a supported edge

  bool is_infinite() const { return edges.empty() && isolated.empty(); }
};

// Canonicalizes profiles, drops isolated entries already covered consistently
// by a supported edge, and throws std::invalid_argument on any defect:
// profiles not spanning [0, length], unsorted breaks, or conflicting values at
// a shared vertex.
void validate_function(const MetricGraph& g, TropFunction& f);

// True when the support is the whole graph (every edge supported, every
// edgeless vertex given a value).
bool is_total(const MetricGraph& g, const TropFunction& f);

Trop evaluate(const MetricGraph& g, const TropFunction& f, const PointRef& p);

// Pointwise minimum.  Supports merge (min with infinity is the identity); if
// the operands' supports meet in a way that would create a jump at a vertex,
// the result is not piecewise linear continuous and this throws.
TropFunction trop_min(const MetricGraph& g, const TropFunction& a, const TropFunction& b);

// f + c pointwise (infinity stays infinity).
TropFunction shift(const TropFunction& f, const Rat& c);

struct Divisor {
  std::map<PointRef, long long> coeff;  // nonzero coefficients only

  long long degree() const;
  bool effective() const;
  void add(const PointRef& p, long long k);
};

Divisor divisor_add(const Divisor& a, const Divisor& b);

// Divisor of a total function: at each point, minus the sum of outgoing
// slopes.  Nonzero only at vertices and interior breakpoints.
Divisor divisor_of(const MetricGraph& g, const TropFunction& f);

// Membership of f in R(D): f is the infinite function, or f is total and
// div(f) + D is effective.  Partial (non-total, non-infinite) f is rejected.
bool in_riemann_roch(const MetricGraph& g, const TropFunction& f, const Divisor& d);

// Common refinement of a family: every edge of the graph is cut at the union
// of the family's breakpoints, so each function is affine (or infinite) on
// each piece.  Edgeless vertices are emitted as degenerate point segments so
// that the segment list covers the whole graph.
struct SegmentFn {
  bool finite = false;
  long slope = 0;  // value = slope * t + intercept, t the edge offset
  Rat intercept;
};

struct Segment {
  int edge = -1;    // -1 for a point segment at an edgeless vertex
  int vertex = -1;  // set when edge < 0
  Rat a, b;         // subinterval of the edge; a == b == 0 for point segments
  std::vector<SegmentFn> fns;  // one entry per input function

  bool is_point() const { return edge < 0; }
};

std::vector<Segment> common_refinement(const MetricGraph& g,
                                       const std::vector<TropFunction>& fs);

// Checks that min_i (f_i(x) + cs_i) is attained by at least two indices at
// every point of the graph; at points where every term is infinite the check
// passes by convention.  On failure, witness is the first offending point in
// scan order (edges in declaration order, left to right, open subintervals
// reported by their midpoint; edgeless vertices last).
struct MinTwiceResult {
  bool ok = true;
  PointRef witness;
};

MinTwiceResult min_attained_twice(const MetricGraph& g,
                                  const std::vector<TropFunction>& fs,
                                  const std::vector<Rat>& cs);

// Number of indices attaining min_i (f_i(p) + cs_i), or -1 when every term is
// infinite at p.
int count_min_attained(const MetricGraph& g, const std::vector<TropFunction>& fs,
                       const std::vector<Rat>& cs, const PointRef& p);

}  // namespace tropgraph
