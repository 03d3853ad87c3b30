#include "tropgraph/pl_function.hpp"

#include <algorithm>

namespace tropgraph {

Rat EdgeProfile::value_at(const Rat& t) const {
  if (t < breaks.front() || t > breaks.back())
    throw std::invalid_argument("profile offset out of range");
  Rat v = start_value;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const Rat& lo = breaks[i];
    const Rat& hi = breaks[i + 1];
    if (t <= hi) {
      v += Rat(slopes[i] * Rat(t - lo));
      return v;
    }
    v += Rat(slopes[i] * Rat(hi - lo));
  }
  return v;  // t == length
}

Rat EdgeProfile::end_value() const {
  Rat v = start_value;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    v += Rat(slopes[i] * Rat(breaks[i + 1] - breaks[i]));
  return v;
}

long EdgeProfile::slope_left_of(const Rat& t) const {
  if (!(t > breaks.front()) || t > breaks.back())
    throw std::invalid_argument("slope_left_of: offset out of range");
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    if (t <= breaks[i + 1]) return slopes[i];
  return slopes.back();
}

long EdgeProfile::slope_right_of(const Rat& t) const {
  if (t < breaks.front() || !(t < breaks.back()))
    throw std::invalid_argument("slope_right_of: offset out of range");
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    if (t < breaks[i + 1]) return slopes[i];
  return slopes.back();
}

void EdgeProfile::canonicalize() {
  if (breaks.size() < 2) return;
  std::vector<Rat> nb{breaks.front()};
  std::vector<long> ns;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!ns.empty() && ns.back() == slopes[i]) {
      nb.back() = breaks[i + 1];  // extend the previous piece
    } else {
      ns.push_back(slopes[i]);
      nb.push_back(breaks[i + 1]);
    }
  }
  breaks = std::move(nb);
  slopes = std::move(ns);
}

EdgeProfile affine_profile(const Rat& length, long slope, const Rat& start_value) {
  EdgeProfile p;
  p.breaks = {Rat(0), length};
  p.slopes = {slope};
  p.start_value = start_value;
  return p;
}

EdgeProfile constant_profile(const Rat& length, const Rat& value) {
  return affine_profile(length, 0, value);
}

void validate_function(const MetricGraph& g, TropFunction& f) {
  for (auto& [e, prof] : f.edges) {
    if (e < 0 || e >= g.num_edges())
      throw std::invalid_argument("function supports unknown edge id");
    if (prof.breaks.size() < 2 || prof.slopes.size() + 1 != prof.breaks.size())
      throw std::invalid_argument("profile on edge '" + g.edges[e].name +
                                  "' has mismatched breaks/slopes");
    if (prof.breaks.front() != 0 || prof.breaks.back() != g.edges[e].length)
      throw std::invalid_argument("profile on edge '" + g.edges[e].name +
                                  "' does not span [0, length]");
    for (std::size_t i = 0; i + 1 < prof.breaks.size(); ++i)
      if (!(prof.breaks[i] < prof.breaks[i + 1]))
        throw std::invalid_argument("profile on edge '" + g.edges[e].name +
                                    "' has non-increasing breaks");
    prof.canonicalize();
  }
  // Vertex values induced by supported edges must agree.
  std::map<int, Rat> at_vertex;
  auto meet = [&](int v, const Rat& val, int e) {
    auto [it, fresh] = at_vertex.emplace(v, val);
    if (!fresh && it->second != val)
      throw std::invalid_argument("conflicting values at vertex '" + g.vertices[v] +
                                  "' via edge '" + g.edges[e].name + "'");
  };
  for (const auto& [e, prof] : f.edges) {
    meet(g.edges[e].ends[0], prof.start_value, e);
    meet(g.edges[e].ends[1], prof.end_value(), e);
  }
  for (auto it = f.isolated.begin(); it != f.isolated.end();) {
    int v = it->first;
    if (v < 0 || v >= g.num_vertices())
      throw std::invalid_argument("function names unknown vertex id");
    auto covered = at_vertex.find(v);
    if (covered != at_vertex.end()) {
      if (covered->second != it->second)
        throw std::invalid_argument("isolated value conflicts with edge value at vertex '" +
                                    g.vertices[v] + "'");
      it = f.isolated.erase(it);  // already covered; keep the support canonical
    } else {
      ++it;
    }
  }
}

bool is_total(const MetricGraph& g, const TropFunction& f) {
  if (static_cast<int>(f.edges.size()) != g.num_edges()) return false;
  // With all edges supported, only edgeless vertices can still be missing.
  std::vector<bool> touched(g.vertices.size(), false);
  for (const MetricGraph::Edge& e : g.edges) {
    touched[e.ends[0]] = true;
    touched[e.ends[1]] = true;
  }
  for (int v = 0; v < g.num_vertices(); ++v)
    if (!touched[v] && !f.isolated.count(v)) return false;
  return true;
}

Trop evaluate(const MetricGraph& g, const TropFunction& f, const PointRef& p) {
  if (!p.is_vertex()) {
    auto it = f.edges.find(p.edge);
    if (it == f.edges.end()) return Trop::infinity();
    return Trop(it->second.value_at(p.offset));
  }
  if (p.vertex < 0 || p.vertex >= g.num_vertices())
    throw std::invalid_argument("vertex id out of range");
  for (const auto& [e, prof] : f.edges) {
    if (g.edges[e].ends[0] == p.vertex) return Trop(prof.start_value);
    if (g.edges[e].ends[1] == p.vertex) return Trop(prof.end_value());
  }
  auto it = f.isolated.find(p.vertex);
  if (it != f.isolated.end()) return Trop(it->second);
  return Trop::infinity();
}

// Lower envelope of two profiles over one edge.  Pieces of the merged
// breakpoint grid hold one affine function per operand; on each piece they
// cross at most once.
static EdgeProfile envelope_min(const EdgeProfile& pa, const EdgeProfile& pb) {
  std::vector<Rat> grid;
  grid.reserve(pa.breaks.size() + pb.breaks.size());
  std::merge(pa.breaks.begin(), pa.breaks.end(), pb.breaks.begin(), pb.breaks.end(),
             std::back_inserter(grid));
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  EdgeProfile out;
  out.start_value = rat_min(pa.value_at(0), pb.value_at(0));
  out.breaks = {Rat(0)};
  auto emit = [&out](const Rat& to, long slope) {
    out.breaks.push_back(to);
    out.slopes.push_back(slope);
  };
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const Rat& p = grid[i];
    const Rat& q = grid[i + 1];
    Rat av = pa.value_at(p), bv = pb.value_at(p);
    long as = pa.slope_right_of(p), bs = pb.slope_right_of(p);
    // Leader = operand realizing the min just after p.
    bool a_leads = av < bv || (av == bv && as <= bs);
    Rat lv = a_leads ? av : bv, ov = a_leads ? bv : av;
    long ls = a_leads ? as : bs, os = a_leads ? bs : as;
    if (ls == os) {
      emit(q, ls);
      continue;
    }
    // Crossing of the two lines, if strictly inside (p, q) and the leader is
    // overtaken there (requires the leader to be rising relative to other).
    if (ls > os) {
      Rat t = Rat(p + Rat(ov - lv) / Rat(ls - os));
      if (t > p && t < q) {
        emit(t, ls);
        emit(q, os);
        continue;
      }
    }
    emit(q, ls);
  }
  out.canonicalize();
  return out;
}

TropFunction trop_min(const MetricGraph& g, const TropFunction& a, const TropFunction& b) {
  TropFunction out;
  for (const auto& [e, prof] : a.edges) {
    auto bi = b.edges.find(e);
    out.edges[e] = bi == b.edges.end() ? prof : envelope_min(prof, bi->second);
  }
  for (const auto& [e, prof] : b.edges)
    if (!a.edges.count(e)) out.edges[e] = prof;

  // Isolated support: vertices isolated in either operand that are not
  // covered by a supported edge of the result.
  std::vector<bool> covered(g.vertices.size(), false);
  for (const auto& [e, prof] : out.edges) {
    (void)prof;
    covered[g.edges[e].ends[0]] = true;
    covered[g.edges[e].ends[1]] = true;
  }
  auto add_isolated = [&](int v) {
    if (covered[v] || out.isolated.count(v)) return;
    Trop m = trop_min(evaluate(g, a, PointRef::at_vertex(v)),
                      evaluate(g, b, PointRef::at_vertex(v)));
    out.isolated[v] = m.value();
  };
  for (const auto& [v, val] : a.isolated) {
    (void)val;
    add_isolated(v);
  }
  for (const auto& [v, val] : b.isolated) {
    (void)val;
    add_isolated(v);
  }

  // The pointwise min can jump at a vertex when one operand's support stops
  // there with a smaller value; such a result is not a function of this class.
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (!covered[v]) continue;
    Trop want = trop_min(evaluate(g, a, PointRef::at_vertex(v)),
                         evaluate(g, b, PointRef::at_vertex(v)));
    Trop got = evaluate(g, out, PointRef::at_vertex(v));
    if (!(want == got))
      throw std::invalid_argument("tropical min is discontinuous at vertex '" +
                                  g.vertices[v] + "' (incompatible supports)");
  }
  validate_function(g, out);
  return out;
}

TropFunction shift(const TropFunction& f, const Rat& c) {
  TropFunction out = f;
  for (auto& [e, prof] : out.edges) {
    (void)e;
    prof.start_value += c;
  }
  for (auto& [v, val] : out.isolated) {
    (void)v;
    val += c;
  }
  return out;
}

long long Divisor::degree() const {
  long long d = 0;
  for (const auto& [p, k] : coeff) {
    (void)p;
    d += k;
  }
  return d;
}

bool Divisor::effective() const {
  for (const auto& [p, k] : coeff) {
    (void)p;
    if (k < 0) return false;
  }
  return true;
}

void Divisor::add(const PointRef& p, long long k) {
  if (k == 0) return;
  auto [it, fresh] = coeff.emplace(p, k);
  if (!fresh) {
    it->second += k;
    if (it->second == 0) coeff.erase(it);
  }
}

Divisor divisor_add(const Divisor& a, const Divisor& b) {
  Divisor out = a;
  for (const auto& [p, k] : b.coeff) out.add(p, k);
  return out;
}

Divisor divisor_of(const MetricGraph& g, const TropFunction& f) {
  if (!is_total(g, f))
    throw std::invalid_argument("divisor_of requires a total function");
  Divisor d;
  // Vertices: minus the sum of outgoing slopes over all incident directions.
  for (int v = 0; v < g.num_vertices(); ++v) {
    long long ord = 0;
    for (const Direction& dir : incident_directions(g, PointRef::at_vertex(v))) {
      const EdgeProfile& prof = f.edges.at(dir.edge);
      long outgoing =
          dir.toward_end1 ? prof.slopes.front() : -prof.slopes.back();
      ord -= outgoing;
    }
    d.add(PointRef::at_vertex(v), ord);
  }
  // Interior breakpoints: slope before minus slope after.
  for (const auto& [e, prof] : f.edges)
    for (std::size_t i = 1; i + 1 < prof.breaks.size(); ++i)
      d.add(PointRef::interior(e, prof.breaks[i]),
            prof.slopes[i - 1] - prof.slopes[i]);
  return d;
}

bool in_riemann_roch(const MetricGraph& g, const TropFunction& f, const Divisor& dd) {
  if (f.is_infinite()) return true;
  if (!is_total(g, f))
    throw std::invalid_argument("membership requires a total or infinite function");
  return divisor_add(divisor_of(g, f), dd).effective();
}

std::vector<Segment> common_refinement(const MetricGraph& g,
                                       const std::vector<TropFunction>& fs) {
  std::vector<Segment> out;
  for (int e = 0; e < g.num_edges(); ++e) {
    std::vector<Rat> cuts{Rat(0), g.edges[e].length};
    for (const TropFunction& f : fs) {
      auto it = f.edges.find(e);
      if (it == f.edges.end()) continue;
      const std::vector<Rat>& br = it->second.breaks;
      cuts.insert(cuts.end(), br.begin() + 1, br.end() - 1);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      Segment s;
      s.edge = e;
      s.a = cuts[i];
      s.b = cuts[i + 1];
      s.fns.resize(fs.size());
      for (std::size_t j = 0; j < fs.size(); ++j) {
        auto it = fs[j].edges.find(e);
        if (it == fs[j].edges.end()) continue;
        SegmentFn& sf = s.fns[j];
        sf.finite = true;
        sf.slope = it->second.slope_right_of(s.a);
        sf.intercept = Rat(it->second.value_at(s.a) - Rat(sf.slope * s.a));
      }
      out.push_back(std::move(s));
    }
  }
  // Edgeless vertices become point segments so the cover is exhaustive.
  std::vector<bool> touched(g.vertices.size(), false);
  for (const MetricGraph::Edge& e : g.edges) {
    touched[e.ends[0]] = true;
    touched[e.ends[1]] = true;
  }
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (touched[v]) continue;
    Segment s;
    s.vertex = v;
    s.a = s.b = Rat(0);
    s.fns.resize(fs.size());
    for (std::size_t j = 0; j < fs.size(); ++j) {
      auto it = fs[j].isolated.find(v);
      if (it == fs[j].isolated.end()) continue;
      s.fns[j] = {true, 0, it->second};
    }
    out.push_back(std::move(s));
  }
  return out;
}

int count_min_attained(const MetricGraph& g, const std::vector<TropFunction>& fs,
                       const std::vector<Rat>& cs, const PointRef& p) {
  Trop best = Trop::infinity();
  int count = 0;
  for (std::size_t j = 0; j < fs.size(); ++j) {
    Trop t = evaluate(g, fs[j], p) + Trop(cs[j]);
    if (t < best) {
      best = t;
      count = 1;
    } else if (t.finite() && t == best) {
      ++count;
    }
  }
  return best.finite() ? count : -1;
}

// Count of terms attaining the min of the segment's affine terms at offset t
// (valid at points interior to the edge); -1 when no term is finite.
static int count_on_segment(const Segment& s, const std::vector<Rat>& cs, const Rat& t) {
  bool any = false;
  Rat best;
  int count = 0;
  for (std::size_t j = 0; j < s.fns.size(); ++j) {
    if (!s.fns[j].finite) continue;
    Rat v = Rat(Rat(s.fns[j].slope * t) + s.fns[j].intercept + cs[j]);
    if (!any || v < best) {
      any = true;
      best = v;
      count = 1;
    } else if (v == best) {
      ++count;
    }
  }
  return any ? count : -1;
}

MinTwiceResult min_attained_twice(const MetricGraph& g,
                                  const std::vector<TropFunction>& fs,
                                  const std::vector<Rat>& cs) {
  if (fs.size() != cs.size())
    throw std::invalid_argument("coefficient count does not match family size");
  if (fs.size() < 2)
    throw std::invalid_argument("the check needs at least two functions");

  auto fails_at_point = [&](const PointRef& p) {
    return count_min_attained(g, fs, cs, p) == 1;
  };

  for (const Segment& s : common_refinement(g, fs)) {
    if (s.is_point()) {
      PointRef p = PointRef::at_vertex(s.vertex);
      if (fails_at_point(p)) return {false, p};
      continue;
    }
    // Candidate interior abscissae: pairwise crossings of the finite terms.
    std::vector<Rat> xs;
    for (std::size_t j = 0; j < s.fns.size(); ++j) {
      if (!s.fns[j].finite) continue;
      for (std::size_t k = j + 1; k < s.fns.size(); ++k) {
        if (!s.fns[k].finite || s.fns[j].slope == s.fns[k].slope) continue;
        Rat t = Rat(Rat(Rat(s.fns[k].intercept + cs[k]) - Rat(s.fns[j].intercept + cs[j])) /
                    Rat(s.fns[j].slope - s.fns[k].slope));
        if (t > s.a && t < s.b) xs.push_back(t);
      }
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    // Scan left to right: endpoint, then alternately open gaps (by midpoint)
    // and candidate points.
    PointRef left = canonical_point(g, s.edge, s.a);
    if (fails_at_point(left)) return {false, left};
    Rat prev = s.a;
    for (std::size_t i = 0; i <= xs.size(); ++i) {
      const Rat& next = i < xs.size() ? xs[i] : s.b;
      Rat mid = Rat(Rat(prev + next) / 2);
      if (count_on_segment(s, cs, mid) == 1)
        return {false, PointRef::interior(s.edge, mid)};
      if (i < xs.size()) {
        if (count_on_segment(s, cs, xs[i]) == 1)
          return {false, PointRef::interior(s.edge, xs[i])};
        prev = xs[i];
      }
    }
    PointRef right = canonical_point(g, s.edge, s.b);
    if (fails_at_point(right)) return {false, right};
  }
  return {true, PointRef{}};
}

}  // namespace tropgraph
