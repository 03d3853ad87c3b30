#include "tropgraph/semimodule.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tropgraph {

void validate_semimodule(Semimodule& m) {
  if (m.gens.empty()) throw std::invalid_argument("semimodule needs at least one generator");
  for (TropFunction& f : m.gens) {
    validate_function(m.graph, f);
    if (!is_total(m.graph, f))
      throw std::invalid_argument("generator '" + f.name + "' is not total");
  }
}

TropFunction combine(const Semimodule& m, const std::vector<Trop>& coeffs) {
  if (coeffs.size() != m.gens.size())
    throw std::invalid_argument("coefficient count does not match generator count");
  TropFunction acc;  // the infinite function
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (!coeffs[i].finite()) continue;
    acc = trop_min(m.graph, acc, shift(m.gens[i], coeffs[i].value()));
  }
  return acc;
}

EvalMatrix evaluation_matrix_serial(const Semimodule& m, const std::vector<PointRef>& pts) {
  EvalMatrix out;
  out.points = pts;
  out.rows.assign(pts.size(), std::vector<Rat>(m.gens.size()));
  for (std::size_t k = 0; k < pts.size(); ++k)
    for (std::size_t i = 0; i < m.gens.size(); ++i) {
      Trop t = evaluate(m.graph, m.gens[i], pts[k]);
      if (!t.finite())
        throw std::invalid_argument("generator '" + m.gens[i].name +
                                    "' is infinite at an evaluation point");
      out.rows[k][i] = t.value();
    }
  return out;
}

EvalMatrix evaluation_matrix(const Semimodule& m, const std::vector<PointRef>& pts) {
  EvalMatrix out;
  out.points = pts;
  out.rows.assign(pts.size(), std::vector<Rat>(m.gens.size()));
  bool bad = false;
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < static_cast<long>(pts.size()); ++k) {
    for (std::size_t i = 0; i < m.gens.size(); ++i) {
      Trop t = evaluate(m.graph, m.gens[i], pts[k]);
      if (!t.finite()) {
#pragma omp atomic write
        bad = true;
        continue;
      }
      out.rows[k][i] = t.value();
    }
  }
  if (bad) throw std::invalid_argument("a generator is infinite at an evaluation point");
  return out;
}

SectionResult section_rho(const Semimodule& m, const std::vector<PointRef>& pts,
                          const std::vector<Rat>& target) {
  if (pts.empty()) throw std::invalid_argument("section needs at least one point");
  if (pts.size() != target.size())
    throw std::invalid_argument("target value count does not match point count");
  EvalMatrix ev = evaluation_matrix_serial(m, pts);
  SectionResult res;
  res.coeffs.resize(m.gens.size());
  for (std::size_t i = 0; i < m.gens.size(); ++i) {
    Rat c = Rat(target[0] - ev.rows[0][i]);
    for (std::size_t k = 1; k < pts.size(); ++k)
      c = rat_max(c, Rat(target[k] - ev.rows[k][i]));
    res.coeffs[i] = c;
  }
  std::vector<Trop> cs(res.coeffs.begin(), res.coeffs.end());
  res.fn = combine(m, cs);
  return res;
}

SlopeProfile slope_profile(const Semimodule& m) {
  SlopeProfile sp;
  for (int e = 0; e < m.graph.num_edges(); ++e) {
    std::vector<Rat> cuts{Rat(0), m.graph.edges[e].length};
    for (const TropFunction& f : m.gens) {
      const std::vector<Rat>& br = f.edges.at(e).breaks;
      cuts.insert(cuts.end(), br.begin() + 1, br.end() - 1);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      SlopeProfile::Piece p;
      p.edge = e;
      p.a = cuts[i];
      p.b = cuts[i + 1];
      for (const TropFunction& f : m.gens)
        p.slopes.insert(f.edges.at(e).slope_right_of(p.a));
      sp.pieces.push_back(std::move(p));
    }
  }
  return sp;
}

int SlopeProfile::max_distinct_slopes() const {
  int best = 0;
  for (const Piece& p : pieces)
    best = std::max(best, static_cast<int>(p.slopes.size()));
  return best;
}

bool SlopeProfile::two_slope() const { return max_distinct_slopes() <= 2; }

int rank_lower_bound_slopes(const Semimodule& m) {
  return std::max(1, slope_profile(m).max_distinct_slopes());
}

std::optional<std::vector<PointRef>> two_slope_points(const Semimodule& m) {
  SlopeProfile sp = slope_profile(m);
  if (!sp.two_slope()) return std::nullopt;
  std::vector<PointRef> pts;
  for (int v = 0; v < m.graph.num_vertices(); ++v) pts.push_back(PointRef::at_vertex(v));
  for (const SlopeProfile::Piece& p : sp.pieces)
    if (p.a > 0) pts.push_back(PointRef::interior(p.edge, p.a));  // interior cut points
  return pts;
}

}  // namespace tropgraph
