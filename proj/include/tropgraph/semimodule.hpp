#pragma once

// Finitely generated (min,+) semimodules of total PL functions on a metric
// graph: tropical combinations min_i (f_i + c_i), evaluation at finite point
// sets, the section operator recovering a combination from its values, and
// the slope-based structure used to certify ranks.

#include <optional>
#include <set>
#include <vector>

#include "tropgraph/pl_function.hpp"

namespace tropgraph {

struct Semimodule {
  MetricGraph graph;
  std::vector<TropFunction> gens;  // all total on `graph`
};

// Validates the graph (structure + connectivity not required) and every
// generator (must be total).  Throws on defects.
void validate_semimodule(Semimodule& m);

// min_i (gens[i] + coeffs[i]); infinite coefficients drop generators.  If all
// coefficients are infinite the result is the infinite function.
TropFunction combine(const Semimodule& m, const std::vector<Trop>& coeffs);

struct EvalMatrix {
  std::vector<PointRef> points;        // row index -> point
  std::vector<std::vector<Rat>> rows;  // rows[k][i] = gens[i](points[k])
};

EvalMatrix evaluation_matrix(const Semimodule& m, const std::vector<PointRef>& pts);
EvalMatrix evaluation_matrix_serial(const Semimodule& m, const std::vector<PointRef>& pts);

// Largest combination of the generators whose values at `pts` are bounded by
// `target` (and equal to it when `target` is itself a restriction of a
// combination): coefficient i is max_k (target[k] - gens[i](pts[k])).
struct SectionResult {
  std::vector<Rat> coeffs;
  TropFunction fn;
};

SectionResult section_rho(const Semimodule& m, const std::vector<PointRef>& pts,
                          const std::vector<Rat>& target);

// Per refined edge piece, the set of generator slopes (measured toward
// end1); the refinement cuts every edge at the union of generator breaks, so
// each generator has a single slope per piece.
struct SlopeProfile {
  struct Piece {
    int edge;
    Rat a, b;
    std::set<long> slopes;
  };
  std::vector<Piece> pieces;

  int max_distinct_slopes() const;  // 0 on an edgeless graph
  bool two_slope() const;           // every piece carries at most 2 slopes
};

SlopeProfile slope_profile(const Semimodule& m);

// Rank is at least the number of distinct slopes seen in a single direction
// (1 on an edgeless graph with at least one generator).
int rank_lower_bound_slopes(const Semimodule& m);

// When every refined piece carries at most two distinct generator slopes,
// every combination is determined by its values on the refined vertex set:
// graph vertices plus the interior cut points.  Returns that point set, or
// nullopt when some piece has three or more slopes.
std::optional<std::vector<PointRef>> two_slope_points(const Semimodule& m);

}  // namespace tropgraph
