#pragma once

// Reductions between constraint systems and dependence instances:
//  - a constraint system over c_1..c_n compiles to a family of partial
//    functions on a disconnected graph (one edge per average constraint, two
//    isolated vertices per min constraint and per offset pair), and then to a
//    family of total functions on a connected completion of that graph;
//  - a 0/1 matrix compiles to a semimodule on a complete graph whose tropical
//    rank equals the matrix's.
// A feasibility decider for the constraint systems closes the loop: the
// system is feasible exactly when the compiled family is dependent.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tropgraph/independence.hpp"

namespace tropgraph {

// Constraint system over real variables c_1..c_n (indices are 1-based):
//   average:  c_i >= (c_j + c_k)/2      for (i,j,k) in avg
//   minimum:  c_i >= min(c_j, c_k)      for (i,j,k) in mins
//   offset:   c_i >= a[(i,j)] + c_j     for every ordered pair (i,j), i != j
// `a` must contain every ordered pair of distinct indices, with integer
// values satisfying a[(i,j)] + a[(j,i)] <= 0 (otherwise the pair of offset
// constraints is unsatisfiable on its own).  Triples have pairwise-distinct
// entries with j < k.
struct CSPInstance {
  using Triple = std::array<int, 3>;
  int n = 0;
  std::vector<Triple> avg;
  std::vector<Triple> mins;
  std::map<std::pair<int, int>, long> a;
};

struct CSPReport {
  bool ok = true;
  std::vector<std::string> errors;
};

CSPReport validate_csp(const CSPInstance& csp);

// M = -min a + 1 >= 1; the scale of the compiled instance (edge half-length,
// value box, completion plateau 4M and tent slope 3M all derive from it).
long csp_scale(const CSPInstance& csp);

// Exact check of every constraint against a candidate c (size n).
bool feasible_witness_check(const CSPInstance& csp, const std::vector<Rat>& c);

// The compiled dependence instance before completion.  The graph is a
// disjoint union of edges E_<i>_<j>_<k> of length 2M (endpoints EL_*/ER_*,
// the chart x runs over [-M, M] from EL to ER) and isolated vertices
// v_*/vp_* (per min triple) and w_*/wp_* (per ordered pair).  The family, in
// order: f1..fn, then fp_*/fm_* per average triple, then g_* per min triple,
// then h_* per pair.  On E_ijk: f_i = 0, f_j = -x, f_k = x, fp = -x,
// fm = x.  f_i is 0 at v_ljk for i in {l,j,k}, at vp_ljk for i in {j,k} and
// at w_ij, and equals a_ji at w_ji and wp_ji; g/h are 0 on their two
// vertices.  Everything else is infinite.
struct GeneralizedInstance {
  MetricGraph graph;
  std::vector<TropFunction> fns;
  long M = 1;
  int n = 0;
  std::vector<CSPInstance::Triple> avg, mins;
  std::vector<std::pair<int, int>> pairs;  // ordered pairs in emission order
};

GeneralizedInstance csp_to_generalized(const CSPInstance& csp);

// Coefficients for the ambiguity property, in the layout of the family.
struct PropertyCoeffs {
  std::vector<Rat> c;       // size n
  std::vector<Rat> cplus;   // size |avg|
  std::vector<Rat> cminus;  // size |avg|
  std::vector<Rat> d;       // size |mins|
  std::vector<Rat> dprime;  // size |pairs|
};

// The canonical coefficients attached to a feasible c: after translating c
// so that min c = 0, cplus = c_j, cminus = c_k, d = min(c_j, c_k),
// dprime = a_ij + c_j.  These land in the boxes c, c+-, d in [0, M] and
// d' in [-M, M], which is asserted.  Throws invalid_argument when c does not
// satisfy the constraints.
PropertyCoeffs canonical_coeffs(const CSPInstance& csp, const std::vector<Rat>& c);

// Whether min over the full term collection (family member + its
// coefficient) is attained at least twice at every point of the instance
// graph.  Throws invalid_argument on coefficient-length mismatches.
MinTwiceResult property_D_check(const GeneralizedInstance& gi, const PropertyCoeffs& co);

// Connected completion: one edge of length 2 (chart [-1, 1]) between every
// pair of vertices not already joined; each function becomes total by taking
// the value 4M on the edges and isolated vertices outside its support, and
// tents with slopes +-3M over the added edges:
//   ext(x) = min(ext(-1) + 3M(x + 1), ext(1) - 3M(x - 1)).
struct CompletedInstance {
  Semimodule m;  // validated: connected graph, total functions
  long M = 1;
  int n = 0;
  std::vector<CSPInstance::Triple> avg, mins;
  std::vector<std::pair<int, int>> pairs;
  int added_edges = 0;
};

// Asserts connectivity and that every value on the original graph lies in
// [-M, 4M].
CompletedInstance complete_instance(const GeneralizedInstance& gi);

MinTwiceResult property_D_check(const CompletedInstance& ci, const PropertyCoeffs& co);

// Decides feasibility through the constraint operator
//   G(c)_i = max over constraints with head i of their right-hand sides,
// a monotone additively homogeneous map in the shape of a game operator: the
// system is feasible iff G admits a sub-fixed point c >= G(c), i.e. iff no
// strict growth certificate exists.  Feasible verdicts carry a witness that
// re-passes feasible_witness_check (asserted).
struct FeasibilityResult {
  enum Kind { Feasible, Infeasible, Unresolved } kind = Unresolved;
  std::vector<Rat> witness;  // Feasible only
  std::optional<GameCertificate> cert;
  std::pair<Rat, Rat> bounds;
  long iterations = 0;
};

FeasibilityResult csp_feasibility(const CSPInstance& csp, long max_iters = 10000);

// Complete graph on m >= 2 vertices, all edges of length 2; generator f_j
// takes value A_ij at vertex v_i and min(A_ij, A_sj) at the midpoint of the
// edge v_i -- v_s, linearly interpolated (slopes in {-1, 0, 1}).  B is the
// evaluation matrix at the vertices followed by the midpoints in edge order;
// its rows are the rows of A plus entrywise minima of row pairs, so the
// tropical ranks of A, B and the semimodule all agree.  Entries must be 0/1.
struct MatrixGadget {
  Semimodule m;
  EvalMatrix b;
};

MatrixGadget matrix_gadget(const std::vector<std::vector<int>>& a);

}  // namespace tropgraph
