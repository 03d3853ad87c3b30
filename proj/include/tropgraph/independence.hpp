#pragma once

// Deciding tropical independence.  The inner one-dimensional optimization is
// solved in closed form; a family of total functions reduces to a turn-based
// stochastic mean-payoff game whose escape-rate sign is the verdict, with
// exact certificates in every direction; tropical ranks of semimodules come
// from evaluation matrices and certified subfamilies.

#include <optional>
#include <string>
#include <vector>

#include "tropgraph/game.hpp"
#include "tropgraph/semimodule.hpp"

namespace tropgraph {

// ---- closed-form inner optimization ----------------------------------------

// One affine term gamma * x + d of a pointwise minimum over an interval.
struct MinTerm {
  Rat gamma;
  Rat d;
};

struct SupMinResult {
  Rat value;   // sup over [u, v] of x -> min_j (gamma_j x + d_j)
  Rat argmax;  // a point of [u, v] attaining the supremum
  int kind;    // 0: nonincreasing term at u; 1: nondecreasing term at v; 2: crossing
  int j = -1;  // achieving term
  int k = -1;  // second term of a crossing (kind == 2 only)
};

// Exact supremum of the lower envelope of affine terms over [u, v].  The
// value is the minimum of three groups: nonincreasing terms at u,
// nondecreasing terms at v, and crossing values of opposite-slope pairs;
// terms with slope 0 belong to both endpoint groups.  The reported witness
// prefers a crossing, then u, then v.
SupMinResult sup_min_on_interval(const std::vector<MinTerm>& terms, const Rat& u,
                                 const Rat& v);

// ---- reduction to a game ----------------------------------------------------

// The game of a family f_1..f_n: states are the family members; MAX actions
// are the segments of the common refinement (the same set for every state);
// MIN replies on segment alpha viewed from state i either stop the segment at
// an endpoint and hand over to a single other member, or mix two members of
// opposite relative slope at their crossing.
struct GameBuild {
  StochGame game;
  std::vector<Segment> segments;  // MAX action alpha = segments[alpha]

  // Provenance per (state, segment, reply): how the reply was produced.
  struct MinInfo {
    int kind;  // 0: left endpoint, 1: right endpoint, 2: crossing pair
    int j;     // family index the reply hands over to
    int k;     // second family index for crossings, else -1
  };
  std::vector<std::vector<std::vector<MinInfo>>> info;
};

// Requires >= 2 total generators on a valid connected graph.  The
// construction is self-checked: for a few fixed pseudo-random coefficient
// vectors, the minimum over the emitted replies must equal the closed-form
// supremum on every (state, segment); a mismatch throws logic_error.
GameBuild build_game(const Semimodule& m);

// ---- verdicts ---------------------------------------------------------------

struct IndependenceVerdict {
  enum Kind { Independent, Dependent, Unresolved } kind;
  std::optional<GameCertificate> cert;  // strict growth / eigenpair / subinvariant
  std::vector<PointRef> points;         // Independent: witness points x_1..x_n
  std::vector<int> minimizers;          // per point, the unique minimizing index
  std::vector<Rat> coefficients;        // Dependent: min attained twice everywhere
  std::pair<Rat, Rat> bounds;           // escape-rate sandwich from the iteration
  long iterations = 0;
};

// Builds the game and decides the sign of its escape rate.  A positive
// certificate is turned into witness points with unique minimizers; a
// nonpositive certificate's coefficient vector is re-verified by
// min_attained_twice before the Dependent verdict is returned.
IndependenceVerdict check_independence(const Semimodule& m, long max_iters = 10000);

// For a coefficient vector with strict growth (T(c) > c), returns one point
// per family member where that member is the unique minimizer of
// f_j + c_j.  The points come from the argmax of the optimal segment; the
// uniqueness is re-checked exactly and a failure throws logic_error.
std::vector<PointRef> extract_witness_points(const Semimodule& m, const GameBuild& gb,
                                             const std::vector<Rat>& c);

struct PermutationCheck {
  bool unique = false;
  Trop min_sum;  // infinite when every permutation hits an infinite value
  long count = 0;
  std::vector<std::vector<int>> minimizers;  // up to a small cap
};

// Enumerates all bijections sigma of the family onto the points and sums
// f_sigma(k)(x_k) exactly; reports whether the minimum is attained once.
// Factorial enumeration: family size is capped at 9.
PermutationCheck unique_permutation_check(const Semimodule& m,
                                          const std::vector<PointRef>& points);

// ---- tropical ranks ---------------------------------------------------------

using TropMatrix = std::vector<std::vector<Trop>>;

// Largest r with an r x r submatrix whose tropical determinant (min over
// permutations of a diagonal sum) is finite and attained by exactly one
// permutation.  Exact mode requires min(rows, cols) <= 8 and refuses
// enumerations beyond an internal cap.
int dss_matrix_rank(const TropMatrix& a);
int dss_matrix_rank_serial(const TropMatrix& a);

// Lower bound on the same rank by budgeted greedy growth of a nonsingular
// minor; deterministic scan order.
int dss_greedy_rank(const TropMatrix& a, int cap, long budget);

struct TroprankOptions {
  long dss_budget = 2000000;  // submatrix checks allowed across all levels
  long game_iters = 4000;     // iteration budget per subfamily game
  int refine_levels = 2;      // dyadic midpoint refinements of the point set
  int subfamily_cap = 6;      // enumerate subfamilies only up to this size
};

struct TroprankResult {
  bool exact = false;
  int lo = 0, hi = 0;  // exact value is lo == hi when exact
  std::vector<std::string> evidence;
};

// Exact when the family satisfies the two-slope condition (evaluation on the
// refined vertex set is then faithful) and the matrix search fits the caps;
// otherwise lower bounds from slope counts, evaluation matrices on
// escalating point sets, and game-certified subfamilies, with hi = number of
// generators.
TroprankResult troprank(const Semimodule& m, const TroprankOptions& opts = {});

}  // namespace tropgraph
