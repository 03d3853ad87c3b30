#pragma once

// Turn-based stochastic mean-payoff games in the one-step form
//   T_i(c) = max over MAX actions at i of min over that action's MIN replies
//            of (payoff + sum_j P_j * c_j),
// with exact rational payoffs and probabilities.  The sign of the per-state
// mean payoff is decided through exact certificates: a vector c with
// T(c) - c > 0 everywhere proves all mean payoffs positive; T(c) - c <= 0
// everywhere proves them nonpositive; T(c) = c + rho*e is an eigenpair.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tropgraph/rational.hpp"

namespace tropgraph {

struct StochGame {
  struct MinAct {
    std::string name;
    Rat payoff;
    std::vector<std::pair<int, Rat>> trans;  // (state, probability), probs > 0 summing to 1
  };
  struct MaxAct {
    std::string name;
    std::vector<MinAct> mins;  // nonempty
  };

  std::vector<std::string> states;          // nonempty, unique names
  std::vector<std::vector<MaxAct>> acts;    // one nonempty action list per state

  int num_states() const { return static_cast<int>(states.size()); }
  // Total count of (state, max action, min reply) triples.
  long size() const;
};

// Fills in missing action names deterministically, then checks all
// invariants; throws std::invalid_argument on violation.
void validate_game(StochGame& g);

using Vec = std::vector<Rat>;

Vec apply_shapley(const StochGame& g, const Vec& c);         // OpenMP over states
Vec apply_shapley_serial(const StochGame& g, const Vec& c);  // reference

// v^1..v^N with v^k = T^k(0).
std::vector<Vec> value_iteration(const StochGame& g, int n);

// One-step sandwich: every per-state mean payoff lies in
// [min_i (T(c)-c)_i, max_i (T(c)-c)_i].
std::pair<Rat, Rat> escape_rate_bounds(const StochGame& g, const Vec& c);

// Sandwich from the value iteration orbit: min_i v^k_i / k never exceeds any
// mean payoff and max_i v^k_i / k never undershoots one, so intersecting over
// k = 1..n tightens both ends.
std::pair<Rat, Rat> mean_payoff_bounds(const StochGame& g, int n);

Rat hilbert_seminorm(const Vec& x);  // max entry minus min entry

struct GameCertificate {
  enum Kind { Eigenpair, StrictSuper, Sub } kind = StrictSuper;
  Vec c;
  Rat rho;  // eigenpair only
};

bool verify_certificate(const StochGame& g, const GameCertificate& cert);

struct DecideOptions {
  long max_iters = 10000;       // total operator applications (exact + floating)
  bool round_and_verify = true; // allow the floating-point candidate search
  unsigned long seed = 0;       // reserved for callers that add randomized probes
};

struct DecideResult {
  enum Verdict { Positive, NonPositive, Unresolved } verdict = Unresolved;
  std::optional<GameCertificate> cert;  // set unless Unresolved
  std::pair<Rat, Rat> bounds{Rat(0), Rat(0)};  // valid sandwich (always set)
  long iterations = 0;
};

// Decides the sign of the mean payoffs when it is uniform.  Candidates come
// from the exact value-iteration orbit, a damped (Krasnoselskii) orbit with
// denominator capping, and optionally floating-point iterates rounded by
// continued fractions; every verdict is backed by an exact certificate that
// verify_certificate accepts.  Positive requires all mean payoffs > 0,
// NonPositive requires all <= 0; games with mixed signs stay Unresolved.
DecideResult decide_sign(const StochGame& g, const DecideOptions& opts = {});

// Exact mean payoff per starting state by enumerating positional strategies
// (max over MAX strategies of min over MIN replies of the chain gain).  The
// strategy space, counted as prod_i (sum_alpha |replies(i, alpha)|), must not
// exceed 10^6.
Vec brute_force_mean_payoff(const StochGame& g);         // OpenMP over MAX strategies
Vec brute_force_mean_payoff_serial(const StochGame& g);  // reference

// Gain vector of a finite Markov reward chain (rows of p must be stochastic):
// exact stationary analysis on recurrent classes, reachability-weighted on
// transient states.  Exposed for testing.
Vec markov_chain_gain(const std::vector<std::vector<Rat>>& p, const Vec& r);

// Solves a dense linear system exactly by Gaussian elimination; throws
// std::domain_error when singular.  Exposed for testing.
Vec solve_linear(std::vector<Vec> a, Vec b);

}  // namespace tropgraph
