#include "tropgraph/game.hpp"

#include <algorithm>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tropgraph {

long StochGame::size() const {
  long total = 0;
  for (const auto& state_acts : acts)
    for (const MaxAct& a : state_acts) total += static_cast<long>(a.mins.size());
  return total;
}

void validate_game(StochGame& g) {
  const int n = g.num_states();
  if (n == 0) throw std::invalid_argument("game has no states");
  if (static_cast<int>(g.acts.size()) != n)
    throw std::invalid_argument("action table does not match state count");
  std::set<std::string> seen_states;
  for (int i = 0; i < n; ++i) {
    if (g.states[i].empty()) g.states[i] = "s" + std::to_string(i);
    if (!seen_states.insert(g.states[i]).second)
      throw std::invalid_argument("duplicate state name '" + g.states[i] + "'");
  }
  for (int i = 0; i < n; ++i) {
    if (g.acts[i].empty())
      throw std::invalid_argument("state '" + g.states[i] + "' has no actions");
    std::set<std::string> seen_acts;
    for (std::size_t ai = 0; ai < g.acts[i].size(); ++ai) {
      StochGame::MaxAct& a = g.acts[i][ai];
      if (a.name.empty()) a.name = "a" + std::to_string(ai);
      if (!seen_acts.insert(a.name).second)
        throw std::invalid_argument("duplicate action name '" + a.name + "' at state '" +
                                    g.states[i] + "'");
      if (a.mins.empty())
        throw std::invalid_argument("action '" + a.name + "' has no replies");
      std::set<std::string> seen_mins;
      for (std::size_t bi = 0; bi < a.mins.size(); ++bi) {
        StochGame::MinAct& b = a.mins[bi];
        if (b.name.empty()) b.name = "b" + std::to_string(bi);
        if (!seen_mins.insert(b.name).second)
          throw std::invalid_argument("duplicate reply name '" + b.name + "'");
        if (b.trans.empty())
          throw std::invalid_argument("reply '" + b.name + "' has no transitions");
        Rat total(0);
        bool positive = false;
        for (const auto& [s, p] : b.trans) {
          if (s < 0 || s >= n)
            throw std::invalid_argument("reply '" + b.name + "' targets an unknown state");
          if (p < 0)
            throw std::invalid_argument("reply '" + b.name + "' has a negative probability");
          if (p > 0) positive = true;
          total += p;
        }
        if (!positive || total != 1)
          throw std::invalid_argument("reply '" + b.name + "' probabilities do not sum to 1");
      }
    }
  }
}

static Rat reply_value(const StochGame::MinAct& b, const Vec& c) {
  Rat v = b.payoff;
  for (const auto& [s, p] : b.trans) v += Rat(p * c[s]);
  return v;
}

static Rat state_value(const StochGame& g, int i, const Vec& c) {
  bool first_act = true;
  Rat best;
  for (const StochGame::MaxAct& a : g.acts[i]) {
    bool first_min = true;
    Rat inner;
    for (const StochGame::MinAct& b : a.mins) {
      Rat v = reply_value(b, c);
      if (first_min || v < inner) {
        inner = v;
        first_min = false;
      }
    }
    if (first_act || best < inner) {
      best = inner;
      first_act = false;
    }
  }
  return best;
}

Vec apply_shapley_serial(const StochGame& g, const Vec& c) {
  if (static_cast<int>(c.size()) != g.num_states())
    throw std::invalid_argument("vector size does not match state count");
  Vec out(c.size());
  for (int i = 0; i < g.num_states(); ++i) out[i] = state_value(g, i, c);
  return out;
}

Vec apply_shapley(const StochGame& g, const Vec& c) {
  if (static_cast<int>(c.size()) != g.num_states())
    throw std::invalid_argument("vector size does not match state count");
  Vec out(c.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < g.num_states(); ++i) out[i] = state_value(g, i, c);
  return out;
}

std::vector<Vec> value_iteration(const StochGame& g, int n) {
  if (n < 1) throw std::invalid_argument("value iteration needs n >= 1");
  std::vector<Vec> orbit;
  orbit.reserve(n);
  Vec v(g.num_states(), Rat(0));
  for (int k = 0; k < n; ++k) {
    v = apply_shapley(g, v);
    orbit.push_back(v);
  }
  return orbit;
}

std::pair<Rat, Rat> escape_rate_bounds(const StochGame& g, const Vec& c) {
  Vec d = apply_shapley(g, c);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] -= c[i];
  return {vec_min(d), vec_max(d)};
}

Rat hilbert_seminorm(const Vec& x) { return Rat(vec_max(x) - vec_min(x)); }

namespace {

// Running intersection of valid sandwiches around the mean payoffs.
struct BoundTracker {
  bool have = false;
  Rat lo, hi;
  void feed(const Rat& l, const Rat& h) {
    if (!have) {
      lo = l;
      hi = h;
      have = true;
      return;
    }
    if (lo < l) lo = l;
    if (h < hi) hi = h;
  }
};

}  // namespace

std::pair<Rat, Rat> mean_payoff_bounds(const StochGame& g, int n) {
  if (n < 1) throw std::invalid_argument("bounds need n >= 1");
  BoundTracker bt;
  Vec v(g.num_states(), Rat(0));
  for (int k = 1; k <= n; ++k) {
    Vec d = apply_shapley(g, v);
    Vec diff(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) diff[i] = Rat(d[i] - v[i]);
    bt.feed(vec_min(diff), vec_max(diff));
    v = d;
    bt.feed(Rat(vec_min(v) / k), Rat(vec_max(v) / k));
  }
  return {bt.lo, bt.hi};
}

bool verify_certificate(const StochGame& g, const GameCertificate& cert) {
  if (static_cast<int>(cert.c.size()) != g.num_states()) return false;
  Vec d = apply_shapley(g, cert.c);
  switch (cert.kind) {
    case GameCertificate::Eigenpair:
      for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] != Rat(cert.c[i] + cert.rho)) return false;
      return true;
    case GameCertificate::StrictSuper:
      for (std::size_t i = 0; i < d.size(); ++i)
        if (!(d[i] > cert.c[i])) return false;
      return true;
    case GameCertificate::Sub:
      for (std::size_t i = 0; i < d.size(); ++i)
        if (!(d[i] <= cert.c[i])) return false;
      return true;
  }
  return false;
}

namespace {

// Floating-point copy of a game for the candidate search.
struct FloatGame {
  struct Reply {
    double pay;
    std::vector<std::pair<int, double>> tr;
  };
  std::vector<std::vector<std::vector<Reply>>> acts;

  static FloatGame of(const StochGame& g) {
    FloatGame f;
    f.acts.resize(g.acts.size());
    for (std::size_t i = 0; i < g.acts.size(); ++i) {
      f.acts[i].resize(g.acts[i].size());
      for (std::size_t a = 0; a < g.acts[i].size(); ++a)
        for (const StochGame::MinAct& b : g.acts[i][a].mins) {
          Reply r;
          r.pay = b.payoff.get_d();
          for (const auto& [s, p] : b.trans) r.tr.emplace_back(s, p.get_d());
          f.acts[i][a].push_back(std::move(r));
        }
    }
    return f;
  }

  std::vector<double> apply(const std::vector<double>& c) const {
    std::vector<double> out(acts.size());
    for (std::size_t i = 0; i < acts.size(); ++i) {
      double best = 0;
      bool first_a = true;
      for (const auto& a : acts[i]) {
        double inner = 0;
        bool first_b = true;
        for (const Reply& b : a) {
          double v = b.pay;
          for (const auto& [s, p] : b.tr) v += p * c[s];
          if (first_b || v < inner) {
            inner = v;
            first_b = false;
          }
        }
        if (first_a || inner > best) {
          best = inner;
          first_a = false;
        }
      }
      out[i] = best;
    }
    return out;
  }
};

}  // namespace

DecideResult decide_sign(const StochGame& g, const DecideOptions& opts) {
  const int n = g.num_states();
  if (n == 0) throw std::invalid_argument("game has no states");
  const long budget = std::max(1L, opts.max_iters);
  long iters = 0;
  BoundTracker bt;
  std::optional<DecideResult> found;

  // Exact operator application + certificate test at c; updates the sandwich.
  auto test = [&](const Vec& c) -> std::optional<Vec> {
    if (iters >= budget) return std::nullopt;
    Vec d = apply_shapley(g, c);
    ++iters;
    bool all_pos = true, all_nonpos = true, constant = true;
    Vec diff(n);
    for (int i = 0; i < n; ++i) {
      diff[i] = Rat(d[i] - c[i]);
      if (!(diff[i] > 0)) all_pos = false;
      if (!(diff[i] <= 0)) all_nonpos = false;
      if (diff[i] != diff[0]) constant = false;
    }
    bt.feed(vec_min(diff), vec_max(diff));
    if (all_pos || all_nonpos) {
      GameCertificate cert;
      cert.c = c;
      if (constant) {
        cert.kind = GameCertificate::Eigenpair;
        cert.rho = diff[0];
      } else {
        cert.kind = all_pos ? GameCertificate::StrictSuper : GameCertificate::Sub;
      }
      DecideResult r;
      r.verdict = all_pos ? DecideResult::Positive : DecideResult::NonPositive;
      r.cert = cert;
      found = r;
    }
    return d;
  };

  // Exact phase: the raw orbit feeds the k-step sandwich; the damped orbit
  // (with denominator caps to stop coefficient blow-up) hunts for
  // certificates that the raw orbit oscillates around.
  const long exact_budget = std::clamp(200000L / (g.size() + 1), 4L, 300L);
  Vec kle(n, Rat(0)), avg(n, Rat(0));
  for (long k = 1; k <= exact_budget && !found && iters + 2 <= budget; ++k) {
    auto d1 = test(kle);
    if (found || !d1) break;
    kle = std::move(*d1);
    bt.feed(Rat(vec_min(kle) / k), Rat(vec_max(kle) / k));
    auto d2 = test(avg);
    if (found || !d2) break;
    unsigned long cap = 1UL << std::min<long>(k + 4, 48);
    for (int i = 0; i < n; ++i)
      avg[i] = round_denominator(Rat(Rat(avg[i] + (*d2)[i]) / 2), cap);
  }

  // Floating phase: damped iteration in doubles; candidates are rounded by
  // continued fractions at escalating denominator caps and then tested
  // exactly, so precision loss can only cost completeness, never soundness.
  if (!found && opts.round_and_verify && iters + 1 <= budget) {
    FloatGame fg = FloatGame::of(g);
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = avg[i].get_d();
    Vec last_cand;
    long next_check = 8;
    for (long k = 1; iters + 1 <= budget && !found; ++k) {
      std::vector<double> d = fg.apply(x);
      for (int i = 0; i < n; ++i) x[i] = 0.5 * (x[i] + d[i]);
      ++iters;
      if (k != next_check && iters + 1 <= budget) continue;
      next_check *= 2;
      double xmin = *std::min_element(x.begin(), x.end());
      for (unsigned long cap : {1UL, 16UL, 1024UL, 1000000UL, 1000000000UL,
                                1000000000000UL}) {
        Vec cand(n);
        for (int i = 0; i < n; ++i) cand[i] = rat_from_double(x[i] - xmin, cap);
        if (cand == last_cand) continue;
        last_cand = cand;
        test(cand);
        if (found || iters >= budget) break;
      }
    }
  }

  if (!bt.have && iters < budget) test(Vec(n, Rat(0)));

  DecideResult out;
  if (found) out = *found;
  out.bounds = {bt.lo, bt.hi};
  out.iterations = iters;
  return out;
}

Vec solve_linear(std::vector<Vec> a, Vec b) {
  const std::size_t n = b.size();
  if (a.size() != n) throw std::invalid_argument("solve_linear: shape mismatch");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) throw std::domain_error("solve_linear: singular matrix");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || a[row][col] == 0) continue;
      Rat factor = Rat(a[row][col] / a[col][col]);
      for (std::size_t j = col; j < n; ++j) a[row][j] -= Rat(factor * a[col][j]);
      b[row] -= Rat(factor * b[col]);
    }
  }
  Vec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = Rat(b[i] / a[i][i]);
  return x;
}

namespace {

// Strongly connected components on the positive-probability support graph
// (iterative Tarjan); comps are labeled in some order, returned per state.
std::vector<int> scc_labels(const std::vector<std::vector<Rat>>& p, int& comp_count) {
  const int n = static_cast<int>(p.size());
  std::vector<int> index(n, -1), low(n, 0), label(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  int next_index = 0;
  comp_count = 0;
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    // frame: (state, next neighbour to try)
    std::vector<std::pair<int, int>> frames{{root, 0}};
    while (!frames.empty()) {
      auto& [v, nxt] = frames.back();
      if (nxt == 0) {
        index[v] = low[v] = next_index++;
        stack.push_back(v);
        on_stack[v] = true;
      }
      bool descended = false;
      while (nxt < n) {
        int w = nxt++;
        if (p[v][w] == 0) continue;
        if (index[w] == -1) {
          frames.emplace_back(w, 0);
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
      }
      if (descended) continue;
      if (low[v] == index[v]) {
        while (true) {
          int w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          label[w] = comp_count;
          if (w == v) break;
        }
        ++comp_count;
      }
      int child = v;
      frames.pop_back();
      if (!frames.empty()) {
        int parent = frames.back().first;
        low[parent] = std::min(low[parent], low[child]);
      }
    }
  }
  return label;
}

}  // namespace

Vec markov_chain_gain(const std::vector<std::vector<Rat>>& p, const Vec& r) {
  const int n = static_cast<int>(p.size());
  int comp_count = 0;
  std::vector<int> label = scc_labels(p, comp_count);

  // A component is recurrent iff no positive transition leaves it.
  std::vector<bool> recurrent(comp_count, true);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (p[i][j] > 0 && label[j] != label[i]) recurrent[label[i]] = false;

  Vec gain(n, Rat(0));
  std::vector<bool> known(n, false);
  for (int c = 0; c < comp_count; ++c) {
    if (!recurrent[c]) continue;
    std::vector<int> states;
    for (int i = 0; i < n; ++i)
      if (label[i] == c) states.push_back(i);
    const std::size_t m = states.size();
    // Stationary distribution: m-1 balance equations plus normalization.
    std::vector<Vec> a(m, Vec(m, Rat(0)));
    Vec b(m, Rat(0));
    for (std::size_t jj = 0; jj + 1 < m; ++jj)
      for (std::size_t ii = 0; ii < m; ++ii) {
        a[jj][ii] = p[states[ii]][states[jj]];
        if (ii == jj) a[jj][ii] -= 1;
      }
    for (std::size_t ii = 0; ii < m; ++ii) a[m - 1][ii] = 1;
    b[m - 1] = 1;
    Vec pi = solve_linear(std::move(a), std::move(b));
    Rat g(0);
    for (std::size_t ii = 0; ii < m; ++ii) g += Rat(pi[ii] * r[states[ii]]);
    for (int s : states) {
      gain[s] = g;
      known[s] = true;
    }
  }

  // Transient states: gain is the reachability-weighted mix of class gains.
  std::vector<int> transient;
  for (int i = 0; i < n; ++i)
    if (!known[i]) transient.push_back(i);
  if (!transient.empty()) {
    const std::size_t m = transient.size();
    std::vector<Vec> a(m, Vec(m, Rat(0)));
    Vec b(m, Rat(0));
    for (std::size_t ii = 0; ii < m; ++ii) {
      for (std::size_t jj = 0; jj < m; ++jj) {
        a[ii][jj] = Rat(-p[transient[ii]][transient[jj]]);
        if (ii == jj) a[ii][jj] += 1;
      }
      for (int j = 0; j < n; ++j)
        if (known[j]) b[ii] += Rat(p[transient[ii]][j] * gain[j]);
    }
    Vec x = solve_linear(std::move(a), std::move(b));
    for (std::size_t ii = 0; ii < m; ++ii) gain[transient[ii]] = x[ii];
  }
  return gain;
}

namespace {

// Odometer over a mixed-radix strategy space.
bool advance(std::vector<int>& idx, const std::vector<int>& radix) {
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (++idx[i] < radix[i]) return true;
    idx[i] = 0;
  }
  return false;
}

// Per-state minimum over MIN replies of the chain gain, for a fixed MAX
// strategy sigma.
Vec best_reply_gains(const StochGame& g, const std::vector<int>& sigma) {
  const int n = g.num_states();
  std::vector<int> radix(n), tau(n, 0);
  for (int i = 0; i < n; ++i)
    radix[i] = static_cast<int>(g.acts[i][sigma[i]].mins.size());
  Vec best;
  bool have = false;
  do {
    std::vector<std::vector<Rat>> p(n, std::vector<Rat>(n, Rat(0)));
    Vec r(n);
    for (int i = 0; i < n; ++i) {
      const StochGame::MinAct& b = g.acts[i][sigma[i]].mins[tau[i]];
      r[i] = b.payoff;
      for (const auto& [s, prob] : b.trans) p[i][s] += prob;
    }
    Vec gain = markov_chain_gain(p, r);
    if (!have) {
      best = std::move(gain);
      have = true;
    } else {
      for (int i = 0; i < n; ++i)
        if (gain[i] < best[i]) best[i] = gain[i];
    }
  } while (advance(tau, radix));
  return best;
}

long strategy_space_size(const StochGame& g) {
  double pairs = 1;
  for (const auto& state_acts : g.acts) {
    double replies = 0;
    for (const StochGame::MaxAct& a : state_acts) replies += static_cast<double>(a.mins.size());
    pairs *= replies;
    if (pairs > 1e6) return -1;
  }
  return static_cast<long>(pairs);
}

}  // namespace

Vec brute_force_mean_payoff_serial(const StochGame& g) {
  if (strategy_space_size(g) < 0)
    throw std::invalid_argument("strategy space exceeds the enumeration cap");
  const int n = g.num_states();
  std::vector<int> radix(n), sigma(n, 0);
  for (int i = 0; i < n; ++i) radix[i] = static_cast<int>(g.acts[i].size());
  Vec best;
  bool have = false;
  do {
    Vec gains = best_reply_gains(g, sigma);
    if (!have) {
      best = std::move(gains);
      have = true;
    } else {
      for (int i = 0; i < n; ++i)
        if (best[i] < gains[i]) best[i] = gains[i];
    }
  } while (advance(sigma, radix));
  return best;
}

Vec brute_force_mean_payoff(const StochGame& g) {
  if (strategy_space_size(g) < 0)
    throw std::invalid_argument("strategy space exceeds the enumeration cap");
  const int n = g.num_states();
  long total_sigma = 1;
  for (int i = 0; i < n; ++i) total_sigma *= static_cast<long>(g.acts[i].size());
  Vec best;
  bool have = false;
#pragma omp parallel
  {
    Vec local_best;
    bool local_have = false;
#pragma omp for schedule(dynamic, 8)
    for (long id = 0; id < total_sigma; ++id) {
      std::vector<int> sigma(n);
      long rest = id;
      for (int i = 0; i < n; ++i) {
        sigma[i] = static_cast<int>(rest % g.acts[i].size());
        rest /= static_cast<long>(g.acts[i].size());
      }
      Vec gains = best_reply_gains(g, sigma);
      if (!local_have) {
        local_best = std::move(gains);
        local_have = true;
      } else {
        for (int i = 0; i < n; ++i)
          if (local_best[i] < gains[i]) local_best[i] = gains[i];
      }
    }
#pragma omp critical
    {
      if (local_have) {
        if (!have) {
          best = std::move(local_best);
          have = true;
        } else {
          for (int i = 0; i < n; ++i)
            if (best[i] < local_best[i]) best[i] = local_best[i];
        }
      }
    }
  }
  return best;
}

}  // namespace tropgraph
