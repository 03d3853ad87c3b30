#include "tropgraph/independence.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <set>

namespace tropgraph {

SupMinResult sup_min_on_interval(const std::vector<MinTerm>& terms, const Rat& u,
                                 const Rat& v) {
  if (terms.empty()) throw std::invalid_argument("sup_min_on_interval: no terms");
  if (u > v) throw std::invalid_argument("sup_min_on_interval: u > v");
  const int n = static_cast<int>(terms.size());

  bool have = false;
  Rat val;
  auto fold = [&](const Rat& x) {
    if (!have || x < val) {
      val = x;
      have = true;
    }
  };
  for (int j = 0; j < n; ++j)
    if (terms[j].gamma <= 0) fold(Rat(terms[j].gamma * u + terms[j].d));
  for (int j = 0; j < n; ++j)
    if (terms[j].gamma >= 0) fold(Rat(terms[j].gamma * v + terms[j].d));
  for (int j = 0; j < n; ++j) {
    if (terms[j].gamma < 0) continue;
    for (int k = 0; k < n; ++k) {
      if (terms[k].gamma > 0 || terms[j].gamma <= terms[k].gamma) continue;
      Rat denom = Rat(terms[j].gamma - terms[k].gamma);
      fold(Rat((-terms[k].gamma * terms[j].d + terms[j].gamma * terms[k].d) / denom));
    }
  }

  // The envelope (a concave PL function) attains its supremum at u, at v, or
  // at an in-range crossing of an opposite-slope pair, but a candidate whose
  // own group value equals the supremum can still be undercut there by a term
  // from the other group, so each one is checked against the full minimum.
  auto envelope = [&](const Rat& x) {
    Rat m = Rat(terms[0].gamma * x + terms[0].d);
    for (int j = 1; j < n; ++j) m = rat_min(m, Rat(terms[j].gamma * x + terms[j].d));
    return m;
  };

  SupMinResult res;
  res.value = val;
  // Witness preference: crossings, then the left endpoint, then the right.
  for (int j = 0; j < n; ++j) {
    if (terms[j].gamma < 0) continue;
    for (int k = 0; k < n; ++k) {
      if (terms[k].gamma > 0 || terms[j].gamma <= terms[k].gamma) continue;
      Rat denom = Rat(terms[j].gamma - terms[k].gamma);
      Rat cv = Rat((-terms[k].gamma * terms[j].d + terms[j].gamma * terms[k].d) / denom);
      if (cv != val) continue;
      Rat x = rat_min(rat_max(Rat((terms[k].d - terms[j].d) / denom), u), v);
      if (envelope(x) != val) continue;
      res.argmax = x;
      res.kind = 2;
      res.j = j;
      res.k = k;
      return res;
    }
  }
  for (int j = 0; j < n; ++j) {
    if (terms[j].gamma > 0) continue;
    if (Rat(terms[j].gamma * u + terms[j].d) != val || envelope(u) != val) continue;
    res.argmax = u;
    res.kind = 0;
    res.j = j;
    return res;
  }
  for (int j = 0; j < n; ++j) {
    if (terms[j].gamma < 0) continue;
    if (Rat(terms[j].gamma * v + terms[j].d) != val || envelope(v) != val) continue;
    res.argmax = v;
    res.kind = 1;
    res.j = j;
    return res;
  }
  throw std::logic_error("sup_min_on_interval: no achieving term");
}

namespace {

uint64_t mix64(uint64_t& s) {
  s += 0x9e3779b97f4a7c15ULL;
  uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Relative affine terms of segment sg seen from family member i: for each
// j != i, gamma_j = slope_j - slope_i and d_j = intercept_j - intercept_i
// (plus c_j when given).  idx maps term position back to the family index.
std::vector<MinTerm> state_terms(const Segment& sg, int i, const std::vector<Rat>* c,
                                 std::vector<int>* idx) {
  const int n = static_cast<int>(sg.fns.size());
  std::vector<MinTerm> terms;
  terms.reserve(n - 1);
  if (idx) idx->clear();
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    MinTerm t;
    t.gamma = Rat(sg.fns[j].slope - sg.fns[i].slope);
    t.d = Rat(sg.fns[j].intercept - sg.fns[i].intercept);
    if (c) t.d += (*c)[j];
    terms.push_back(t);
    if (idx) idx->push_back(j);
  }
  return terms;
}

Rat reply_minimum(const StochGame::MaxAct& a, const std::vector<Rat>& c) {
  bool first = true;
  Rat best;
  for (const StochGame::MinAct& b : a.mins) {
    Rat w = b.payoff;
    for (const auto& [s, p] : b.trans) w += Rat(p * c[s]);
    if (first || w < best) {
      best = w;
      first = false;
    }
  }
  return best;
}

}  // namespace

GameBuild build_game(const Semimodule& m0) {
  Semimodule m = m0;
  validate_semimodule(m);
  GraphReport rep = validate_graph(m.graph);
  if (!rep.ok)
    throw std::invalid_argument("invalid graph: " +
                                (rep.errors.empty() ? std::string("?") : rep.errors[0]));
  if (!rep.connected) throw std::invalid_argument("the graph must be connected");
  const int n = static_cast<int>(m.gens.size());
  if (n < 2) throw std::invalid_argument("need at least two functions");

  GameBuild gb;
  gb.segments = common_refinement(m.graph, m.gens);

  std::set<std::string> uniq;
  bool named = true;
  for (const TropFunction& f : m.gens)
    if (f.name.empty() || !uniq.insert(f.name).second) named = false;
  gb.game.states.resize(n);
  for (int i = 0; i < n; ++i)
    gb.game.states[i] = named ? m.gens[i].name : "f" + std::to_string(i + 1);

  gb.game.acts.resize(n);
  gb.info.resize(n);
  for (int i = 0; i < n; ++i) {
    gb.game.acts[i].reserve(gb.segments.size());
    gb.info[i].reserve(gb.segments.size());
    for (std::size_t al = 0; al < gb.segments.size(); ++al) {
      const Segment& sg = gb.segments[al];
      for (const SegmentFn& fn : sg.fns)
        if (!fn.finite) throw std::invalid_argument("need total functions");
      StochGame::MaxAct a;
      a.name = "seg" + std::to_string(al);
      std::vector<GameBuild::MinInfo> infos;
      const Rat& u = sg.a;
      const Rat& v = sg.b;
      auto rel = [&](int j) {
        return std::pair<long, Rat>(sg.fns[j].slope - sg.fns[i].slope,
                                    Rat(sg.fns[j].intercept - sg.fns[i].intercept));
      };
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        auto [gj, dj] = rel(j);
        if (gj > 0) continue;
        StochGame::MinAct b;
        b.name = "u" + std::to_string(j);
        b.payoff = Rat(gj * u + dj);
        b.trans = {{j, rat(1)}};
        a.mins.push_back(std::move(b));
        infos.push_back({0, j, -1});
      }
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        auto [gj, dj] = rel(j);
        if (gj < 0) continue;
        StochGame::MinAct b;
        b.name = "v" + std::to_string(j);
        b.payoff = Rat(gj * v + dj);
        b.trans = {{j, rat(1)}};
        a.mins.push_back(std::move(b));
        infos.push_back({1, j, -1});
      }
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        auto [gj, dj] = rel(j);
        if (gj < 0) continue;
        for (int k = 0; k < n; ++k) {
          if (k == i) continue;
          auto [gk, dk] = rel(k);
          if (gk > 0 || gj <= gk) continue;
          StochGame::MinAct b;
          b.name = "x" + std::to_string(j) + "_" + std::to_string(k);
          Rat pij = rat(-gk, gj - gk);
          Rat pik = rat(gj, gj - gk);
          b.payoff = Rat(pij * dj + pik * dk);
          b.trans = {{j, pij}, {k, pik}};
          a.mins.push_back(std::move(b));
          infos.push_back({2, j, k});
        }
      }
      gb.game.acts[i].push_back(std::move(a));
      gb.info[i].push_back(std::move(infos));
    }
  }
  validate_game(gb.game);

  // Construction self-check: on pseudo-random coefficient vectors, the best
  // reply value must equal the closed-form supremum for every state/segment.
  uint64_t seed = 0x7097C0DE5EEDULL;
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<Rat> c(n);
    for (int i = 0; i < n; ++i) {
      long num = static_cast<long>(mix64(seed) % 33) - 16;
      long den = static_cast<long>(mix64(seed) % 7) + 1;
      c[i] = rat(num, den);
    }
    for (int i = 0; i < n; ++i)
      for (std::size_t al = 0; al < gb.segments.size(); ++al) {
        std::vector<int> idx;
        std::vector<MinTerm> terms = state_terms(gb.segments[al], i, &c, &idx);
        SupMinResult smr =
            sup_min_on_interval(terms, gb.segments[al].a, gb.segments[al].b);
        if (reply_minimum(gb.game.acts[i][al], c) != smr.value)
          throw std::logic_error("game construction mismatch at state " +
                                 gb.game.states[i] + ", segment " + std::to_string(al));
      }
  }
  return gb;
}

std::vector<PointRef> extract_witness_points(const Semimodule& m, const GameBuild& gb,
                                             const std::vector<Rat>& c) {
  const int n = static_cast<int>(m.gens.size());
  if (static_cast<int>(c.size()) != n)
    throw std::invalid_argument("coefficient count mismatch");
  std::vector<PointRef> pts(n);
  for (int i = 0; i < n; ++i) {
    bool have = false;
    Rat best;
    SupMinResult best_res;
    const Segment* best_seg = nullptr;
    for (const Segment& sg : gb.segments) {
      std::vector<MinTerm> terms = state_terms(sg, i, &c, nullptr);
      SupMinResult res = sup_min_on_interval(terms, sg.a, sg.b);
      if (!have || res.value > best) {
        best = res.value;
        best_res = res;
        best_seg = &sg;
        have = true;
      }
    }
    if (!have) throw std::logic_error("no segments");
    PointRef p;
    if (best_seg->is_point()) {
      p.edge = -1;
      p.vertex = best_seg->vertex;
    } else {
      p = canonical_point(m.graph, best_seg->edge, best_res.argmax);
    }
    // The certificate promises strict growth, so member i must be the unique
    // minimizer of f_j + c_j at its extracted point.
    bool have_min = false;
    Trop mn;
    int arg = -1, count = 0;
    for (int j = 0; j < n; ++j) {
      Trop w = evaluate(m.graph, m.gens[j], p) + Trop(c[j]);
      if (!have_min || w < mn) {
        mn = w;
        arg = j;
        count = 1;
        have_min = true;
      } else if (w == mn) {
        ++count;
      }
    }
    if (!mn.finite() || count != 1 || arg != i)
      throw std::logic_error("witness extraction failed the uniqueness check at state " +
                             gb.game.states[i]);
    pts[i] = p;
  }
  return pts;
}

IndependenceVerdict check_independence(const Semimodule& m0, long max_iters) {
  Semimodule m = m0;
  validate_semimodule(m);
  GameBuild gb = build_game(m);
  DecideOptions dopts;
  dopts.max_iters = max_iters;
  DecideResult dr = decide_sign(gb.game, dopts);

  IndependenceVerdict v;
  v.bounds = dr.bounds;
  v.iterations = dr.iterations;
  v.cert = dr.cert;
  const int n = static_cast<int>(m.gens.size());
  switch (dr.verdict) {
    case DecideResult::Positive: {
      v.kind = IndependenceVerdict::Independent;
      v.points = extract_witness_points(m, gb, dr.cert->c);
      v.minimizers.resize(n);
      std::iota(v.minimizers.begin(), v.minimizers.end(), 0);
      break;
    }
    case DecideResult::NonPositive: {
      v.kind = IndependenceVerdict::Dependent;
      v.coefficients = dr.cert->c;
      MinTwiceResult mt = min_attained_twice(m.graph, m.gens, v.coefficients);
      if (!mt.ok)
        throw std::logic_error("dependence certificate failed the min-twice check");
      break;
    }
    case DecideResult::Unresolved:
      v.kind = IndependenceVerdict::Unresolved;
      break;
  }
  return v;
}

PermutationCheck unique_permutation_check(const Semimodule& m,
                                          const std::vector<PointRef>& points) {
  const int n = static_cast<int>(m.gens.size());
  if (n == 0) throw std::invalid_argument("empty family");
  if (static_cast<int>(points.size()) != n)
    throw std::invalid_argument("one point per family member required");
  if (n > 9) throw std::invalid_argument("factorial enumeration capped at 9 members");

  std::vector<std::vector<Trop>> val(n, std::vector<Trop>(n));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) val[k][j] = evaluate(m.graph, m.gens[j], points[k]);

  PermutationCheck pc;
  pc.min_sum = Trop::infinity();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    Trop sum(rat(0));
    for (int k = 0; k < n && sum.finite(); ++k) sum = sum + val[k][perm[k]];
    if (!sum.finite()) continue;
    if (sum < pc.min_sum) {
      pc.min_sum = sum;
      pc.count = 1;
      pc.minimizers.clear();
      pc.minimizers.push_back(perm);
    } else if (sum == pc.min_sum) {
      ++pc.count;
      if (pc.minimizers.size() < 20) pc.minimizers.push_back(perm);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  pc.unique = pc.min_sum.finite() && pc.count == 1;
  return pc;
}

namespace {

// Tropical determinant scan of the submatrix a[rows x cols]: minimum over
// permutations of the diagonal sum, with the multiplicity capped at 2.
struct PermScan {
  const TropMatrix* a;
  const std::vector<int>* rows;
  const std::vector<int>* cols;
  std::vector<Rat> suffix;  // suffix[t] = sum over rows >= t of the row minimum
  std::vector<bool> used;
  bool have = false;
  Rat best;
  int count = 0;
};

void perm_dfs(PermScan& st, int t, const Rat& partial) {
  const int r = static_cast<int>(st.rows->size());
  if (t == r) {
    if (!st.have || partial < st.best) {
      st.best = partial;
      st.have = true;
      st.count = 1;
    } else if (partial == st.best && st.count < 2) {
      ++st.count;
    }
    return;
  }
  if (st.have && Rat(partial + st.suffix[t]) > st.best) return;
  for (int ci = 0; ci < r; ++ci) {
    if (st.used[ci]) continue;
    const Trop& e = (*st.a)[(*st.rows)[t]][(*st.cols)[ci]];
    if (!e.finite()) continue;
    st.used[ci] = true;
    perm_dfs(st, t + 1, Rat(partial + e.value()));
    st.used[ci] = false;
  }
}

bool trop_nonsingular(const TropMatrix& a, const std::vector<int>& rows,
                      const std::vector<int>& cols) {
  const int r = static_cast<int>(rows.size());
  PermScan st;
  st.a = &a;
  st.rows = &rows;
  st.cols = &cols;
  st.suffix.assign(r + 1, Rat(0));
  for (int t = r - 1; t >= 0; --t) {
    bool have = false;
    Rat mn;
    for (int ci = 0; ci < r; ++ci) {
      const Trop& e = a[rows[t]][cols[ci]];
      if (!e.finite()) continue;
      if (!have || e.value() < mn) {
        mn = e.value();
        have = true;
      }
    }
    if (!have) return false;  // a fully infinite row: every permutation is infinite
    st.suffix[t] = Rat(st.suffix[t + 1] + mn);
  }
  st.used.assign(r, false);
  perm_dfs(st, 0, Rat(0));
  return st.have && st.count == 1;
}

bool next_comb(std::vector<int>& c, int m) {
  const int r = static_cast<int>(c.size());
  for (int i = r - 1; i >= 0; --i) {
    if (c[i] < m - r + i) {
      ++c[i];
      for (int j = i + 1; j < r; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

long binom(int m, int r) {
  if (r < 0 || r > m) return 0;
  long out = 1;
  for (int i = 0; i < r; ++i) {
    out = out * (m - i) / (i + 1);
    if (out > (1L << 60)) return 1L << 60;  // saturate
  }
  return out;
}

std::vector<int> unrank_comb(long idx, int m, int r) {
  std::vector<int> c(r);
  int lo = 0;
  for (int t = 0; t < r; ++t) {
    for (int v = lo;; ++v) {
      long cnt = binom(m - 1 - v, r - 1 - t);
      if (idx < cnt) {
        c[t] = v;
        lo = v + 1;
        break;
      }
      idx -= cnt;
    }
  }
  return c;
}

bool matrix_shape(const TropMatrix& a, int& m, int& n) {
  m = static_cast<int>(a.size());
  n = m == 0 ? 0 : static_cast<int>(a[0].size());
  for (const auto& row : a)
    if (static_cast<int>(row.size()) != n) return false;
  return true;
}

bool has_finite_entry(const TropMatrix& a) {
  for (const auto& row : a)
    for (const Trop& e : row)
      if (e.finite()) return true;
  return false;
}

// Largest r <= cap admitting a nonsingular r x r submatrix, scanning levels
// from the top.  Levels whose full enumeration would exceed the remaining
// budget are skipped and `complete` is cleared.
int dss_rank_search(const TropMatrix& a, int cap, long budget, bool parallel,
                    bool* complete) {
  int m = 0, n = 0;
  if (!matrix_shape(a, m, n)) throw std::invalid_argument("ragged matrix");
  *complete = true;
  if (m == 0 || n == 0) return 0;
  if (!has_finite_entry(a)) return 0;
  const int top = std::min({cap, m, n});
  for (int r = top; r >= 2; --r) {
    const long nrows = binom(m, r), ncols = binom(n, r);
    if (nrows > budget / std::max(1L, ncols)) {
      *complete = false;
      continue;
    }
    budget -= nrows * ncols;
    std::atomic<bool> found{false};
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 16)
      for (long ri = 0; ri < nrows; ++ri) {
        if (found.load(std::memory_order_relaxed)) continue;
        std::vector<int> rows = unrank_comb(ri, m, r);
        std::vector<int> cols(r);
        std::iota(cols.begin(), cols.end(), 0);
        do {
          if (trop_nonsingular(a, rows, cols)) {
            found.store(true, std::memory_order_relaxed);
            break;
          }
        } while (next_comb(cols, n));
      }
    } else {
      std::vector<int> rows(r);
      std::iota(rows.begin(), rows.end(), 0);
      do {
        std::vector<int> cols(r);
        std::iota(cols.begin(), cols.end(), 0);
        do {
          if (trop_nonsingular(a, rows, cols)) found.store(true);
        } while (!found.load() && next_comb(cols, n));
      } while (!found.load() && next_comb(rows, m));
    }
    if (found.load()) return r;
  }
  return 1;  // a finite entry exists
}

int dss_rank_exact(const TropMatrix& a, bool parallel) {
  int m = 0, n = 0;
  if (!matrix_shape(a, m, n)) throw std::invalid_argument("ragged matrix");
  if (std::min(m, n) > 8)
    throw std::invalid_argument("exact tropical rank needs min dimension <= 8");
  bool complete = true;
  int r = dss_rank_search(a, 8, 5000000, parallel, &complete);
  if (!complete)
    throw std::invalid_argument("exact tropical rank enumeration exceeds the internal cap");
  return r;
}

}  // namespace

int dss_matrix_rank(const TropMatrix& a) { return dss_rank_exact(a, true); }

int dss_matrix_rank_serial(const TropMatrix& a) { return dss_rank_exact(a, false); }

int dss_greedy_rank(const TropMatrix& a, int cap, long budget) {
  int m = 0, n = 0;
  if (!matrix_shape(a, m, n)) throw std::invalid_argument("ragged matrix");
  std::vector<int> rows, cols;
  for (int i = 0; i < m && rows.empty(); ++i)
    for (int j = 0; j < n; ++j)
      if (a[i][j].finite()) {
        rows = {i};
        cols = {j};
        break;
      }
  if (rows.empty()) return 0;
  bool grew = true;
  while (grew && static_cast<int>(rows.size()) < cap && budget > 0) {
    grew = false;
    for (int x = 0; x < m && !grew; ++x) {
      if (std::find(rows.begin(), rows.end(), x) != rows.end()) continue;
      for (int y = 0; y < n && !grew; ++y) {
        if (std::find(cols.begin(), cols.end(), y) != cols.end()) continue;
        if (--budget < 0) return static_cast<int>(rows.size());
        std::vector<int> r2 = rows, c2 = cols;
        r2.push_back(x);
        c2.push_back(y);
        std::sort(r2.begin(), r2.end());
        std::sort(c2.begin(), c2.end());
        if (trop_nonsingular(a, r2, c2)) {
          rows = std::move(r2);
          cols = std::move(c2);
          grew = true;
        }
      }
    }
  }
  return static_cast<int>(rows.size());
}

namespace {

TropMatrix to_trop_matrix(const EvalMatrix& em) {
  TropMatrix a(em.rows.size());
  for (std::size_t i = 0; i < em.rows.size(); ++i) {
    a[i].reserve(em.rows[i].size());
    for (const Rat& q : em.rows[i]) a[i].emplace_back(q);
  }
  return a;
}

// Evenly spaced deterministic subsample keeping the point list small.
std::vector<PointRef> cap_points(std::vector<PointRef> pts, std::size_t cap) {
  if (pts.size() <= cap) return pts;
  std::vector<PointRef> out;
  out.reserve(cap);
  for (std::size_t t = 0; t < cap; ++t) out.push_back(pts[t * pts.size() / cap]);
  return out;
}

}  // namespace

TroprankResult troprank(const Semimodule& m0, const TroprankOptions& opts) {
  Semimodule m = m0;
  validate_semimodule(m);
  TroprankResult res;
  const int n = static_cast<int>(m.gens.size());
  res.hi = n;
  if (n == 0) {
    res.exact = true;
    res.evidence.push_back("no generators");
    return res;
  }
  if (n == 1) {
    res.exact = true;
    res.lo = res.hi = 1;
    res.evidence.push_back("a single total function is independent");
    return res;
  }

  int lo = 1;

  // Faithful-evaluation path: with at most two distinct slopes per refined
  // piece, combinations are determined by their values on the refined vertex
  // set, so the matrix rank there is the module rank.
  if (auto pts = two_slope_points(m)) {
    EvalMatrix em = evaluation_matrix(m, *pts);
    TropMatrix a = to_trop_matrix(em);
    const int rows = static_cast<int>(a.size());
    if (std::min(rows, n) <= 8) {
      bool complete = true;
      int r = dss_rank_search(a, 8, opts.dss_budget, true, &complete);
      if (complete) {
        res.exact = true;
        res.lo = res.hi = r;
        res.evidence.push_back("two-slope family: evaluation at " +
                               std::to_string(rows) + " points is faithful; matrix rank " +
                               std::to_string(r));
        return res;
      }
      lo = std::max(lo, r);
      res.evidence.push_back("two-slope matrix search truncated by budget: rank >= " +
                             std::to_string(r));
    } else {
      res.evidence.push_back("two-slope evaluation matrix too large for the exact search");
    }
  }

  int sb = rank_lower_bound_slopes(m);
  if (sb > 1) res.evidence.push_back("distinct slopes on one piece: rank >= " + std::to_string(sb));
  lo = std::max(lo, sb);

  // Escalating evaluation point sets; each matrix rank is a lower bound.
  std::vector<Segment> segs = common_refinement(m.graph, m.gens);
  std::set<PointRef> pset;
  for (int vtx = 0; vtx < static_cast<int>(m.graph.vertices.size()); ++vtx) {
    PointRef p;
    p.vertex = vtx;
    pset.insert(p);
  }
  std::vector<std::pair<std::string, std::vector<PointRef>>> levels;
  levels.emplace_back("vertices", std::vector<PointRef>(pset.begin(), pset.end()));
  for (const Segment& sg : segs) {
    if (sg.is_point()) continue;
    pset.insert(canonical_point(m.graph, sg.edge, sg.a));
    pset.insert(canonical_point(m.graph, sg.edge, sg.b));
  }
  levels.emplace_back("breakpoints", std::vector<PointRef>(pset.begin(), pset.end()));
  std::vector<std::pair<int, std::pair<Rat, Rat>>> pieces;
  for (const Segment& sg : segs)
    if (!sg.is_point() && sg.a != sg.b) pieces.emplace_back(sg.edge, std::make_pair(sg.a, sg.b));
  for (int lvl = 1; lvl <= opts.refine_levels; ++lvl) {
    std::vector<std::pair<int, std::pair<Rat, Rat>>> next;
    for (const auto& [e, ab] : pieces) {
      Rat mid = Rat((ab.first + ab.second) / 2);
      pset.insert(canonical_point(m.graph, e, mid));
      next.emplace_back(e, std::make_pair(ab.first, mid));
      next.emplace_back(e, std::make_pair(mid, ab.second));
    }
    pieces = std::move(next);
    levels.emplace_back("midpoints x" + std::to_string(lvl),
                        std::vector<PointRef>(pset.begin(), pset.end()));
  }
  long level_budget = std::max(1L, opts.dss_budget / static_cast<long>(levels.size()));
  for (auto& [label, pts] : levels) {
    if (lo >= res.hi) break;
    std::vector<PointRef> capped = cap_points(std::move(pts), 48);
    if (capped.empty()) continue;
    EvalMatrix em = evaluation_matrix(m, capped);
    int r = dss_greedy_rank(to_trop_matrix(em), std::min(8, n), level_budget);
    if (r > lo) {
      lo = r;
      res.evidence.push_back("evaluation at " + std::to_string(capped.size()) + " points (" +
                             label + "): rank >= " + std::to_string(r));
    }
  }

  // Game-certified independent subfamilies.
  if (n <= opts.subfamily_cap && validate_graph(m.graph).connected) {
    long checks = 24;
    for (int s = n; s > std::max(lo, 1) && checks > 0; --s) {
      std::vector<int> sel(s);
      std::iota(sel.begin(), sel.end(), 0);
      bool found = false;
      do {
        if (--checks < 0) break;
        Semimodule sub;
        sub.graph = m.graph;
        for (int i : sel) sub.gens.push_back(m.gens[i]);
        IndependenceVerdict v = check_independence(sub, opts.game_iters);
        if (v.kind == IndependenceVerdict::Independent) {
          std::string names;
          for (int i : sel) names += (names.empty() ? "" : ", ") + m.gens[i].name;
          res.evidence.push_back("independent subfamily of size " + std::to_string(s) +
                                 " {" + names + "}");
          lo = std::max(lo, s);
          found = true;
          break;
        }
      } while (next_comb(sel, n));
      if (found) break;
    }
  }

  res.lo = lo;
  res.exact = (res.lo == res.hi);
  if (res.exact)
    res.evidence.push_back("bounds meet: rank " + std::to_string(res.lo));
  return res;
}

}  // namespace tropgraph
