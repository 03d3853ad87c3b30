// Timing harness for the OpenMP kernels against their serial references:
// the one-step game operator, exact strategy enumeration, tropical matrix
// rank, and evaluation matrices.  Every pair is checked for equal results
// before its timings are reported.  Usage: tropgraph_bench [scale]
// (scale >= 1 grows the instances; default 1).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "testutil.hpp"
#include "tropgraph/independence.hpp"

using namespace tropgraph;

namespace {

double time_ms(const std::function<void()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  body();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* kernel, const std::string& size, double serial_ms,
            double parallel_ms, bool agree) {
  std::printf("%-22s %-28s %10.1f ms %10.1f ms   x%-5.2f %s\n", kernel,
              size.c_str(), serial_ms, parallel_ms,
              parallel_ms > 0 ? serial_ms / parallel_ms : 0.0,
              agree ? "results agree" : "MISMATCH");
}

// A dense game: every state has `acts` actions of `replies` replies, each
// reply moving to three pseudo-random states.
StochGame dense_game(testutil::Rng& rng, int states, int acts, int replies) {
  StochGame g;
  for (int i = 0; i < states; ++i) g.states.push_back("s" + std::to_string(i));
  g.acts.resize(states);
  for (int i = 0; i < states; ++i)
    for (int a = 0; a < acts; ++a) {
      StochGame::MaxAct ma;
      ma.name = "a" + std::to_string(a);
      for (int r = 0; r < replies; ++r) {
        StochGame::MinAct mi;
        mi.name = "r" + std::to_string(r);
        mi.payoff = rng.q(6, 8);
        int t1 = static_cast<int>(rng.i(0, states - 1));
        int t2 = static_cast<int>(rng.i(0, states - 1));
        if (t1 == t2) {
          mi.trans = {{t1, rat(1)}};
        } else {
          mi.trans = {{t1, rat(1, 2)}, {t2, rat(1, 2)}};
        }
        ma.mins.push_back(std::move(mi));
      }
      g.acts[i].push_back(std::move(ma));
    }
  validate_game(g);
  return g;
}

}  // namespace

int main(int argc, char** argv) {
  double scale = 1.0;
  if (argc > 1) {
    scale = std::atof(argv[1]);
    if (scale < 1.0) {
      std::fprintf(stderr, "usage: %s [scale >= 1]\n", argv[0]);
      return 1;
    }
  }
  testutil::Rng rng(2026);
  std::printf("%-22s %-28s %13s %13s   %-6s\n", "kernel", "size", "serial",
              "parallel", "speedup");

  {
    int states = static_cast<int>(1500 * scale);
    StochGame g = dense_game(rng, states, 4, 6);
    Vec c(states);
    for (int i = 0; i < states; ++i) c[i] = rng.q(4, 6);
    Vec a, b;
    double ts = time_ms([&] { a = apply_shapley_serial(g, c); });
    double tp = time_ms([&] { b = apply_shapley(g, c); });
    report("apply_shapley", std::to_string(g.size()) + " triples", ts, tp, a == b);
  }

  {
    int states = static_cast<int>(6 * scale);
    StochGame g = dense_game(rng, states, 1, 5);
    Vec a, b;
    double ts = time_ms([&] { a = brute_force_mean_payoff_serial(g); });
    double tp = time_ms([&] { b = brute_force_mean_payoff(g); });
    report("brute_force", std::to_string(states) + " states, 5^n strategies",
           ts, tp, a == b);
  }

  {
    int cols = static_cast<int>(13 * scale);
    TropMatrix m(8, std::vector<Trop>(cols));
    for (auto& row : m)
      for (auto& x : row) x = Trop(rat(rng.i(0, 1)));
    int ra = 0, rb = 0;
    double ts = time_ms([&] { ra = dss_matrix_rank_serial(m); });
    double tp = time_ms([&] { rb = dss_matrix_rank(m); });
    report("dss_matrix_rank", "8 x " + std::to_string(cols) + " 0/1 entries",
           ts, tp, ra == rb);
  }

  {
    Semimodule m;
    m.graph = testutil::random_graph(rng, 6, 8);
    int gens = static_cast<int>(24 * scale);
    for (int i = 0; i < gens; ++i)
      m.gens.push_back(
          testutil::random_total_function(rng, m.graph, "f" + std::to_string(i)));
    validate_semimodule(m);
    std::vector<PointRef> pts;
    for (int v = 0; v < m.graph.num_vertices(); ++v)
      pts.push_back(PointRef::at_vertex(v));
    for (int e = 0; e < m.graph.num_edges(); ++e)
      for (int k = 1; k <= 400; ++k) {
        Rat off = Rat(m.graph.edges[e].length * rat(k, 401));
        pts.push_back(PointRef::interior(e, off));
      }
    EvalMatrix a, b;
    double ts = time_ms([&] { a = evaluation_matrix_serial(m, pts); });
    double tp = time_ms([&] { b = evaluation_matrix(m, pts); });
    report("evaluation_matrix",
           std::to_string(gens) + " gens x " + std::to_string(pts.size()) + " pts",
           ts, tp, a.rows == b.rows);
  }
  return 0;
}
