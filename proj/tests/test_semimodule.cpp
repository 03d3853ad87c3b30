#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "tropgraph/semimodule.hpp"

using namespace tropgraph;

namespace {

Semimodule zero_and_x() {
  Semimodule m;
  m.graph = make_graph({"u", "v"}, {{"e", {0, 1}, Rat(1)}}, "u");
  TropFunction zero, x;
  zero.name = "zero";
  zero.edges[0] = constant_profile(Rat(1), Rat(0));
  x.name = "x";
  x.edges[0] = affine_profile(Rat(1), 1, Rat(0));
  m.gens = {zero, x};
  validate_semimodule(m);
  return m;
}

}  // namespace

TEST_CASE("combine folds shifted minima") {
  Semimodule m = zero_and_x();
  TropFunction f = combine(m, {Trop(Rat(0)), Trop(rat(-1, 2))});  // min(0, x - 1/2)
  CHECK(evaluate(m.graph, f, PointRef::at_vertex(0)) == Trop(rat(-1, 2)));
  CHECK(evaluate(m.graph, f, PointRef::at_vertex(1)) == Trop(Rat(0)));
  CHECK(f.edges[0].breaks == std::vector<Rat>{Rat(0), rat(1, 2), Rat(1)});

  TropFunction g = combine(m, {Trop::infinity(), Trop(Rat(1))});  // drop a generator
  CHECK(g.edges[0].slopes == std::vector<long>{1});
  CHECK(combine(m, {Trop::infinity(), Trop::infinity()}).is_infinite());
  CHECK_THROWS_AS(combine(m, {Trop(Rat(0))}), std::invalid_argument);
}

TEST_CASE("evaluation matrix, parallel agrees with serial") {
  Semimodule m = zero_and_x();
  std::vector<PointRef> pts{PointRef::at_vertex(0), PointRef::at_vertex(1),
                            PointRef::interior(0, rat(1, 3))};
  EvalMatrix a = evaluation_matrix(m, pts);
  EvalMatrix b = evaluation_matrix_serial(m, pts);
  REQUIRE(a.rows.size() == 3);
  CHECK(a.rows == b.rows);
  CHECK(a.rows[0] == std::vector<Rat>{Rat(0), Rat(0)});
  CHECK(a.rows[1] == std::vector<Rat>{Rat(0), Rat(1)});
  CHECK(a.rows[2] == std::vector<Rat>{Rat(0), rat(1, 3)});
}

TEST_CASE("section reconstructs combinations from their values") {
  Semimodule m = zero_and_x();
  std::vector<PointRef> pts{PointRef::at_vertex(0), PointRef::at_vertex(1)};

  // Values (0, 0) come from the combination min(0, anything high): the
  // section yields coefficients (0, 0) and the constant 0.
  SectionResult s = section_rho(m, pts, {Rat(0), Rat(0)});
  CHECK(s.coeffs == std::vector<Rat>{Rat(0), Rat(0)});
  CHECK(s.fn.edges[0].slopes == std::vector<long>{0});
  CHECK(s.fn.edges[0].start_value == Rat(0));

  // Restriction of min(0, x - 1/2): recovered exactly at its sample points.
  std::vector<Trop> cs{Trop(Rat(0)), Trop(rat(-1, 2))};
  TropFunction f = combine(m, cs);
  std::vector<Rat> vals{evaluate(m.graph, f, pts[0]).value(),
                        evaluate(m.graph, f, pts[1]).value()};
  SectionResult s2 = section_rho(m, pts, vals);
  CHECK(evaluate(m.graph, s2.fn, pts[0]).value() == vals[0]);
  CHECK(evaluate(m.graph, s2.fn, pts[1]).value() == vals[1]);
}

TEST_CASE("slope profile and rank lower bound") {
  Semimodule m = zero_and_x();
  TropFunction x2;
  x2.name = "2x";
  x2.edges[0] = affine_profile(Rat(1), 2, Rat(0));
  m.gens.push_back(x2);
  validate_semimodule(m);
  SlopeProfile sp = slope_profile(m);
  REQUIRE(sp.pieces.size() == 1);
  CHECK(sp.pieces[0].slopes == std::set<long>{0, 1, 2});
  CHECK(rank_lower_bound_slopes(m) == 3);
  CHECK_FALSE(sp.two_slope());
  CHECK(!two_slope_points(m).has_value());
}

TEST_CASE("two-slope point set is the refined vertex set") {
  Semimodule m = zero_and_x();
  auto pts = two_slope_points(m);
  REQUIRE(pts.has_value());
  CHECK(*pts == std::vector<PointRef>{PointRef::at_vertex(0), PointRef::at_vertex(1)});

  // A generator with a break at 1/3 adds a cut point.
  EdgeProfile bent;
  bent.breaks = {Rat(0), rat(1, 3), Rat(1)};
  bent.slopes = {1, 0};
  bent.start_value = Rat(0);
  TropFunction b;
  b.name = "bent";
  b.edges[0] = bent;
  m.gens = {m.gens[0], b};
  validate_semimodule(m);
  auto pts2 = two_slope_points(m);
  REQUIRE(pts2.has_value());
  REQUIRE(pts2->size() == 3);
  CHECK((*pts2)[2] == PointRef::interior(0, rat(1, 3)));
}

TEST_CASE("edgeless graph degenerates gracefully") {
  Semimodule m;
  m.graph = make_graph({"a", "b"}, {}, "a");
  TropFunction f;
  f.isolated[0] = Rat(1);
  f.isolated[1] = Rat(2);
  m.gens = {f};
  validate_semimodule(m);
  CHECK(rank_lower_bound_slopes(m) == 1);
  auto pts = two_slope_points(m);
  REQUIRE(pts.has_value());
  CHECK(pts->size() == 2);
  EvalMatrix ev = evaluation_matrix(m, *pts);
  CHECK(ev.rows[0][0] == Rat(1));
  CHECK(ev.rows[1][0] == Rat(2));
}
