#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "tropgraph/pl_function.hpp"

using namespace tropgraph;

namespace {

MetricGraph segment_graph(const Rat& len) {
  return make_graph({"u", "v"}, {{"e", {0, 1}, len}}, "u");
}

TropFunction on_edge(const MetricGraph& g, EdgeProfile p, const std::string& name = "f") {
  TropFunction f;
  f.name = name;
  f.edges[0] = std::move(p);
  validate_function(g, f);
  return f;
}

}  // namespace

TEST_CASE("profile evaluation and canonicalization") {
  EdgeProfile p;
  p.breaks = {Rat(0), rat(1, 2), Rat(1), Rat(2)};
  p.slopes = {1, 1, -2};
  p.start_value = Rat(3);
  CHECK(p.value_at(Rat(0)) == Rat(3));
  CHECK(p.value_at(rat(3, 4)) == rat(15, 4));
  CHECK(p.value_at(Rat(1)) == Rat(4));
  CHECK(p.end_value() == Rat(2));
  CHECK(p.slope_left_of(Rat(1)) == 1);
  CHECK(p.slope_right_of(Rat(1)) == -2);
  p.canonicalize();
  CHECK(p.breaks == std::vector<Rat>{Rat(0), Rat(1), Rat(2)});
  CHECK(p.slopes == std::vector<long>{1, -2});
}

TEST_CASE("function validation") {
  MetricGraph g = segment_graph(Rat(1));
  TropFunction f;
  f.edges[0] = affine_profile(rat(1, 2), 1, Rat(0));  // does not span the edge
  CHECK_THROWS_AS(validate_function(g, f), std::invalid_argument);

  MetricGraph tri = make_graph({"a", "b", "c"},
                               {{"ab", {0, 1}, Rat(1)}, {"bc", {1, 2}, Rat(1)}}, "a");
  TropFunction h;
  h.edges[0] = affine_profile(Rat(1), 1, Rat(0));  // value 1 at b
  h.edges[1] = affine_profile(Rat(1), 0, Rat(5));  // value 5 at b: conflict
  CHECK_THROWS_AS(validate_function(tri, h), std::invalid_argument);

  // Isolated entry covered by an edge is merged away if consistent.
  TropFunction k;
  k.edges[0] = affine_profile(Rat(1), 1, Rat(0));
  k.edges[1] = affine_profile(Rat(1), 0, Rat(1));
  k.isolated[2] = Rat(1);
  validate_function(tri, k);
  CHECK(k.isolated.empty());
  CHECK(is_total(tri, k));
}

TEST_CASE("evaluation on and off the support") {
  MetricGraph g = make_graph({"u", "v", "w"}, {{"e", {0, 1}, Rat(1)}}, "u");
  TropFunction f;
  f.edges[0] = affine_profile(Rat(1), 2, Rat(1));
  f.isolated[2] = rat(-1, 3);
  validate_function(g, f);
  CHECK(evaluate(g, f, PointRef::at_vertex(0)) == Trop(Rat(1)));
  CHECK(evaluate(g, f, PointRef::at_vertex(1)) == Trop(Rat(3)));
  CHECK(evaluate(g, f, PointRef::interior(0, rat(1, 4))) == Trop(rat(3, 2)));
  CHECK(evaluate(g, f, PointRef::at_vertex(2)) == Trop(rat(-1, 3)));
  CHECK(is_total(g, f));  // edge supported and the edgeless vertex has a value
  f.isolated.erase(2);
  CHECK_FALSE(is_total(g, f));
  CHECK(evaluate(g, f, PointRef::at_vertex(2)) == Trop::infinity());
}

TEST_CASE("tropical minimum of total functions") {
  MetricGraph g = segment_graph(Rat(1));
  TropFunction zero = on_edge(g, constant_profile(Rat(1), Rat(0)));
  TropFunction x = on_edge(g, affine_profile(Rat(1), 1, Rat(0)));
  TropFunction m = trop_min(g, zero, x);
  CHECK(m.edges[0].slopes == std::vector<long>{0});
  CHECK(m.edges[0].start_value == Rat(0));

  // min(x, 1-x) is the unit tent.
  TropFunction y = on_edge(g, affine_profile(Rat(1), -1, Rat(1)));
  TropFunction tent = trop_min(g, x, y);
  CHECK(tent.edges[0].breaks == std::vector<Rat>{Rat(0), rat(1, 2), Rat(1)});
  CHECK(tent.edges[0].slopes == std::vector<long>{1, -1});
  CHECK(tent.edges[0].value_at(rat(1, 2)) == rat(1, 2));

  // min with the infinite function is the identity.
  TropFunction inf;
  TropFunction same = trop_min(g, x, inf);
  CHECK(evaluate(g, same, PointRef::interior(0, rat(1, 3))) == Trop(rat(1, 3)));
}

TEST_CASE("tropical minimum with partial supports") {
  MetricGraph g = make_graph({"u", "v", "w"},
                             {{"e1", {0, 1}, Rat(1)}, {"e2", {1, 2}, Rat(1)}}, "u");
  // f is 0 on e1 only; h is 0 on e2 only: they agree at the shared vertex.
  TropFunction f, h;
  f.edges[0] = constant_profile(Rat(1), Rat(0));
  h.edges[1] = constant_profile(Rat(1), Rat(0));
  validate_function(g, f);
  validate_function(g, h);
  TropFunction m = trop_min(g, f, h);
  CHECK(m.edges.size() == 2);

  // h2 dips to -1 at v, so min(f, h2) would jump at v across e1.
  TropFunction h2;
  h2.edges[1] = affine_profile(Rat(1), 1, Rat(-1));
  validate_function(g, h2);
  CHECK_THROWS_AS(trop_min(g, f, h2), std::invalid_argument);

  // Isolated-vertex supports combine fine.
  TropFunction d1, d2;
  MetricGraph pts = make_graph({"a", "b"}, {}, "a");
  d1.isolated[0] = Rat(1);
  d2.isolated[0] = Rat(0);
  d2.isolated[1] = Rat(2);
  validate_function(pts, d1);
  validate_function(pts, d2);
  TropFunction dm = trop_min(pts, d1, d2);
  CHECK(dm.isolated[0] == Rat(0));
  CHECK(dm.isolated[1] == Rat(2));
}

TEST_CASE("shift adds a constant everywhere") {
  MetricGraph g = segment_graph(Rat(1));
  TropFunction x = on_edge(g, affine_profile(Rat(1), 1, Rat(0)));
  TropFunction s = shift(x, rat(-1, 2));
  CHECK(evaluate(g, s, PointRef::at_vertex(0)) == Trop(rat(-1, 2)));
  CHECK(evaluate(g, s, PointRef::at_vertex(1)) == Trop(rat(1, 2)));
  TropFunction inf;
  CHECK(shift(inf, Rat(5)).is_infinite());
}

TEST_CASE("divisor of a tent") {
  MetricGraph g = segment_graph(Rat(1));
  EdgeProfile tent;
  tent.breaks = {Rat(0), rat(1, 2), Rat(1)};
  tent.slopes = {1, -1};
  tent.start_value = Rat(0);
  TropFunction f = on_edge(g, tent);
  Divisor d = divisor_of(g, f);
  CHECK(d.coeff.at(PointRef::at_vertex(0)) == -1);
  CHECK(d.coeff.at(PointRef::at_vertex(1)) == -1);
  CHECK(d.coeff.at(PointRef::interior(0, rat(1, 2))) == 2);
  CHECK(d.degree() == 0);
  CHECK_FALSE(d.effective());
}

TEST_CASE("divisor on a loop") {
  MetricGraph loop = make_graph({"u"}, {{"l", {0, 0}, Rat(2)}}, "u");
  EdgeProfile p;
  p.breaks = {Rat(0), Rat(1), Rat(2)};
  p.slopes = {1, -1};
  p.start_value = Rat(0);
  TropFunction f;
  f.edges[0] = p;
  validate_function(loop, f);
  Divisor d = divisor_of(loop, f);
  CHECK(d.degree() == 0);
  CHECK(d.coeff.at(PointRef::at_vertex(0)) == -2);
  CHECK(d.coeff.at(PointRef::interior(0, Rat(1))) == 2);
}

TEST_CASE("linear system membership") {
  MetricGraph g = segment_graph(Rat(1));
  TropFunction x = on_edge(g, affine_profile(Rat(1), 1, Rat(0)));
  Divisor du;
  du.add(PointRef::at_vertex(0), 1);
  CHECK(in_riemann_roch(g, x, du));
  Divisor zero;
  CHECK_FALSE(in_riemann_roch(g, x, zero));
  TropFunction inf;
  CHECK(in_riemann_roch(g, inf, zero));
  TropFunction partial;
  partial.isolated.clear();
  partial.edges.clear();
  partial.isolated[0] = Rat(0);
  validate_function(g, partial);
  CHECK_THROWS_AS(in_riemann_roch(g, partial, zero), std::invalid_argument);
}

TEST_CASE("common refinement covers the graph") {
  MetricGraph g = make_graph({"u", "v", "w"}, {{"e", {0, 1}, Rat(1)}}, "u");
  EdgeProfile tent;
  tent.breaks = {Rat(0), rat(1, 3), Rat(1)};
  tent.slopes = {2, -1};
  tent.start_value = Rat(0);
  TropFunction f;
  f.edges[0] = tent;
  f.isolated[2] = Rat(0);
  validate_function(g, f);
  TropFunction h;  // supported on w only
  h.isolated[2] = Rat(4);
  validate_function(g, h);

  auto segs = common_refinement(g, {f, h});
  REQUIRE(segs.size() == 3);  // two edge pieces + the edgeless vertex
  CHECK(segs[0].a == Rat(0));
  CHECK(segs[0].b == rat(1, 3));
  CHECK(segs[0].fns[0].finite);
  CHECK(segs[0].fns[0].slope == 2);
  CHECK_FALSE(segs[0].fns[1].finite);
  CHECK(segs[1].fns[0].slope == -1);
  // Intercept reproduces values: f(t) = -t + 2/3 + 1/3 on [1/3, 1].
  CHECK(segs[1].fns[0].intercept == Rat(1));
  CHECK(segs[2].is_point());
  CHECK(segs[2].vertex == 2);
  CHECK(segs[2].fns[1].intercept == Rat(4));
}

TEST_CASE("min attained twice: basic verdicts") {
  MetricGraph g = segment_graph(Rat(1));
  TropFunction zero = on_edge(g, constant_profile(Rat(1), Rat(0)));
  TropFunction x = on_edge(g, affine_profile(Rat(1), 1, Rat(0)));
  TropFunction cap = trop_min(g, zero, shift(x, rat(-1, 2)));  // min(0, x - 1/2)

  // {0, x, min(0, x-1/2)} with coefficients (0, -1/2, 0): the minimum is
  // attained twice everywhere.
  CHECK(min_attained_twice(g, {zero, x, cap}, {Rat(0), rat(-1, 2), Rat(0)}).ok);

  // {0, x} with zero coefficients: they agree only at the left endpoint; the
  // first offending open interval is the whole interior, witnessed by 1/2.
  MinTwiceResult r = min_attained_twice(g, {zero, x}, {Rat(0), Rat(0)});
  CHECK_FALSE(r.ok);
  CHECK(r.witness == PointRef::interior(0, rat(1, 2)));
}

TEST_CASE("min attained twice: partial supports and the all-infinite convention") {
  MetricGraph g = make_graph({"u", "v", "w"}, {{"e", {0, 1}, Rat(1)}}, "u");
  TropFunction total;
  total.edges[0] = constant_profile(Rat(1), Rat(0));
  total.isolated[2] = Rat(0);
  validate_function(g, total);
  TropFunction spot;  // finite only at w
  spot.isolated[2] = Rat(0);
  validate_function(g, spot);

  // On the edge only `total` is finite: single attainment, fails at u first.
  MinTwiceResult r = min_attained_twice(g, {total, spot}, {Rat(0), Rat(0)});
  CHECK_FALSE(r.ok);
  CHECK(r.witness == PointRef::at_vertex(0));

  // Two spot functions: the edge is all-infinite (passes by convention) and
  // the shared vertex has both terms attaining.
  TropFunction spot2 = spot;
  CHECK(min_attained_twice(g, {spot, spot2}, {Rat(0), Rat(0)}).ok);

  // Raising one coefficient breaks the tie at w.
  MinTwiceResult r2 = min_attained_twice(g, {spot, spot2}, {Rat(0), Rat(1)});
  CHECK_FALSE(r2.ok);
  CHECK(r2.witness == PointRef::at_vertex(2));
}

TEST_CASE("min attained twice: witness at an interior crossing") {
  MetricGraph g = segment_graph(Rat(1));
  TropFunction x = on_edge(g, affine_profile(Rat(1), 1, Rat(0)));
  TropFunction y = on_edge(g, affine_profile(Rat(1), -1, Rat(0)));
  TropFunction z = on_edge(g, affine_profile(Rat(1), -1, rat(1, 2)));
  // x and -x tie at the left endpoint, then -x is the unique minimum.  The
  // crossing of x and 1/2-x at 1/4 splits the interior; the first offending
  // open interval is (0, 1/4), witnessed by its midpoint.
  MinTwiceResult r = min_attained_twice(g, {x, y, z}, {Rat(0), Rat(0), Rat(0)});
  CHECK_FALSE(r.ok);
  CHECK(r.witness == PointRef::interior(0, rat(1, 8)));
}
