#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "tropgraph/graph.hpp"
#include "tropgraph/rational.hpp"

using namespace tropgraph;

TEST_CASE("rational parsing and canonical form") {
  CHECK(rat_str(parse_rat("4/6")) == "2/3");
  CHECK(rat_str(parse_rat("-4/6")) == "-2/3");
  CHECK(rat_str(parse_rat("7")) == "7");
  CHECK(rat_str(parse_rat("0/5")) == "0");
  CHECK(rat(6, -4) == rat(-3, 2));
  CHECK_THROWS_AS(parse_rat(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat("1/-2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat(" 1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rat("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(rat(1, 0), std::invalid_argument);
}

TEST_CASE("denominator rounding is best approximation") {
  CHECK(round_denominator(rat(355, 113), 1000) == rat(355, 113));
  CHECK(round_denominator(rat(22, 7), 1) == Rat(3));
  // 5/2 rounds to one of its neighbours at cap 1; ties prefer the convergent.
  CHECK(round_denominator(rat(5, 2), 1) == Rat(2));
  // Exhaustive check against brute force on a small grid.
  for (long num = -20; num <= 20; ++num)
    for (long den = 1; den <= 12; ++den) {
      Rat q = rat(num, den);
      for (unsigned long cap = 1; cap <= 6; ++cap) {
        Rat got = round_denominator(q, cap);
        CHECK(got.get_den() <= cap);
        Rat err = rat_abs(Rat(q - got));
        for (long d = 1; d <= static_cast<long>(cap); ++d) {
          // got must be at least as close as every p/d near q
          long p0 = static_cast<long>(mpz_class(q.get_num() * d / q.get_den()).get_si());
          for (long p = p0 - 2; p <= p0 + 2; ++p)
            CHECK(err <= rat_abs(Rat(q - rat(p, d))));
        }
      }
    }
}

TEST_CASE("double reconstruction recovers small rationals") {
  CHECK(rat_from_double(0.5, 100) == rat(1, 2));
  CHECK(rat_from_double(1.0 / 3.0, 1000) == rat(1, 3));
  CHECK(rat_from_double(-7.0 / 12.0, 100) == rat(-7, 12));
}

TEST_CASE("tropical scalars order with infinity on top") {
  Trop a(rat(1, 2)), b(Rat(3)), inf = Trop::infinity();
  CHECK(trop_min(a, b) == a);
  CHECK(trop_min(a, inf) == a);
  CHECK((a + inf) == inf);
  CHECK((a + b).value() == rat(7, 2));
  CHECK(a < inf);
  CHECK(!(inf < inf));
  CHECK(trop_str(inf) == "inf");
  CHECK(parse_trop("inf") == inf);
  CHECK(parse_trop("3/4") == Trop(rat(3, 4)));
}

static MetricGraph segment_graph(const Rat& len) {
  return make_graph({"u", "v"}, {{"e", {0, 1}, len}}, "u");
}

TEST_CASE("graph construction rejects defects") {
  CHECK_THROWS_AS(make_graph({}, {}, "u"), std::invalid_argument);
  CHECK_THROWS_AS(make_graph({"u", "u"}, {}, "u"), std::invalid_argument);
  CHECK_THROWS_AS(make_graph({"u"}, {{"e", {0, 1}, Rat(1)}}, "u"), std::invalid_argument);
  CHECK_THROWS_AS(make_graph({"u"}, {{"e", {0, 0}, Rat(0)}}, "u"), std::invalid_argument);
  CHECK_THROWS_AS(make_graph({"u"}, {}, "w"), std::invalid_argument);
  CHECK_THROWS_AS(make_graph({"a@b"}, {}, "a@b"), std::invalid_argument);
}

TEST_CASE("connectivity report") {
  CHECK(validate_graph(segment_graph(Rat(1))).connected);
  CHECK(validate_graph(make_graph({"u"}, {}, "u")).connected);
  MetricGraph two = make_graph({"u", "v"}, {}, "u");
  GraphReport r = validate_graph(two);
  CHECK(r.ok);
  CHECK_FALSE(r.connected);
}

TEST_CASE("canonical points and parsing") {
  MetricGraph g = segment_graph(Rat(2));
  CHECK(canonical_point(g, 0, Rat(0)) == PointRef::at_vertex(0));
  CHECK(canonical_point(g, 0, Rat(2)) == PointRef::at_vertex(1));
  PointRef mid = canonical_point(g, 0, Rat(1));
  CHECK_FALSE(mid.is_vertex());
  CHECK(point_str(g, mid) == "e@1");
  CHECK(parse_point(g, "e@1") == mid);
  CHECK(parse_point(g, "v") == PointRef::at_vertex(1));
  CHECK_THROWS_AS(canonical_point(g, 0, Rat(3)), std::invalid_argument);
  CHECK_THROWS_AS(parse_point(g, "w"), std::invalid_argument);
  CHECK_THROWS_AS(parse_point(g, "e@5"), std::invalid_argument);
  // Points order: vertices first, then interior by (edge, offset).
  CHECK(PointRef::at_vertex(1) < mid);
  CHECK(mid < PointRef::interior(0, rat(3, 2)));
}

TEST_CASE("incident directions") {
  MetricGraph g = segment_graph(Rat(1));
  CHECK(incident_directions(g, PointRef::at_vertex(0)).size() == 1);
  CHECK(incident_directions(g, PointRef::interior(0, rat(1, 2))).size() == 2);
  MetricGraph loop = make_graph({"u"}, {{"l", {0, 0}, Rat(1)}}, "u");
  auto dirs = incident_directions(loop, PointRef::at_vertex(0));
  CHECK(dirs.size() == 2);
  CHECK(dirs[0].toward_end1 != dirs[1].toward_end1);
}
