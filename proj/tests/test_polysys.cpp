#include <catch2/catch_amalgamated.hpp>

#include "dendrify/polysys.hpp"
#include "dendrify/holder.hpp"
#include "support/fixtures.hpp"

using namespace dendrify;
namespace fx = dendrify::fixtures;
using fx::map;
using fx::rat;

TEST_CASE("split triangle passes all four conditions") {
  PolygonalSystem sys = fx::split_triangle();
  ValidationReport rep = validate(sys);
  CHECK(rep.condition1.verdict == Verdict::Pass);
  CHECK(rep.condition2.verdict == Verdict::Pass);
  CHECK(rep.condition3.verdict == Verdict::Pass);
  CHECK(rep.condition4.verdict == Verdict::Pass);
  CHECK(rep.overall);

  REQUIRE(rep.connection_points().size() == 1);
  const ConnectionPoint& cp = rep.connection_points()[0];
  CHECK(cp.i == 0);
  CHECK(cp.j == 1);
  CHECK(cp.point == Point2{rat("1/2"), 0});  // midpoint of AB

  REQUIRE(rep.graph);
  CHECK(rep.graph->polygon_count == 2);
  CHECK(rep.graph->points.size() == 1);
  CHECK(rep.graph->edge_count() == 2);
}

TEST_CASE("valley and koch fixtures are valid") {
  for (auto sys : {fx::valley(), fx::koch()}) {
    ValidationReport rep = validate(sys);
    INFO("maps: " << sys.maps.size());
    CHECK(rep.overall);
  }
  // valley graph: 3 polygons, 2 junction points, 4 edges (a path)
  ValidationReport rep = validate(fx::valley());
  REQUIRE(rep.graph);
  CHECK(rep.graph->polygon_count == 3);
  CHECK(rep.graph->points.size() == 2);
  CHECK(rep.graph->edge_count() == 4);
}

TEST_CASE("condition 1 failure reports the offending map") {
  PolygonalSystem sys = fx::split_triangle();
  sys.maps[1].e += 10;  // translate the second copy far outside P
  Condition1Result r = check_condition1(sys);
  CHECK(r.verdict == Verdict::Fail);
  CHECK(r.offending_index == 1);
  ValidationReport rep = validate(sys);
  CHECK_FALSE(rep.overall);
}

TEST_CASE("condition 2 failure reports uncovered vertices") {
  // Two half-scale maps fixing opposite corners of the unit square leave
  // the two side corners uncovered.
  PolygonalSystem sys;
  sys.base = fx::unit_square();
  sys.maps = {map("1/2", "0", "0", "1/2", "0", "0"), map("1/2", "0", "0", "1/2", "1/2", "1/2")};
  Condition2Result r = check_condition2(sys);
  CHECK(r.verdict == Verdict::Fail);
  CHECK(r.uncovered == std::vector<int>{1, 3});
}

TEST_CASE("condition 3 failures") {
  SECTION("overlapping squares yield Extended") {
    PolygonalSystem sys = fx::overlap_squares();
    Condition3Result r = check_condition3(sys);
    CHECK(r.verdict == Verdict::Fail);
    CHECK(r.offending_kind == IntersectionKind::Extended);
    CHECK(r.offending_i == 0);
    CHECK(r.offending_j == 1);
    ValidationReport rep = validate(sys);
    CHECK_FALSE(rep.overall);
    CHECK(rep.condition4.verdict == Verdict::Skipped);  // graph short-circuited
  }
  SECTION("touch point interior to one polygon's edge fails the vertex clause") {
    // A 45-degree rotated copy whose corner touches the interior of the
    // first copy's right edge at (1/2, 1/4).
    PolygonalSystem sys;
    sys.base = fx::unit_square();
    sys.maps = {map("1/2", "0", "0", "1/2", "0", "0"),
                map("1/8", "-1/8", "1/8", "1/8", "5/8", "1/8")};
    Condition3Result r = check_condition3(sys);
    CHECK(r.verdict == Verdict::Fail);
    CHECK(r.offending_kind == IntersectionKind::SinglePoint);
    CHECK(r.nonvertex_touch);
  }
}

TEST_CASE("sierpinski: conditions 1-3 pass, the 6-cycle kills condition 4") {
  PolygonalSystem sys = fx::sierpinski();
  ValidationReport rep = validate(sys);
  CHECK(rep.condition1.verdict == Verdict::Pass);
  CHECK(rep.condition2.verdict == Verdict::Pass);
  CHECK(rep.condition3.verdict == Verdict::Pass);
  CHECK(rep.condition3.connection_points.size() == 3);
  REQUIRE(rep.graph);
  CHECK(rep.graph->polygon_count == 3);
  CHECK(rep.graph->points.size() == 3);
  CHECK(rep.graph->edge_count() == 6);
  CHECK(rep.condition4.verdict == Verdict::Fail);
  CHECK(rep.condition4.cycle.size() == 6);
  CHECK_FALSE(rep.overall);
}

TEST_CASE("disconnected graph is reported with unreachable nodes") {
  BipartiteIntersectionGraph g;
  g.polygon_count = 2;  // no points, no edges: two isolated polygon nodes
  g.polygon_adjacent.assign(2, {});
  Condition4Result r = check_condition4(g);
  CHECK(r.verdict == Verdict::Fail);
  CHECK(r.unreachable == std::vector<int>{1});
}

TEST_CASE("structural invariants are enforced") {
  PolygonalSystem sys = fx::split_triangle();
  sys.maps.pop_back();
  CHECK_THROWS_AS(validate(sys), Error);  // m >= 2

  PolygonalSystem expanding = fx::split_triangle();
  expanding.maps[0] = map("1", "0", "0", "1", "1/4", "1/4");  // isometry, not a contraction
  CHECK_THROWS_AS(validate(expanding), Error);
}

TEST_CASE("verdicts are invariant under map permutation") {
  PolygonalSystem sys = fx::sierpinski();
  std::swap(sys.maps[0], sys.maps[2]);
  ValidationReport rep = validate(sys);
  CHECK(rep.condition3.verdict == Verdict::Pass);
  CHECK(rep.condition4.verdict == Verdict::Fail);
  CHECK(rep.condition4.cycle.size() == 6);
}

TEST_CASE("verdicts are invariant under affine conjugation") {
  // Conjugate the whole system by an invertible affine change of coordinates:
  // T(x) = L x + t, maps become T S T^-1, polygon becomes T(P). T is kept
  // mildly conditioned so the conjugated maps stay contractions.
  AffineMap2 T = map("2", "1/4", "0", "2", "-5", "7");
  AffineMap2 Tinv;  // exact inverse
  {
    Rat det = T.det();
    Tinv = {T.d / det, -T.b / det, -T.c / det, T.a / det, (T.b * T.f - T.d * T.e) / det,
            (T.c * T.e - T.a * T.f) / det};
  }
  for (auto base_sys : {fx::split_triangle(), fx::sierpinski(), fx::overlap_squares()}) {
    ValidationReport before = validate(base_sys);
    PolygonalSystem conj;
    conj.base = apply(T, base_sys.base);
    for (const AffineMap2& m : base_sys.maps) conj.maps.push_back(compose(T, compose(m, Tinv)));
    ValidationReport after = validate(conj);
    CHECK(before.overall == after.overall);
    CHECK(before.condition1.verdict == after.condition1.verdict);
    CHECK(before.condition2.verdict == after.condition2.verdict);
    CHECK(before.condition3.verdict == after.condition3.verdict);
    CHECK(before.condition4.verdict == after.condition4.verdict);
  }
}

TEST_CASE("tree arithmetic on passing systems") {
  // |point nodes| <= m-1 and sum over points of (degree - 1) = m - 1.
  for (auto sys : {fx::split_triangle(), fx::valley(), fx::koch()}) {
    ValidationReport rep = validate(sys);
    REQUIRE(rep.overall);
    const auto& g = *rep.graph;
    int m = g.polygon_count;
    CHECK(static_cast<int>(g.points.size()) <= m - 1);
    int excess = 0;
    for (const auto& adj : g.point_adjacent) excess += static_cast<int>(adj.size()) - 1;
    CHECK(excess == m - 1);
  }
}
