#include <catch2/catch_amalgamated.hpp>

#include "dendrify/arcs.hpp"
#include "dendrify/holder.hpp"
#include "support/fixtures.hpp"

using namespace dendrify;
namespace fx = dendrify::fixtures;
using fx::rat;

namespace {

Address addr(std::initializer_list<int> letters) {
  Address a;
  for (int l : letters) a.word.push_back(l);
  return a;
}

SystemIndex make_index(const PolygonalSystem& sys) {
  ValidationReport rep = validate(sys);
  REQUIRE(rep.overall);
  return build_index(sys, rep);
}

AddressedPoint random_endpoint(SplitMix64& rng, size_t m, size_t nv, int max_len) {
  AddressedPoint ap;
  int len = static_cast<int>(rng.below(max_len + 1));
  for (int k = 0; k < len; ++k) ap.address.word.push_back(static_cast<int>(rng.below(m)));
  ap.vertex = static_cast<int>(rng.below(nv));
  return ap;
}

// Exact re-check of the chain invariant: consecutive cells meet in exactly
// one point, and that point is the recorded junction.
void check_chain_exact(const SystemIndex& ix, const ArcApproximation& a) {
  REQUIRE(a.junctions.size() + 1 == a.chain.size());
  for (size_t k = 0; k + 1 < a.chain.size(); ++k) {
    ConvexPolygon c1 = apply(composed_map(ix.sys, a.chain[k]), ix.sys.base);
    ConvexPolygon c2 = apply(composed_map(ix.sys, a.chain[k + 1]), ix.sys.base);
    Intersection is = convex_intersection(c1, c2);
    REQUIRE(is.kind == IntersectionKind::SinglePoint);
    REQUIRE(is.point == a.junctions[k].point);
  }
  // endpoint containment in the first/last cells
  ConvexPolygon first = apply(composed_map(ix.sys, a.chain.front()), ix.sys.base);
  ConvexPolygon last = apply(composed_map(ix.sys, a.chain.back()), ix.sys.base);
  REQUIRE(contains_point(first, a.x_point));
  REQUIRE(contains_point(last, a.y_point));
}

}  // namespace

TEST_CASE("copy_chain walks the unique alternating tree path") {
  SECTION("two copies, one junction") {
    SystemIndex ix = make_index(fx::split_triangle());
    auto path = copy_chain(ix, 0, 1);
    REQUIRE(path.size() == 3);
    CHECK_FALSE(path[0].is_point);
    CHECK(path[0].index == 0);
    CHECK(path[1].is_point);
    CHECK_FALSE(path[2].is_point);
    CHECK(path[2].index == 1);
  }
  SECTION("i == j gives the single node") {
    SystemIndex ix = make_index(fx::split_triangle());
    auto path = copy_chain(ix, 1, 1);
    REQUIRE(path.size() == 1);
    CHECK(path[0].index == 1);
  }
  SECTION("three copies in a row: wing to wing crosses the center") {
    SystemIndex ix = make_index(fx::valley());
    auto path = copy_chain(ix, 1, 2);
    REQUIRE(path.size() == 5);
    CHECK(path[0].index == 1);
    CHECK(path[1].is_point);
    CHECK(path[2].index == 0);
    CHECK(path[3].is_point);
    CHECK(path[4].index == 2);
  }
}

TEST_CASE("arc across the two split-triangle copies at depth 1") {
  SystemIndex ix = make_index(fx::split_triangle());
  // x = S1(A) = A, y = S2(B) = B; the arc from A to B crosses mid(AB).
  AddressedPoint x{addr({0}), 0}, y{addr({1}), 1};
  ArcApproximation a = arc(ix, x, y, 1);
  REQUIRE(a.chain.size() == 2);
  CHECK(a.chain[0] == addr({0}));
  CHECK(a.chain[1] == addr({1}));
  REQUIRE(a.junctions.size() == 1);
  CHECK(a.junctions[0].point == Point2{rat("1/2"), 0});
  // A, mid(AB), B are collinear: the lower bound is exactly |A - B| = 1.
  CHECK(a.diam_lower == Catch::Approx(1.0).margin(1e-15));
  CHECK(a.diam_upper >= a.diam_lower);
  check_chain_exact(ix, a);
}

TEST_CASE("coincident endpoints give a single-cell chain with zero lower bound") {
  SystemIndex ix = make_index(fx::split_triangle());
  // S1(B) = mid(AB) = S2(C): same point under two different addresses.
  AddressedPoint x{addr({0}), 1}, y{addr({1}), 2};
  REQUIRE(denote(ix.sys, x) == denote(ix.sys, y));
  ArcApproximation a = arc(ix, x, y, 3);
  CHECK(a.chain.size() == 1);
  CHECK(a.junctions.empty());
  CHECK(a.diam_lower == 0.0);
  CHECK(a.diam_upper > 0.0);
  CHECK_THROWS_AS(arc_ratio(a, 1.0), Error);
}

TEST_CASE("the base segment of the split triangle is an arc of the attractor") {
  // gamma(A, B) is the straight segment AB, so diam_lower is exactly 1 at
  // every depth and diam_upper decreases toward 1 as the chain cells flatten.
  SystemIndex ix = make_index(fx::split_triangle());
  AddressedPoint x{addr({}), 0}, y{addr({}), 1};
  double prev_upper = std::numeric_limits<double>::infinity();
  for (int depth : {2, 4, 6, 8, 10, 12}) {
    ArcApproximation a = arc(ix, x, y, depth);
    CHECK(a.diam_lower == Catch::Approx(1.0).margin(1e-12));
    CHECK(a.diam_upper <= prev_upper + 1e-12);
    prev_upper = a.diam_upper;
    // all junctions lie on the segment y = 0
    for (const ArcJunction& j : a.junctions) CHECK(j.point.y == 0);
  }
  CHECK(prev_upper == Catch::Approx(1.0).epsilon(0.02));  // depth 12: cells are flat
  // with lambda = 1 the ratio bounds straddle 1
  ArcApproximation a = arc(ix, x, y, 12);
  auto [lo, hi] = arc_ratio(a, 1.0);
  CHECK(lo == Catch::Approx(1.0).margin(1e-12));
  CHECK(hi >= 1.0);
  CHECK(hi <= 1.02);
  // lambda = 0: the bounds equal the diameter bounds themselves
  auto [lo0, hi0] = arc_ratio(a, 0.0);
  CHECK(lo0 == Catch::Approx(a.diam_lower).margin(1e-15));
  CHECK(hi0 == Catch::Approx(a.diam_upper).margin(1e-15));
}

TEST_CASE("valley ratios grow anisotropically under the squeeze map") {
  // x_n, y_n are the junction images S_1^n(j-), S_1^n(j+); the upper ratio
  // with lambda = 1 doubles with each squeeze application.
  SystemIndex ix = make_index(fx::valley());
  for (int n : {1, 2, 3, 4}) {
    AddressedPoint x, y;
    for (int k = 0; k < n + 1; ++k) {
      x.address.word.push_back(0);
      y.address.word.push_back(0);
    }
    x.vertex = 2;  // E- = (-1, 1)
    y.vertex = 1;  // E+ = (1, 1)
    ArcApproximation a = arc(ix, x, y, n + 1 + 4);
    auto [lo, hi] = arc_ratio(a, 1.0);
    double expected = std::sqrt(1.0 + std::pow(4.0, n + 1)) / 2.0;
    CHECK(hi == Catch::Approx(expected).epsilon(1e-6));
    CHECK(a.endpoint_distance == Catch::Approx(2.0 / std::pow(3.0, n + 1)).epsilon(1e-12));
  }
}

TEST_CASE("arc invariants on random endpoint pairs") {
  for (auto sys : {fx::split_triangle(), fx::valley(), fx::koch()}) {
    SystemIndex ix = make_index(sys);
    SplitMix64 rng(17);
    size_t m = ix.map_count(), nv = ix.vertex_count();
    for (int t = 0; t < 40; ++t) {
      AddressedPoint x = random_endpoint(rng, m, nv, 4);
      AddressedPoint y = random_endpoint(rng, m, nv, 4);
      ArcApproximation a4 = arc(ix, x, y, 4);
      ArcApproximation a5 = arc(ix, x, y, 5);

      // ordered bounds, endpoint distance below lower bound
      REQUIRE(a4.diam_lower <= a4.diam_upper);
      REQUIRE(a4.diam_lower >= a4.endpoint_distance - 1e-12);

      // symmetry
      ArcApproximation b4 = arc(ix, y, x, 4);
      REQUIRE(b4.chain.size() == a4.chain.size());
      for (size_t k = 0; k < a4.chain.size(); ++k)
        REQUIRE(b4.chain[k] == a4.chain[a4.chain.size() - 1 - k]);
      REQUIRE(b4.diam_lower == Catch::Approx(a4.diam_lower).margin(1e-12));
      REQUIRE(b4.diam_upper == Catch::Approx(a4.diam_upper).margin(1e-12));

      // depth monotonicity
      REQUIRE(a5.diam_upper <= a4.diam_upper + 1e-12);
      REQUIRE(a5.diam_lower >= a4.diam_lower - 1e-12);

      // junction stability: depth-4 junctions are a subset of depth-5 ones
      for (const ArcJunction& j : a4.junctions) {
        bool found = false;
        for (const ArcJunction& j5 : a5.junctions)
          if (j5.point == j.point) { found = true; break; }
        REQUIRE(found);
      }

      // nesting: every depth-5 chain cell is under some depth-4 chain cell
      for (const Address& c5 : a5.chain) {
        bool nested = false;
        for (const Address& c4 : a4.chain)
          if (c4.is_prefix_of(c5)) { nested = true; break; }
        REQUIRE(nested);
      }

      if (t % 8 == 0 && !(denote(sys, x) == denote(sys, y))) check_chain_exact(ix, a4);
    }
  }
}

TEST_CASE("arc error paths") {
  SystemIndex ix = make_index(fx::split_triangle());
  SECTION("depth below the endpoint address length") {
    CHECK_THROWS_AS(arc(ix, {addr({0, 1, 0}), 0}, {addr({}), 1}, 2), Error);
  }
  SECTION("invalid endpoint") {
    CHECK_THROWS_AS(arc(ix, {addr({0}), 7}, {addr({}), 1}, 3), Error);
  }
  SECTION("budget exceeded") {
    try {
      arc(ix, {addr({}), 0}, {addr({}), 1}, 14, 100);
      FAIL("expected DepthTooLarge");
    } catch (const Error& e) {
      CHECK(e.code == Errc::DepthTooLarge);
    }
  }
}
