#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dendrify/geometry.hpp"

namespace dendrify {

/// A candidate polygonal system: base convex polygon P and contractive
/// injective affine maps S_1..S_m, m >= 2.
struct PolygonalSystem {
  ConvexPolygon base;
  std::vector<AffineMap2> maps;

  size_t index_count() const { return maps.size(); }
  size_t vertex_count() const { return base.vertices.size(); }
};

/// Checks structural invariants (polygon convexity, m >= 2, each map an
/// injective contraction). Throws on violation.
inline void check_system(const PolygonalSystem& sys) {
  check_convex(sys.base);
  if (sys.maps.size() < 2) throw Error(Errc::Degenerate, "a polygonal system needs at least 2 maps");
  for (const AffineMap2& m : sys.maps) stretch_factors(m);  // throws if degenerate/expanding
}

inline std::vector<ConvexPolygon> image_polygons(const PolygonalSystem& sys) {
  std::vector<ConvexPolygon> images;
  images.reserve(sys.maps.size());
  for (const AffineMap2& m : sys.maps) images.push_back(apply(m, sys.base));
  return images;
}

enum class Verdict { Pass, Fail, Skipped };

struct Condition1Result {
  Verdict verdict = Verdict::Pass;
  int offending_index = -1;  ///< first i with S_i(P) not contained in P
};

struct Condition2Result {
  Verdict verdict = Verdict::Pass;
  std::vector<int> uncovered;  ///< vertex indices of P not covered by any S_i(V)
};

struct ConnectionPoint {
  int i, j;      ///< polygon pair, i < j
  Point2 point;  ///< the unique intersection point A_ij
};

struct Condition3Result {
  Verdict verdict = Verdict::Pass;
  int offending_i = -1, offending_j = -1;
  IntersectionKind offending_kind = IntersectionKind::Empty;
  bool nonvertex_touch = false;  ///< single point but not a common vertex image
  std::vector<ConnectionPoint> connection_points;
};

/// Bipartite graph on copies {P_i} and the deduplicated connection point
/// set; edge (i, A) whenever A lies in P_i. Node ids: 0..m-1 for polygons,
/// m..m+k-1 for points.
struct BipartiteIntersectionGraph {
  int polygon_count = 0;
  std::vector<Point2> points;                     // deduplicated, sorted
  std::vector<std::vector<int>> polygon_adjacent; // polygon -> point ids (0-based into points)
  std::vector<std::vector<int>> point_adjacent;   // point id -> polygon indices

  int node_count() const { return polygon_count + static_cast<int>(points.size()); }
  int edge_count() const {
    int e = 0;
    for (const auto& a : polygon_adjacent) e += static_cast<int>(a.size());
    return e;
  }
  bool is_point_node(int node) const { return node >= polygon_count; }
};

struct Condition4Result {
  Verdict verdict = Verdict::Pass;
  std::vector<int> cycle;         ///< closed alternating node walk, if a cycle exists
  std::vector<int> unreachable;   ///< nodes not reachable from node 0, if disconnected
};

struct ValidationReport {
  Condition1Result condition1;
  Condition2Result condition2;
  Condition3Result condition3;
  Condition4Result condition4;
  std::optional<BipartiteIntersectionGraph> graph;
  bool overall = false;

  const std::vector<ConnectionPoint>& connection_points() const { return condition3.connection_points; }
};

// ---------------------------------------------------------------------------

/// Condition 1: every image polygon S_i(P) is contained in P. Vertex
/// containment suffices by convexity of P.
inline Condition1Result check_condition1(const PolygonalSystem& sys) {
  Condition1Result r;
  auto images = image_polygons(sys);
  for (size_t i = 0; i < images.size(); ++i) {
    for (const Point2& v : images[i].vertices) {
      if (!contains_point(sys.base, v)) {
        r.verdict = Verdict::Fail;
        r.offending_index = static_cast<int>(i);
        return r;
      }
    }
  }
  return r;
}

/// Condition 2: every vertex of P is the image S_i(v) of some vertex v.
/// Exact comparison (all inputs are exact rationals).
inline Condition2Result check_condition2(const PolygonalSystem& sys) {
  Condition2Result r;
  for (size_t k = 0; k < sys.base.vertices.size(); ++k) {
    const Point2& target = sys.base.vertices[k];
    bool covered = false;
    for (const AffineMap2& m : sys.maps) {
      for (const Point2& v : sys.base.vertices) {
        if (m(v) == target) { covered = true; break; }
      }
      if (covered) break;
    }
    if (!covered) r.uncovered.push_back(static_cast<int>(k));
  }
  if (!r.uncovered.empty()) r.verdict = Verdict::Fail;
  return r;
}

/// Condition 3: distinct image polygons intersect in at most one point, and
/// any such point is a common vertex image. Emits the connection points.
inline Condition3Result check_condition3(const PolygonalSystem& sys) {
  Condition3Result r;
  auto images = image_polygons(sys);
  size_t m = images.size();
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = i + 1; j < m; ++j) {
      Intersection is = convex_intersection(images[i], images[j]);
      if (is.kind == IntersectionKind::Empty) continue;
      if (is.kind == IntersectionKind::Extended) {
        r.verdict = Verdict::Fail;
        r.offending_i = static_cast<int>(i);
        r.offending_j = static_cast<int>(j);
        r.offending_kind = IntersectionKind::Extended;
        return r;
      }
      // single point: must be a vertex of both image polygons
      bool vi = vertex_index(images[i], is.point).has_value();
      bool vj = vertex_index(images[j], is.point).has_value();
      if (!vi || !vj) {
        r.verdict = Verdict::Fail;
        r.offending_i = static_cast<int>(i);
        r.offending_j = static_cast<int>(j);
        r.offending_kind = IntersectionKind::SinglePoint;
        r.nonvertex_touch = true;
        return r;
      }
      r.connection_points.push_back({static_cast<int>(i), static_cast<int>(j), is.point});
    }
  }
  return r;
}

/// Builds the bipartite intersection graph. Connection points equal as
/// coordinates merge into a single node; a point may join three or more
/// polygons, and the edge test A in P_i runs over every polygon.
inline BipartiteIntersectionGraph build_graph(const PolygonalSystem& sys,
                                              const std::vector<ConnectionPoint>& connection_points) {
  BipartiteIntersectionGraph g;
  g.polygon_count = static_cast<int>(sys.maps.size());
  for (const ConnectionPoint& c : connection_points) g.points.push_back(c.point);
  std::sort(g.points.begin(), g.points.end());
  g.points.erase(std::unique(g.points.begin(), g.points.end()), g.points.end());

  auto images = image_polygons(sys);
  g.polygon_adjacent.assign(g.polygon_count, {});
  g.point_adjacent.assign(g.points.size(), {});
  for (int i = 0; i < g.polygon_count; ++i) {
    for (size_t p = 0; p < g.points.size(); ++p) {
      if (contains_point(images[i], g.points[p])) {
        g.polygon_adjacent[i].push_back(static_cast<int>(p));
        g.point_adjacent[p].push_back(i);
      }
    }
  }
  return g;
}

namespace detail {

inline std::vector<int> graph_neighbors(const BipartiteIntersectionGraph& g, int node) {
  std::vector<int> out;
  if (node < g.polygon_count) {
    for (int p : g.polygon_adjacent[node]) out.push_back(g.polygon_count + p);
  } else {
    for (int i : g.point_adjacent[node - g.polygon_count]) out.push_back(i);
  }
  return out;
}

}  // namespace detail

/// Condition 4 via the tree criterion: the bipartite intersection graph is
/// connected and acyclic. On failure returns a cycle or the unreachable
/// node set as a witness.
inline Condition4Result check_condition4(const BipartiteIntersectionGraph& g) {
  Condition4Result r;
  int n = g.node_count();
  std::vector<int> parent(n, -2);  // -2 unvisited, -1 root
  // Iterative DFS from node 0 with cycle detection.
  std::vector<int> stack{0};
  parent[0] = -1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : detail::graph_neighbors(g, u)) {
      if (v == parent[u]) continue;
      if (parent[v] != -2) {
        // Found a cycle: walk both endpoints up to their common ancestor.
        std::vector<int> pu{u}, pv{v};
        for (int w = u; parent[w] >= 0; w = parent[w]) pu.push_back(parent[w]);
        for (int w = v; parent[w] >= 0; w = parent[w]) pv.push_back(parent[w]);
        // trim shared tail
        while (pu.size() > 1 && pv.size() > 1 && pu[pu.size() - 2] == pv[pv.size() - 2]) {
          pu.pop_back();
          pv.pop_back();
        }
        std::vector<int> cycle(pu.begin(), pu.end());
        for (auto it = pv.rbegin() + 1; it != pv.rend(); ++it) cycle.push_back(*it);
        r.verdict = Verdict::Fail;
        r.cycle = std::move(cycle);
        return r;
      }
      parent[v] = u;
      stack.push_back(v);
    }
  }
  for (int v = 0; v < n; ++v)
    if (parent[v] == -2) r.unreachable.push_back(v);
  if (!r.unreachable.empty()) r.verdict = Verdict::Fail;
  return r;
}

/// Runs conditions 1-4 in order; graph construction and the tree test are
/// skipped when condition 3 fails. Overall passes iff all four pass.
inline ValidationReport validate(const PolygonalSystem& sys) {
  check_system(sys);
  ValidationReport rep;
  rep.condition1 = check_condition1(sys);
  rep.condition2 = check_condition2(sys);
  rep.condition3 = check_condition3(sys);
  if (rep.condition3.verdict == Verdict::Pass) {
    rep.graph = build_graph(sys, rep.condition3.connection_points);
    rep.condition4 = check_condition4(*rep.graph);
  } else {
    rep.condition4.verdict = Verdict::Skipped;
  }
  rep.overall = rep.condition1.verdict == Verdict::Pass && rep.condition2.verdict == Verdict::Pass &&
                rep.condition3.verdict == Verdict::Pass && rep.condition4.verdict == Verdict::Pass;
  return rep;
}

}  // namespace dendrify
