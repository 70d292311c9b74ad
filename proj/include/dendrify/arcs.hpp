#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <vector>

#include "dendrify/attractor.hpp"

namespace dendrify {

/// Precomputed combinatorial structure of a validated system. The arc
/// recursion is self-similar, so everything it needs can be tabulated at
/// level 1 once: which children contain each base vertex, which vertex
/// images are again vertices, and the vertex identity of every connection
/// point inside each copy that contains it.
struct SystemIndex {
  PolygonalSystem sys;
  std::vector<ConvexPolygon> images;  ///< P_i
  BipartiteIntersectionGraph graph;

  std::vector<std::vector<int>> point_vertex_in;     ///< [point][i] = q with S_i(V[q]) == A, -1 if A not in P_i
  std::vector<std::vector<int>> vertex_children;     ///< [q] = sorted i with V[q] in P_i
  std::vector<std::vector<int>> vertex_image_index;  ///< [i][q] = r with S_i(V[q]) == V[r], else -1
  std::vector<std::vector<int>> vertex_preimage;     ///< [i][q] = r with S_i(V[r]) == V[q], else -1
  std::vector<std::vector<int>> child_vertex_node;   ///< [i][q] = point node of S_i(V[q]) if it is a connection point, else -1
  std::vector<std::vector<int>> bfs_parent;          ///< [root polygon][node] = parent node (-1 at root)

  size_t map_count() const { return sys.maps.size(); }
  size_t vertex_count() const { return sys.vertex_count(); }
};

/// Builds the index. Requires a report from validate() with overall == pass.
inline SystemIndex build_index(const PolygonalSystem& sys, const ValidationReport& report) {
  if (!report.overall || !report.graph)
    throw Error(Errc::InvalidEndpoint, "system index requires a fully validated system");
  SystemIndex ix;
  ix.sys = sys;
  ix.images = image_polygons(sys);
  ix.graph = *report.graph;
  size_t m = sys.maps.size(), n = sys.vertex_count();
  const auto& V = sys.base.vertices;

  ix.vertex_image_index.assign(m, std::vector<int>(n, -1));
  ix.vertex_preimage.assign(m, std::vector<int>(n, -1));
  ix.child_vertex_node.assign(m, std::vector<int>(n, -1));
  for (size_t i = 0; i < m; ++i) {
    for (size_t q = 0; q < n; ++q) {
      Point2 img = sys.maps[i](V[q]);
      for (size_t r = 0; r < n; ++r) {
        if (img == V[r]) {
          ix.vertex_image_index[i][q] = static_cast<int>(r);
          ix.vertex_preimage[i][r] = static_cast<int>(q);
        }
      }
      for (size_t p = 0; p < ix.graph.points.size(); ++p)
        if (ix.graph.points[p] == img) ix.child_vertex_node[i][q] = static_cast<int>(p);
    }
  }

  ix.vertex_children.assign(n, {});
  for (size_t q = 0; q < n; ++q)
    for (size_t i = 0; i < m; ++i)
      if (contains_point(ix.images[i], V[q])) ix.vertex_children[q].push_back(static_cast<int>(i));

  ix.point_vertex_in.assign(ix.graph.points.size(), std::vector<int>(m, -1));
  for (size_t p = 0; p < ix.graph.points.size(); ++p) {
    for (int i : ix.graph.point_adjacent[p]) {
      for (size_t q = 0; q < n; ++q) {
        if (sys.maps[i](V[q]) == ix.graph.points[p]) {
          ix.point_vertex_in[p][i] = static_cast<int>(q);
          break;
        }
      }
      assert(ix.point_vertex_in[p][i] >= 0 && "connection point must be a vertex image in every copy containing it");
    }
  }

  // BFS trees (the graph is a tree, so parents define unique paths).
  int nodes = ix.graph.node_count();
  ix.bfs_parent.assign(m, std::vector<int>(nodes, -2));
  for (size_t root = 0; root < m; ++root) {
    auto& par = ix.bfs_parent[root];
    std::vector<int> queue{static_cast<int>(root)};
    par[root] = -1;
    for (size_t head = 0; head < queue.size(); ++head) {
      int u = queue[head];
      for (int v : detail::graph_neighbors(ix.graph, u)) {
        if (par[v] == -2) {
          par[v] = u;
          queue.push_back(v);
        }
      }
    }
  }
  return ix;
}

/// Node of an alternating polygon/point path in the intersection graph.
struct PathNode {
  bool is_point = false;
  int index = 0;  ///< polygon index or point id
};

/// The unique alternating path between polygon nodes i and j in the tree.
inline std::vector<PathNode> copy_chain(const SystemIndex& ix, int i, int j) {
  std::vector<PathNode> out;
  const auto& par = ix.bfs_parent[i];
  std::vector<int> nodes;
  for (int u = j; u != -1; u = par[u]) nodes.push_back(u);
  std::reverse(nodes.begin(), nodes.end());
  for (int u : nodes)
    out.push_back({ix.graph.is_point_node(u), ix.graph.is_point_node(u) ? u - ix.graph.polygon_count : u});
  return out;
}

// ---------------------------------------------------------------------------

/// A junction between consecutive chain cells: the exact connection point
/// S_prefix(A) where the cells' copies split off children child_i/child_j.
struct ArcJunction {
  Address prefix;
  int child_i = 0, child_j = 0;
  int point_node = 0;  ///< node id in the level-1 graph (relative to prefix)
  Point2 point;        ///< exact coordinates
  Vec2d point_d;
};

/// Finite approximation of the dendrite arc between two addressed points:
/// the ordered depth-d cell chain covering it, the exact junctions where
/// consecutive cells meet, and certified diameter bounds.
struct ArcApproximation {
  AddressedPoint x, y;
  int depth = 0;
  std::vector<Address> chain;
  std::vector<ArcJunction> junctions;
  Point2 x_point, y_point;  ///< exact endpoint denotations
  double endpoint_distance = 0.0;
  double diam_lower = 0.0, diam_upper = 0.0;
};

namespace detail {

// Relative endpoint inside the current copy: either the remaining tail of
// the original address (with its suffix-vertex table), or a bare vertex of
// the base polygon reached through a junction.
struct RelEndpoint {
  const std::vector<int>* word = nullptr;
  const std::vector<int>* vid = nullptr;  // vid[t] = vertex id of suffix t, -1 if not a vertex
  size_t tail_pos = 0;
  int bare_vertex = -1;

  bool tail_alive() const { return word && tail_pos < word->size(); }
};

class ArcBuilder {
 public:
  ArcBuilder(const SystemIndex& ix, std::size_t budget) : ix_(ix), budget_(budget) {
    rat_stack_.push_back(AffineMap2::identity());
    dbl_stack_.push_back(AffineMap2d{});
  }

  const SystemIndex& ix_;
  std::size_t budget_;
  std::vector<int> prefix_;
  std::vector<AffineMap2> rat_stack_;
  std::vector<AffineMap2d> dbl_stack_;
  std::vector<Address> chain_;
  std::vector<ArcJunction> junctions_;
  std::vector<Vec2d> cover_points_;

  void push(int c) {
    prefix_.push_back(c);
    rat_stack_.push_back(compose(rat_stack_.back(), ix_.sys.maps[c]));
    dbl_stack_.push_back(compose(dbl_stack_.back(), to_map2d(ix_.sys.maps[c])));
  }

  void pop() {
    prefix_.pop_back();
    rat_stack_.pop_back();
    dbl_stack_.pop_back();
  }

  void emit_cell() {
    if (chain_.size() >= budget_) throw Error(Errc::DepthTooLarge, "arc chain exceeds cell budget");
    chain_.push_back(Address{prefix_});
    const AffineMap2d& m = dbl_stack_.back();
    for (const Point2& v : ix_.sys.base.vertices) cover_points_.push_back(m(to_vec2d(v)));
  }

  void emit_junction(int point_node, int ci, int cj) {
    Point2 p = rat_stack_.back()(ix_.graph.points[point_node]);
    junctions_.push_back({Address{prefix_}, ci, cj, point_node, p, to_vec2d(p)});
  }

  // All children of the current copy whose polygon contains the relative point.
  std::vector<int> children_of(const RelEndpoint& e) const {
    if (e.tail_alive()) {
      int c = (*e.word)[e.tail_pos];
      int qt = (*e.vid)[e.tail_pos + 1];
      if (qt >= 0) {
        int node = ix_.child_vertex_node[c][qt];
        if (node >= 0) return ix_.graph.point_adjacent[node];
      }
      return {c};
    }
    return ix_.vertex_children[e.bare_vertex];
  }

  // Point node of the relative point if it is a connection point, else -1.
  int junction_node_of(const RelEndpoint& e) const {
    if (e.tail_alive()) {
      int c = (*e.word)[e.tail_pos];
      int qt = (*e.vid)[e.tail_pos + 1];
      return qt >= 0 ? ix_.child_vertex_node[c][qt] : -1;
    }
    for (size_t p = 0; p < ix_.graph.points.size(); ++p)
      if (ix_.graph.points[p] == ix_.sys.base.vertices[e.bare_vertex]) return static_cast<int>(p);
    return -1;
  }

  RelEndpoint descend(const RelEndpoint& e, int c) const {
    if (e.tail_alive()) {
      if ((*e.word)[e.tail_pos] == c)
        return {e.word, e.vid, e.tail_pos + 1, (*e.vid)[e.tail_pos + 1]};
      int node = junction_node_of(e);
      assert(node >= 0 && "branch switch requires the point to be a junction");
      return {nullptr, nullptr, 0, ix_.point_vertex_in[node][c]};
    }
    int r = ix_.vertex_preimage[c][e.bare_vertex];
    assert(r >= 0 && "a base vertex inside a copy must be a vertex image there");
    return {nullptr, nullptr, 0, r};
  }

  // Tree path between polygon nodes, as node ids.
  std::vector<int> tree_path(int a, int b) const {
    const auto& par = ix_.bfs_parent[a];
    std::vector<int> nodes;
    for (int u = b; u != -1; u = par[u]) nodes.push_back(u);
    std::reverse(nodes.begin(), nodes.end());
    return nodes;
  }

  // Minimal tree path between the child sets; ties broken on the sorted
  // endpoint pair so that swapped queries select the same geometric path.
  std::vector<int> best_path(const std::vector<int>& sx, const std::vector<int>& sy) const {
    std::vector<int> best;
    long best_len = -1;
    int best_lo = 0, best_hi = 0;
    for (int a : sx) {
      for (int b : sy) {
        auto p = tree_path(a, b);
        long len = static_cast<long>(p.size()) - 1;
        int lo = std::min(a, b), hi = std::max(a, b);
        if (best_len < 0 || len < best_len ||
            (len == best_len && (lo < best_lo || (lo == best_lo && hi < best_hi)))) {
          best = std::move(p);
          best_len = len;
          best_lo = lo;
          best_hi = hi;
        }
      }
    }
    return best;
  }

  void rec(const RelEndpoint& u, const RelEndpoint& v, int r) {
    if (r == 0) {
      emit_cell();
      return;
    }
    std::vector<int> sx = children_of(u), sy = children_of(v);
    std::vector<int> common;
    std::set_intersection(sx.begin(), sx.end(), sy.begin(), sy.end(), std::back_inserter(common));
    if (!common.empty()) {
      int c = common.front();
      push(c);
      rec(descend(u, c), descend(v, c), r - 1);
      pop();
      return;
    }
    std::vector<int> path = best_path(sx, sy);
    // path = [c0, A1, c1, A2, ..., ck]; legs run inside the polygon nodes.
    size_t legs = path.size() / 2 + 1;
    for (size_t t = 0; t < legs; ++t) {
      int c = path[2 * t];
      push(c);
      RelEndpoint uu = (t == 0) ? descend(u, c)
                                : RelEndpoint{nullptr, nullptr, 0,
                                              ix_.point_vertex_in[path[2 * t - 1] - ix_.graph.polygon_count][c]};
      RelEndpoint vv = (t == legs - 1)
                           ? descend(v, c)
                           : RelEndpoint{nullptr, nullptr, 0,
                                         ix_.point_vertex_in[path[2 * t + 1] - ix_.graph.polygon_count][c]};
      rec(uu, vv, r - 1);
      pop();
      if (t + 1 < legs) emit_junction(path[2 * t + 1] - ix_.graph.polygon_count, path[2 * t], path[2 * t + 2]);
    }
  }

  void rec_single(const RelEndpoint& u, int r) {
    if (r == 0) {
      emit_cell();
      return;
    }
    int c = children_of(u).front();
    push(c);
    rec_single(descend(u, c), r - 1);
    pop();
  }
};

inline std::vector<int> suffix_vertex_table(const SystemIndex& ix, const AddressedPoint& ap) {
  const auto& w = ap.address.word;
  std::vector<int> vid(w.size() + 1, -1);
  vid[w.size()] = ap.vertex;
  for (size_t t = w.size(); t-- > 0;) {
    int next = vid[t + 1];
    vid[t] = next >= 0 ? ix.vertex_image_index[w[t]][next] : -1;
  }
  return vid;
}

}  // namespace detail

/// Computes the depth-d chain approximation of the unique dendrite arc
/// between two addressed points, descending the copy tree at the smallest
/// common copy exactly as in the three-case analysis: endpoints in the same
/// child descend together; otherwise the chain follows the unique tree path
/// between the children, splitting the arc at the connection points.
inline ArcApproximation arc(const SystemIndex& ix, const AddressedPoint& x, const AddressedPoint& y,
                            int depth, std::size_t budget = kDefaultCellBudget) {
  check_addressed_point(ix.sys, x);
  check_addressed_point(ix.sys, y);
  if (depth < static_cast<int>(x.address.length()) || depth < static_cast<int>(y.address.length()))
    throw Error(Errc::InvalidEndpoint, "depth must be at least the endpoint address lengths");

  ArcApproximation out;
  out.x = x;
  out.y = y;
  out.depth = depth;
  out.x_point = denote(ix.sys, x);
  out.y_point = denote(ix.sys, y);
  out.endpoint_distance = dist(out.x_point, out.y_point);

  detail::ArcBuilder b(ix, budget);
  auto vidx = detail::suffix_vertex_table(ix, x);
  auto vidy = detail::suffix_vertex_table(ix, y);
  detail::RelEndpoint u{&x.address.word, &vidx, 0, vidx[0]};
  detail::RelEndpoint v{&y.address.word, &vidy, 0, vidy[0]};

  if (out.x_point == out.y_point) {
    b.rec_single(u, depth);
    out.chain = std::move(b.chain_);
    out.diam_lower = 0.0;
    out.diam_upper = diameter(b.cover_points_);
    return out;
  }

  b.rec(u, v, depth);
  out.chain = std::move(b.chain_);
  out.junctions = std::move(b.junctions_);

  std::vector<Vec2d> lower_pts{to_vec2d(out.x_point), to_vec2d(out.y_point)};
  for (const ArcJunction& j : out.junctions) lower_pts.push_back(j.point_d);
  out.diam_lower = diameter(lower_pts);
  // The lower point set is a subset of the cover's cell vertices, so the
  // upper bound can never drop below the lower one; the clamp absorbs the
  // last-ulp noise of the double composition.
  out.diam_upper = std::max(diameter(b.cover_points_), out.diam_lower);
  return out;
}

/// Lower/upper bound of diam(arc)/|x-y|^lambda for an approximation.
inline std::pair<double, double> arc_ratio(const ArcApproximation& a, double lambda) {
  if (a.x_point == a.y_point)
    throw Error(Errc::CoincidentEndpoints, "arc ratio undefined for coincident endpoints");
  double denom = std::pow(a.endpoint_distance, lambda);
  return {a.diam_lower / denom, a.diam_upper / denom};
}

}  // namespace dendrify
