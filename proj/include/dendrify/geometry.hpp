#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dendrify/rational.hpp"

namespace dendrify {

// ---------------------------------------------------------------------------
// Points and vectors

/// A point of the plane with exact rational coordinates.
struct Point2 {
  Rat x, y;

  friend bool operator==(const Point2& a, const Point2& b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(const Point2& a, const Point2& b) { return !(a == b); }
  friend bool operator<(const Point2& a, const Point2& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  }
};

/// Double-precision point used for metric quantities (distances, angles).
struct Vec2d {
  double x = 0.0, y = 0.0;
};

inline Vec2d to_vec2d(const Point2& p) { return {to_double(p.x), to_double(p.y)}; }

inline double dist(const Vec2d& a, const Vec2d& b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline double dist(const Point2& a, const Point2& b) { return dist(to_vec2d(a), to_vec2d(b)); }

/// Exact orientation predicate: sign of cross(b - a, c - a).
inline int orient(const Point2& a, const Point2& b, const Point2& c) {
  Rat cr = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  return sgn(cr);
}

// ---------------------------------------------------------------------------
// Affine maps

/// Planar affine map S(x,y) = (a x + b y + e, c x + d y + f).
struct AffineMap2 {
  Rat a, b, c, d, e, f;

  Point2 operator()(const Point2& p) const {
    return {a * p.x + b * p.y + e, c * p.x + d * p.y + f};
  }

  Rat det() const { return a * d - b * c; }

  static AffineMap2 identity() { return {1, 0, 0, 1, 0, 0}; }
};

/// Composition m1 after m2: (m1 * m2)(p) = m1(m2(p)).
inline AffineMap2 compose(const AffineMap2& m1, const AffineMap2& m2) {
  return {m1.a * m2.a + m1.b * m2.c,
          m1.a * m2.b + m1.b * m2.d,
          m1.c * m2.a + m1.d * m2.c,
          m1.c * m2.b + m1.d * m2.d,
          m1.a * m2.e + m1.b * m2.f + m1.e,
          m1.c * m2.e + m1.d * m2.f + m1.f};
}

/// Same composition, double precision. Used for rendering and diameter
/// bounds where exactness is not required.
struct AffineMap2d {
  double a = 1, b = 0, c = 0, d = 1, e = 0, f = 0;

  Vec2d operator()(const Vec2d& p) const { return {a * p.x + b * p.y + e, c * p.x + d * p.y + f}; }
};

inline AffineMap2d to_map2d(const AffineMap2& m) {
  return {to_double(m.a), to_double(m.b), to_double(m.c), to_double(m.d), to_double(m.e), to_double(m.f)};
}

inline AffineMap2d compose(const AffineMap2d& m1, const AffineMap2d& m2) {
  return {m1.a * m2.a + m1.b * m2.c, m1.a * m2.b + m1.b * m2.d,
          m1.c * m2.a + m1.d * m2.c, m1.c * m2.b + m1.d * m2.d,
          m1.a * m2.e + m1.b * m2.f + m1.e, m1.c * m2.e + m1.d * m2.f + m1.f};
}

struct StretchFactors {
  double Q;  ///< largest singular value of the linear part
  double q;  ///< smallest singular value of the linear part
};

/// Extremal stretch factors of the linear part, i.e. its singular values,
/// from the closed form for 2x2 matrices.
/// Throws Degenerate when det == 0 and NonContractive when Q >= 1.
inline StretchFactors stretch_factors(const AffineMap2& m) {
  if (m.det() == 0) throw Error(Errc::Degenerate, "affine map has singular linear part");
  double a = to_double(m.a), b = to_double(m.b), c = to_double(m.c), d = to_double(m.d);
  double E = (a + d) / 2, F = (a - d) / 2, G = (c + b) / 2, H = (c - b) / 2;
  double s1 = std::hypot(E, H), s2 = std::hypot(F, G);
  StretchFactors sf{s1 + s2, std::fabs(s1 - s2)};
  if (sf.Q >= 1.0) throw Error(Errc::NonContractive, "affine map is not a contraction");
  return sf;
}

// ---------------------------------------------------------------------------
// Convex polygons

/// Convex polygon; vertices counterclockwise, strictly convex (no three
/// consecutive vertices collinear), nonempty interior.
struct ConvexPolygon {
  std::vector<Point2> vertices;

  size_t size() const { return vertices.size(); }
  const Point2& vertex(size_t i) const { return vertices[i % vertices.size()]; }
};

/// Checks the ConvexPolygon invariants, throwing on violation.
inline void check_convex(const ConvexPolygon& p) {
  size_t n = p.vertices.size();
  if (n < 3) throw Error(Errc::Degenerate, "polygon needs at least 3 vertices");
  for (size_t i = 0; i < n; ++i) {
    int s = orient(p.vertex(i), p.vertex(i + 1), p.vertex(i + 2));
    if (s <= 0) throw Error(Errc::Degenerate, "polygon is not strictly convex counterclockwise");
  }
}

/// Image of a convex polygon under an affine map, orientation re-normalized
/// to counterclockwise (a negative determinant flips orientation).
inline ConvexPolygon apply(const AffineMap2& m, const ConvexPolygon& p) {
  ConvexPolygon out;
  out.vertices.reserve(p.vertices.size());
  for (const Point2& v : p.vertices) out.vertices.push_back(m(v));
  if (sgn(m.det()) < 0) std::reverse(out.vertices.begin(), out.vertices.end());
  return out;
}

/// Exact point-in-polygon test, boundary inclusive.
inline bool contains_point(const ConvexPolygon& p, const Point2& q) {
  size_t n = p.vertices.size();
  for (size_t i = 0; i < n; ++i)
    if (orient(p.vertex(i), p.vertex(i + 1), q) < 0) return false;
  return true;
}

/// Exact index of q among the polygon's vertices, or nullopt.
inline std::optional<size_t> vertex_index(const ConvexPolygon& p, const Point2& q) {
  for (size_t i = 0; i < p.vertices.size(); ++i)
    if (p.vertices[i] == q) return i;
  return std::nullopt;
}

enum class IntersectionKind { Empty, SinglePoint, Extended };

struct Intersection {
  IntersectionKind kind = IntersectionKind::Empty;
  Point2 point;  ///< meaningful only when kind == SinglePoint
};

namespace detail {

// Clips a (possibly degenerate) vertex cycle by the closed half-plane to the
// left of the directed line e0 -> e1. Exact arithmetic throughout.
inline std::vector<Point2> clip_halfplane(const std::vector<Point2>& poly, const Point2& e0, const Point2& e1) {
  std::vector<Point2> out;
  size_t n = poly.size();
  if (n == 0) return out;
  if (n == 1) {
    if (orient(e0, e1, poly[0]) >= 0) out.push_back(poly[0]);
    return out;
  }
  Rat dx = e1.x - e0.x, dy = e1.y - e0.y;
  auto side = [&](const Point2& p) { return sgn(dx * (p.y - e0.y) - dy * (p.x - e0.x)); };
  for (size_t i = 0; i < n; ++i) {
    const Point2& cur = poly[i];
    const Point2& nxt = poly[(i + 1) % n];
    int sc = side(cur), sn = side(nxt);
    if (sc >= 0) out.push_back(cur);
    if ((sc > 0 && sn < 0) || (sc < 0 && sn > 0)) {
      // exact intersection of segment cur->nxt with the clip line
      Rat num = dx * (cur.y - e0.y) - dy * (cur.x - e0.x);
      Rat den = dx * (cur.y - nxt.y) - dy * (cur.x - nxt.x);
      Rat t = num / den;  // in (0,1) by the sign test
      out.push_back({cur.x + t * (nxt.x - cur.x), cur.y + t * (nxt.y - cur.y)});
    }
  }
  return out;
}

inline double point_segment_distance_d(const Vec2d& p, const Vec2d& a, const Vec2d& b) {
  double vx = b.x - a.x, vy = b.y - a.y;
  double len2 = vx * vx + vy * vy;
  double t = len2 > 0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

inline double segment_segment_distance_d(const Vec2d& a, const Vec2d& b, const Vec2d& c, const Vec2d& d) {
  double r = point_segment_distance_d(a, c, d);
  r = std::min(r, point_segment_distance_d(b, c, d));
  r = std::min(r, point_segment_distance_d(c, a, b));
  r = std::min(r, point_segment_distance_d(d, a, b));
  return r;
}

}  // namespace detail

/// Exact classification of the intersection of two convex polygons:
/// empty, a single point (carried), or a set with more than one point.
/// Computed by clipping p2 against p1's half-plane system.
inline Intersection convex_intersection(const ConvexPolygon& p1, const ConvexPolygon& p2) {
  std::vector<Point2> poly = p2.vertices;
  size_t n = p1.vertices.size();
  for (size_t i = 0; i < n && !poly.empty(); ++i)
    poly = detail::clip_halfplane(poly, p1.vertex(i), p1.vertex(i + 1));

  if (poly.empty()) return {IntersectionKind::Empty, {}};
  std::sort(poly.begin(), poly.end());
  poly.erase(std::unique(poly.begin(), poly.end()), poly.end());
  if (poly.size() == 1) return {IntersectionKind::SinglePoint, poly[0]};
  return {IntersectionKind::Extended, {}};
}

/// Minimal distance between two convex polygons. Exactly 0 iff they
/// intersect (gated on the exact predicate); otherwise the boundary-pair
/// minimum in double precision.
inline double min_distance(const ConvexPolygon& p1, const ConvexPolygon& p2) {
  if (convex_intersection(p1, p2).kind != IntersectionKind::Empty) return 0.0;
  std::vector<Vec2d> a, b;
  for (const auto& v : p1.vertices) a.push_back(to_vec2d(v));
  for (const auto& v : p2.vertices) b.push_back(to_vec2d(v));
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      best = std::min(best, detail::segment_segment_distance_d(a[i], a[(i + 1) % a.size()], b[j], b[(j + 1) % b.size()]));
  return best;
}

/// Distance from a point to a convex polygon; exactly 0 iff the point lies
/// in the polygon (boundary inclusive).
inline double point_polygon_distance(const Point2& p, const ConvexPolygon& poly) {
  if (contains_point(poly, p)) return 0.0;
  Vec2d q = to_vec2d(p);
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < poly.vertices.size(); ++i)
    best = std::min(best, detail::point_segment_distance_d(q, to_vec2d(poly.vertex(i)), to_vec2d(poly.vertex(i + 1))));
  return best;
}

/// Unsigned angle between two directions, in [0, pi].
inline double angle_between(const Vec2d& u, const Vec2d& v) {
  double cr = u.x * v.y - u.y * v.x;
  double dt = u.x * v.x + u.y * v.y;
  return std::atan2(std::fabs(cr), dt);
}

namespace detail {

// Directions of the two polygon sides incident to vertex i, pointing away
// from it, in double precision.
inline std::pair<Vec2d, Vec2d> incident_directions(const ConvexPolygon& p, size_t i) {
  size_t n = p.vertices.size();
  Vec2d at = to_vec2d(p.vertices[i]);
  Vec2d prev = to_vec2d(p.vertices[(i + n - 1) % n]);
  Vec2d next = to_vec2d(p.vertices[(i + 1) % n]);
  return {{prev.x - at.x, prev.y - at.y}, {next.x - at.x, next.y - at.y}};
}

inline double min_incident_angle(const ConvexPolygon& p1, size_t i1, const ConvexPolygon& p2, size_t i2) {
  auto [u1, u2] = incident_directions(p1, i1);
  auto [v1, v2] = incident_directions(p2, i2);
  double m = angle_between(u1, v1);
  m = std::min(m, angle_between(u1, v2));
  m = std::min(m, angle_between(u2, v1));
  m = std::min(m, angle_between(u2, v2));
  return m;
}

}  // namespace detail

/// Minimum unsigned angle between a side of p1 and a side of p2 incident to
/// the shared vertex a (sides taken as rays away from a). The caller
/// guarantees p1 and p2 meet only at a; then the result lies in (0, pi].
inline double incident_side_angles(const Point2& a, const ConvexPolygon& p1, const ConvexPolygon& p2) {
  auto i1 = vertex_index(p1, a);
  auto i2 = vertex_index(p2, a);
  if (!i1 || !i2) throw Error(Errc::NotSharedVertex, "point is not a vertex of both polygons");
  return detail::min_incident_angle(p1, *i1, p2, *i2);
}

/// Maximal pairwise distance of a point set. All-pairs for small inputs,
/// convex hull plus rotating calipers otherwise.
inline double diameter(std::span<const Vec2d> pts) {
  size_t n = pts.size();
  if (n == 0) throw Error(Errc::EmptyInput, "diameter of empty point set");
  if (n == 1) return 0.0;
  if (n <= 64) {
    double best = 0.0;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j) best = std::max(best, dist(pts[i], pts[j]));
    return best;
  }
  // Andrew monotone chain hull, then calipers.
  std::vector<Vec2d> p(pts.begin(), pts.end());
  std::sort(p.begin(), p.end(), [](const Vec2d& a, const Vec2d& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  p.erase(std::unique(p.begin(), p.end(), [](const Vec2d& a, const Vec2d& b) { return a.x == b.x && a.y == b.y; }), p.end());
  auto cross = [](const Vec2d& o, const Vec2d& a, const Vec2d& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  std::vector<Vec2d> h(2 * p.size());
  size_t k = 0;
  for (size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (size_t i = p.size() - 1, lo = k + 1; i-- > 0;) {
    while (k >= lo && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  h.resize(k > 1 ? k - 1 : k);
  size_t m = h.size();
  if (m == 1) return 0.0;
  if (m == 2) return dist(h[0], h[1]);
  double best = 0.0;
  size_t j = 1;
  auto area2 = [&](size_t ia, size_t ib, size_t ic) { return std::fabs(cross(h[ia], h[ib % m], h[ic % m])); };
  for (size_t i = 0; i < m; ++i) {
    while (area2(i, i + 1, j + 1) > area2(i, i + 1, j)) j = (j + 1) % m;
    best = std::max(best, std::max(dist(h[i], h[j]), dist(h[(i + 1) % m], h[j])));
  }
  return best;
}

inline double diameter(const std::vector<Vec2d>& pts) { return diameter(std::span<const Vec2d>(pts)); }

inline double diameter(const std::vector<Point2>& pts) {
  std::vector<Vec2d> d;
  d.reserve(pts.size());
  for (const auto& p : pts) d.push_back(to_vec2d(p));
  return diameter(d);
}

}  // namespace dendrify
