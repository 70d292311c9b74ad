#pragma once

// Shared test fixtures, mirroring the definition files under data/.

#include "dendrify/dendrify.hpp"

namespace dendrify::fixtures {

inline Rat rat(const char* s) { return parse_rational(s); }

inline ConvexPolygon triangle(const char* ax, const char* ay, const char* bx, const char* by,
                              const char* cx, const char* cy) {
  return {{{rat(ax), rat(ay)}, {rat(bx), rat(by)}, {rat(cx), rat(cy)}}};
}

inline ConvexPolygon unit_square() {
  return {{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
}

inline AffineMap2 map(const char* a, const char* b, const char* c, const char* d, const char* e,
                      const char* f) {
  return {rat(a), rat(b), rat(c), rat(d), rat(e), rat(f)};
}

/// Two-map triangle system: S1 the half-scale similarity fixing A=(0,0),
/// S2 a proper affine map sending (A,B,C) to (C,B,mid(AB)). One connection
/// point, mid(AB) = (1/2, 0); passes all four conditions.
inline PolygonalSystem split_triangle() {
  PolygonalSystem sys;
  sys.base = triangle("0", "0", "1", "0", "4/5", "3/5");
  sys.maps = {map("1/2", "0", "0", "1/2", "0", "0"),
              map("1/5", "-23/30", "-3/5", "-1/5", "4/5", "3/5")};
  return sys;
}

/// Three-map valley arc; maps[0] is the axis-aligned squeeze diag(1/3, 2/3)
/// with singular values (2/3, 1/3) and fixed point at the bottom vertex.
inline PolygonalSystem valley() {
  PolygonalSystem sys;
  sys.base = triangle("0", "0", "1", "1", "-1", "1");
  sys.maps = {map("1/3", "0", "0", "2/3", "0", "0"),
              map("1/3", "-1/4", "-1/6", "1/3", "-5/12", "1/2"),
              map("1/3", "1/4", "1/6", "1/3", "5/12", "1/2")};
  return sys;
}

/// Similarity-only bent arc (two reflecting similarities of ratio sqrt(13)/6).
inline PolygonalSystem koch() {
  PolygonalSystem sys;
  sys.base = triangle("0", "0", "1", "0", "1/2", "1/3");
  sys.maps = {map("1/2", "1/3", "1/3", "-1/2", "0", "0"),
              map("1/2", "-1/3", "-1/3", "-1/2", "1/2", "1/3")};
  return sys;
}

/// Midpoint similarities at the corners of a right triangle; intersection
/// graph is a 6-cycle, so condition 4 fails.
inline PolygonalSystem sierpinski() {
  PolygonalSystem sys;
  sys.base = triangle("0", "0", "1", "0", "0", "1");
  sys.maps = {map("1/2", "0", "0", "1/2", "0", "0"),
              map("1/2", "0", "0", "1/2", "1/2", "0"),
              map("1/2", "0", "0", "1/2", "0", "1/2")};
  return sys;
}

/// Two overlapping square copies; condition 3 fails with kind Extended.
inline PolygonalSystem overlap_squares() {
  PolygonalSystem sys;
  sys.base = unit_square();
  sys.maps = {map("3/5", "0", "0", "3/5", "0", "0"),
              map("3/5", "0", "0", "3/5", "2/5", "2/5")};
  return sys;
}

}  // namespace dendrify::fixtures
