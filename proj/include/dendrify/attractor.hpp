#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dendrify/polysys.hpp"

namespace dendrify {

inline constexpr std::size_t kDefaultCellBudget = 1'000'000;

/// A multiindex over {1..m}; letters stored 0-based, empty word = root.
struct Address {
  std::vector<int> word;

  size_t length() const { return word.size(); }
  bool empty() const { return word.empty(); }

  friend bool operator==(const Address& a, const Address& b) { return a.word == b.word; }
  friend bool operator<(const Address& a, const Address& b) { return a.word < b.word; }

  bool is_prefix_of(const Address& other) const {
    if (word.size() > other.word.size()) return false;
    return std::equal(word.begin(), word.end(), other.word.begin());
  }

  Address child(int letter) const {
    Address a = *this;
    a.word.push_back(letter);
    return a;
  }
};

inline Address longest_common_prefix(const Address& a, const Address& b) {
  Address out;
  size_t n = std::min(a.word.size(), b.word.size());
  for (size_t i = 0; i < n && a.word[i] == b.word[i]; ++i) out.word.push_back(a.word[i]);
  return out;
}

/// Compact display form: letters 1-based, concatenated for m <= 9 and
/// dot-separated otherwise; the empty address prints as the epsilon sign.
inline std::string format_address(const Address& a, size_t m) {
  if (a.word.empty()) return "ε";
  std::string out;
  for (size_t i = 0; i < a.word.size(); ++i) {
    if (m > 9 && i > 0) out += '.';
    out += std::to_string(a.word[i] + 1);
  }
  return out;
}

/// A point of the attractor given symbolically as S_addr(V[vertex]).
/// Exact by construction: V is contained in K, so the denoted point is too.
struct AddressedPoint {
  Address address;
  int vertex = 0;
};

inline void check_addressed_point(const PolygonalSystem& sys, const AddressedPoint& ap) {
  if (ap.vertex < 0 || ap.vertex >= static_cast<int>(sys.vertex_count()))
    throw Error(Errc::InvalidEndpoint, "vertex index out of range");
  for (int letter : ap.address.word)
    if (letter < 0 || letter >= static_cast<int>(sys.index_count()))
      throw Error(Errc::InvalidEndpoint, "address letter out of range");
}

/// Composed map along an address word.
inline AffineMap2 composed_map(const PolygonalSystem& sys, const Address& addr) {
  AffineMap2 m = AffineMap2::identity();
  for (int letter : addr.word) m = compose(m, sys.maps[letter]);
  return m;
}

/// The exact point denoted by an AddressedPoint.
inline Point2 denote(const PolygonalSystem& sys, const AddressedPoint& ap) {
  check_addressed_point(sys, ap);
  return composed_map(sys, ap.address)(sys.base.vertices[ap.vertex]);
}

struct Cell {
  Address address;
  AffineMap2 map;        ///< S_address, exact
  ConvexPolygon polygon; ///< S_address(P), exact
};

/// Depth-n Hutchinson refinement: all m^n cells in lexicographic address order.
struct Refinement {
  int depth = 0;
  std::vector<Cell> cells;
};

/// Builds the depth-n refinement. Throws DepthTooLarge if m^n exceeds the
/// cell budget.
inline Refinement refine(const PolygonalSystem& sys, int depth, std::size_t budget = kDefaultCellBudget) {
  if (depth < 0) throw Error(Errc::DepthTooLarge, "negative depth");
  std::size_t m = sys.maps.size();
  std::size_t count = 1;
  for (int i = 0; i < depth; ++i) {
    if (count > budget / m) throw Error(Errc::DepthTooLarge, "cell budget exceeded");
    count *= m;
  }
  if (count > budget) throw Error(Errc::DepthTooLarge, "cell budget exceeded");

  Refinement r;
  r.depth = depth;
  r.cells.push_back({Address{}, AffineMap2::identity(), sys.base});
  for (int level = 0; level < depth; ++level) {
    std::vector<Cell> next;
    next.reserve(r.cells.size() * m);
    for (const Cell& cell : r.cells) {
      for (std::size_t i = 0; i < m; ++i) {
        AffineMap2 cm = compose(cell.map, sys.maps[i]);
        next.push_back({cell.address.child(static_cast<int>(i)), cm, apply(cm, sys.base)});
      }
    }
    r.cells = std::move(next);
  }
  return r;
}

/// All depth-n addresses whose cell contains p (exact test), in address
/// order. Throws PointOutside when no cell contains p.
inline std::vector<Address> locate(const Point2& p, const Refinement& r) {
  std::vector<Address> out;
  for (const Cell& c : r.cells)
    if (contains_point(c.polygon, p)) out.push_back(c.address);
  if (out.empty()) throw Error(Errc::PointOutside, "point lies outside every cell");
  return out;
}

}  // namespace dendrify
