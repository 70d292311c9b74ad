#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <vector>

#include "dendrify/arcs.hpp"

namespace dendrify {

// ---------------------------------------------------------------------------
// Deterministic RNG (splitmix64). Bounded draws avoid std distributions so
// that reports are reproducible byte for byte for a given seed.
struct SplitMix64 {
  uint64_t state;

  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  uint64_t below(uint64_t n) { return next() % n; }

  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// ---------------------------------------------------------------------------

struct PerMapStretch {
  double Q, q;
};

struct BetaWitness {
  Address addr_i, addr_j;
  Vec2d at;
};

/// The certificate of the Hoelder bounded-turning inequality
/// diam(gamma(x,y)) <= C |x-y|^lambda in coordinates where diam(P) = 1.
struct HolderCertificate {
  std::vector<PerMapStretch> per_map;
  double lambda = 0.0;
  double rho = 0.0;
  double beta = 0.0;
  int beta_depth = 1;
  std::vector<double> beta_by_depth;  ///< beta probed at depths 1..beta_depth
  BetaWitness beta_witness;
  double C = 0.0;
  double diam_scale = 1.0;  ///< diam(P) of the original coordinates
};

/// Rescales the system by the similarity x -> x/scale with scale = diam(P),
/// so the result has unit diameter (up to one ulp of the double diameter).
/// The scale enters exactly (a double is a rational), so every validation
/// predicate stays exact; linear parts are unchanged by the conjugation.
inline std::pair<PolygonalSystem, double> normalize(const PolygonalSystem& sys) {
  double d = diameter(sys.base.vertices);
  Rat s(d);
  PolygonalSystem out = sys;
  for (Point2& v : out.base.vertices) {
    v.x /= s;
    v.y /= s;
  }
  for (AffineMap2& m : out.maps) {
    m.e /= s;
    m.f /= s;
  }
  return {out, d};
}

/// lambda = min_i log Q_i / log q_i, in (0, 1]. Equals 1 exactly when every
/// map is a similarity.
inline double compute_lambda(const PolygonalSystem& sys) {
  double lambda = std::numeric_limits<double>::infinity();
  for (const AffineMap2& m : sys.maps) {
    StretchFactors sf = stretch_factors(m);
    lambda = std::min(lambda, sf.Q == sf.q ? 1.0 : std::log(sf.Q) / std::log(sf.q));
  }
  return std::min(lambda, 1.0);
}

/// rho = min(d1, d2) in the units of the given system: d1 over copy pairs
/// with empty intersection, d2 over (vertex A, copy P_i) with A outside P_i.
/// Throws NoSeparatedPairs when both candidate sets are empty.
inline double compute_rho(const PolygonalSystem& sys, const ValidationReport& report) {
  auto images = image_polygons(sys);
  size_t m = images.size();
  std::set<std::pair<int, int>> touching;
  for (const ConnectionPoint& c : report.connection_points()) touching.insert({c.i, c.j});

  double rho = std::numeric_limits<double>::infinity();
  bool any = false;
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = i + 1; j < m; ++j) {
      if (touching.count({static_cast<int>(i), static_cast<int>(j)})) continue;
      rho = std::min(rho, min_distance(images[i], images[j]));
      any = true;
    }
  }
  for (const Point2& a : sys.base.vertices) {
    for (size_t i = 0; i < m; ++i) {
      if (contains_point(images[i], a)) continue;
      rho = std::min(rho, point_polygon_distance(a, images[i]));
      any = true;
    }
  }
  if (!any)
    throw Error(Errc::NoSeparatedPairs, "every copy touches every other and every vertex lies in every copy");
  return rho;
}

struct BetaResult {
  double beta = 0.0;
  BetaWitness witness;
};

namespace detail {

struct BetaConfig {
  std::vector<int> wi, wj;  // address words relative to the probe prefix
  int point_node;           // connection point node (relative to the prefix)
  int qi, qj;               // vertex identity of the point inside each copy
};

// Enumerates all touching incomparable pairs rooted at a sibling junction,
// both sides up to `cap` letters deep; dedup on the word pair.
inline std::vector<BetaConfig> rooted_beta_configs(const SystemIndex& ix, int cap) {
  std::vector<BetaConfig> out;
  std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
  std::vector<BetaConfig> queue;
  for (size_t p = 0; p < ix.graph.points.size(); ++p) {
    const auto& adj = ix.graph.point_adjacent[p];
    for (size_t a = 0; a < adj.size(); ++a) {
      for (size_t b = a + 1; b < adj.size(); ++b) {
        BetaConfig c{{adj[a]}, {adj[b]}, static_cast<int>(p),
                     ix.point_vertex_in[p][adj[a]], ix.point_vertex_in[p][adj[b]]};
        queue.push_back(c);
        seen.insert({c.wi, c.wj});
      }
    }
  }
  for (size_t head = 0; head < queue.size(); ++head) {
    BetaConfig c = queue[head];
    out.push_back(c);
    // expansions: descend the left side, the right side, or both by one level
    auto push_cfg = [&](const BetaConfig& nc) {
      if (seen.insert({nc.wi, nc.wj}).second) queue.push_back(nc);
    };
    auto left_child = [&](int cl) {
      BetaConfig nc = c;
      nc.wi.push_back(cl);
      nc.qi = ix.vertex_preimage[cl][c.qi];
      return nc;
    };
    bool can_l = static_cast<int>(c.wi.size()) < cap;
    bool can_r = static_cast<int>(c.wj.size()) < cap;
    if (can_l)
      for (int cl : ix.vertex_children[c.qi]) push_cfg(left_child(cl));
    if (can_r) {
      for (int cr : ix.vertex_children[c.qj]) {
        BetaConfig nc = c;
        nc.wj.push_back(cr);
        nc.qj = ix.vertex_preimage[cr][c.qj];
        push_cfg(nc);
        if (can_l) {
          for (int cl : ix.vertex_children[c.qi]) {
            BetaConfig both = left_child(cl);
            both.wj.push_back(cr);
            both.qj = ix.vertex_preimage[cr][c.qj];
            push_cfg(both);
          }
        }
      }
    }
  }
  return out;
}

}  // namespace detail

/// Minimum incident-side angle over every touching configuration
/// (P_i, P_j, junction) among incomparable addresses of length <= n.
/// Affine maps distort angles, so each rooted configuration is probed under
/// every prefix word that keeps the total depth within n.
inline BetaResult compute_beta(const SystemIndex& ix, int probe_depth) {
  BetaResult best;
  best.beta = std::numeric_limits<double>::infinity();
  auto rooted = detail::rooted_beta_configs(ix, probe_depth);

  // Walk all prefixes of length 0..probe_depth-1, composing double maps.
  struct Frame {
    std::vector<int> prefix;
    AffineMap2d map;
  };
  std::vector<Frame> stack{{{}, AffineMap2d{}}};
  const auto& V = ix.sys.base.vertices;
  while (!stack.empty()) {
    Frame fr = std::move(stack.back());
    stack.pop_back();
    int cap = probe_depth - static_cast<int>(fr.prefix.size());
    for (const auto& cfg : rooted) {
      if (static_cast<int>(std::max(cfg.wi.size(), cfg.wj.size())) > cap) continue;
      AffineMap2d mi = fr.map, mj = fr.map;
      for (int c : cfg.wi) mi = compose(mi, to_map2d(ix.sys.maps[c]));
      for (int c : cfg.wj) mj = compose(mj, to_map2d(ix.sys.maps[c]));
      // Directions of the sides incident to the shared point, computed from
      // the base polygon's neighbor vertices under each composed map.
      size_t n = V.size();
      auto dirs = [&](const AffineMap2d& m, int q) {
        Vec2d at = m(to_vec2d(V[q]));
        Vec2d prev = m(to_vec2d(V[(q + n - 1) % n]));
        Vec2d next = m(to_vec2d(V[(q + 1) % n]));
        return std::pair<Vec2d, Vec2d>{{prev.x - at.x, prev.y - at.y}, {next.x - at.x, next.y - at.y}};
      };
      auto [u1, u2] = dirs(mi, cfg.qi);
      auto [v1, v2] = dirs(mj, cfg.qj);
      double ang = std::min(std::min(angle_between(u1, v1), angle_between(u1, v2)),
                            std::min(angle_between(u2, v1), angle_between(u2, v2)));
      if (ang < best.beta) {
        best.beta = ang;
        best.witness.addr_i.word = fr.prefix;
        best.witness.addr_i.word.insert(best.witness.addr_i.word.end(), cfg.wi.begin(), cfg.wi.end());
        best.witness.addr_j.word = fr.prefix;
        best.witness.addr_j.word.insert(best.witness.addr_j.word.end(), cfg.wj.begin(), cfg.wj.end());
        best.witness.at = mi(to_vec2d(V[cfg.qi]));
      }
    }
    if (static_cast<int>(fr.prefix.size()) + 1 < probe_depth) {
      for (size_t c = 0; c < ix.map_count(); ++c) {
        Frame child = fr;
        child.prefix.push_back(static_cast<int>(c));
        child.map = compose(fr.map, to_map2d(ix.sys.maps[c]));
        stack.push_back(std::move(child));
      }
    }
  }
  return best;
}

/// Assembles the certificate: per-map stretch factors, lambda, rho in
/// normalized units (original rho divided by diam(P)), the probed beta, and
/// C = 2 / (rho^lambda (sin beta)^lambda).
inline HolderCertificate compute_certificate(const SystemIndex& ix, const ValidationReport& report,
                                             int beta_depth = 6) {
  HolderCertificate cert;
  for (const AffineMap2& m : ix.sys.maps) {
    StretchFactors sf = stretch_factors(m);
    cert.per_map.push_back({sf.Q, sf.q});
  }
  cert.lambda = compute_lambda(ix.sys);
  cert.diam_scale = diameter(ix.sys.base.vertices);
  cert.rho = compute_rho(ix.sys, report) / cert.diam_scale;
  cert.beta_depth = beta_depth;
  for (int d = 1; d <= beta_depth; ++d) {
    BetaResult b = compute_beta(ix, d);
    cert.beta_by_depth.push_back(b.beta);
    if (d == beta_depth) {
      cert.beta = b.beta;
      cert.beta_witness = b.witness;
    }
  }
  cert.C = 2.0 / std::pow(cert.rho * std::sin(cert.beta), cert.lambda);
  return cert;
}

// ---------------------------------------------------------------------------
// Empirical verification

struct StretchViolation {
  Address word;
  double Q, q, slack;
};

struct StretchCheckReport {
  int trials = 0;
  int max_len = 0;
  uint64_t seed = 0;
  double lambda = 0.0;
  double max_slack = 0.0;  ///< max over trials of Q_w / q_w^lambda
  std::vector<StretchViolation> violations;  ///< slack beyond 1 + 1e-9; empty on correct systems
};

/// Samples random multiindices, composes the exact maps, and checks
/// Q_w <= q_w^lambda at 1e-9 slack. A violation signals an implementation
/// bug: the inequality always holds for lambda = min log Q_i/log q_i.
inline StretchCheckReport verify_stretch_inequality(const PolygonalSystem& sys, double lambda, int trials, int max_len,
                                  uint64_t seed = 0) {
  StretchCheckReport rep;
  rep.trials = trials;
  rep.max_len = max_len;
  rep.seed = seed;
  rep.lambda = lambda;
  SplitMix64 rng(seed);
  size_t m = sys.maps.size();
  for (int t = 0; t < trials; ++t) {
    int len = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(max_len)));
    Address w;
    AffineMap2 composed = AffineMap2::identity();
    for (int k = 0; k < len; ++k) {
      int letter = static_cast<int>(rng.below(m));
      w.word.push_back(letter);
      composed = compose(composed, sys.maps[letter]);
    }
    StretchFactors sf = stretch_factors(composed);
    double slack = sf.Q / std::pow(sf.q, lambda);
    rep.max_slack = std::max(rep.max_slack, slack);
    if (slack > 1.0 + 1e-9) rep.violations.push_back({w, sf.Q, sf.q, slack});
  }
  return rep;
}

struct TurningWitness {
  AddressedPoint x, y;
  double distance = 0.0;
  double diam_upper = 0.0;
  double ratio = 0.0;
};

struct TurningReport {
  int samples = 0;
  int depth = 0;
  uint64_t seed = 0;
  double lambda = 0.0;
  double C = 0.0;
  double diam_scale = 1.0;
  double max_ratio = 0.0;  ///< max of diam_upper/|x-y|^lambda, normalized units
  double margin = 0.0;     ///< C - max_ratio
  TurningWitness witness;
  int evaluated = 0;  ///< distinct pairs measured (equals samples; coincident draws are redrawn)
  int redraws = 0;    ///< coincident draws that were replaced
};

/// Draws stratified addressed-point pairs (across first-level copies,
/// across deep copies, and within a common deep copy to exercise the
/// semigroup invariance) and measures diam_upper / |x-y|^lambda against C.
/// Ratios are taken in normalized units: both diameter and distance are
/// divided by diam(P). In original coordinates the certified inequality
/// reads diam(gamma) <= C * diam(P)^(1-lambda) * |x-y|^lambda.
inline TurningReport verify_bounded_turning(const SystemIndex& ix, const HolderCertificate& cert,
                                            int samples, int depth, uint64_t seed = 0,
                                            std::optional<double> lambda_override = std::nullopt,
                                            std::size_t budget = kDefaultCellBudget) {
  TurningReport rep;
  rep.samples = samples;
  rep.depth = depth;
  rep.seed = seed;
  rep.lambda = lambda_override.value_or(cert.lambda);
  rep.C = cert.C;
  rep.diam_scale = cert.diam_scale;

  SplitMix64 rng(seed);
  size_t m = ix.map_count(), nv = ix.vertex_count();
  double s = cert.diam_scale;

  auto random_point = [&](int min_len, int max_len, std::optional<int> first) {
    AddressedPoint ap;
    int len = min_len + static_cast<int>(rng.below(static_cast<uint64_t>(max_len - min_len + 1)));
    for (int k = 0; k < len; ++k) {
      int letter = (k == 0 && first) ? *first : static_cast<int>(rng.below(m));
      ap.address.word.push_back(letter);
    }
    ap.vertex = static_cast<int>(rng.below(nv));
    return ap;
  };

  for (int t = 0; t < samples; ++t) {
    while (true) {
      AddressedPoint x, y;
      switch (t % 3) {
        case 0: {  // across two distinct first-level copies
          int i = static_cast<int>(rng.below(m));
          int j = static_cast<int>(rng.below(m - 1));
          if (j >= i) ++j;
          x = random_point(1, depth, i);
          y = random_point(1, depth, j);
          break;
        }
        case 1: {  // independent deep copies
          x = random_point(depth, depth, std::nullopt);
          y = random_point(depth, depth, std::nullopt);
          break;
        }
        default: {  // common prefix, then independent tails (semigroup-invariance regime)
          int plen = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(std::max(1, depth - 1))));
          Address prefix;
          for (int k = 0; k < plen; ++k) prefix.word.push_back(static_cast<int>(rng.below(m)));
          x = random_point(0, depth - plen, std::nullopt);
          y = random_point(0, depth - plen, std::nullopt);
          x.address.word.insert(x.address.word.begin(), prefix.word.begin(), prefix.word.end());
          y.address.word.insert(y.address.word.begin(), prefix.word.begin(), prefix.word.end());
          break;
        }
      }
      ArcApproximation a = arc(ix, x, y, depth, budget);
      if (a.x_point == a.y_point) {
        ++rep.redraws;
        continue;
      }
      ++rep.evaluated;
      double ratio = (a.diam_upper / s) / std::pow(a.endpoint_distance / s, rep.lambda);
      if (ratio > rep.max_ratio) {
        rep.max_ratio = ratio;
        rep.witness = {a.x, a.y, a.endpoint_distance, a.diam_upper, ratio};
      }
      break;
    }
  }
  rep.margin = rep.C - rep.max_ratio;
  return rep;
}

}  // namespace dendrify
