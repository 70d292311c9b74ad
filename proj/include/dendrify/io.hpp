#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "dendrify/holder.hpp"
#include "dendrify/svg.hpp"

namespace dendrify {

inline constexpr const char* kToolName = "dendrify";
inline constexpr const char* kToolVersion = "1.0.0";

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// System definition files
//
//   { "polygon": [[x, y], ...],
//     "maps":    [{"a":..,"b":..,"c":..,"d":..,"e":..,"f":..}, ...] }
//
// Numbers are JSON decimals (read at double precision, then exact) or
// strings like "3/4" / "-0.25" parsed as exact rationals.

namespace detail {

inline Rat json_number(const Json& v, const std::string& where) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rat(v.get<long long>());
  if (v.is_number_float()) return Rat(v.get<double>());
  throw Error(Errc::ParseError, where + ": expected a number or rational string");
}

}  // namespace detail

inline PolygonalSystem parse_system(const Json& doc) {
  if (!doc.is_object() || !doc.contains("polygon") || !doc.contains("maps"))
    throw Error(Errc::ParseError, "system file must be an object with 'polygon' and 'maps'");
  PolygonalSystem sys;
  const Json& poly = doc["polygon"];
  if (!poly.is_array() || poly.size() < 3)
    throw Error(Errc::ParseError, "'polygon' must list at least 3 [x, y] pairs");
  for (size_t i = 0; i < poly.size(); ++i) {
    const Json& pt = poly[i];
    if (!pt.is_array() || pt.size() != 2)
      throw Error(Errc::ParseError, "polygon vertex " + std::to_string(i) + " must be [x, y]");
    sys.base.vertices.push_back({detail::json_number(pt[0], "polygon x"), detail::json_number(pt[1], "polygon y")});
  }
  const Json& maps = doc["maps"];
  if (!maps.is_array() || maps.size() < 2)
    throw Error(Errc::ParseError, "'maps' must list at least 2 affine maps");
  for (size_t i = 0; i < maps.size(); ++i) {
    const Json& m = maps[i];
    std::string where = "map " + std::to_string(i + 1);
    if (!m.is_object()) throw Error(Errc::ParseError, where + " must be an object");
    AffineMap2 am;
    for (auto [key, field] : {std::pair<const char*, Rat*>{"a", &am.a}, {"b", &am.b}, {"c", &am.c},
                              {"d", &am.d}, {"e", &am.e}, {"f", &am.f}}) {
      if (!m.contains(key)) throw Error(Errc::ParseError, where + " is missing '" + key + "'");
      *field = detail::json_number(m[key], where + "." + key);
    }
    sys.maps.push_back(am);
  }
  check_convex(sys.base);
  return sys;
}

inline PolygonalSystem parse_system_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::ParseError, std::string("JSON parse error: ") + e.what());
  }
  return parse_system(doc);
}

inline PolygonalSystem load_system(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ParseError, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_system_text(ss.str());
}

/// Writes content to a temporary sibling then renames it into place, so a
/// failure never leaves a partial output file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::ParseError, "cannot write '" + tmp.string() + "'");
    out << content;
    if (!out.good()) throw Error(Errc::ParseError, "write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// Address tokens: "12:3" = word (1,2), vertex 3 (both 1-based); the empty
// address is the epsilon sign. Words over more than 9 maps are dot-separated.

inline std::string format_endpoint_token(const AddressedPoint& ap, size_t m) {
  return format_address(ap.address, m) + ":" + std::to_string(ap.vertex + 1);
}

inline AddressedPoint parse_endpoint_token(const std::string& token, size_t m, size_t vertex_count) {
  auto colon = token.rfind(':');
  if (colon == std::string::npos)
    throw Error(Errc::InvalidEndpoint, "endpoint token '" + token + "' needs the form <address>:<vertex>");
  std::string addr = token.substr(0, colon);
  std::string vert = token.substr(colon + 1);
  AddressedPoint ap;
  if (addr != "ε" && !addr.empty()) {
    if (addr.find('.') != std::string::npos) {
      std::stringstream ss(addr);
      std::string part;
      while (std::getline(ss, part, '.')) {
        if (part.empty()) throw Error(Errc::InvalidEndpoint, "empty letter in '" + token + "'");
        int letter = 0;
        try {
          letter = std::stoi(part);
        } catch (const std::exception&) {
          throw Error(Errc::InvalidEndpoint, "invalid letter '" + part + "' in '" + token + "'");
        }
        ap.address.word.push_back(letter - 1);
      }
    } else {
      for (char ch : addr) {
        if (ch < '1' || ch > '9')
          throw Error(Errc::InvalidEndpoint, "invalid letter '" + std::string(1, ch) + "' in '" + token + "'");
        ap.address.word.push_back(ch - '1');
      }
    }
  }
  try {
    ap.vertex = std::stoi(vert) - 1;
  } catch (const std::exception&) {
    throw Error(Errc::InvalidEndpoint, "invalid vertex index in '" + token + "'");
  }
  for (int letter : ap.address.word)
    if (letter < 0 || letter >= static_cast<int>(m))
      throw Error(Errc::InvalidEndpoint, "address letter out of range in '" + token + "'");
  if (ap.vertex < 0 || ap.vertex >= static_cast<int>(vertex_count))
    throw Error(Errc::InvalidEndpoint, "vertex index out of range in '" + token + "'");
  return ap;
}

// ---------------------------------------------------------------------------
// Report serialization. Indices are 1-based in output to match address
// tokens; exact points carry both rational strings and a decimal rendering.

namespace detail {

inline Json point_json(const Point2& p) {
  return Json{{"exact", {rational_to_string(p.x), rational_to_string(p.y)}},
              {"approx", {to_double(p.x), to_double(p.y)}}};
}

inline const char* verdict_str(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    default: return "skipped";
  }
}

inline const char* kind_str(IntersectionKind k) {
  switch (k) {
    case IntersectionKind::Empty: return "empty";
    case IntersectionKind::SinglePoint: return "single-point";
    default: return "extended";
  }
}

inline Json graph_node_json(const BipartiteIntersectionGraph& g, int node) {
  if (!g.is_point_node(node)) return Json{{"polygon", node + 1}};
  return Json{{"point", point_json(g.points[node - g.polygon_count])["approx"]}};
}

}  // namespace detail

inline Json validation_report_json(const ValidationReport& rep, const PolygonalSystem&) {
  Json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = "validate";
  j["overall"] = rep.overall ? "pass" : "fail";

  Json c1{{"verdict", detail::verdict_str(rep.condition1.verdict)}};
  if (rep.condition1.verdict == Verdict::Fail) c1["offending_index"] = rep.condition1.offending_index + 1;
  j["condition1"] = c1;

  Json c2{{"verdict", detail::verdict_str(rep.condition2.verdict)}};
  Json unc = Json::array();
  for (int v : rep.condition2.uncovered) unc.push_back(v + 1);
  c2["uncovered_vertices"] = unc;
  j["condition2"] = c2;

  Json c3{{"verdict", detail::verdict_str(rep.condition3.verdict)}};
  if (rep.condition3.verdict == Verdict::Fail) {
    c3["offending_pair"] = {rep.condition3.offending_i + 1, rep.condition3.offending_j + 1};
    c3["kind"] = detail::kind_str(rep.condition3.offending_kind);
    if (rep.condition3.nonvertex_touch) c3["detail"] = "touch point is not a common vertex image";
  }
  j["condition3"] = c3;

  Json c4{{"verdict", detail::verdict_str(rep.condition4.verdict)}};
  if (rep.condition4.verdict == Verdict::Fail && rep.graph) {
    if (!rep.condition4.cycle.empty()) {
      Json cyc = Json::array();
      for (int node : rep.condition4.cycle) cyc.push_back(detail::graph_node_json(*rep.graph, node));
      c4["cycle"] = cyc;
      c4["cycle_length"] = rep.condition4.cycle.size();
    }
    if (!rep.condition4.unreachable.empty()) {
      Json un = Json::array();
      for (int node : rep.condition4.unreachable) un.push_back(detail::graph_node_json(*rep.graph, node));
      c4["unreachable"] = un;
    }
  }
  j["condition4"] = c4;

  Json cps = Json::array();
  for (const ConnectionPoint& c : rep.connection_points())
    cps.push_back(Json{{"i", c.i + 1}, {"j", c.j + 1}, {"point", detail::point_json(c.point)}});
  j["connection_points"] = cps;

  if (rep.graph) {
    j["graph"] = Json{{"polygon_nodes", rep.graph->polygon_count},
                      {"point_nodes", rep.graph->points.size()},
                      {"edges", rep.graph->edge_count()}};
  }
  return j;
}

inline Json certificate_json(const HolderCertificate& cert, const PolygonalSystem& sys) {
  size_t m = sys.maps.size();
  Json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = "certify";
  Json per = Json::array();
  for (size_t i = 0; i < cert.per_map.size(); ++i)
    per.push_back(Json{{"i", i + 1}, {"Q", cert.per_map[i].Q}, {"q", cert.per_map[i].q}});
  j["per_map"] = per;
  j["lambda"] = cert.lambda;
  j["rho"] = cert.rho;
  j["beta"] = cert.beta;
  j["beta_depth"] = cert.beta_depth;
  j["beta_by_depth"] = cert.beta_by_depth;
  j["beta_stabilized"] = cert.beta_by_depth.size() < 2 ||
                         std::fabs(cert.beta_by_depth.back() - cert.beta_by_depth[cert.beta_by_depth.size() - 2]) <= 1e-12;
  j["beta_witness"] = Json{{"address_i", format_address(cert.beta_witness.addr_i, m)},
                           {"address_j", format_address(cert.beta_witness.addr_j, m)},
                           {"at", {cert.beta_witness.at.x, cert.beta_witness.at.y}}};
  j["C"] = cert.C;
  j["diam_scale"] = cert.diam_scale;
  // In original coordinates: diam(gamma) <= C * diam(P)^(1-lambda) * |x-y|^lambda.
  j["bound_factor_original_coords"] = cert.C * std::pow(cert.diam_scale, 1.0 - cert.lambda);
  return j;
}

inline Json stretch_report_json(const StretchCheckReport& rep, const PolygonalSystem& sys) {
  size_t m = sys.maps.size();
  Json j;
  j["trials"] = rep.trials;
  j["max_len"] = rep.max_len;
  j["seed"] = rep.seed;
  j["lambda"] = rep.lambda;
  j["max_slack"] = rep.max_slack;
  Json viol = Json::array();
  for (const auto& v : rep.violations)
    viol.push_back(Json{{"word", format_address(v.word, m)}, {"Q", v.Q}, {"q", v.q}, {"slack", v.slack}});
  j["violations"] = viol;
  return j;
}

inline Json arc_record_json(const ArcApproximation& a, const PolygonalSystem& sys) {
  size_t m = sys.maps.size();
  Json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = "arc";
  j["x"] = format_endpoint_token(a.x, m);
  j["y"] = format_endpoint_token(a.y, m);
  j["depth"] = a.depth;
  Json chain = Json::array();
  for (const Address& c : a.chain) chain.push_back(format_address(c, m));
  j["chain"] = chain;
  Json junctions = Json::array();
  for (const ArcJunction& jn : a.junctions) junctions.push_back(detail::point_json(jn.point));
  j["junctions"] = junctions;
  j["endpoint_distance"] = a.endpoint_distance;
  j["diam_lower"] = a.diam_lower;
  j["diam_upper"] = a.diam_upper;
  return j;
}

inline Json turning_report_json(const TurningReport& rep, const PolygonalSystem& sys) {
  size_t m = sys.maps.size();
  Json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = "verify";
  j["seed"] = rep.seed;
  j["samples"] = rep.samples;
  j["evaluated"] = rep.evaluated;
  j["redraws"] = rep.redraws;
  j["depth"] = rep.depth;
  j["lambda"] = rep.lambda;
  j["C"] = rep.C;
  j["diam_scale"] = rep.diam_scale;
  j["max_ratio"] = rep.max_ratio;
  j["margin"] = rep.margin;
  j["witness"] = Json{{"x", format_endpoint_token(rep.witness.x, m)},
                      {"y", format_endpoint_token(rep.witness.y, m)},
                      {"distance", rep.witness.distance},
                      {"diam_upper", rep.witness.diam_upper},
                      {"ratio", rep.witness.ratio}};
  // Certified inequality restated for original coordinates.
  j["bound_original_coords"] = "diam(gamma) <= C * diam_scale^(1-lambda) * |x-y|^lambda";
  return j;
}

inline std::string dump_report(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace dendrify
