#pragma once

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "dendrify/io.hpp"

namespace dendrify::cli {

// Exit codes shared by every subcommand:
//   0 success, 1 parse/IO error, 2 validation failure or invalid endpoint,
//   3 cell budget exceeded.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIoError = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitBudget = 3;

inline std::size_t cell_budget_from_env() {
  if (const char* env = std::getenv("DENDRIFY_CELL_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultCellBudget;
}

struct VerifyOptions {
  int samples = 1000;
  int depth = 8;
  uint64_t seed = 0;
  std::optional<double> force_lambda;
  int beta_depth = 6;
};

struct RenderOptions {
  int depth = 4;
  std::optional<std::string> arc_from, arc_to;
  std::string output;
};

inline int run_validate(const std::string& file, std::ostream& out, std::ostream& err) {
  try {
    PolygonalSystem sys = load_system(file);
    ValidationReport rep = validate(sys);
    out << dump_report(validation_report_json(rep, sys));
    return rep.overall ? kExitOk : kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIoError;
  }
}

inline int run_certify(const std::string& file, int beta_depth, std::ostream& out, std::ostream& err) {
  try {
    PolygonalSystem sys = load_system(file);
    ValidationReport rep = validate(sys);
    if (!rep.overall) {
      out << dump_report(validation_report_json(rep, sys));
      err << "error: system fails validation; no certificate\n";
      return kExitValidation;
    }
    SystemIndex ix = build_index(sys, rep);
    HolderCertificate cert = compute_certificate(ix, rep, beta_depth);
    out << dump_report(certificate_json(cert, sys));
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIoError;
  }
}

inline int run_verify(const std::string& file, const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    PolygonalSystem sys = load_system(file);
    ValidationReport rep = validate(sys);
    if (!rep.overall) {
      out << dump_report(validation_report_json(rep, sys));
      err << "error: system fails validation; nothing to verify\n";
      return kExitValidation;
    }
    SystemIndex ix = build_index(sys, rep);
    HolderCertificate cert = compute_certificate(ix, rep, opt.beta_depth);
    try {
      TurningReport trep = verify_bounded_turning(ix, cert, opt.samples, opt.depth, opt.seed,
                                                  opt.force_lambda, cell_budget_from_env());
      out << dump_report(turning_report_json(trep, sys));
      return kExitOk;
    } catch (const Error& e) {
      if (e.code == Errc::DepthTooLarge) {
        err << "error: " << e.what() << "\n";
        return kExitBudget;
      }
      throw;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIoError;
  }
}

/// Renders the refinement to SVG; with an arc request, the chain cells are
/// highlighted, the junction polyline is overlaid, and the arc record
/// (chain addresses, junction coordinates, diameter bounds) goes to stdout.
inline int run_render(const std::string& file, const RenderOptions& opt, std::ostream& out,
                      std::ostream& err) {
  PolygonalSystem sys;
  ValidationReport rep;
  try {
    sys = load_system(file);
    rep = validate(sys);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIoError;
  }
  if (!rep.overall) {
    err << "error: system fails validation; not rendering\n";
    return kExitValidation;
  }
  try {
    Refinement r = refine(sys, opt.depth, cell_budget_from_env());
    std::vector<std::vector<Vec2d>> overlays;
    std::vector<Address> highlight;
    if (opt.arc_from && opt.arc_to) {
      AddressedPoint x = parse_endpoint_token(*opt.arc_from, sys.maps.size(), sys.vertex_count());
      AddressedPoint y = parse_endpoint_token(*opt.arc_to, sys.maps.size(), sys.vertex_count());
      SystemIndex ix = build_index(sys, rep);
      ArcApproximation a = arc(ix, x, y, opt.depth, cell_budget_from_env());
      std::vector<Vec2d> polyline;
      polyline.push_back(to_vec2d(a.x_point));
      for (const ArcJunction& jn : a.junctions) polyline.push_back(jn.point_d);
      polyline.push_back(to_vec2d(a.y_point));
      overlays.push_back(std::move(polyline));
      highlight = a.chain;
      out << dump_report(arc_record_json(a, sys));
    }
    write_file_atomic(opt.output, render_svg(sys, r, overlays, std::move(highlight)));
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (e.code == Errc::DepthTooLarge) return kExitBudget;
    if (e.code == Errc::InvalidEndpoint) return kExitValidation;
    return kExitIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIoError;
  }
}

}  // namespace dendrify::cli
