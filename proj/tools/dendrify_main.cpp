// Command-line front end: validate / certify / verify / render.

#include <CLI11.hpp>

#include "dendrify/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"dendrify - validation, Hoelder certification and rendering of "
               "self-affine polygonal dendrite systems"};
  app.require_subcommand(1);

  std::string file;

  auto* validate = app.add_subcommand("validate", "check the four polygonal-system conditions");
  validate->add_option("file", file, "system definition (JSON)")->required();

  int beta_depth = 6;
  auto* certify = app.add_subcommand("certify", "compute the Hoelder certificate (lambda, C)");
  certify->add_option("file", file, "system definition (JSON)")->required();
  certify->add_option("--beta-depth", beta_depth, "probe depth for the minimum incident angle")
      ->check(CLI::Range(1, 12));

  dendrify::cli::VerifyOptions vopt;
  auto* verify = app.add_subcommand("verify", "sample arcs and test the certified inequality");
  verify->add_option("file", file, "system definition (JSON)")->required();
  verify->add_option("--samples", vopt.samples, "number of endpoint pairs")->check(CLI::PositiveNumber);
  verify->add_option("--depth", vopt.depth, "refinement depth for arcs")->check(CLI::Range(1, 40));
  verify->add_option("--seed", vopt.seed, "RNG seed recorded in the report");
  verify->add_option("--beta-depth", vopt.beta_depth, "probe depth for beta")->check(CLI::Range(1, 12));
  double forced_lambda = 0.0;
  auto* fl = verify->add_option("--force-lambda", forced_lambda,
                                "override the certificate exponent (diagnostics)");

  dendrify::cli::RenderOptions ropt;
  std::vector<std::string> arc_tokens;
  auto* render = app.add_subcommand("render", "write an SVG of the depth-d refinement");
  render->add_option("file", file, "system definition (JSON)")->required();
  render->add_option("--depth", ropt.depth, "refinement depth")->check(CLI::Range(0, 40));
  render->add_option("--arc", arc_tokens, "two endpoint tokens (address:vertex) to highlight")
      ->expected(2);
  render->add_option("-o,--output", ropt.output, "output SVG path")->required();

  CLI11_PARSE(app, argc, argv);

  if (validate->parsed()) return dendrify::cli::run_validate(file, std::cout, std::cerr);
  if (certify->parsed()) return dendrify::cli::run_certify(file, beta_depth, std::cout, std::cerr);
  if (verify->parsed()) {
    if (fl->count() > 0) vopt.force_lambda = forced_lambda;
    return dendrify::cli::run_verify(file, vopt, std::cout, std::cerr);
  }
  if (render->parsed()) {
    if (arc_tokens.size() == 2) {
      ropt.arc_from = arc_tokens[0];
      ropt.arc_to = arc_tokens[1];
    }
    return dendrify::cli::run_render(file, ropt, std::cout, std::cerr);
  }
  return dendrify::cli::kExitIoError;
}
