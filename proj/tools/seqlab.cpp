#include <CLI11.hpp>
#include <iostream>

#include "seqlab/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"seqlab: filtered algebra, index and Dehn twist checks"};
  app.require_subcommand(1);
  seqlab::RunConfig cfg;
  std::string cap;

  auto common = [&](CLI::App* sub, bool needs_input) {
    if (needs_input) sub->add_option("input", cfg.inputs, "input JSON file(s)")->required();
    sub->add_option("--cap", cap, "energy cap as p/q");
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--out", cfg.out, "report path");
    sub->add_option("--tolerance-profile", cfg.tolerance_profile, "strict or default")
        ->check(CLI::IsMember({"strict", "default"}));
  };
  for (const char* name : {"spectral", "triangle", "ainfty-check", "mc-solve", "deform", "novikov-eval"})
    common(app.add_subcommand(name, name), true);
  auto* index = app.add_subcommand("index", "Maslov-type indices and dimension formulas");
  common(index, true);
  index->add_option("--mode", cfg.mode, "loop | rs | mm | dim")->required()->check(CLI::IsMember({"loop", "rs", "mm", "dim"}));
  auto* dehn = app.add_subcommand("dehn", "model Dehn twist residual report");
  common(dehn, false);
  dehn->add_option("--n", cfg.n, "sphere dimension");
  dehn->add_option("--lambda", cfg.lambda, "twist scale in (0, 1]");
  dehn->add_option("--delta", cfg.delta, "wobble parameter");
  dehn->add_option("--samples", cfg.samples, "random sample points");
  auto* gen = app.add_subcommand("generate-fixture", "seeded synthetic input");
  common(gen, false);
  gen->add_option("--kind", cfg.kind, "fixture kind")->required();

  CLI11_PARSE(app, argc, argv);
  cfg.command = app.get_subcommands().front()->get_name();
  if (!cap.empty()) {
    try {
      cfg.cap = seqlab::parse_rational(cap);
    } catch (const std::exception& e) {
      std::cerr << "bad --cap: " << e.what() << "\n";
      return 2;
    }
  }
  seqlab::RunResult res = seqlab::run(cfg);
  if (cfg.out.empty() || res.code == seqlab::ExitCode::InputError) std::cout << res.report;
  return static_cast<int>(res.code);
}
