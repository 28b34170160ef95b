#include "interp/experiment.hpp"

#include "CLI11.hpp"

#include <cstdio>

int main(int argc, char** argv) {
  CLI::App app{
      "interp-lab: interpolation norms, sphere maps and their experiments "
      "on finite-dimensional couples"};

  std::string experiment;
  std::string config_file;
  std::uint64_t seed = 0;
  std::string out_dir;
  bool strict = false;

  app.add_option("experiment", experiment,
                 "norm|daher|duality|maxmod|kadets|james|mazur|convergence")
      ->required();
  app.add_option("--config", config_file, "JSON config file")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "override the config seed");
  app.add_option("--out", out_dir, "output directory (default from config)");
  app.add_flag("--strict", strict, "nonzero exit on any invariant violation");

  CLI11_PARSE(app, argc, argv);

  try {
    interp::ExperimentConfig cfg = interp::load_config(config_file);
    if (cfg.experiment != experiment) {
      std::fprintf(stderr,
                   "note: config declares experiment '%s', running '%s'\n",
                   cfg.experiment.c_str(), experiment.c_str());
      cfg.experiment = experiment;
    }
    if (seed != 0) cfg.seed = seed;
    if (strict) cfg.strict = true;
    std::string effective_out = out_dir.empty() ? cfg.out_dir : out_dir;
    // Rehash the effective configuration (output location excluded).
    cfg = interp::parse_config(interp::canonical_config_json(cfg));
    cfg.out_dir = effective_out;

    interp::ExperimentResult res = interp::run_experiment(cfg);
    std::printf("%s\n", res.report_json.c_str());
    return res.exit_code;
  } catch (const std::exception& e) {
    std::printf("{\"error\": \"%s\"}\n", e.what());
    return 2;
  }
}
