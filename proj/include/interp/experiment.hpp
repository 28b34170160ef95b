#pragma once

#include "interp/daher.hpp"
#include "interp/duality.hpp"
#include "interp/james.hpp"
#include "interp/kadets.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace interp {

/// Parsed experiment configuration (see configs/ for the JSON schema).
struct ExperimentConfig {
  std::string experiment;  // norm|daher|duality|maxmod|kadets|james|mazur|convergence
  std::uint64_t seed = 1;
  int K = 8;
  int dim = 2;

  // Serialized space/structure specs (lp kinds only in config files).
  struct SpaceSpec {
    std::string kind = "lp";
    double p = 2.0;
    std::vector<double> weights;  // empty = ones
  };
  struct StructSpec {
    std::string kind = "lp";  // lp|fourier|rademacher|gaussian
    double p = 2.0;
    int M = 0;
    std::string mode = "exact";  // exact|monte_carlo
    int samples = 0;
    std::uint64_t seed = 0;
  };

  SpaceSpec space0, space1;
  StructSpec struct0, struct1;

  SolveOptions solver;

  std::vector<Complex> z_list, w_list;
  Complex s{0.3, 0.0}, t{0.5, 0.0};
  int points = 20;
  int pairs = 0;
  int trials = 100;
  int operators = 0;    // norm experiment: diagonal-operator bound checks
  bool dogfood = false;  // james experiment: second-level J2 values for n <= 2
  std::vector<int> n_list;
  std::vector<double> s_list;
  std::vector<int> K_list;
  std::vector<int> M_list;
  double p0 = 2.0, p1 = 4.0;
  double theta = 0.25, eta = 0.75;
  bool strict = false;
  std::string out_dir = "out";

  std::string config_hash;  // FNV-1a of the canonical serialization

  NormedSpace make_space(const SpaceSpec& s) const;
  SequenceStructure make_structure(const StructSpec& st,
                                   const SpaceSpec& base) const;
  StructuredCouple make_couple(int K_override = -1) const;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& file);
std::string canonical_config_json(const ExperimentConfig& cfg);

struct ExperimentResult {
  int exit_code = 0;
  std::string results_csv;
  std::string report_json;
  std::vector<std::pair<std::string, bool>> invariants;
};

/// Runs the experiment, writes results.csv / report.json / config-echo.json
/// into out_dir, and returns the emitted text. Deterministic given
/// (config, seed). In strict mode any invariant violation makes the exit
/// code nonzero.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace interp
