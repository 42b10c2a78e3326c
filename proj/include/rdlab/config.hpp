#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rdlab/errors.hpp"

namespace rdlab {

// Scenario configuration parsed from sections of `key = value` lines with
// `#` comments. Unset keys take scenario defaults; emit_config echoes the
// fully resolved state so emit(parse(text)) is parse-equivalent.
struct ScenarioConfig {
  // [scenario]
  std::string scenario;  // heat_sanity, cauchy_study, majorant_study,
                         // smoothing_study, uniqueness_study,
                         // supercritical_demo, full_suite

  // [domain]
  int dim = 1;
  double extent = 3.141592653589793;
  double extent_y = 3.141592653589793;
  int nodes = 256;
  int nodes_y = 48;

  // [nonlinearity]
  std::string nonlinearity = "logistic";  // + none, monotone_poly,
                                          // fractional_poly, custom
  double rho = 3.0;
  double amplitude = 1.0;
  double m_const = 0.0;
  double g_const = 0.0;
  double c2 = 1.0, c3 = -1.0;             // monotone_poly fields n_2, n_3
  double rho1 = 1.5, n1 = 1.0;            // fractional_poly leading pair
  double rho2 = 2.5, n2 = -1.0;

  // [rough_data]
  std::string rough_data = "power_singularity";  // + sign_flip_singularity,
                                                 // smooth, bump
  double beta = 0.25;
  double data_amplitude = 1.0;
  double q = 2.0;
  double width = 0.02;  // bump standard deviation

  // [numerics]
  int modes = 96;
  double h = 0.0;  // 0 = step policy
  double T = 1.0;
  std::vector<int> levels{2, 4, 8, 16};
  int workers = 1;
  unsigned long long seed = 0;

  // [output]
  std::string out_dir = "out";

  // [debug]
  double inject_defect = 0.0;  // >0 perturbs the run to force a red verdict
};

// Throws ConfigError whose message lists every violated constraint.
ScenarioConfig parse_config(const std::string& text);

// All violations of the (possibly hand-built) config; empty means valid.
std::vector<std::string> validate_config(const ScenarioConfig& cfg);

// Canonical text form; parse(emit(cfg)) == cfg.
std::string emit_config(const ScenarioConfig& cfg);

const std::vector<std::string>& nonlinearity_registry();
const std::vector<std::string>& rough_data_registry();
const std::vector<std::string>& scenario_registry();

}  // namespace rdlab
