#pragma once

#include "rdlab/bounds.hpp"
#include "rdlab/config.hpp"
#include "rdlab/duhamel.hpp"

namespace rdlab {

enum class ExitCode : int {
  ok = 0,
  verdict_failure = 1,
  config_error = 2,
  internal_error = 3,
};

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct RunManifest {
  std::string config_echo;
  std::vector<std::pair<std::string, std::string>> module_versions;
  std::vector<StageTiming> timings;
  std::vector<BoundReport> reports;
  std::vector<std::string> notes;
  std::vector<std::string> errors;
};

struct PairRow {
  int level_a = 0;
  int level_b = 0;
  double t = 0.0;
  double ratio = 0.0;
};

// Everything a scenario produced, before serialization.
struct StudyResult {
  std::vector<BoundReport> reports;
  std::vector<std::pair<std::string, Trajectory>> traces;
  std::vector<PairRow> pairs;
  std::vector<std::string> notes;
  std::vector<StageTiming> timings;
  std::vector<std::string> errors;  // per-stage failures, outputs retained
};

struct ScenarioResult {
  RunManifest manifest;
  ExitCode exit_code = ExitCode::ok;
};

DomainSpec make_domain(const ScenarioConfig& cfg);
ReactionDecomposition make_nonlinearity(const ScenarioConfig& cfg,
                                        const DomainSpec& domain);
RoughData make_rough_data(const ScenarioConfig& cfg, const DomainSpec& domain);

// Runs the configured scenario and writes traces.csv, pairs.csv, bounds.csv
// and manifest.txt into out_dir (cfg.out_dir when empty). CSV bodies are
// deterministic; wall-clock lives only in the manifest.
ScenarioResult run_scenario(const ScenarioConfig& cfg,
                            const std::string& out_dir = "");

// fixed 17-significant-digit decimal formatting used by every CSV cell
std::string csv_double(double v);

}  // namespace rdlab
