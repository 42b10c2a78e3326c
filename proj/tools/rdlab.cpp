// Command-line surface: run a scenario config, validate one, or list the
// registries. Exit codes: 0 all verdicts pass, 1 verdict failure,
// 2 configuration error, 3 numerical/internal error.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rdlab/scenario.hpp"

namespace {

int to_exit(rdlab::ExitCode c) { return static_cast<int>(c); }

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw rdlab::ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for semilinear reaction-diffusion "
               "problems with rough initial data"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int workers = 0;
  bool verbose = false;

  auto* run = app.add_subcommand("run", "run a scenario config");
  run->add_option("config", config_path, "path to the config file")
      ->required();
  run->add_option("--out", out_dir, "output directory (overrides config)");
  run->add_option("--workers", workers, "worker threads for family stages");
  run->add_flag("--verbose", verbose, "print verdicts to stdout");

  auto* validate = app.add_subcommand("validate", "validate a config file");
  validate->add_option("config", config_path, "path to the config file")
      ->required();

  auto* list = app.add_subcommand("list-registry",
                                  "list scenarios, nonlinearities and data");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      std::cout << "scenarios:";
      for (const auto& s : rdlab::scenario_registry()) std::cout << " " << s;
      std::cout << "\nnonlinearities:";
      for (const auto& s : rdlab::nonlinearity_registry())
        std::cout << " " << s;
      std::cout << "\nrough_data:";
      for (const auto& s : rdlab::rough_data_registry()) std::cout << " " << s;
      std::cout << "\n";
      return 0;
    }

    rdlab::ScenarioConfig cfg;
    try {
      cfg = rdlab::parse_config(slurp(config_path));
    } catch (const rdlab::ConfigError& e) {
      std::cerr << e.what() << "\n";
      return to_exit(rdlab::ExitCode::config_error);
    }

    if (validate->parsed()) {
      std::cout << "valid\n" << rdlab::emit_config(cfg);
      return 0;
    }

    if (workers > 0) cfg.workers = workers;
    if (out_dir.empty()) {
      if (const char* env = std::getenv("RDLAB_OUT"))
        if (cfg.out_dir == "out") cfg.out_dir = env;
    }

    rdlab::ScenarioResult res = rdlab::run_scenario(cfg, out_dir);
    if (verbose) {
      for (const auto& r : res.manifest.reports)
        std::cout << r.name << " " << (r.pass ? "pass" : "fail")
                  << " margin " << rdlab::csv_double(r.worst_margin) << "\n";
      for (const auto& e : res.manifest.errors) std::cerr << e << "\n";
    }
    return to_exit(res.exit_code);
  } catch (const rdlab::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return to_exit(rdlab::ExitCode::config_error);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return to_exit(rdlab::ExitCode::internal_error);
  }
}
