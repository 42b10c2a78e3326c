#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "rdlab/scenario.hpp"

using namespace rdlab;
namespace fs = std::filesystem;
constexpr double pi = std::numbers::pi;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  return std::string((std::istreambuf_iterator<char>(f)),
                     std::istreambuf_iterator<char>());
}

fs::path fresh_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("rdlab_test_" + tag);
  fs::remove_all(p);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(RDLAB_CLI_PATH) + " " + args;
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("registry data constructors") {
  ScenarioConfig cfg;
  cfg.dim = 1;
  cfg.nodes = 256;
  auto d = make_domain(cfg);

  cfg.rough_data = "bump";
  cfg.width = 0.05;
  auto bump = make_rough_data(cfg, d);
  GridFunction b = GridFunction::sample(d, bump.formula);
  CHECK(lq_norm(b, 1.0) == doctest::Approx(1.0).epsilon(1e-6));

  cfg.rough_data = "sign_flip_singularity";
  cfg.beta = 0.25;
  cfg.q = 2.0;
  auto flip = make_rough_data(cfg, d);
  CHECK(flip.formula(pi / 2 + 0.1, 0.0) > 0.0);
  CHECK(flip.formula(pi / 2 - 0.1, 0.0) < 0.0);
  CHECK(validate_rough(flip, d) > 0.0);

  cfg.nonlinearity = "custom";
  cfg.amplitude = 0.5;
  auto rd = make_nonlinearity(cfg, d);
  CHECK(rd.f0(0, 0.0) == 0.0);
  CHECK(rd.df0(0, 0.0) == 0.0);
  auto rep = admissibility_check(rd, 10.0, 200);
  CHECK(rep.pass);
}

TEST_CASE("heat sanity scenario writes passing reports and exits zero") {
  ScenarioConfig cfg;
  cfg.scenario = "heat_sanity";
  cfg.dim = 1;
  cfg.nodes = 256;
  cfg.modes = 96;
  const fs::path out = fresh_dir("heat");
  auto res = run_scenario(cfg, out.string());
  CHECK(res.exit_code == ExitCode::ok);
  REQUIRE(fs::exists(out / "bounds.csv"));
  REQUIRE(fs::exists(out / "traces.csv"));
  REQUIRE(fs::exists(out / "pairs.csv"));
  REQUIRE(fs::exists(out / "manifest.txt"));

  const std::string bounds = slurp(out / "bounds.csv");
  CHECK(bounds.find("heat_mode_decay,pass") != std::string::npos);
  CHECK(bounds.find("heat_fd_crosscheck,pass") != std::string::npos);
  // the decay margin stays at the spectral floor
  for (const auto& r : res.manifest.reports)
    if (r.name == "heat_mode_decay") CHECK(r.worst_margin <= 1e-8);

  const std::string manifest = slurp(out / "manifest.txt");
  CHECK(manifest.find("[scenario]") != std::string::npos);
  CHECK(manifest.find("spectral_core") != std::string::npos);
}

TEST_CASE("identical configs produce byte-identical CSV bodies") {
  ScenarioConfig cfg;
  cfg.scenario = "heat_sanity";
  cfg.dim = 1;
  cfg.nodes = 256;
  cfg.modes = 64;
  const fs::path a = fresh_dir("det_a"), b = fresh_dir("det_b");
  CHECK(run_scenario(cfg, a.string()).exit_code == ExitCode::ok);
  CHECK(run_scenario(cfg, b.string()).exit_code == ExitCode::ok);
  CHECK(slurp(a / "traces.csv") == slurp(b / "traces.csv"));
  CHECK(slurp(a / "bounds.csv") == slurp(b / "bounds.csv"));
  CHECK(slurp(a / "pairs.csv") == slurp(b / "pairs.csv"));
}

TEST_CASE("worker count does not change the family results") {
  ScenarioConfig cfg;
  cfg.scenario = "cauchy_study";
  cfg.dim = 1;
  cfg.nodes = 384;
  cfg.modes = 64;
  cfg.levels = {2, 4, 8};
  cfg.T = 0.5;
  const fs::path a = fresh_dir("wrk_a"), b = fresh_dir("wrk_b");
  cfg.workers = 1;
  CHECK(run_scenario(cfg, a.string()).exit_code == ExitCode::ok);
  cfg.workers = 2;
  CHECK(run_scenario(cfg, b.string()).exit_code == ExitCode::ok);
  CHECK(slurp(a / "traces.csv") == slurp(b / "traces.csv"));
  CHECK(slurp(a / "pairs.csv") == slurp(b / "pairs.csv"));
}

TEST_CASE("defect injection forces a red verdict and exit code 1") {
  ScenarioConfig cfg;
  cfg.scenario = "heat_sanity";
  cfg.dim = 1;
  cfg.nodes = 256;
  cfg.modes = 64;
  cfg.inject_defect = 0.01;
  const fs::path out = fresh_dir("defect");
  auto res = run_scenario(cfg, out.string());
  CHECK(res.exit_code == ExitCode::verdict_failure);
  CHECK(slurp(out / "bounds.csv").find("heat_mode_decay,fail") !=
        std::string::npos);
}

TEST_CASE("supercritical demo records rho and the critical exponent") {
  ScenarioConfig cfg;
  cfg.scenario = "supercritical_demo";
  cfg.dim = 1;
  cfg.nodes = 384;
  cfg.modes = 64;
  cfg.q = 1.0;
  cfg.rho = 5.0;
  cfg.levels = {2, 4, 8};
  cfg.T = 0.5;
  cfg.workers = 2;
  const fs::path out = fresh_dir("super");
  auto res = run_scenario(cfg, out.string());
  CHECK(res.exit_code == ExitCode::ok);
  bool found = false;
  for (const auto& r : res.manifest.reports)
    if (r.name == "supercritical_margin") {
      found = true;
      CHECK(r.constants.at("rho") == 5.0);
      CHECK(r.constants.at("p_c") == 3.0);
      CHECK(r.pass);
    }
  CHECK(found);
}

TEST_CASE("majorant study rows") {
  ScenarioConfig cfg;
  cfg.scenario = "majorant_study";
  cfg.dim = 1;
  cfg.nodes = 256;
  cfg.modes = 64;
  cfg.nonlinearity = "monotone_poly";
  cfg.g_const = 1.0;
  cfg.rough_data = "smooth";
  const fs::path out = fresh_dir("majorant");
  auto res = run_scenario(cfg, out.string());
  CHECK(res.exit_code == ExitCode::ok);
  const std::string bounds = slurp(out / "bounds.csv");
  CHECK(bounds.find("supersolution_sandwich,pass") != std::string::npos);
  CHECK(bounds.find("majorant_linearity,pass") != std::string::npos);
  CHECK(bounds.find("majorant_ordering,pass") != std::string::npos);
  const std::string traces = slurp(out / "traces.csv");
  CHECK(traces.find("U_h,") != std::string::npos);
  CHECK(traces.find("Phi,") != std::string::npos);
}

TEST_CASE("smoothing study passes on plain defaults (width coerced)") {
  ScenarioConfig cfg;
  cfg.scenario = "smoothing_study";
  cfg.dim = 1;
  cfg.nodes = 256;
  cfg.modes = 96;
  cfg.q = 1.0;
  const fs::path out = fresh_dir("smoothing");
  auto res = run_scenario(cfg, out.string());
  CHECK(res.exit_code == ExitCode::ok);
  const std::string bounds = slurp(out / "bounds.csv");
  CHECK(bounds.find("linfty_envelope,pass") != std::string::npos);
  CHECK(bounds.find("smoothing_exponent,pass") != std::string::npos);
  CHECK(bounds.find("semigroup_boundedness,pass") != std::string::npos);
  bool coerced = false;
  for (const auto& n : res.manifest.notes)
    coerced |= n.find("width raised") != std::string::npos;
  CHECK(coerced);
}

TEST_CASE("uniqueness study row") {
  ScenarioConfig cfg;
  cfg.scenario = "uniqueness_study";
  cfg.dim = 1;
  cfg.nodes = 384;
  cfg.modes = 64;
  cfg.levels = {2, 4, 8};
  cfg.T = 0.5;
  cfg.workers = 2;
  const fs::path out = fresh_dir("uniq");
  auto res = run_scenario(cfg, out.string());
  CHECK(res.exit_code == ExitCode::ok);
  CHECK(slurp(out / "bounds.csv").find("uniqueness_cross_scheme,pass") !=
        std::string::npos);
}

TEST_CASE("full suite chains both dimensions and stays green") {
  ScenarioConfig cfg;
  cfg.scenario = "full_suite";
  cfg.workers = 2;
  const fs::path out = fresh_dir("full");
  auto res = run_scenario(cfg, out.string());
  CHECK(res.exit_code == ExitCode::ok);
  const std::string bounds = slurp(out / "bounds.csv");
  // the N-dependence of the exponent is exercised in one command
  CHECK(bounds.find("n1_smoothing_smoothing_exponent,pass") !=
        std::string::npos);
  CHECK(bounds.find("n2_smoothing_smoothing_exponent,pass") !=
        std::string::npos);
  CHECK(bounds.find("n2_cauchy_cauchy_contraction,pass") != std::string::npos);
  CHECK(bounds.find("supercritical_supercritical_margin,pass") !=
        std::string::npos);
  CHECK(bounds.find(",fail,") == std::string::npos);

  double s1 = 0, s2 = 0;
  for (const auto& r : res.manifest.reports) {
    if (r.name == "n1_smoothing_smoothing_exponent")
      s1 = r.constants.at("slope");
    if (r.name == "n2_smoothing_smoothing_exponent")
      s2 = r.constants.at("slope");
  }
  CHECK(s1 - s2 >= 0.3);  // dimension discrimination
}

TEST_CASE("csv doubles are emitted with 17 significant digits") {
  CHECK(csv_double(1.0) == "1");
  CHECK(csv_double(0.1) == "0.10000000000000001");
  CHECK(csv_double(std::numbers::pi) == "3.1415926535897931");
}

TEST_CASE("cli: run, exit codes, registry listing") {
  const fs::path dir = fresh_dir("cli");
  fs::create_directories(dir);

  {
    std::ofstream f(dir / "ok.cfg");
    f << "[scenario]\nname = heat_sanity\n[domain]\ndim = 1\nnodes = 256\n"
         "[numerics]\nmodes = 64\n";
  }
  {
    std::ofstream f(dir / "bad.cfg");
    f << "[scenario]\nname = heat_sanity\n[rough_data]\nq = 0.5\n";
  }
  {
    std::ofstream f(dir / "red.cfg");
    f << "[scenario]\nname = heat_sanity\n[domain]\ndim = 1\nnodes = 256\n"
         "[numerics]\nmodes = 64\n[debug]\ninject_defect = 0.01\n";
  }

  CHECK(run_cli("validate " + (dir / "ok.cfg").string() + " > /dev/null") == 0);
  CHECK(run_cli("run " + (dir / "ok.cfg").string() + " --out " +
                (dir / "out1").string() + " > /dev/null 2>&1") == 0);
  CHECK(run_cli("run " + (dir / "bad.cfg").string() + " --out " +
                (dir / "out2").string() + " > /dev/null 2>&1") == 2);
  CHECK(run_cli("run " + (dir / "red.cfg").string() + " --out " +
                (dir / "out3").string() + " > /dev/null 2>&1") == 1);
  CHECK(run_cli("run " + (dir / "missing.cfg").string() +
                " > /dev/null 2>&1") == 2);

  const fs::path listing = dir / "registry.txt";
  CHECK(run_cli("list-registry > " + listing.string()) == 0);
  const std::string text = slurp(listing);
  CHECK(text.find("logistic") != std::string::npos);
  CHECK(text.find("power_singularity") != std::string::npos);
  CHECK(text.find("full_suite") != std::string::npos);

  // unwritable output directory surfaces as an internal error
  CHECK(run_cli("run " + (dir / "ok.cfg").string() +
                " --out /proc/rdlab_unwritable > /dev/null 2>&1") == 3);
}

TEST_CASE("cli: RDLAB_OUT provides the default output directory") {
  const fs::path dir = fresh_dir("cli_env");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "ok.cfg");
    f << "[scenario]\nname = heat_sanity\n[domain]\ndim = 1\nnodes = 256\n"
         "[numerics]\nmodes = 64\n";
  }
  const fs::path envout = dir / "env_out";
  const std::string cmd = "RDLAB_OUT=" + envout.string() + " " +
                          std::string(RDLAB_CLI_PATH) + " run " +
                          (dir / "ok.cfg").string() + " > /dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  CHECK(fs::exists(envout / "bounds.csv"));
}
