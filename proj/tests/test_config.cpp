#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "rdlab/config.hpp"

using namespace rdlab;

TEST_CASE("minimal config resolves documented defaults") {
  const std::string text =
      "# minimal run\n"
      "[scenario]\n"
      "name = heat_sanity\n"
      "[domain]\n"
      "dim = 1\n"
      "extent = 3.141592653589793\n"
      "nodes = 256\n";
  auto cfg = parse_config(text);
  CHECK(cfg.scenario == "heat_sanity");
  CHECK(cfg.nodes == 256);
  CHECK(cfg.modes == 96);
  CHECK(cfg.T == 1.0);
  CHECK(cfg.q == 2.0);
  CHECK(cfg.workers == 1);
  // the echo carries every resolved default
  const std::string echo = emit_config(cfg);
  CHECK(echo.find("modes = 96") != std::string::npos);
  CHECK(echo.find("levels = 2,4,8,16") != std::string::npos);
}

TEST_CASE("emit/parse round-trip is the identity") {
  ScenarioConfig cfg;
  cfg.scenario = "cauchy_study";
  cfg.nodes = 640;
  cfg.modes = 96;
  cfg.levels = {2, 4, 8, 16};
  cfg.q = 1.0;
  cfg.h = 0.0025;
  cfg.seed = 42;
  const std::string once = emit_config(cfg);
  const std::string twice = emit_config(parse_config(once));
  CHECK(once == twice);
}

TEST_CASE("q below one is rejected with the violated precondition") {
  const std::string text =
      "[scenario]\nname = cauchy_study\n[rough_data]\nq = 0.5\n";
  CHECK_THROWS_WITH_AS(parse_config(text), doctest::Contains("q >= 1"),
                       ConfigError);
}

TEST_CASE("unknown keys name the nearest valid key") {
  const std::string text =
      "[scenario]\nname = heat_sanity\n[domain]\nnodez = 64\n";
  try {
    parse_config(text);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("nodez") != std::string::npos);
    CHECK(msg.find("domain.nodes") != std::string::npos);
  }
}

TEST_CASE("missing scenario name shows the section template") {
  try {
    parse_config("[domain]\nnodes = 64\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("scenario.name") != std::string::npos);
    CHECK(msg.find("[numerics]") != std::string::npos);
  }
}

TEST_CASE("every violation is collected, not only the first") {
  const std::string text =
      "[scenario]\nname = cauchy_study\n"
      "[domain]\nnodes = 4\n"
      "[rough_data]\nq = 0.5\n"
      "[numerics]\nlevels = 8\nworkers = 0\n";
  try {
    parse_config(text);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("at least 8 nodes") != std::string::npos);
    CHECK(msg.find("q >= 1") != std::string::npos);
    CHECK(msg.find("at least two mollification levels") != std::string::npos);
    CHECK(msg.find("workers") != std::string::npos);
  }
}

TEST_CASE("single-level family study fails before any compute") {
  const std::string text =
      "[scenario]\nname = cauchy_study\n[numerics]\nlevels = 4\n";
  CHECK_THROWS_AS(parse_config(text), ConfigError);
}

TEST_CASE("structural noise is reported with line numbers") {
  const std::string text =
      "[scenario]\nname = heat_sanity\n"
      "this line has no equals sign\n";
  CHECK_THROWS_WITH_AS(parse_config(text), doctest::Contains("line 3"),
                       ConfigError);
  CHECK_THROWS_AS(parse_config("[scenario\nname = heat_sanity\n"),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_config("[scenario]\nname = heat_sanity\n[numerics]\nT = abc\n"),
      ConfigError);
}

TEST_CASE("level lists must be strictly increasing integers") {
  CHECK_THROWS_AS(
      parse_config(
          "[scenario]\nname = cauchy_study\n[numerics]\nlevels = 4,4,8\n"),
      ConfigError);
  CHECK_THROWS_AS(
      parse_config(
          "[scenario]\nname = cauchy_study\n[numerics]\nlevels = 4,two\n"),
      ConfigError);
  auto cfg = parse_config(
      "[scenario]\nname = cauchy_study\n[numerics]\nlevels = 3, 6, 12\n");
  CHECK(cfg.levels == std::vector<int>{3, 6, 12});
}

TEST_CASE("integrability constraint on power data") {
  CHECK_THROWS_WITH_AS(
      parse_config("[scenario]\nname = cauchy_study\n"
                   "[rough_data]\nname = power_singularity\nbeta = 0.6\n"
                   "q = 2\n"),
      doctest::Contains("beta*q < N"), ConfigError);
}

TEST_CASE("node/mode aliasing guard") {
  CHECK_THROWS_WITH_AS(
      parse_config("[scenario]\nname = heat_sanity\n[domain]\nnodes = 100\n"
                   "[numerics]\nmodes = 96\n"),
      doctest::Contains("node/mode ratio"), ConfigError);
}

TEST_CASE("registries carry the documented entries") {
  auto has = [](const std::vector<std::string>& reg, const char* name) {
    return std::find(reg.begin(), reg.end(), name) != reg.end();
  };
  CHECK(has(nonlinearity_registry(), "logistic"));
  CHECK(has(nonlinearity_registry(), "monotone_poly"));
  CHECK(has(nonlinearity_registry(), "fractional_poly"));
  CHECK(has(nonlinearity_registry(), "custom"));
  CHECK(has(rough_data_registry(), "power_singularity"));
  CHECK(has(rough_data_registry(), "sign_flip_singularity"));
  CHECK(has(rough_data_registry(), "smooth"));
  CHECK(has(rough_data_registry(), "bump"));
  CHECK(has(scenario_registry(), "supercritical_demo"));
  CHECK(has(scenario_registry(), "full_suite"));
}
