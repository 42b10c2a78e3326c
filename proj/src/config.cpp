#include "rdlab/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace rdlab {

const std::vector<std::string>& nonlinearity_registry() {
  static const std::vector<std::string> names{
      "none", "logistic", "monotone_poly", "fractional_poly", "custom"};
  return names;
}

const std::vector<std::string>& rough_data_registry() {
  static const std::vector<std::string> names{
      "power_singularity", "sign_flip_singularity", "smooth", "bump"};
  return names;
}

const std::vector<std::string>& scenario_registry() {
  static const std::vector<std::string> names{
      "heat_sanity",      "cauchy_study",       "majorant_study",
      "smoothing_study",  "uniqueness_study",   "supercritical_demo",
      "full_suite"};
  return names;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  std::size_t b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

int edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::vector<int>> d(a.size() + 1,
                                  std::vector<int>(b.size() + 1, 0));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = static_cast<int>(i);
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j)
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] != b[j - 1] ? 1 : 0)});
  return d[a.size()][b.size()];
}

struct KeySpec {
  const char* section;
  const char* key;
};

const std::vector<KeySpec>& known_keys() {
  static const std::vector<KeySpec> keys{
      {"scenario", "name"},
      {"domain", "dim"},
      {"domain", "extent"},
      {"domain", "extent_y"},
      {"domain", "nodes"},
      {"domain", "nodes_y"},
      {"nonlinearity", "name"},
      {"nonlinearity", "rho"},
      {"nonlinearity", "amplitude"},
      {"nonlinearity", "m_const"},
      {"nonlinearity", "g_const"},
      {"nonlinearity", "c2"},
      {"nonlinearity", "c3"},
      {"nonlinearity", "rho1"},
      {"nonlinearity", "n1"},
      {"nonlinearity", "rho2"},
      {"nonlinearity", "n2"},
      {"rough_data", "name"},
      {"rough_data", "beta"},
      {"rough_data", "amplitude"},
      {"rough_data", "q"},
      {"rough_data", "width"},
      {"numerics", "modes"},
      {"numerics", "h"},
      {"numerics", "T"},
      {"numerics", "levels"},
      {"numerics", "workers"},
      {"numerics", "seed"},
      {"output", "dir"},
      {"debug", "inject_defect"},
  };
  return keys;
}

std::string nearest_key(const std::string& section, const std::string& key) {
  int best = 1 << 20;
  std::string suggestion;
  for (const auto& ks : known_keys()) {
    const int d = edit_distance(key, ks.key) +
                  (section == ks.section ? 0 : 2);
    if (d < best) {
      best = d;
      suggestion = std::string(ks.section) + "." + ks.key;
    }
  }
  return suggestion;
}

bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size() && std::isfinite(out);
  } catch (...) {
    return false;
  }
}

bool parse_int(const std::string& s, long long& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

const char* kSectionTemplate =
    "expected sections/keys:\n"
    "  [scenario] name\n"
    "  [domain] dim, extent, extent_y, nodes, nodes_y\n"
    "  [nonlinearity] name, rho, amplitude, m_const, g_const, c2, c3, rho1, "
    "n1, rho2, n2\n"
    "  [rough_data] name, beta, amplitude, q, width\n"
    "  [numerics] modes, h, T, levels, workers, seed\n"
    "  [output] dir\n"
    "  [debug] inject_defect";

}  // namespace

std::vector<std::string> validate_config(const ScenarioConfig& cfg) {
  std::vector<std::string> bad;
  auto known = [](const std::vector<std::string>& reg, const std::string& v) {
    return std::find(reg.begin(), reg.end(), v) != reg.end();
  };

  if (!known(scenario_registry(), cfg.scenario))
    bad.push_back("scenario.name: unknown scenario '" + cfg.scenario + "'");
  if (cfg.dim != 1 && cfg.dim != 2)
    bad.push_back("domain.dim: must be 1 or 2");
  if (!(cfg.extent > 0.0)) bad.push_back("domain.extent: must be positive");
  if (cfg.dim == 2 && !(cfg.extent_y > 0.0))
    bad.push_back("domain.extent_y: must be positive");
  if (cfg.nodes < 8) bad.push_back("domain.nodes: at least 8 nodes per axis");
  if (cfg.dim == 2 && cfg.nodes_y < 8)
    bad.push_back("domain.nodes_y: at least 8 nodes per axis");

  if (!known(nonlinearity_registry(), cfg.nonlinearity))
    bad.push_back("nonlinearity.name: unknown entry '" + cfg.nonlinearity +
                  "'; registry: none, logistic, monotone_poly, "
                  "fractional_poly, custom");
  if (cfg.nonlinearity == "logistic" && !(cfg.rho > 1.0))
    bad.push_back("nonlinearity.rho: logistic requires rho > 1");
  if (cfg.nonlinearity == "logistic" && cfg.amplitude < 0.0)
    bad.push_back("nonlinearity.amplitude: logistic coefficient must be >= 0");
  if (cfg.nonlinearity == "monotone_poly" && !(cfg.c3 < 0.0))
    bad.push_back("nonlinearity.c3: leading coefficient must be negative");
  if (cfg.nonlinearity == "fractional_poly") {
    if (!(cfg.rho1 > 1.0) || !(cfg.rho2 > cfg.rho1))
      bad.push_back("nonlinearity.rho1/rho2: need 1 < rho1 < rho2");
    if (!(cfg.n2 < 0.0))
      bad.push_back("nonlinearity.n2: leading coefficient must be negative");
  }
  if (cfg.nonlinearity == "custom" && cfg.amplitude < 0.0)
    bad.push_back("nonlinearity.amplitude: custom coefficient must be >= 0");

  if (!known(rough_data_registry(), cfg.rough_data))
    bad.push_back("rough_data.name: unknown entry '" + cfg.rough_data +
                  "'; registry: power_singularity, sign_flip_singularity, "
                  "smooth, bump");
  if (!(cfg.q >= 1.0)) bad.push_back("rough_data.q: q >= 1 required");
  if (cfg.rough_data == "power_singularity" ||
      cfg.rough_data == "sign_flip_singularity") {
    if (!(cfg.beta > 0.0)) bad.push_back("rough_data.beta: must be positive");
    if (cfg.q >= 1.0 && !(cfg.beta * cfg.q < cfg.dim))
      bad.push_back("rough_data.beta: beta*q < N required for L^q data");
  }
  if (cfg.rough_data == "bump" && !(cfg.width > 0.0))
    bad.push_back("rough_data.width: must be positive");

  if (cfg.modes < 1) bad.push_back("numerics.modes: must be positive");
  if (cfg.dim == 1 && cfg.nodes < 2 * cfg.modes)
    bad.push_back("numerics.modes: node/mode ratio >= 2 required (nodes >= " +
                  std::to_string(2 * cfg.modes) + ")");
  if (!(cfg.T > 0.0)) bad.push_back("numerics.T: horizon must be positive");
  if (cfg.h < 0.0 || cfg.h > cfg.T)
    bad.push_back("numerics.h: need 0 <= h <= T (0 selects the policy step)");
  if (cfg.scenario == "cauchy_study" || cfg.scenario == "uniqueness_study" ||
      cfg.scenario == "supercritical_demo") {
    if (cfg.levels.size() < 2)
      bad.push_back("numerics.levels: at least two mollification levels");
  }
  if (cfg.scenario == "uniqueness_study" && !cfg.levels.empty() &&
      cfg.levels.back() > cfg.modes)
    bad.push_back(
        "numerics.levels: modal projection needs levels <= modes (top level " +
        std::to_string(cfg.levels.back()) + " exceeds " +
        std::to_string(cfg.modes) + " modes)");
  for (std::size_t i = 1; i < cfg.levels.size(); ++i)
    if (cfg.levels[i] <= cfg.levels[i - 1]) {
      bad.push_back("numerics.levels: must be strictly increasing");
      break;
    }
  if (!cfg.levels.empty() && cfg.levels.front() < 1)
    bad.push_back("numerics.levels: levels must be >= 1");
  if (cfg.workers < 1) bad.push_back("numerics.workers: must be >= 1");
  if (cfg.inject_defect < 0.0)
    bad.push_back("debug.inject_defect: must be >= 0");
  return bad;
}

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig cfg;
  std::vector<std::string> errors;
  std::string section;
  bool saw_scenario = false;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        errors.push_back("line " + std::to_string(lineno) +
                         ": malformed section header '" + line + "'");
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(lineno) +
                       ": expected 'key = value', got '" + line + "'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string qual = section + "." + key;

    auto bad_value = [&](const char* what) {
      errors.push_back(qual + ": expected " + what + ", got '" + value + "'");
    };
    double dv;
    long long iv;

    if (qual == "scenario.name") {
      cfg.scenario = value;
      saw_scenario = true;
    } else if (qual == "domain.dim") {
      if (parse_int(value, iv)) cfg.dim = static_cast<int>(iv);
      else bad_value("an integer");
    } else if (qual == "domain.extent") {
      if (parse_double(value, dv)) cfg.extent = dv;
      else bad_value("a number");
    } else if (qual == "domain.extent_y") {
      if (parse_double(value, dv)) cfg.extent_y = dv;
      else bad_value("a number");
    } else if (qual == "domain.nodes") {
      if (parse_int(value, iv)) cfg.nodes = static_cast<int>(iv);
      else bad_value("an integer");
    } else if (qual == "domain.nodes_y") {
      if (parse_int(value, iv)) cfg.nodes_y = static_cast<int>(iv);
      else bad_value("an integer");
    } else if (qual == "nonlinearity.name") {
      cfg.nonlinearity = value;
    } else if (qual == "nonlinearity.rho") {
      if (parse_double(value, dv)) cfg.rho = dv;
      else bad_value("a number");
    } else if (qual == "nonlinearity.amplitude") {
      if (parse_double(value, dv)) cfg.amplitude = dv;
      else bad_value("a number");
    } else if (qual == "nonlinearity.m_const") {
      if (parse_double(value, dv)) cfg.m_const = dv;
      else bad_value("a number");
    } else if (qual == "nonlinearity.g_const") {
      if (parse_double(value, dv)) cfg.g_const = dv;
      else bad_value("a number");
    } else if (qual == "nonlinearity.c2") {
      if (parse_double(value, dv)) cfg.c2 = dv;
      else bad_value("a number");
    } else if (qual == "nonlinearity.c3") {
      if (parse_double(value, dv)) cfg.c3 = dv;
      else bad_value("a number");
    } else if (qual == "nonlinearity.rho1") {
      if (parse_double(value, dv)) cfg.rho1 = dv;
      else bad_value("a number");
    } else if (qual == "nonlinearity.n1") {
      if (parse_double(value, dv)) cfg.n1 = dv;
      else bad_value("a number");
    } else if (qual == "nonlinearity.rho2") {
      if (parse_double(value, dv)) cfg.rho2 = dv;
      else bad_value("a number");
    } else if (qual == "nonlinearity.n2") {
      if (parse_double(value, dv)) cfg.n2 = dv;
      else bad_value("a number");
    } else if (qual == "rough_data.name") {
      cfg.rough_data = value;
    } else if (qual == "rough_data.beta") {
      if (parse_double(value, dv)) cfg.beta = dv;
      else bad_value("a number");
    } else if (qual == "rough_data.amplitude") {
      if (parse_double(value, dv)) cfg.data_amplitude = dv;
      else bad_value("a number");
    } else if (qual == "rough_data.q") {
      if (parse_double(value, dv)) cfg.q = dv;
      else bad_value("a number");
    } else if (qual == "rough_data.width") {
      if (parse_double(value, dv)) cfg.width = dv;
      else bad_value("a number");
    } else if (qual == "numerics.modes") {
      if (parse_int(value, iv)) cfg.modes = static_cast<int>(iv);
      else bad_value("an integer");
    } else if (qual == "numerics.h") {
      if (parse_double(value, dv)) cfg.h = dv;
      else bad_value("a number");
    } else if (qual == "numerics.T") {
      if (parse_double(value, dv)) cfg.T = dv;
      else bad_value("a number");
    } else if (qual == "numerics.levels") {
      cfg.levels.clear();
      std::istringstream ls(value);
      std::string item;
      bool ok = true;
      while (std::getline(ls, item, ',')) {
        item = trim(item);
        long long lvl;
        if (!parse_int(item, lvl)) {
          ok = false;
          break;
        }
        cfg.levels.push_back(static_cast<int>(lvl));
      }
      if (!ok || cfg.levels.empty())
        bad_value("a comma-separated list of integers");
    } else if (qual == "numerics.workers") {
      if (parse_int(value, iv)) cfg.workers = static_cast<int>(iv);
      else bad_value("an integer");
    } else if (qual == "numerics.seed") {
      if (parse_int(value, iv)) cfg.seed = static_cast<unsigned long long>(iv);
      else bad_value("an integer");
    } else if (qual == "output.dir") {
      cfg.out_dir = value;
    } else if (qual == "debug.inject_defect") {
      if (parse_double(value, dv)) cfg.inject_defect = dv;
      else bad_value("a number");
    } else {
      errors.push_back("unknown key '" + qual + "'; nearest valid key is '" +
                       nearest_key(section, key) + "'");
    }
  }

  if (!saw_scenario)
    errors.push_back(std::string("missing required key 'scenario.name'; ") +
                     kSectionTemplate);

  auto semantic = validate_config(cfg);
  errors.insert(errors.end(), semantic.begin(), semantic.end());
  if (!errors.empty()) {
    std::string msg = "configuration invalid:";
    for (const auto& e : errors) msg += "\n  - " + e;
    throw ConfigError(msg);
  }
  return cfg;
}

std::string emit_config(const ScenarioConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  out << "[scenario]\nname = " << cfg.scenario << "\n\n";
  out << "[domain]\ndim = " << cfg.dim << "\nextent = " << cfg.extent
      << "\nextent_y = " << cfg.extent_y << "\nnodes = " << cfg.nodes
      << "\nnodes_y = " << cfg.nodes_y << "\n\n";
  out << "[nonlinearity]\nname = " << cfg.nonlinearity << "\nrho = " << cfg.rho
      << "\namplitude = " << cfg.amplitude << "\nm_const = " << cfg.m_const
      << "\ng_const = " << cfg.g_const << "\nc2 = " << cfg.c2
      << "\nc3 = " << cfg.c3 << "\nrho1 = " << cfg.rho1 << "\nn1 = " << cfg.n1
      << "\nrho2 = " << cfg.rho2 << "\nn2 = " << cfg.n2 << "\n\n";
  out << "[rough_data]\nname = " << cfg.rough_data << "\nbeta = " << cfg.beta
      << "\namplitude = " << cfg.data_amplitude << "\nq = " << cfg.q
      << "\nwidth = " << cfg.width << "\n\n";
  out << "[numerics]\nmodes = " << cfg.modes << "\nh = " << cfg.h
      << "\nT = " << cfg.T << "\nlevels = ";
  for (std::size_t i = 0; i < cfg.levels.size(); ++i)
    out << (i ? "," : "") << cfg.levels[i];
  out << "\nworkers = " << cfg.workers << "\nseed = " << cfg.seed << "\n\n";
  out << "[output]\ndir = " << cfg.out_dir << "\n\n";
  out << "[debug]\ninject_defect = " << cfg.inject_defect << "\n";
  return out.str();
}

}  // namespace rdlab
