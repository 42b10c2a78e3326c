#pragma once

#include <map>
#include <string>
#include <vector>

namespace rdlab {

// Location of a worst case. `t` and `node` address a trajectory sample;
// admissibility checks reuse `u` for the offending state value.
struct Witness {
  double t = 0.0;
  int node = -1;
  double u = 0.0;
};

// Structured verdict for one theorem-derived inequality. Margins are signed
// with the convention "<= 0 passes": each check documents the quantity it
// maximises. Fitted constants (c(T), exponents, tails) go into `constants`
// so the CSV layer can emit them without knowing the check.
struct BoundReport {
  std::string name;
  bool pass = false;
  double worst_margin = 0.0;
  std::vector<Witness> witnesses;
  std::map<std::string, double> constants;
  std::vector<std::string> notes;
};

}  // namespace rdlab
