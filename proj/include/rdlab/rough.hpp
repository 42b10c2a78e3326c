#pragma once

#include "rdlab/integrate.hpp"
#include "rdlab/report.hpp"

namespace rdlab {

// Rough initial data given in closed form, possibly unbounded near finitely
// many points (always strictly between or at the edge of quadrature nodes,
// never on one). The declared q is the space the theory works in.
struct RoughData {
  std::function<double(double, double)> formula;
  double q = 1.0;
  std::vector<std::array<double, 2>> singular_points;
  std::string name = "rough";
};

// checks the formula is finite at all interior nodes and that the refined
// L^q norm is finite (stable under panel refinement); returns that norm
double validate_rough(const RoughData& u0, const DomainSpec& domain);

enum class MollifyScheme { amplitude_truncation, modal_projection };

// amplitude_truncation: clamp(u0, -n, n) sampled at the nodes.
// modal_projection: first n eigenmodes of the sampled field.
GridFunction mollify(const RoughData& u0, int level, MollifyScheme scheme,
                     const EigenBasis& basis);

// Galerkin initial state for a level: continuum modal coefficients of the
// mollified formula by refined quadrature, so clamp thresholds far below the
// node spacing still separate levels. modal_projection keeps the first
// `level` refined coefficients of u0 itself.
Eigen::VectorXd initial_modes(const RoughData& u0, int level,
                              MollifyScheme scheme, const EigenBasis& basis);

struct ApproximationFamily {
  MollifyScheme scheme = MollifyScheme::amplitude_truncation;
  std::vector<int> levels;
  std::vector<GridFunction> initial_fields;  // t = 0 Galerkin states
  std::vector<Trajectory> trajectories;
  std::vector<double> data_tails;  // ||u0 - u0^n||_{L^q}
  double q = 1.0;
};

// One trajectory per level, sharing the operator factorization; levels run
// concurrently on up to `workers` threads (results are deterministic, each
// level is an independent recurrence).
ApproximationFamily run_family(const OperatorPtr& op,
                               const ReactionDecomposition& rd,
                               const RoughData& u0,
                               const std::vector<int>& levels, double T,
                               double h, MollifyScheme scheme,
                               int workers = 1, int max_store = 2048);

struct PairTrace {
  int level_a = 0;
  int level_b = 0;
  bool skipped = false;  // identical initial data
  double d0 = 0.0;       // ||u0^a - u0^b||_{L^q}
  double sup_ratio = 0.0;
  double sup_dist = 0.0;
};

struct CauchyReport {
  BoundReport report;
  std::vector<PairTrace> pairs;
  std::vector<double> times;                // stored instants
  std::vector<std::vector<double>> ratios;  // per pair, per instant
};

// For every level pair and stored t: r(t) = ||u_a(t)-u_b(t)|| /
// (e^{-lambda t} ||u_a(0)-u_b(0)||) in L^q. Pass iff the fitted constant is
// level-uniform (max over pairs within 10% of the median) and consecutive
// pairwise sups strictly decrease.
CauchyReport cauchy_report(const ApproximationFamily& family, double q,
                           double lambda);

struct LimitExtract {
  Trajectory limit;        // highest level
  double error_estimate;   // sup_t distance between the two top levels
};

// refuses (throws RefusalError) when the Cauchy verdict failed
LimitExtract extract_limit(const ApproximationFamily& family,
                           const CauchyReport& cauchy);

}  // namespace rdlab
