#pragma once

#include "rdlab/rough.hpp"

namespace rdlab {

// Linear majorant problem U_t - Laplace U = C(x) U + D(x), U(0) = |u0|,
// split as U = Phi + U_h: Phi carries the forcing from zero data, U_h is the
// homogeneous flow of the data. exp_euler is exact for this problem, so the
// decomposition identity holds to rounding at every stored instant.
struct MajorantDecomposition {
  Trajectory U;
  Trajectory U_h;
  Trajectory Phi;
  OperatorPtr op;  // potential C
};

MajorantDecomposition solve_majorant(const OperatorPtr& op_C,
                                     const GridFunction& D,
                                     const GridFunction& u0_abs, double T,
                                     double h, double q, int max_store = 2048);
// native-state variant used by family studies: the caller already holds the
// Galerkin coefficients of |u0|
MajorantDecomposition solve_majorant_native(const OperatorPtr& op_C,
                                            const GridFunction& D,
                                            const Eigen::VectorXd& u0_abs,
                                            double T, double h, double q,
                                            int max_store = 2048);

// |u(t,x)| <= U(t,x) + tol at every stored sample; tol <= 0 selects the
// default 1e-6 (1 + max U).
BoundReport supersolution_check(const Trajectory& u, const Trajectory& U,
                                double tol = -1.0);

// Fits the smallest c with sup_x |u(t,x)| <= c (1 + t^{-N/2q} ||u0||_q) over
// stored t > 0 and checks the fit is stable (within 20%) under halving the
// sample density.
BoundReport linfty_bound_check(const Trajectory& u, double q, double T);

// Least-squares slope of log ||u(t)||_p against log t inside the window;
// pass iff slope >= -(N/2)(1/q - 1/p) - 0.15.
BoundReport smoothing_exponent_fit(const Trajectory& u, double q, double p,
                                   double t_min, double t_max);

struct UniquenessResult {
  BoundReport report;
  double gap = 0.0;  // sup_t cross-scheme distance at the top level
  double tail_amplitude = 0.0;
  double tail_modal = 0.0;
};

// Runs both mollification schemes and compares the top-level trajectories;
// pass iff the gap is below twice the combined Cauchy tails. A failed Cauchy
// verdict on either side propagates as a refusal.
UniquenessResult uniqueness_probe(const OperatorPtr& op,
                                  const ReactionDecomposition& rd,
                                  const RoughData& u0,
                                  const std::vector<int>& levels, double T,
                                  double h, int workers = 1);

// max over scenarios of sup_{eps <= t <= T} ||u(t)||_inf, checked against
// the c (1 + eps^{-N/2q} max ||u0||_q) envelope with c fitted per scenario.
BoundReport semigroup_boundedness_report(const std::vector<Trajectory>& runs,
                                         double epsilon, double T);

}  // namespace rdlab
