#pragma once

#include "rdlab/operators.hpp"
#include "rdlab/reaction.hpp"

namespace rdlab {

enum class Scheme { exp_euler, exp_rk2 };

// Time-indexed states in the operator's native coordinates, with L^q and
// sup-norm traces computed at store time for the q declared by the run.
// Long runs are decimated to at most `max_store` instants, always keeping
// the first 32 steps and a geometric ladder after them so that early-time
// exponent fits have samples.
struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  std::vector<double> lq_trace;
  std::vector<double> sup_trace;
  double q = 2.0;
  std::string scheme;
  double step = 0.0;
  OperatorPtr op;
  std::string problem;

  std::size_t size() const { return times.size(); }
  GridFunction state_grid(std::size_t idx) const;
};

struct IntegrateOptions {
  double T = 1.0;
  double h = 0.0;  // 0 = default_step policy
  Scheme scheme = Scheme::exp_euler;
  double q = 2.0;
  int max_store = 2048;
};

// Steps the variation-of-constants recurrence
//   u_{n+1} = e^{hA} u_n + h phi1(hA) (g + f0(., u_n))          (exp_euler)
// with the standard two-stage phi2 correction for exp_rk2. The nonlinearity
// is evaluated nodewise on the quadrature grid and projected back.
Trajectory integrate(const OperatorPtr& op, const ReactionDecomposition& rd,
                     const Eigen::VectorXd& u0_native,
                     const IntegrateOptions& opt);
Trajectory integrate(const OperatorPtr& op, const ReactionDecomposition& rd,
                     const GridFunction& u0, const IntegrateOptions& opt);

// Independent semi-implicit oracle: (I - hA) u_{n+1} = u_n + h (g + f0(u_n)).
Trajectory reference_solve(const OperatorPtr& op,
                           const ReactionDecomposition& rd,
                           const Eigen::VectorXd& u0_native,
                           const IntegrateOptions& opt);

// h = min(T/200, 1/(4 max(m+L))): keeps the stiff part inside the
// exponential and the nonlinear increment contractive.
double default_step(double T, const ReactionDecomposition& rd);

// which step indices (0..steps) are retained
std::vector<std::size_t> storage_plan(std::size_t steps, std::size_t max_store);

// asserts times[0] = 0, finite states, traces consistent with states
void check_trajectory(const Trajectory& t, double rel_tol = 1e-12);

}  // namespace rdlab
