#include "rdlab/integrate.hpp"

#include <cmath>
#include <limits>

namespace rdlab {

GridFunction Trajectory::state_grid(std::size_t idx) const {
  if (idx >= states.size()) throw Error("trajectory: sample index out of range");
  return op->to_grid(states[idx]);
}

double default_step(double T, const ReactionDecomposition& rd) {
  double stiff = (rd.m.values + rd.L.values).cwiseAbs().maxCoeff();
  double h = T / 200.0;
  if (stiff > 0.0) h = std::min(h, 1.0 / (4.0 * stiff));
  return h;
}

std::vector<std::size_t> storage_plan(std::size_t steps,
                                      std::size_t max_store) {
  std::vector<std::size_t> keep;
  if (steps + 1 <= max_store) {
    keep.resize(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) keep[i] = i;
    return keep;
  }
  // first 32 steps densely, then a geometric ladder up to the final step
  const std::size_t dense_budget =
      max_store > 2 ? max_store - 2 : std::size_t{1};
  const std::size_t dense = std::min({std::size_t{32}, steps, dense_budget});
  for (std::size_t i = 0; i <= dense; ++i) keep.push_back(i);
  const double budget = static_cast<double>(max_store - keep.size());
  const double ratio =
      std::pow(static_cast<double>(steps) / static_cast<double>(dense),
               1.0 / std::max(1.0, budget));
  double next = static_cast<double>(dense);
  while (keep.back() < steps) {
    next = std::max(next * ratio, static_cast<double>(keep.back() + 1));
    keep.push_back(std::min(steps, static_cast<std::size_t>(std::llround(next))));
  }
  return keep;
}

namespace {

struct Stepper {
  const PerturbedOperator& op;
  const ReactionDecomposition& rd;
  // nonlinear stage: synthesize, evaluate g + f0 nodewise, project back
  Eigen::VectorXd forcing(const Eigen::VectorXd& state) const {
    GridFunction u = op.to_grid(state);
    Eigen::VectorXd f(u.size());
    for (int i = 0; i < u.size(); ++i)
      f[i] = rd.g.values[i] +
             (rd.f0_zero ? 0.0 : rd.f0(i, u.values[i]));
    return op.to_native(GridFunction(u.domain, std::move(f)));
  }
};

Trajectory run(const OperatorPtr& op, const ReactionDecomposition& rd,
               const Eigen::VectorXd& u0, const IntegrateOptions& opt,
               bool implicit) {
  if (!(opt.T > 0.0)) throw Error("integrate: horizon T must be positive");
  const double h_req = opt.h > 0.0 ? opt.h : default_step(opt.T, rd);
  if (!(h_req > 0.0) || h_req > opt.T * (1.0 + 1e-12))
    throw Error("integrate: step must satisfy 0 < h <= T");
  if (u0.size() != op->state_dim())
    throw MismatchError("integrate: initial state dimension mismatch");
  if (!u0.allFinite()) throw Error("integrate: initial state not finite");
  require_same_domain(op->domain, rd.g.domain, "integrate");
  // the operator realizes Laplace + m: the potential must be the rd's m
  if ((op->potential.values - rd.m.values).cwiseAbs().maxCoeff() > 1e-12)
    throw MismatchError(
        "integrate: operator potential does not match the decomposition's m");

  const std::size_t steps =
      std::max<std::size_t>(1, static_cast<std::size_t>(
                                   std::llround(opt.T / h_req)));
  const double h = opt.T / static_cast<double>(steps);

  Trajectory traj;
  traj.q = opt.q;
  traj.step = h;
  traj.op = op;
  traj.problem = rd.name;
  traj.scheme = implicit ? "backward_euler"
                         : (opt.scheme == Scheme::exp_euler ? "exp_euler"
                                                            : "exp_rk2");

  const auto keep = storage_plan(steps, static_cast<std::size_t>(opt.max_store));
  std::size_t keep_pos = 0;
  const Stepper stepper{*op, rd};

  // spectral factors for the fixed step are reused across all steps
  const auto E = [&](const Eigen::VectorXd& v) { return op->apply_expm(h, v); };
  const auto P1 = [&](const Eigen::VectorXd& v) { return op->apply_phi1(h, v); };
  const auto P2 = [&](const Eigen::VectorXd& v) { return op->apply_phi2(h, v); };

  if (implicit && !(1.0 - h * op->spectral_bound() > 0.0))
    throw Error("reference_solve: h too large for positive definiteness");

  auto store = [&](double t, const Eigen::VectorXd& state) {
    GridFunction g = op->to_grid(state);
    traj.times.push_back(t);
    traj.states.push_back(state);
    traj.lq_trace.push_back(lq_norm(g, opt.q));
    traj.sup_trace.push_back(
        std::isinf(opt.q) ? traj.lq_trace.back()
                          : g.values.cwiseAbs().maxCoeff());
  };

  Eigen::VectorXd state = u0;
  if (keep[keep_pos] == 0) {
    store(0.0, state);
    ++keep_pos;
  }

  // with f0 == 0 the forcing is the constant g: its per-step contribution is
  // computed once and every step reduces to a spectral multiply
  Eigen::VectorXd lin_kick;
  if (rd.f0_zero) {
    const Eigen::VectorXd g_native = op->to_native(rd.g);
    lin_kick = implicit ? (h * g_native).eval()
                        : (h * op->apply_phi1(h, g_native)).eval();
  }

  for (std::size_t n = 1; n <= steps; ++n) {
    // non-finite values inside a step (state or forcing overflow) are a
    // blow-up report, not a structural error
    try {
      if (rd.f0_zero) {
        state = implicit ? op->solve_shifted(h, state + lin_kick)
                         : (E(state) + lin_kick).eval();
      } else if (implicit) {
        state = op->solve_shifted(h, state + h * stepper.forcing(state));
      } else if (opt.scheme == Scheme::exp_euler) {
        Eigen::VectorXd f = stepper.forcing(state);
        state = E(state) + h * P1(f);
      } else {
        Eigen::VectorXd f = stepper.forcing(state);
        Eigen::VectorXd a = E(state) + h * P1(f);
        state = a + h * P2(stepper.forcing(a) - f);
      }
    } catch (const BlowUpError&) {
      throw;
    } catch (const Error&) {
      state.setConstant(std::numeric_limits<double>::quiet_NaN());
    }
    if (!state.allFinite())
      throw BlowUpError(
          "integrate: state blew up (admissibility or step-size problem); "
          "last finite time t = " +
              std::to_string((n - 1) * h),
          (n - 1) * h);
    if (keep_pos < keep.size() && keep[keep_pos] == n) {
      store(static_cast<double>(n) * h, state);
      ++keep_pos;
    }
  }
  return traj;
}

}  // namespace

Trajectory integrate(const OperatorPtr& op, const ReactionDecomposition& rd,
                     const Eigen::VectorXd& u0_native,
                     const IntegrateOptions& opt) {
  return run(op, rd, u0_native, opt, false);
}

Trajectory integrate(const OperatorPtr& op, const ReactionDecomposition& rd,
                     const GridFunction& u0, const IntegrateOptions& opt) {
  return run(op, rd, op->to_native(u0), opt, false);
}

Trajectory reference_solve(const OperatorPtr& op,
                           const ReactionDecomposition& rd,
                           const Eigen::VectorXd& u0_native,
                           const IntegrateOptions& opt) {
  return run(op, rd, u0_native, opt, true);
}

void check_trajectory(const Trajectory& t, double rel_tol) {
  if (t.times.empty() || t.times.front() != 0.0)
    throw Error("trajectory: times must start at 0");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!t.states[i].allFinite()) throw Error("trajectory: non-finite state");
    GridFunction g = t.state_grid(i);
    const double lq = lq_norm(g, t.q);
    const double sup = g.values.cwiseAbs().maxCoeff();
    if (std::abs(lq - t.lq_trace[i]) > rel_tol * (1.0 + lq))
      throw Error("trajectory: L^q trace inconsistent with state");
    if (std::abs(sup - t.sup_trace[i]) > rel_tol * (1.0 + sup))
      throw Error("trajectory: sup trace inconsistent with state");
  }
}

}  // namespace rdlab
