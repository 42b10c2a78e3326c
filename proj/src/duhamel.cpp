#include "rdlab/duhamel.hpp"

#include <algorithm>
#include <cmath>

namespace rdlab {

namespace {

// 4-point Gauss-Legendre panels for the Duhamel integral
constexpr int kGN = 4;
constexpr double kGX[kGN] = {-0.8611363115940526, -0.3399810435848563,
                             0.3399810435848563, 0.8611363115940526};
constexpr double kGW[kGN] = {0.3478548451374538, 0.6521451548625461,
                             0.6521451548625461, 0.3478548451374538};

// linear interpolation of stored states in native coordinates
Eigen::VectorXd interp_state(const Trajectory& u, double s) {
  const auto& ts = u.times;
  auto it = std::lower_bound(ts.begin(), ts.end(), s);
  if (it == ts.begin()) return u.states.front();
  if (it == ts.end()) return u.states.back();
  const std::size_t hi = static_cast<std::size_t>(it - ts.begin());
  const std::size_t lo = hi - 1;
  const double w = (s - ts[lo]) / (ts[hi] - ts[lo]);
  return (1.0 - w) * u.states[lo] + w * u.states[hi];
}

}  // namespace

double ResidualTrace::max_q() const {
  double m = 0.0;
  for (double r : residual_q) m = std::max(m, r);
  return m;
}

ResidualTrace vcf_residual(const Trajectory& u, const OperatorPtr& op,
                           const ReactionDecomposition& rd, double epsilon,
                           int quad_nodes, int max_eval) {
  if (quad_nodes < 8)
    throw Error("vcf_residual: at least 8 quadrature nodes required");
  if (u.size() < 3)
    throw InsufficientDataError("vcf_residual: trajectory too sparse");
  require_same_domain(op->domain, rd.g.domain, "vcf_residual");

  // snap epsilon to a stored instant
  std::size_t eps_idx = 0;
  while (eps_idx + 2 < u.size() && u.times[eps_idx] < epsilon) ++eps_idx;
  const double eps = u.times[eps_idx];
  const double T = u.times.back();
  if (!(T > eps))
    throw InsufficientDataError("vcf_residual: nothing stored beyond epsilon");

  // evaluation instants: geometric subset of stored times after epsilon
  std::vector<std::size_t> eval_idx;
  {
    std::vector<std::size_t> later;
    for (std::size_t s = eps_idx + 1; s < u.size(); ++s) later.push_back(s);
    if (later.size() <= static_cast<std::size_t>(max_eval)) {
      eval_idx = later;
    } else {
      const double ratio = static_cast<double>(later.size() - 1) /
                           static_cast<double>(max_eval - 1);
      for (int k = 0; k < max_eval; ++k)
        eval_idx.push_back(later[static_cast<std::size_t>(
            std::llround(k * ratio))]);
      eval_idx.erase(std::unique(eval_idx.begin(), eval_idx.end()),
                     eval_idx.end());
    }
  }

  const int panels = std::max(2, quad_nodes / kGN);

  // the stored sampling must be able to feed the requested quadrature
  std::size_t stored_after = u.size() - eps_idx;
  if (stored_after < std::max<std::size_t>(3, panels / 8))
    throw InsufficientDataError(
        "vcf_residual: trajectory too sparse for the requested quadrature");

  ResidualTrace out;
  out.epsilon = eps;
  out.quad_nodes = panels * kGN;

  const Eigen::VectorXd g_native = op->to_native(rd.g);
  auto forcing = [&](double s) -> Eigen::VectorXd {
    if (rd.f0_zero) return g_native;
    GridFunction us = op->to_grid(interp_state(u, s));
    Eigen::VectorXd f(us.size());
    for (int i = 0; i < us.size(); ++i)
      f[i] = rd.g.values[i] + rd.f0(i, us.values[i]);
    return op->to_native(GridFunction(us.domain, std::move(f)));
  };

  for (std::size_t idx : eval_idx) {
    const double t = u.times[idx];
    Eigen::VectorXd integral = Eigen::VectorXd::Zero(op->state_dim());
    const double width = (t - eps) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = eps + (p + 0.5) * width;
      for (int gq = 0; gq < kGN; ++gq) {
        const double s = mid + 0.5 * width * kGX[gq];
        integral +=
            0.5 * width * kGW[gq] * op->apply_expm(t - s, forcing(s));
      }
    }
    Eigen::VectorXd predicted =
        op->apply_expm(t - eps, u.states[eps_idx]) + integral;
    GridFunction resid = op->to_grid((u.states[idx] - predicted).eval());
    out.times.push_back(t);
    out.residual_q.push_back(lq_norm(resid, u.q));
    out.residual_l2.push_back(lq_norm(resid, 2.0));
  }
  return out;
}

}  // namespace rdlab
