#include "rdlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rdlab {

namespace {

void require_matching_times(const Trajectory& a, const Trajectory& b,
                            const char* what) {
  if (a.times.size() != b.times.size())
    throw MismatchError(std::string(what) + ": stored instants differ");
  for (std::size_t i = 0; i < a.times.size(); ++i)
    if (std::abs(a.times[i] - b.times[i]) > 1e-12 * (1.0 + a.times[i]))
      throw MismatchError(std::string(what) + ": stored instants differ");
  require_same_domain(a.op->domain, b.op->domain, what);
}

double fit_envelope_constant(const Trajectory& u, double q, double alpha,
                             std::size_t stride) {
  const double u0q = u.lq_trace.front();
  double c = 0.0;
  for (std::size_t s = 1; s < u.size(); s += stride) {
    const double t = u.times[s];
    if (t <= 0.0) continue;
    c = std::max(c, u.sup_trace[s] / (1.0 + std::pow(t, -alpha) * u0q));
  }
  return c;
}

}  // namespace

MajorantDecomposition solve_majorant_native(const OperatorPtr& op_C,
                                            const GridFunction& D,
                                            const Eigen::VectorXd& u0_abs,
                                            double T, double h, double q,
                                            int max_store) {
  require_same_domain(op_C->domain, D.domain, "solve_majorant");
  for (int i = 0; i < D.size(); ++i)
    if (D.values[i] < 0.0)
      throw Error("solve_majorant: forcing D must be nonnegative");
  if (!(T > 0.0) || !(h > 0.0) || h > T * (1.0 + 1e-12))
    throw Error("solve_majorant: need 0 < h <= T");

  const std::size_t steps =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(T / h)));
  const double he = T / static_cast<double>(steps);
  const auto keep = storage_plan(steps, static_cast<std::size_t>(max_store));

  MajorantDecomposition out;
  out.op = op_C;
  auto init = [&](Trajectory& t, const char* tag) {
    t.q = q;
    t.step = he;
    t.op = op_C;
    t.scheme = "exp_euler";
    t.problem = tag;
  };
  init(out.U, "majorant_full");
  init(out.U_h, "majorant_homogeneous");
  init(out.Phi, "majorant_forced");

  const Eigen::VectorXd dD = op_C->to_native(D);
  const Eigen::VectorXd kick = he * op_C->apply_phi1(he, dD);

  Eigen::VectorXd cU = u0_abs;
  Eigen::VectorXd cUh = u0_abs;
  Eigen::VectorXd cPhi = Eigen::VectorXd::Zero(u0_abs.size());

  auto store = [&](Trajectory& t, double time, const Eigen::VectorXd& s) {
    GridFunction g = op_C->to_grid(s);
    t.times.push_back(time);
    t.states.push_back(s);
    t.lq_trace.push_back(lq_norm(g, q));
    t.sup_trace.push_back(g.values.cwiseAbs().maxCoeff());
  };

  std::size_t keep_pos = 0;
  if (keep[keep_pos] == 0) {
    store(out.U, 0.0, cU);
    store(out.U_h, 0.0, cUh);
    store(out.Phi, 0.0, cPhi);
    ++keep_pos;
  }
  for (std::size_t n = 1; n <= steps; ++n) {
    cU = op_C->apply_expm(he, cU) + kick;
    cUh = op_C->apply_expm(he, cUh);
    cPhi = op_C->apply_expm(he, cPhi) + kick;
    if (keep_pos < keep.size() && keep[keep_pos] == n) {
      const double time = static_cast<double>(n) * he;
      store(out.U, time, cU);
      store(out.U_h, time, cUh);
      store(out.Phi, time, cPhi);
      ++keep_pos;
    }
  }

  // decomposition identity U = Phi + U_h, a type invariant
  for (std::size_t s = 0; s < out.U.size(); ++s) {
    const double resid =
        (out.U.states[s] - out.Phi.states[s] - out.U_h.states[s]).norm();
    if (resid > 1e-9 * (1.0 + out.U.states[s].norm()))
      throw Error("solve_majorant: decomposition identity U = Phi + U_h "
                  "violated");
  }
  return out;
}

MajorantDecomposition solve_majorant(const OperatorPtr& op_C,
                                     const GridFunction& D,
                                     const GridFunction& u0_abs, double T,
                                     double h, double q, int max_store) {
  require_same_domain(op_C->domain, u0_abs.domain, "solve_majorant");
  for (int i = 0; i < u0_abs.size(); ++i)
    if (u0_abs.values[i] < 0.0)
      throw Error("solve_majorant: initial data must be nonnegative");
  return solve_majorant_native(op_C, D, op_C->to_native(u0_abs), T, h, q,
                               max_store);
}

BoundReport supersolution_check(const Trajectory& u, const Trajectory& U,
                                double tol) {
  require_matching_times(u, U, "supersolution_check");
  double max_U = 0.0;
  for (double s : U.sup_trace) max_U = std::max(max_U, s);
  if (tol <= 0.0) tol = 1e-6 * (1.0 + max_U);

  BoundReport rep;
  rep.name = "supersolution_sandwich";
  rep.constants["tol"] = tol;
  double worst = -std::numeric_limits<double>::infinity();
  Witness witness;
  for (std::size_t s = 0; s < u.size(); ++s) {
    GridFunction gu = u.state_grid(s);
    GridFunction gU = U.state_grid(s);
    for (int i = 0; i < gu.size(); ++i) {
      const double margin = std::abs(gu.values[i]) - gU.values[i] - tol;
      if (margin > worst) {
        worst = margin;
        witness = {u.times[s], i, gu.values[i]};
      }
    }
  }
  rep.worst_margin = worst;
  rep.pass = worst <= 0.0;
  if (!rep.pass) rep.witnesses.push_back(witness);
  return rep;
}

BoundReport linfty_bound_check(const Trajectory& u, double q, double T) {
  const int N = u.op->domain.dim;
  const double alpha = N / (2.0 * q);

  // early samples must exist for the fit to mean anything
  std::size_t early = 0;
  for (std::size_t s = 1; s < u.size(); ++s)
    if (u.times[s] > 0.0 && u.times[s] <= T / 10.0) ++early;
  if (early < 5)
    throw InsufficientDataError(
        "linfty_bound_check: too few early-time samples stored");

  BoundReport rep;
  rep.name = "linfty_envelope";
  const double c_full = fit_envelope_constant(u, q, alpha, 1);
  const double c_half = fit_envelope_constant(u, q, alpha, 2);
  rep.constants["c"] = c_full;
  rep.constants["c_half_density"] = c_half;
  rep.constants["alpha"] = alpha;
  rep.worst_margin = std::abs(c_full - c_half) - 0.2 * c_full;
  rep.pass = std::isfinite(c_full) && c_full > 0.0 && rep.worst_margin <= 0.0;
  if (!rep.pass) rep.witnesses.push_back({0.0, -1, c_full});
  return rep;
}

BoundReport smoothing_exponent_fit(const Trajectory& u, double q, double p,
                                   double t_min, double t_max) {
  if (!(p >= q)) throw Error("smoothing fit: need p >= q");
  const int N = u.op->domain.dim;
  const double required = -(N / 2.0) * (1.0 / q - (std::isinf(p) ? 0.0 : 1.0 / p));

  std::vector<double> lt, ln;
  for (std::size_t s = 0; s < u.size(); ++s) {
    const double t = u.times[s];
    if (t < t_min || t > t_max || t <= 0.0) continue;
    double norm;
    if (std::isinf(p))
      norm = u.sup_trace[s];
    else if (p == u.q)
      norm = u.lq_trace[s];
    else
      norm = lq_norm(u.state_grid(s), p);
    if (!(norm > 0.0)) continue;
    lt.push_back(std::log(t));
    ln.push_back(std::log(norm));
  }
  if (lt.size() < 5)
    throw InsufficientDataError(
        "smoothing fit: fewer than 5 samples in the window");

  const std::size_t n = lt.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lt[i];
    my += ln[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lt[i] - mx) * (lt[i] - mx);
    sxy += (lt[i] - mx) * (ln[i] - my);
  }
  const double slope = sxy / sxx;

  BoundReport rep;
  rep.name = "smoothing_exponent";
  rep.constants["slope"] = slope;
  rep.constants["required"] = required;
  rep.constants["samples"] = static_cast<double>(n);
  rep.worst_margin = (required - 0.15) - slope;
  rep.pass = rep.worst_margin <= 0.0;
  if (!rep.pass) rep.witnesses.push_back({t_min, -1, slope});
  return rep;
}

UniquenessResult uniqueness_probe(const OperatorPtr& op,
                                  const ReactionDecomposition& rd,
                                  const RoughData& u0,
                                  const std::vector<int>& levels, double T,
                                  double h, int workers) {
  ApproximationFamily fa = run_family(op, rd, u0, levels, T, h,
                                      MollifyScheme::amplitude_truncation,
                                      workers);
  ApproximationFamily fb = run_family(op, rd, u0, levels, T, h,
                                      MollifyScheme::modal_projection, workers);

  const GridFunction cL(op->domain,
                        (rd.m.values + rd.L.values).eval());
  const double lambda =
      principal_eigenvalue(op->domain, cL, op->basis->count()).value;

  CauchyReport ca = cauchy_report(fa, u0.q, lambda);
  CauchyReport cb = cauchy_report(fb, u0.q, lambda);
  LimitExtract la = extract_limit(fa, ca);  // throws on failed verdicts
  LimitExtract lb = extract_limit(fb, cb);

  const Trajectory& ta = la.limit;
  const Trajectory& tb = lb.limit;
  if (ta.times != tb.times)
    throw MismatchError("uniqueness_probe: schemes disagree on instants");

  double gap = 0.0;
  for (std::size_t s = 0; s < ta.size(); ++s)
    gap = std::max(gap, lq_dist(ta.state_grid(s), tb.state_grid(s), u0.q));

  UniquenessResult out;
  out.gap = gap;
  out.tail_amplitude = la.error_estimate;
  out.tail_modal = lb.error_estimate;
  out.report.name = "uniqueness_cross_scheme";
  out.report.constants["gap"] = gap;
  out.report.constants["tail_amplitude"] = la.error_estimate;
  out.report.constants["tail_modal"] = lb.error_estimate;
  const double budget = 2.0 * (la.error_estimate + lb.error_estimate);
  out.report.constants["budget"] = budget;
  out.report.worst_margin = gap - budget;
  out.report.pass = out.report.worst_margin <= 0.0;
  if (!out.report.pass) out.report.witnesses.push_back({0.0, -1, gap});
  return out;
}

BoundReport semigroup_boundedness_report(const std::vector<Trajectory>& runs,
                                         double epsilon, double T) {
  if (runs.size() < 3)
    throw Error("boundedness report: at least three scenarios required");
  const int N = runs.front().op->domain.dim;
  const double q = runs.front().q;
  const double alpha = N / (2.0 * q);

  double sup_inf = 0.0, max_u0 = 0.0, c_env = 0.0;
  for (const auto& u : runs) {
    if (u.q != q)
      throw MismatchError("boundedness report: runs declare different q");
    max_u0 = std::max(max_u0, u.lq_trace.front());
    c_env = std::max(c_env, fit_envelope_constant(u, q, alpha, 1));
    for (std::size_t s = 0; s < u.size(); ++s)
      if (u.times[s] >= epsilon && u.times[s] <= T)
        sup_inf = std::max(sup_inf, u.sup_trace[s]);
  }

  BoundReport rep;
  rep.name = "semigroup_boundedness";
  const double envelope =
      c_env * (1.0 + std::pow(epsilon, -alpha) * max_u0);
  rep.constants["sup_linf"] = sup_inf;
  rep.constants["envelope"] = envelope;
  rep.constants["c"] = c_env;
  rep.constants["epsilon"] = epsilon;
  rep.worst_margin = sup_inf - envelope * (1.0 + 1e-9);
  rep.pass = std::isfinite(sup_inf) && rep.worst_margin <= 0.0;
  if (!rep.pass) rep.witnesses.push_back({epsilon, -1, sup_inf});
  return rep;
}

}  // namespace rdlab
