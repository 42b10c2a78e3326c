#include "rdlab/rough.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace rdlab {

namespace {

double refined_norm_with(const RoughData& u0, const DomainSpec& d, double q,
                         const RefinedQuadOptions& opt) {
  return refined_lq_norm(d, u0.formula, q, u0.singular_points, opt);
}

}  // namespace

double validate_rough(const RoughData& u0, const DomainSpec& domain) {
  for (int i = 0; i < domain.node_count(); ++i) {
    const auto xy = domain.coords(i);
    if (!std::isfinite(u0.formula(xy[0], xy[1])))
      throw Error("rough data: formula not finite at an interior node");
  }
  RefinedQuadOptions base, fine;
  fine.base_panels = 2 * base.base_panels;
  fine.grading_levels = base.grading_levels + 6;
  const double n0 = refined_norm_with(u0, domain, u0.q, base);
  const double n1 = refined_norm_with(u0, domain, u0.q, fine);
  if (!std::isfinite(n0) || !std::isfinite(n1) ||
      std::abs(n1 - n0) > 0.02 * (1.0 + std::abs(n1)))
    throw Error("rough data: ||u0||_{L^q} not stable under quadrature "
                "refinement (not in L^q?)");
  return n1;
}

GridFunction mollify(const RoughData& u0, int level, MollifyScheme scheme,
                     const EigenBasis& basis) {
  if (level < 1) throw Error("mollify: level must be >= 1");
  const DomainSpec& d = basis.domain;

  if (scheme == MollifyScheme::amplitude_truncation) {
    const double bound = static_cast<double>(level);
    return GridFunction::sample(d, [&](double x, double y) {
      return std::clamp(u0.formula(x, y), -bound, bound);
    });
  }

  // modal projection needs the sampled field to be square integrable
  RefinedQuadOptions base, fine;
  fine.base_panels = 2 * base.base_panels;
  fine.grading_levels = base.grading_levels + 6;
  const double n0 = refined_norm_with(u0, d, 2.0, base);
  const double n1 = refined_norm_with(u0, d, 2.0, fine);
  if (!std::isfinite(n0) || !std::isfinite(n1) ||
      std::abs(n1 - n0) > 0.02 * (1.0 + std::abs(n1)))
    throw SchemeError(
        "mollify: modal projection of a field that is not square integrable");
  if (level > basis.count())
    throw ResolutionError("mollify: modal level exceeds basis size");

  GridFunction sampled = GridFunction::sample(
      d, [&](double x, double y) { return u0.formula(x, y); });
  Eigen::VectorXd coeffs = to_modes(sampled, basis);
  for (int k = level; k < basis.count(); ++k) coeffs[k] = 0.0;
  return synthesize(coeffs, basis);
}

Eigen::VectorXd initial_modes(const RoughData& u0, int level,
                              MollifyScheme scheme, const EigenBasis& basis) {
  if (level < 1) throw Error("initial_modes: level must be >= 1");

  if (scheme == MollifyScheme::amplitude_truncation) {
    const double bound = static_cast<double>(level);
    return project_formula(
        [&](double x, double y) {
          return std::clamp(u0.formula(x, y), -bound, bound);
        },
        basis, u0.singular_points);
  }

  if (level > basis.count())
    throw ResolutionError("initial_modes: modal level exceeds basis size");
  RefinedQuadOptions base, fine;
  fine.base_panels = 2 * base.base_panels;
  fine.grading_levels = base.grading_levels + 6;
  const double n0 = refined_norm_with(u0, basis.domain, 2.0, base);
  const double n1 = refined_norm_with(u0, basis.domain, 2.0, fine);
  if (!std::isfinite(n0) || !std::isfinite(n1) ||
      std::abs(n1 - n0) > 0.02 * (1.0 + std::abs(n1)))
    throw SchemeError(
        "initial_modes: modal projection of a field that is not square "
        "integrable");
  Eigen::VectorXd coeffs = project_formula(u0.formula, basis,
                                           u0.singular_points);
  for (int k = level; k < basis.count(); ++k) coeffs[k] = 0.0;
  return coeffs;
}

ApproximationFamily run_family(const OperatorPtr& op,
                               const ReactionDecomposition& rd,
                               const RoughData& u0,
                               const std::vector<int>& levels, double T,
                               double h, MollifyScheme scheme, int workers,
                               int max_store) {
  if (levels.size() < 2)
    throw Error("run_family: at least two mollification levels required");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (!(levels[i] > levels[i - 1]))
      throw Error("run_family: levels must be strictly increasing");
  if (op->backend != Backend::spectral)
    throw Error("run_family: rough families run on the spectral backend");

  validate_rough(u0, op->domain);

  ApproximationFamily fam;
  fam.scheme = scheme;
  fam.levels = levels;
  fam.q = u0.q;
  fam.trajectories.resize(levels.size());
  fam.initial_fields.resize(levels.size());
  fam.data_tails.resize(levels.size());

  IntegrateOptions opt;
  opt.T = T;
  opt.h = h;
  opt.q = u0.q;
  opt.max_store = max_store;

  std::vector<std::exception_ptr> errors(levels.size());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= levels.size()) return;
      try {
        Eigen::VectorXd modes = initial_modes(u0, levels[i], scheme, *op->basis);
        fam.initial_fields[i] = synthesize(modes, *op->basis);
        fam.trajectories[i] = integrate(op, rd, modes, opt);

        if (scheme == MollifyScheme::amplitude_truncation) {
          // closed-form residual (|u0| - n)^+ handled by refined quadrature
          const double bound = static_cast<double>(levels[i]);
          fam.data_tails[i] = refined_lq_norm(
              op->domain,
              [&](double x, double y) {
                return std::max(std::abs(u0.formula(x, y)) - bound, 0.0);
              },
              u0.q, u0.singular_points);
        } else {
          GridFunction sampled = GridFunction::sample(
              op->domain,
              [&](double x, double y) { return u0.formula(x, y); });
          fam.data_tails[i] =
              lq_dist(sampled, fam.initial_fields[i], u0.q);
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const int nthreads =
      std::max(1, std::min<int>(workers, static_cast<int>(levels.size())));
  if (nthreads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return fam;
}

CauchyReport cauchy_report(const ApproximationFamily& family, double q,
                           double lambda) {
  if (family.trajectories.size() < 2)
    throw Error("cauchy_report: at least two levels required");

  CauchyReport out;
  out.times = family.trajectories.front().times;
  for (const auto& t : family.trajectories)
    if (t.times != out.times)
      throw MismatchError("cauchy_report: trajectories disagree on stored "
                          "instants");

  BoundReport& rep = out.report;
  rep.name = "cauchy_contraction";
  rep.constants["lambda"] = lambda;

  const std::size_t nlev = family.trajectories.size();
  std::vector<double> pair_sups;
  std::vector<double> consecutive_sup_dist(nlev - 1, 0.0);

  for (std::size_t a = 0; a < nlev; ++a) {
    for (std::size_t b = a + 1; b < nlev; ++b) {
      const Trajectory& ta = family.trajectories[a];
      const Trajectory& tb = family.trajectories[b];
      PairTrace pt;
      pt.level_a = family.levels[a];
      pt.level_b = family.levels[b];
      GridFunction ga0 = ta.state_grid(0), gb0 = tb.state_grid(0);
      pt.d0 = lq_dist(ga0, gb0, q);
      const double scale = lq_norm(ga0, q) + lq_norm(gb0, q);
      if (pt.d0 <= 1e-14 * (1.0 + scale)) {
        pt.skipped = true;
        out.pairs.push_back(pt);
        out.ratios.emplace_back();
        rep.notes.push_back("pair (" + std::to_string(pt.level_a) + "," +
                            std::to_string(pt.level_b) +
                            ") skipped: identical initial data");
        continue;
      }
      std::vector<double> rt(out.times.size());
      for (std::size_t s = 0; s < out.times.size(); ++s) {
        const double dist = lq_dist(ta.state_grid(s), tb.state_grid(s), q);
        rt[s] = dist / (std::exp(-lambda * out.times[s]) * pt.d0);
        pt.sup_ratio = std::max(pt.sup_ratio, rt[s]);
        pt.sup_dist = std::max(pt.sup_dist, dist);
      }
      if (b == a + 1) consecutive_sup_dist[a] = pt.sup_dist;
      pair_sups.push_back(pt.sup_ratio);
      out.pairs.push_back(pt);
      out.ratios.push_back(std::move(rt));
    }
  }

  if (pair_sups.empty()) {
    // all levels identical (already-smooth data); the bound is vacuous
    rep.pass = true;
    rep.notes.push_back("all pairs skipped: family is constant in the level");
    return out;
  }

  std::vector<double> sorted = pair_sups;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];
  const double cmax = sorted.back();
  const double uniformity = cmax / std::max(1e-300, median);

  // consecutive pairs with distinct data, in level order
  bool decreasing = true;
  std::vector<double> nonzero;
  for (double dsup : consecutive_sup_dist)
    if (dsup > 0.0) nonzero.push_back(dsup);
  for (std::size_t i = 0; i + 1 < nonzero.size(); ++i)
    if (!(nonzero[i + 1] < nonzero[i])) decreasing = false;

  rep.constants["c"] = cmax;
  rep.constants["uniformity"] = uniformity;
  rep.constants["median_c"] = median;
  rep.worst_margin = uniformity - 1.1;
  rep.pass = uniformity <= 1.1 && decreasing;
  if (!rep.pass) {
    Witness w;
    w.t = uniformity;
    rep.witnesses.push_back(w);
    if (!decreasing)
      rep.notes.push_back("pairwise sup distances not strictly decreasing");
  }
  return out;
}

LimitExtract extract_limit(const ApproximationFamily& family,
                           const CauchyReport& cauchy) {
  if (!cauchy.report.pass)
    throw RefusalError(
        "extract_limit: Cauchy verdict failed (uniformity = " +
        std::to_string(cauchy.report.constants.count("uniformity")
                           ? cauchy.report.constants.at("uniformity")
                           : 0.0) +
        ")");
  LimitExtract out;
  out.limit = family.trajectories.back();
  const std::size_t top = family.trajectories.size() - 1;
  double est = 0.0;
  const Trajectory& a = family.trajectories[top];
  const Trajectory& b = family.trajectories[top - 1];
  for (std::size_t s = 0; s < a.size(); ++s)
    est = std::max(est, lq_dist(a.state_grid(s), b.state_grid(s), family.q));
  out.error_estimate = est;
  return out;
}

}  // namespace rdlab
