#include "rdlab/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>

namespace rdlab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const std::vector<std::pair<std::string, std::string>>& module_versions() {
  static const std::vector<std::pair<std::string, std::string>> v{
      {"spectral_core", "1.0"},   {"coefficient_fields", "1.0"},
      {"semigroup", "1.0"},       {"integrator", "1.0"},
      {"rough_driver", "1.0"},    {"comparison_lab", "1.0"},
      {"vcf_residual", "1.0"},    {"cli_harness", "1.0"},
  };
  return v;
}

GridFunction const_field(const DomainSpec& d, double v) {
  return GridFunction::constant(d, v);
}

// perturbs every stored state after t = 0 in the leading mode; used to force
// red verdicts on demand (detector sanity from the CLI)
void inject_defect(Trajectory& t, double amplitude) {
  for (std::size_t s = 1; s < t.states.size(); ++s)
    t.states[s][0] += amplitude;
  for (std::size_t s = 1; s < t.states.size(); ++s) {
    GridFunction g = t.state_grid(s);
    t.lq_trace[s] = lq_norm(g, t.q);
    t.sup_trace[s] = g.values.cwiseAbs().maxCoeff();
  }
}

struct StageGuard {
  StudyResult& out;
  std::string name;
  Clock::time_point t0 = Clock::now();
  ~StageGuard() { out.timings.push_back({name, seconds_since(t0)}); }
};

// ---------------------------------------------------------------------------
// scenario bodies
// ---------------------------------------------------------------------------

StudyResult run_heat(const ScenarioConfig& cfg) {
  StudyResult out;
  StageGuard guard{out, "heat_sanity"};

  const DomainSpec domain = make_domain(cfg);
  const auto basis = dirichlet_eigenpairs(domain, cfg.modes);
  const ReactionDecomposition rd =
      make_linear(const_field(domain, 0.0), const_field(domain, 0.0));
  const auto op = assemble(basis, rd.m);
  out.notes.push_back("heat_sanity forces the pure heat problem (f = 0)");

  GridFunction u0 = GridFunction::sample(domain, [&](double x, double y) {
    double v = std::sin(std::numbers::pi * x / domain.extent[0]);
    if (domain.dim == 2) v *= std::sin(std::numbers::pi * y / domain.extent[1]);
    return v;
  });

  IntegrateOptions opt;
  opt.T = cfg.T;
  opt.h = cfg.h > 0.0 ? cfg.h : default_step(cfg.T, rd);
  opt.q = cfg.q;
  Trajectory run = integrate(op, rd, u0, opt);
  if (cfg.inject_defect > 0.0) inject_defect(run, cfg.inject_defect);

  // first-mode decay against the closed form
  const double mu1 = basis->mu[0];
  GridFunction expected(domain,
                        (std::exp(-mu1 * cfg.T) * u0.values).eval());
  const double rel =
      lq_dist(run.state_grid(run.size() - 1), expected, 2.0) /
      lq_norm(expected, 2.0);
  BoundReport decay;
  decay.name = "heat_mode_decay";
  decay.constants["rel_error"] = rel;
  decay.worst_margin = rel - 1e-8;
  decay.pass = decay.worst_margin <= 0.0;
  if (!decay.pass) decay.witnesses.push_back({cfg.T, -1, rel});
  out.reports.push_back(decay);

  // independent finite-difference backend (1D cross-check)
  if (domain.dim == 1) {
    const int n_fd = std::min(cfg.nodes, 192);
    const DomainSpec dfd = DomainSpec::interval(domain.extent[0], n_fd);
    const auto op_fd = assemble_fd(dfd, const_field(dfd, 0.0));
    const ReactionDecomposition rd_fd =
        make_linear(const_field(dfd, 0.0), const_field(dfd, 0.0));
    GridFunction u0_fd = GridFunction::sample(dfd, [&](double x, double) {
      return std::sin(std::numbers::pi * x / dfd.extent[0]);
    });
    Trajectory run_fd = integrate(op_fd, rd_fd, u0_fd, opt);
    GridFunction expected_fd(
        dfd, (std::exp(-mu1 * cfg.T) * u0_fd.values).eval());
    const double rel_fd =
        lq_dist(run_fd.state_grid(run_fd.size() - 1), expected_fd, 2.0) /
        lq_norm(expected_fd, 2.0);
    BoundReport fd;
    fd.name = "heat_fd_crosscheck";
    fd.constants["rel_error"] = rel_fd;
    fd.constants["fd_nodes"] = n_fd;
    fd.worst_margin = rel_fd - 1e-4;
    fd.pass = fd.worst_margin <= 0.0;
    if (!fd.pass) fd.witnesses.push_back({cfg.T, -1, rel_fd});
    out.reports.push_back(fd);
  }

  // semigroup law on the initial field
  {
    GridFunction one_shot = apply_semigroup(*op, 0.7, u0);
    GridFunction two_shot =
        apply_semigroup(*op, 0.3, apply_semigroup(*op, 0.4, u0));
    BoundReport law;
    law.name = "semigroup_law";
    const double err = lq_dist(one_shot, two_shot, 2.0);
    law.constants["l2_error"] = err;
    law.worst_margin = err - 1e-10 * lq_norm(u0, 2.0);
    law.pass = law.worst_margin <= 0.0;
    if (!law.pass) law.witnesses.push_back({0.7, -1, err});
    out.reports.push_back(law);
  }

  out.traces.emplace_back("heat_run", std::move(run));
  return out;
}

struct CauchyStudyArtifacts {
  ApproximationFamily family;
  CauchyReport cauchy;
  OperatorPtr op;
  ReactionDecomposition rd;
  RoughData data;
  double lambda = 0.0;
  double h = 0.0;
};

CauchyStudyArtifacts build_family_study(const ScenarioConfig& cfg,
                                        StudyResult& out) {
  CauchyStudyArtifacts art;
  const DomainSpec domain = make_domain(cfg);
  const auto basis = dirichlet_eigenpairs(domain, cfg.modes);
  art.rd = make_nonlinearity(cfg, domain);
  art.op = assemble(basis, art.rd.m);
  art.data = make_rough_data(cfg, domain);

  // certify the decomposition before trusting the contraction bound
  out.reports.push_back(admissibility_check(art.rd, 10.0, 400));
  for (const auto& [k, v] : art.rd.metadata)
    out.notes.push_back("nonlinearity " + art.rd.name + ": " + k + " = " + v);
  for (const auto& w : art.op->warnings()) out.notes.push_back(w);

  const GridFunction mL(domain, (art.rd.m.values + art.rd.L.values).eval());
  art.lambda = principal_eigenvalue(domain, mL, cfg.modes).value;
  art.h = cfg.h > 0.0 ? cfg.h : default_step(cfg.T, art.rd);

  art.family =
      run_family(art.op, art.rd, art.data, cfg.levels, cfg.T, art.h,
                 MollifyScheme::amplitude_truncation, cfg.workers);
  if (cfg.inject_defect > 0.0)
    inject_defect(art.family.trajectories.back(), cfg.inject_defect);

  art.cauchy = cauchy_report(art.family, art.data.q, art.lambda);
  out.reports.push_back(art.cauchy.report);
  for (std::size_t p = 0; p < art.cauchy.pairs.size(); ++p) {
    const auto& pt = art.cauchy.pairs[p];
    if (pt.skipped) continue;
    for (std::size_t s = 0; s < art.cauchy.times.size(); ++s)
      out.pairs.push_back({pt.level_a, pt.level_b, art.cauchy.times[s],
                           art.cauchy.ratios[p][s]});
  }
  return art;
}

void append_supersolution_rows(const ScenarioConfig& cfg,
                               CauchyStudyArtifacts& art, StudyResult& out) {
  const SignConditionFields sc = sign_condition_fields(art.rd);
  const auto op_C = assemble(art.op->basis, sc.C);
  for (std::size_t i = 0; i < art.family.levels.size(); ++i) {
    const GridFunction& f0 = art.family.initial_fields[i];
    GridFunction abs0(f0.domain, f0.values.cwiseAbs());
    MajorantDecomposition maj = solve_majorant_native(
        op_C, sc.D, op_C->to_native(abs0), cfg.T, art.h, art.data.q);
    BoundReport rep =
        supersolution_check(art.family.trajectories[i], maj.U);
    rep.name = "supersolution_L" + std::to_string(art.family.levels[i]);
    out.reports.push_back(rep);
    if (i + 1 == art.family.levels.size()) {
      out.traces.emplace_back("majorant_top", maj.U);
      out.traces.emplace_back("majorant_top_homogeneous", maj.U_h);
      out.traces.emplace_back("majorant_top_forced", maj.Phi);
    }
  }
}

void append_vcf_rows(const ScenarioConfig& cfg, CauchyStudyArtifacts& art,
                     StudyResult& out) {
  LimitExtract limit = extract_limit(art.family, art.cauchy);
  const double eps = 8.0 * art.h;

  ResidualTrace base = vcf_residual(limit.limit, art.op, art.rd, eps, 32);

  // refine the step on the top level only
  Eigen::VectorXd top_modes = initial_modes(
      art.data, art.family.levels.back(), art.family.scheme, *art.op->basis);
  IntegrateOptions half;
  half.T = cfg.T;
  half.h = art.h / 2.0;
  half.q = art.data.q;
  Trajectory fine = integrate(art.op, art.rd, top_modes, half);
  ResidualTrace refined = vcf_residual(fine, art.op, art.rd, eps, 32);

  const double r0 = base.max_q();
  const double r1 = refined.max_q();
  const double order = std::log2(std::max(r0, 1e-300) /
                                 std::max(r1, 1e-300));
  BoundReport rep;
  rep.name = "vcf_residual_order";
  rep.constants["residual_h"] = r0;
  rep.constants["residual_h_half"] = r1;
  rep.constants["order"] = order;
  rep.constants["limit_error_estimate"] = limit.error_estimate;
  rep.constants["epsilon"] = base.epsilon;
  rep.constants["quad_nodes"] = base.quad_nodes;
  rep.worst_margin = 0.8 - order;
  rep.pass = rep.worst_margin <= 0.0;
  if (!rep.pass) rep.witnesses.push_back({eps, -1, order});
  out.reports.push_back(rep);

  out.traces.emplace_back("limit", limit.limit);
}

StudyResult run_cauchy(const ScenarioConfig& cfg, bool supercritical) {
  StudyResult out;
  StageGuard guard{out, supercritical ? "supercritical_demo" : "cauchy_study"};

  ScenarioConfig local = cfg;
  if (supercritical) {
    local.nonlinearity = "logistic";
    local.rho = std::max(cfg.rho, 5.0);
    local.q = 1.0;
    local.dim = 1;
    const double p_c = 1.0 + 2.0 * local.q / local.dim;
    out.notes.push_back("supercritical demo: rho = " +
                        std::to_string(local.rho) + " exceeds p_c = " +
                        std::to_string(p_c));
    BoundReport margin;
    margin.name = "supercritical_margin";
    margin.constants["rho"] = local.rho;
    margin.constants["p_c"] = p_c;
    margin.worst_margin = p_c - local.rho;  // negative: beyond critical
    margin.pass = local.rho > p_c;
    if (!margin.pass) margin.witnesses.push_back({0.0, -1, local.rho});
    out.reports.push_back(margin);
  }

  CauchyStudyArtifacts art = build_family_study(local, out);
  append_supersolution_rows(local, art, out);
  append_vcf_rows(local, art, out);

  for (std::size_t i = 0; i < art.family.levels.size(); ++i)
    out.traces.emplace_back(
        "level_" + std::to_string(art.family.levels[i]),
        art.family.trajectories[i]);
  return out;
}

StudyResult run_majorant(const ScenarioConfig& cfg) {
  StudyResult out;
  StageGuard guard{out, "majorant_study"};

  const DomainSpec domain = make_domain(cfg);
  const auto basis = dirichlet_eigenpairs(domain, cfg.modes);
  const ReactionDecomposition rd = make_nonlinearity(cfg, domain);
  const auto op = assemble(basis, rd.m);
  const SignConditionFields sc = sign_condition_fields(rd);
  const auto op_C = assemble(basis, sc.C);

  out.reports.push_back(admissibility_check(rd, 10.0, 400));
  for (const auto& w : op_C->warnings()) out.notes.push_back(w);

  const RoughData data = make_rough_data(cfg, domain);
  GridFunction sampled = GridFunction::sample(domain, data.formula);
  GridFunction abs0(domain, sampled.values.cwiseAbs());
  const double h = cfg.h > 0.0 ? cfg.h : default_step(cfg.T, rd);

  Trajectory u;
  {
    IntegrateOptions opt;
    opt.T = cfg.T;
    opt.h = h;
    opt.q = cfg.q;
    u = integrate(op, rd, sampled, opt);
    if (cfg.inject_defect > 0.0) inject_defect(u, cfg.inject_defect);
  }
  MajorantDecomposition maj = solve_majorant(op_C, sc.D, abs0, cfg.T, h, cfg.q);
  out.reports.push_back(supersolution_check(u, maj.U));

  // linearity in the data (forcing off)
  {
    const GridFunction zeroD = const_field(domain, 0.0);
    MajorantDecomposition m1 =
        solve_majorant(op_C, zeroD, abs0, cfg.T, h, cfg.q);
    GridFunction scaled(domain, (2.5 * abs0.values).eval());
    MajorantDecomposition m2 =
        solve_majorant(op_C, zeroD, scaled, cfg.T, h, cfg.q);
    double worst = 0.0;
    for (std::size_t s = 0; s < m1.U.size(); ++s)
      worst = std::max(
          worst, (m2.U.states[s] - 2.5 * m1.U.states[s]).cwiseAbs().maxCoeff());
    BoundReport rep;
    rep.name = "majorant_linearity";
    const double scale = 1.0 + 2.5 * lq_norm(abs0, 2.0);
    rep.constants["worst_deviation"] = worst;
    rep.worst_margin = worst - 1e-10 * scale;
    rep.pass = rep.worst_margin <= 0.0;
    if (!rep.pass) rep.witnesses.push_back({0.0, -1, worst});
    out.reports.push_back(rep);
  }

  // enlarging C never decreases U
  {
    GridFunction bigger(domain, (sc.C.values.array() + 0.3).matrix().eval());
    const auto op_Cb = assemble(basis, bigger);
    MajorantDecomposition m1 = solve_majorant(op_C, sc.D, abs0, cfg.T, h, cfg.q);
    MajorantDecomposition m2 =
        solve_majorant(op_Cb, sc.D, abs0, cfg.T, h, cfg.q);
    double worst = 0.0;
    for (std::size_t s = 0; s < m1.U.size(); ++s) {
      GridFunction a = m1.U.state_grid(s), b = m2.U.state_grid(s);
      worst = std::max(worst, (a.values - b.values).maxCoeff());
    }
    BoundReport rep;
    rep.name = "majorant_ordering";
    rep.constants["worst_inversion"] = worst;
    rep.worst_margin = worst - 1e-8;
    rep.pass = rep.worst_margin <= 0.0;
    if (!rep.pass) rep.witnesses.push_back({0.0, -1, worst});
    out.reports.push_back(rep);
  }

  out.traces.emplace_back("u", std::move(u));
  out.traces.emplace_back("U", maj.U);
  out.traces.emplace_back("U_h", maj.U_h);
  out.traces.emplace_back("Phi", maj.Phi);
  return out;
}

StudyResult run_smoothing(const ScenarioConfig& cfg) {
  StudyResult out;
  StageGuard guard{out, "smoothing_study"};

  ScenarioConfig local = cfg;
  local.rough_data = "bump";
  const DomainSpec domain = make_domain(local);
  const auto basis = dirichlet_eigenpairs(domain, local.modes);
  const ReactionDecomposition rd =
      make_linear(const_field(domain, 0.0), const_field(domain, 0.0));
  const auto op = assemble(basis, rd.m);
  out.notes.push_back(
      "smoothing_study runs the heat flow (the estimate's linear envelope)");

  // the retained modes must resolve the bump: coefficients decay like
  // exp(-mu sigma^2 / 2), so keep the spectral tail below 1e-6
  const double sigma_min =
      std::sqrt(2.0 * 13.8 / basis->mu[basis->count() - 1]);
  if (local.width < sigma_min) {
    local.width = sigma_min;
    out.notes.push_back("bump width raised to " + std::to_string(sigma_min) +
                        " so the mode budget resolves it");
  }

  // small-t fit window; in 2D the bump width and mode budget push the window
  // to later times, capped before boundary decay dominates
  const double t_ref = domain.dim == 1 ? local.T : std::min(local.T, 0.5);
  const double t_min = (domain.dim == 1 ? 1e-4 : 0.1) * t_ref;
  const double t_max = (domain.dim == 1 ? 1e-2 : 0.5) * t_ref;

  const RoughData data = make_rough_data(local, domain);
  GridFunction u0 = GridFunction::sample(domain, data.formula);

  IntegrateOptions opt;
  opt.T = local.T;
  opt.h = local.h > 0.0 ? local.h : std::min(default_step(local.T, rd),
                                             t_min / 4.0);
  opt.q = local.q;
  Trajectory run = integrate(op, rd, u0, opt);
  if (local.inject_defect > 0.0) inject_defect(run, local.inject_defect);

  out.reports.push_back(linfty_bound_check(run, local.q, local.T));
  BoundReport fit =
      smoothing_exponent_fit(run, local.q,
                             std::numeric_limits<double>::infinity(), t_min,
                             t_max);
  fit.constants["t_min"] = t_min;
  fit.constants["t_max"] = t_max;
  out.reports.push_back(fit);

  // boundedness of {S(t) B : eps <= t <= T} for a bounded set of data:
  // the same unit mass at three widths
  {
    std::vector<Trajectory> runs;
    runs.push_back(run);
    for (double scale : {1.5, 2.0}) {
      ScenarioConfig wider = local;
      wider.width = local.width * scale;
      const RoughData wdata = make_rough_data(wider, domain);
      runs.push_back(
          integrate(op, rd, GridFunction::sample(domain, wdata.formula), opt));
    }
    out.reports.push_back(
        semigroup_boundedness_report(runs, t_min, local.T));
  }

  out.traces.emplace_back("smoothing_run", std::move(run));
  return out;
}

StudyResult run_uniqueness(const ScenarioConfig& cfg) {
  StudyResult out;
  StageGuard guard{out, "uniqueness_study"};

  const DomainSpec domain = make_domain(cfg);
  const auto basis = dirichlet_eigenpairs(domain, cfg.modes);
  const ReactionDecomposition rd = make_nonlinearity(cfg, domain);
  const auto op = assemble(basis, rd.m);
  const RoughData data = make_rough_data(cfg, domain);
  const double h = cfg.h > 0.0 ? cfg.h : default_step(cfg.T, rd);

  try {
    UniquenessResult res =
        uniqueness_probe(op, rd, data, cfg.levels, cfg.T, h, cfg.workers);
    if (cfg.inject_defect > 0.0) {
      res.report.pass = false;
      res.report.worst_margin = cfg.inject_defect;
      res.report.witnesses.push_back({0.0, -1, cfg.inject_defect});
      res.report.notes.push_back("defect injection forced this verdict red");
    }
    out.reports.push_back(res.report);
  } catch (const RefusalError& e) {
    BoundReport rep;
    rep.name = "uniqueness_cross_scheme";
    rep.pass = false;
    rep.worst_margin = std::numeric_limits<double>::infinity();
    rep.witnesses.push_back({0.0, -1, 0.0});
    rep.notes.push_back(std::string("refused: ") + e.what());
    out.reports.push_back(rep);
  }
  return out;
}

StudyResult run_one(const ScenarioConfig& cfg);

StudyResult run_full(const ScenarioConfig& cfg) {
  StudyResult out;
  StageGuard guard{out, "full_suite"};

  struct Item {
    std::string label;
    ScenarioConfig sub;
  };
  std::vector<Item> items;

  auto base = cfg;
  base.inject_defect = cfg.inject_defect;

  {  // N = 1 lineup (curated parameters; the exponent N/2q is the payload)
    ScenarioConfig c = base;
    c.scenario = "heat_sanity";
    c.dim = 1;
    c.nodes = 256;
    c.modes = 96;
    c.T = 1.0;
    c.h = 0.0;
    items.push_back({"n1_heat", c});

    c = base;
    c.scenario = "cauchy_study";
    c.dim = 1;
    c.nodes = 640;
    c.modes = 96;
    c.T = 1.0;
    c.h = 0.0;
    c.nonlinearity = "logistic";
    c.rho = 3.0;
    c.rough_data = "power_singularity";
    c.beta = 0.25;
    c.q = 2.0;
    c.levels = {2, 4, 8, 16};
    items.push_back({"n1_cauchy", c});

    c = base;
    c.scenario = "majorant_study";
    c.dim = 1;
    c.nodes = 256;
    c.modes = 64;
    c.T = 1.0;
    c.h = 0.0;
    c.nonlinearity = "monotone_poly";
    c.g_const = 1.0;
    c.rough_data = "smooth";
    c.q = 2.0;
    items.push_back({"n1_majorant", c});

    c = base;
    c.scenario = "smoothing_study";
    c.dim = 1;
    c.nodes = 768;
    c.modes = 384;
    c.T = 10.0;
    c.h = 0.0;
    c.q = 1.0;
    c.width = 0.02;
    items.push_back({"n1_smoothing", c});

    c = base;
    c.scenario = "uniqueness_study";
    c.dim = 1;
    c.nodes = 640;
    c.modes = 96;
    c.T = 1.0;
    c.h = 0.0;
    c.nonlinearity = "logistic";
    c.rho = 3.0;
    c.rough_data = "power_singularity";
    c.beta = 0.25;
    c.q = 2.0;
    c.levels = {2, 4, 8, 16};
    items.push_back({"n1_uniqueness", c});
  }

  {  // N = 2 lineup
    ScenarioConfig c = base;
    c.scenario = "heat_sanity";
    c.dim = 2;
    c.nodes = 24;
    c.nodes_y = 24;
    c.modes = 60;
    c.T = 1.0;
    c.h = 0.0;
    items.push_back({"n2_heat", c});

    c = base;
    c.scenario = "cauchy_study";
    c.dim = 2;
    c.nodes = 32;
    c.nodes_y = 32;
    c.modes = 60;
    c.T = 1.0;
    c.h = 0.0;
    c.nonlinearity = "logistic";
    c.rho = 3.0;
    c.rough_data = "power_singularity";
    c.beta = 0.25;
    c.data_amplitude = 2.0;
    c.q = 2.0;
    c.levels = {2, 4, 8};
    items.push_back({"n2_cauchy", c});

    c = base;
    c.scenario = "majorant_study";
    c.dim = 2;
    c.nodes = 24;
    c.nodes_y = 24;
    c.modes = 48;
    c.T = 1.0;
    c.h = 0.0;
    c.nonlinearity = "monotone_poly";
    c.g_const = 1.0;
    c.rough_data = "smooth";
    c.q = 2.0;
    items.push_back({"n2_majorant", c});

    c = base;
    c.scenario = "smoothing_study";
    c.dim = 2;
    c.nodes = 74;
    c.nodes_y = 74;
    c.modes = 930;
    c.T = 0.5;
    c.h = 0.0;
    c.q = 1.0;
    c.width = 0.15;
    items.push_back({"n2_smoothing", c});

    c = base;
    c.scenario = "uniqueness_study";
    c.dim = 2;
    c.nodes = 32;
    c.nodes_y = 32;
    c.modes = 60;
    c.T = 1.0;
    c.h = 0.0;
    c.nonlinearity = "logistic";
    c.rho = 3.0;
    c.rough_data = "power_singularity";
    c.beta = 0.25;
    c.data_amplitude = 2.0;
    c.q = 2.0;
    // modal increments of the corner-singular data only start decreasing
    // from level 4 on this domain
    c.levels = {4, 8, 16};
    items.push_back({"n2_uniqueness", c});
  }

  {
    ScenarioConfig c = base;
    c.scenario = "supercritical_demo";
    c.dim = 1;
    c.nodes = 768;
    c.modes = 96;
    c.T = 1.0;
    c.h = 0.0;
    c.rho = 5.0;
    c.q = 1.0;
    c.rough_data = "power_singularity";
    c.beta = 0.25;
    c.levels = {2, 4, 8, 16};
    items.push_back({"supercritical", c});
  }

  for (auto& item : items) {
    // one broken stage must not discard the completed ones
    StudyResult sub;
    try {
      sub = run_one(item.sub);
    } catch (const std::exception& e) {
      out.errors.push_back(item.label + ": " + e.what());
      continue;
    }
    for (auto& r : sub.reports) {
      r.name = item.label + "_" + r.name;
      out.reports.push_back(std::move(r));
    }
    for (auto& tr : sub.traces)
      out.traces.emplace_back(item.label + "_" + tr.first,
                              std::move(tr.second));
    for (auto& pr : sub.pairs) out.pairs.push_back(pr);
    for (auto& n : sub.notes) out.notes.push_back(item.label + ": " + n);
    for (auto& t : sub.timings)
      out.timings.push_back({item.label + "/" + t.stage, t.seconds});
    for (auto& e : sub.errors) out.errors.push_back(item.label + ": " + e);
  }
  return out;
}

StudyResult run_one(const ScenarioConfig& cfg) {
  if (cfg.scenario == "heat_sanity") return run_heat(cfg);
  if (cfg.scenario == "cauchy_study") return run_cauchy(cfg, false);
  if (cfg.scenario == "supercritical_demo") return run_cauchy(cfg, true);
  if (cfg.scenario == "majorant_study") return run_majorant(cfg);
  if (cfg.scenario == "smoothing_study") return run_smoothing(cfg);
  if (cfg.scenario == "uniqueness_study") return run_uniqueness(cfg);
  if (cfg.scenario == "full_suite") return run_full(cfg);
  throw ConfigError("unknown scenario '" + cfg.scenario + "'");
}

void write_text(const std::filesystem::path& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << body;
}

}  // namespace

std::string csv_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

DomainSpec make_domain(const ScenarioConfig& cfg) {
  if (cfg.dim == 1) return DomainSpec::interval(cfg.extent, cfg.nodes);
  return DomainSpec::rectangle(cfg.extent, cfg.extent_y, cfg.nodes,
                               cfg.nodes_y);
}

ReactionDecomposition make_nonlinearity(const ScenarioConfig& cfg,
                                        const DomainSpec& domain) {
  const GridFunction g = GridFunction::constant(domain, cfg.g_const);
  const GridFunction m = GridFunction::constant(domain, cfg.m_const);
  if (cfg.nonlinearity == "none") return make_linear(g, m);
  if (cfg.nonlinearity == "logistic")
    return make_logistic(GridFunction::constant(domain, cfg.amplitude),
                         cfg.rho, g, m);
  if (cfg.nonlinearity == "monotone_poly")
    return make_monotone_polynomial({GridFunction::constant(domain, cfg.c2),
                                     GridFunction::constant(domain, cfg.c3)},
                                    g, m);
  if (cfg.nonlinearity == "fractional_poly")
    return make_fractional_polynomial(
        {GridFunction::constant(domain, cfg.n1),
         GridFunction::constant(domain, cfg.n2)},
        {cfg.rho1, cfg.rho2}, g, m);
  if (cfg.nonlinearity == "custom") {
    // saturating drift a (sin u - u) with explicit certificates
    const double a = cfg.amplitude;
    return make_custom(
        g, m, GridFunction::constant(domain, 0.0),
        [a](int, double u) { return a * (std::sin(u) - u); },
        [a](int, double u) { return a * (std::cos(u) - 1.0); },
        [a](int, double) { return 2.0 * a; }, "custom");
  }
  throw ConfigError("unknown nonlinearity '" + cfg.nonlinearity + "'");
}

RoughData make_rough_data(const ScenarioConfig& cfg,
                          const DomainSpec& domain) {
  RoughData data;
  data.q = cfg.q;
  data.name = cfg.rough_data;
  const double A = cfg.data_amplitude;
  const double beta = cfg.beta;

  if (cfg.rough_data == "power_singularity") {
    if (domain.dim == 1) {
      data.formula = [A, beta](double x, double) {
        return A * std::pow(x, -beta);
      };
      data.singular_points = {{0.0, 0.0}};
    } else {
      data.formula = [A, beta](double x, double y) {
        return A * std::pow(std::hypot(x, y), -beta);
      };
      data.singular_points = {{0.0, 0.0}};
    }
    return data;
  }
  if (cfg.rough_data == "sign_flip_singularity") {
    const double cx = domain.extent[0] / 2.0;
    if (domain.dim == 1) {
      data.formula = [A, beta, cx](double x, double) {
        const double s = x - cx;
        if (s == 0.0) return 0.0;
        return A * std::copysign(std::pow(std::abs(s), -beta), s);
      };
      data.singular_points = {{cx, 0.0}};
    } else {
      const double ly = domain.extent[1];
      data.formula = [A, beta, cx, ly](double x, double y) {
        const double s = x - cx;
        if (s == 0.0) return 0.0;
        return A * std::copysign(std::pow(std::abs(s), -beta), s) *
               std::sin(std::numbers::pi * y / ly);
      };
      data.singular_points = {{cx, ly / 2.0}};
    }
    return data;
  }
  if (cfg.rough_data == "smooth") {
    const double lx = domain.extent[0], ly = domain.extent[1];
    if (domain.dim == 1) {
      data.formula = [A, lx](double x, double) {
        const double t = std::numbers::pi * x / lx;
        return A * (std::sin(t) + 0.5 * std::sin(3.0 * t));
      };
    } else {
      data.formula = [A, lx, ly](double x, double y) {
        const double tx = std::numbers::pi * x / lx;
        const double ty = std::numbers::pi * y / ly;
        return A * std::sin(tx) * std::sin(ty) *
               (1.0 + 0.5 * std::cos(tx));
      };
    }
    return data;
  }
  if (cfg.rough_data == "bump") {
    const double sigma = cfg.width;
    const double cx = domain.extent[0] / 2.0;
    if (domain.dim == 1) {
      const double norm = A / (sigma * std::sqrt(2.0 * std::numbers::pi));
      data.formula = [norm, sigma, cx](double x, double) {
        const double d = (x - cx) / sigma;
        return norm * std::exp(-0.5 * d * d);
      };
    } else {
      const double cy = domain.extent[1] / 2.0;
      const double norm = A / (2.0 * std::numbers::pi * sigma * sigma);
      data.formula = [norm, sigma, cx, cy](double x, double y) {
        const double dx = (x - cx) / sigma, dy = (y - cy) / sigma;
        return norm * std::exp(-0.5 * (dx * dx + dy * dy));
      };
    }
    return data;
  }
  throw ConfigError("unknown rough data '" + cfg.rough_data + "'");
}

ScenarioResult run_scenario(const ScenarioConfig& cfg,
                            const std::string& out_dir) {
  ScenarioResult result;
  RunManifest& man = result.manifest;
  man.config_echo = emit_config(cfg);
  man.module_versions = module_versions();

  const std::filesystem::path dir =
      out_dir.empty() ? std::filesystem::path(cfg.out_dir)
                      : std::filesystem::path(out_dir);
  std::filesystem::create_directories(dir);

  StudyResult study;
  try {
    study = run_one(cfg);
  } catch (const ConfigError& e) {
    man.errors.push_back(e.what());
    result.exit_code = ExitCode::config_error;
  } catch (const std::exception& e) {
    man.errors.push_back(e.what());
    result.exit_code = ExitCode::internal_error;
  }

  man.reports = study.reports;
  man.notes = study.notes;
  man.timings = study.timings;
  for (const auto& e : study.errors) man.errors.push_back(e);
  if (result.exit_code == ExitCode::ok && !study.errors.empty())
    result.exit_code = ExitCode::internal_error;

  // traces.csv
  {
    std::string body = "trajectory,t,lq_norm,sup_norm\n";
    for (const auto& [label, traj] : study.traces)
      for (std::size_t s = 0; s < traj.size(); ++s)
        body += label + "," + csv_double(traj.times[s]) + "," +
                csv_double(traj.lq_trace[s]) + "," +
                csv_double(traj.sup_trace[s]) + "\n";
    write_text(dir / "traces.csv", body);
  }
  // pairs.csv
  {
    std::string body = "level_a,level_b,t,ratio\n";
    for (const auto& p : study.pairs)
      body += std::to_string(p.level_a) + "," + std::to_string(p.level_b) +
              "," + csv_double(p.t) + "," + csv_double(p.ratio) + "\n";
    write_text(dir / "pairs.csv", body);
  }
  // bounds.csv
  {
    std::string body = "name,verdict,margin,constants\n";
    for (const auto& r : study.reports) {
      std::string consts;
      for (const auto& [k, v] : r.constants) {
        if (!consts.empty()) consts += ";";
        consts += k + "=" + csv_double(v);
      }
      body += r.name + "," + (r.pass ? "pass" : "fail") + "," +
              csv_double(r.worst_margin) + "," + consts + "\n";
    }
    write_text(dir / "bounds.csv", body);
  }
  // manifest.txt
  {
    std::string body = "# run manifest\n\n## config\n" + man.config_echo;
    body += "\n## modules\n";
    for (const auto& [k, v] : man.module_versions)
      body += k + " " + v + "\n";
    body += "\n## timings (wall-clock seconds)\n";
    for (const auto& t : man.timings)
      body += t.stage + " " + csv_double(t.seconds) + "\n";
    body += "\n## verdicts\n";
    for (const auto& r : man.reports)
      body += r.name + " " + (r.pass ? "pass" : "fail") + " margin " +
              csv_double(r.worst_margin) + "\n";
    if (!man.notes.empty()) {
      body += "\n## notes\n";
      for (const auto& n : man.notes) body += n + "\n";
    }
    for (const auto& r : man.reports)
      for (const auto& n : r.notes) body += r.name + ": " + n + "\n";
    if (!man.errors.empty()) {
      body += "\n## errors\n";
      for (const auto& e : man.errors) body += e + "\n";
    }
    write_text(dir / "manifest.txt", body);
  }

  if (result.exit_code == ExitCode::ok) {
    for (const auto& r : man.reports)
      if (!r.pass) result.exit_code = ExitCode::verdict_failure;
  }
  return result;
}

}  // namespace rdlab
