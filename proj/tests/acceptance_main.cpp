// Acceptance suite: one line per criterion, exit nonzero on any failure.
// Each criterion pins its tolerance in code; wall-clock budgets are asserted
// with the same numbers the study plan commits to.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "rdlab/duhamel.hpp"
#include "rdlab/scenario.hpp"

using namespace rdlab;
namespace fs = std::filesystem;
constexpr double pi = std::numbers::pi;

namespace {

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<bool(std::string&)> body;
};

GridFunction zero(const DomainSpec& d) { return GridFunction::constant(d, 0.0); }

GridFunction first_mode(const DomainSpec& d) {
  return GridFunction::sample(d, [](double x, double) { return std::sin(x); });
}

RoughData quarter_power(double q) {
  RoughData u0;
  u0.formula = [](double x, double) { return std::pow(x, -0.25); };
  u0.q = q;
  u0.singular_points = {{0.0, 0.0}};
  u0.name = "power_singularity";
  return u0;
}

// family study shared by criteria 3, 4, 7 and reused at rho = 5 for 8
struct FamilyStudy {
  DomainSpec domain;
  BasisPtr basis;
  ReactionDecomposition rd;
  OperatorPtr op;
  ApproximationFamily family;
  CauchyReport cauchy;
  double lambda = 0.0;
  double h = 0.005;
};

FamilyStudy build_family(double rho, double q, int nodes) {
  FamilyStudy fs;
  fs.domain = DomainSpec::interval(pi, nodes);
  fs.basis = dirichlet_eigenpairs(fs.domain, 96);
  fs.rd = make_logistic(GridFunction::constant(fs.domain, 1.0), rho,
                        zero(fs.domain), zero(fs.domain));
  fs.op = assemble(fs.basis, fs.rd.m);
  const GridFunction mL(fs.domain,
                        (fs.rd.m.values + fs.rd.L.values).eval());
  fs.lambda = principal_eigenvalue(fs.domain, mL, 96).value;
  fs.family = run_family(fs.op, fs.rd, quarter_power(q), {2, 4, 8, 16}, 1.0,
                         fs.h, MollifyScheme::amplitude_truncation, 2);
  fs.cauchy = cauchy_report(fs.family, q, fs.lambda);
  return fs;
}

bool check_cauchy(const FamilyStudy& fs, std::string& detail) {
  std::ostringstream os;
  const double c = fs.cauchy.report.constants.at("c");
  const double uni = fs.cauchy.report.constants.at("uniformity");
  os << "c=" << c << " max/median=" << uni;
  detail += os.str();
  if (!fs.cauchy.report.pass) return false;
  if (uni > 1.1) return false;
  // strictly decreasing consecutive pairwise sups
  std::vector<double> sups;
  for (const auto& p : fs.cauchy.pairs)
    if (!p.skipped && p.level_b == 2 * p.level_a) sups.push_back(p.sup_dist);
  if (sups.size() != 3) return false;
  for (std::size_t i = 0; i + 1 < sups.size(); ++i)
    if (!(sups[i + 1] < sups[i])) return false;
  return true;
}

bool check_supersolution(const FamilyStudy& fs, std::string& detail) {
  const SignConditionFields sc = sign_condition_fields(fs.rd);
  const auto op_C = assemble(fs.basis, sc.C);
  double worst = -1e300;
  for (std::size_t i = 0; i < fs.family.levels.size(); ++i) {
    GridFunction abs0(fs.domain,
                      fs.family.initial_fields[i].values.cwiseAbs());
    auto maj = solve_majorant_native(op_C, sc.D, op_C->to_native(abs0), 1.0,
                                     fs.h, fs.family.q);
    auto rep = supersolution_check(fs.family.trajectories[i], maj.U);
    worst = std::max(worst, rep.worst_margin);
    if (!rep.pass || !rep.witnesses.empty()) {
      detail += "level " + std::to_string(fs.family.levels[i]) + " violated";
      return false;
    }
  }
  std::ostringstream os;
  os << "worst margin " << worst;
  detail += os.str();
  return true;
}

bool check_vcf(const FamilyStudy& fs, std::string& detail) {
  auto limit = extract_limit(fs.family, fs.cauchy);
  const double eps = 8.0 * fs.h;
  auto r0 = vcf_residual(limit.limit, fs.op, fs.rd, eps, 32);

  Eigen::VectorXd top = initial_modes(quarter_power(fs.family.q), 16,
                                      MollifyScheme::amplitude_truncation,
                                      *fs.basis);
  IntegrateOptions half;
  half.T = 1.0;
  half.h = fs.h / 2.0;
  half.q = fs.family.q;
  auto fine = integrate(fs.op, fs.rd, top, half);
  auto r1 = vcf_residual(fine, fs.op, fs.rd, eps, 32);
  const double order = std::log2(r0.max_q() / r1.max_q());

  // detector: +1e-2 phi_1 defect at one instant must fire
  auto pert = fine;
  const std::size_t mid = pert.size() / 2;
  pert.states[mid][0] += 0.01;
  auto dirty = vcf_residual(pert, fs.op, fs.rd, eps, 32, 4096);
  double spike = 0.0;
  for (std::size_t i = 0; i < dirty.times.size(); ++i)
    if (std::abs(dirty.times[i] - pert.times[mid]) < 1e-12)
      spike = dirty.residual_q[i];

  std::ostringstream os;
  os << "order=" << order << " spike=" << spike;
  detail += os.str();
  return order >= 0.8 && spike >= 0.009;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) return "";
  return std::string((std::istreambuf_iterator<char>(f)),
                     std::istreambuf_iterator<char>());
}

}  // namespace

int main() {
  std::vector<Criterion> criteria;

  criteria.push_back({1, "heat sanity (spectral 1e-8, finite-difference 1e-4)",
                      1.0, [](std::string& detail) {
    auto d = DomainSpec::interval(pi, 256);
    auto rd = make_linear(zero(d), zero(d));
    auto op = assemble(d, rd.m, 96);
    IntegrateOptions opt;
    opt.T = 1.0;
    opt.h = 0.005;
    auto run = integrate(op, rd, first_mode(d), opt);
    GridFunction expect(d, (std::exp(-1.0) * first_mode(d).values).eval());
    const double rel_sp =
        lq_dist(run.state_grid(run.size() - 1), expect, 2.0) /
        lq_norm(expect, 2.0);

    auto dfd = DomainSpec::interval(pi, 128);
    auto rdf = make_linear(zero(dfd), zero(dfd));
    auto fd = assemble_fd(dfd, rdf.m);
    auto run_fd = integrate(fd, rdf, first_mode(dfd), opt);
    GridFunction expect_fd(dfd,
                           (std::exp(-1.0) * first_mode(dfd).values).eval());
    const double rel_fd =
        lq_dist(run_fd.state_grid(run_fd.size() - 1), expect_fd, 2.0) /
        lq_norm(expect_fd, 2.0);

    std::ostringstream os;
    os << "spectral=" << rel_sp << " fd=" << rel_fd;
    detail = os.str();
    return rel_sp <= 1e-8 && rel_fd <= 1e-4;
  }});

  criteria.push_back({2, "principal eigenvalue (exact shifts, K-refinement)",
                      1.0, [](std::string& detail) {
    auto d = DomainSpec::interval(pi, 512);
    auto p0 = principal_eigenvalue(d, GridFunction::constant(d, 0.0), 64);
    auto p2 = principal_eigenvalue(d, GridFunction::constant(d, 2.0), 64);
    GridFunction cs =
        GridFunction::sample(d, [](double x, double) { return std::sin(x); });
    auto ps64 = principal_eigenvalue(d, cs, 64);
    auto ps128 = principal_eigenvalue(d, cs, 128);
    std::ostringstream os;
    os << "l0=" << p0.value << " l2=" << p2.value
       << " dsin=" << std::abs(ps64.value - ps128.value);
    detail = os.str();
    return std::abs(p0.value - 1.0) <= 1e-10 &&
           std::abs(p2.value + 1.0) <= 1e-10 &&
           std::abs(ps64.value - ps128.value) <= 1e-6;
  }});

  // shared studies for criteria 3, 4, 7
  FamilyStudy study_q1, study_q2;

  criteria.push_back({3, "Cauchy contraction, q in {1,2}", 30.0,
                      [&](std::string& detail) {
    study_q1 = build_family(3.0, 1.0, 640);
    study_q2 = build_family(3.0, 2.0, 640);
    std::string d1, d2;
    const bool ok1 = check_cauchy(study_q1, d1);
    const bool ok2 = check_cauchy(study_q2, d2);
    detail = "q=1: " + d1 + " | q=2: " + d2;
    return ok1 && ok2;
  }});

  criteria.push_back({4, "supersolution sandwich at every level", 30.0,
                      [&](std::string& detail) {
    std::string d1, d2;
    const bool ok1 = check_supersolution(study_q1, d1);
    const bool ok2 = check_supersolution(study_q2, d2);
    detail = "q=1: " + d1 + " | q=2: " + d2;
    return ok1 && ok2;
  }});

  criteria.push_back({5, "smoothing exponent N/(2q) with dimension "
                         "discrimination", 60.0, [](std::string& detail) {
    // N = 1
    auto d1 = DomainSpec::interval(pi, 768);
    auto b1 = dirichlet_eigenpairs(d1, 384);
    auto rd1 = make_linear(zero(d1), zero(d1));
    auto op1 = assemble(b1, rd1.m);
    GridFunction u1 = GridFunction::sample(d1, [](double x, double) {
      const double s = 0.02, z = (x - pi / 2) / s;
      return std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * pi));
    });
    IntegrateOptions o1;
    o1.T = 10.0;
    o1.h = 2.5e-4;
    o1.q = 1.0;
    auto run1 = integrate(op1, rd1, u1, o1);
    auto fit1 = smoothing_exponent_fit(
        run1, 1.0, std::numeric_limits<double>::infinity(), 1e-3, 1e-1);
    const double s1 = fit1.constants.at("slope");

    // N = 2
    auto d2 = DomainSpec::rectangle(pi, pi, 74, 74);
    auto b2 = dirichlet_eigenpairs(d2, 930);
    auto rd2 = make_linear(zero(d2), zero(d2));
    auto op2 = assemble(b2, rd2.m);
    GridFunction u2 = GridFunction::sample(d2, [](double x, double y) {
      const double s = 0.15;
      const double zx = (x - pi / 2) / s, zy = (y - pi / 2) / s;
      return std::exp(-0.5 * (zx * zx + zy * zy)) / (2.0 * pi * s * s);
    });
    IntegrateOptions o2;
    o2.T = 0.5;
    o2.h = 2.5e-3;
    o2.q = 1.0;
    auto run2 = integrate(op2, rd2, u2, o2);
    auto fit2 = smoothing_exponent_fit(
        run2, 1.0, std::numeric_limits<double>::infinity(), 0.05, 0.25);
    const double s2 = fit2.constants.at("slope");

    std::ostringstream os;
    os << "slope1=" << s1 << " slope2=" << s2 << " sep=" << (s1 - s2);
    detail = os.str();
    const bool in1 = s1 >= -0.5 - 0.15 && s1 <= 0.0;
    const bool in2 = s2 >= -1.0 - 0.15 && s2 <= 0.0;
    return in1 && in2 && (s1 - s2 >= 0.3);
  }});

  criteria.push_back({6, "uniqueness across mollification schemes", 30.0,
                      [](std::string& detail) {
    auto d = DomainSpec::interval(pi, 640);
    auto basis = dirichlet_eigenpairs(d, 96);
    auto rd = make_logistic(GridFunction::constant(d, 1.0), 3.0, zero(d),
                            zero(d));
    auto op = assemble(basis, rd.m);
    auto res =
        uniqueness_probe(op, rd, quarter_power(2.0), {2, 4, 8, 16}, 1.0,
                         0.005, 2);
    std::ostringstream os;
    os << "gap=" << res.gap
       << " budget=" << res.report.constants.at("budget");
    detail = os.str();
    return res.report.pass;
  }});

  criteria.push_back({7, "variation-of-constants residual and detector",
                      20.0, [&](std::string& detail) {
    return check_vcf(study_q2, detail);
  }});

  criteria.push_back({8, "supercritical demo rho=5 > p_c=3 (q=1, N=1)", 30.0,
                      [](std::string& detail) {
    FamilyStudy super = build_family(5.0, 1.0, 768);
    const double p_c = 1.0 + 2.0 * 1.0 / 1.0;
    if (!(5.0 > p_c)) return false;
    std::string dc, ds, dv;
    const bool okc = check_cauchy(super, dc);
    const bool oks = check_supersolution(super, ds);
    const bool okv = check_vcf(super, dv);
    detail = dc + " | " + ds + " | " + dv;
    return okc && oks && okv;
  }});

  criteria.push_back({9, "integrator orders 1 and 2 against the implicit "
                         "reference", 20.0, [](std::string& detail) {
    auto d = DomainSpec::interval(pi, 256);
    auto basis = dirichlet_eigenpairs(d, 64);
    auto rd = make_logistic(GridFunction::constant(d, 1.0), 3.0, zero(d),
                            GridFunction::constant(d, 3.0));
    auto op = assemble(basis, rd.m);
    Eigen::VectorXd u0 = op->to_native(first_mode(d));

    // Richardson-extrapolated backward Euler as the order oracle
    IntegrateOptions r1, r2;
    r1.T = r2.T = 1.0;
    r1.h = 2.5e-4;
    r2.h = 1.25e-4;
    auto ref1 = reference_solve(op, rd, u0, r1);
    auto ref2 = reference_solve(op, rd, u0, r2);
    Eigen::VectorXd ref = 2.0 * ref2.states.back() - ref1.states.back();

    std::ostringstream os;
    bool ok = true;
    for (auto [scheme, target] :
         {std::pair{Scheme::exp_euler, 1.0}, {Scheme::exp_rk2, 2.0}}) {
      std::vector<double> errs;
      for (double h : {0.02, 0.01, 0.005}) {
        IntegrateOptions o;
        o.T = 1.0;
        o.h = h;
        o.scheme = scheme;
        auto run = integrate(op, rd, u0, o);
        errs.push_back((run.states.back() - ref).norm());
      }
      const double o1 = std::log2(errs[0] / errs[1]);
      const double o2 = std::log2(errs[1] / errs[2]);
      os << (scheme == Scheme::exp_euler ? "euler " : " rk2 ") << o1 << ","
         << o2;
      ok = ok && std::abs(o1 - target) <= 0.3 && std::abs(o2 - target) <= 0.3;
    }
    detail = os.str();
    return ok;
  }});

  criteria.push_back({10, "determinism and exit codes", 5.0,
                      [](std::string& detail) {
    const fs::path dir =
        fs::temp_directory_path() / "rdlab_acceptance_cli";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
      std::ofstream f(dir / "ok.cfg");
      f << "[scenario]\nname = heat_sanity\n[domain]\ndim = 1\nnodes = 256\n"
           "[numerics]\nmodes = 64\n";
    }
    {
      std::ofstream f(dir / "red.cfg");
      f << "[scenario]\nname = heat_sanity\n[domain]\ndim = 1\nnodes = 256\n"
           "[numerics]\nmodes = 64\n[debug]\ninject_defect = 0.01\n";
    }
    {
      std::ofstream f(dir / "bad.cfg");
      f << "[scenario]\nname = heat_sanity\n[rough_data]\nq = 0.5\n";
    }
    auto cli = [&](const std::string& args) {
      const std::string cmd =
          std::string(RDLAB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
      return WEXITSTATUS(std::system(cmd.c_str()));
    };
    const int e1 = cli("run " + (dir / "ok.cfg").string() + " --out " +
                       (dir / "a").string());
    const int e2 = cli("run " + (dir / "ok.cfg").string() + " --out " +
                       (dir / "b").string());
    const bool identical =
        slurp(dir / "a" / "traces.csv") == slurp(dir / "b" / "traces.csv") &&
        slurp(dir / "a" / "bounds.csv") == slurp(dir / "b" / "bounds.csv") &&
        slurp(dir / "a" / "pairs.csv") == slurp(dir / "b" / "pairs.csv") &&
        !slurp(dir / "a" / "traces.csv").empty();
    const int red = cli("run " + (dir / "red.cfg").string() + " --out " +
                        (dir / "c").string());
    const int bad = cli("run " + (dir / "bad.cfg").string() + " --out " +
                        (dir / "d").string());
    std::ostringstream os;
    os << "run=" << e1 << "," << e2 << " identical=" << identical
       << " red=" << red << " malformed=" << bad;
    detail = os.str();
    return e1 == 0 && e2 == 0 && identical && red == 1 && bad == 2;
  }});

  int failures = 0;
  for (auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.body(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
      ok = false;
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    const bool in_budget = secs < c.budget_seconds;
    if (!ok || !in_budget) ++failures;
    std::printf("[%s] criterion %2d: %s (%s) [%.2fs/%.0fs]\n",
                ok && in_budget ? "PASS" : "FAIL", c.id, c.name.c_str(),
                detail.c_str(), secs, c.budget_seconds);
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
