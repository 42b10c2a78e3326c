#include "rdlab/reaction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rdlab {

namespace {

void require_normalized(const ReactionDecomposition& rd) {
  if (rd.f0_zero) return;
  for (int i = 0; i < rd.g.size(); ++i) {
    if (rd.f0(i, 0.0) != 0.0)
      throw Error("reaction: f0(x,0) must vanish (node " + std::to_string(i) +
                  ")");
    if (rd.df0(i, 0.0) != 0.0)
      throw Error("reaction: d_u f0(x,0) must vanish (node " +
                  std::to_string(i) + ")");
  }
}

void require_majorant_nonnegative(const GridFunction& L) {
  for (int i = 0; i < L.size(); ++i)
    if (L.values[i] < 0.0)
      throw Error("reaction: almost-monotonicity majorant L must be >= 0 "
                  "(node " +
                  std::to_string(i) + ")");
}

// |u|^{rho-1} u and its derivative rho |u|^{rho-1}; both continuous at 0
// for rho > 1, no smoothing needed.
double signed_power(double u, double rho) {
  if (u == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(u), rho), u);
}
double signed_power_deriv(double u, double rho) {
  if (u == 0.0) return 0.0;
  return rho * std::pow(std::abs(u), rho - 1.0);
}

}  // namespace

double maximize_on_bracket(const std::function<double(double)>& fn, double lo,
                           double hi) {
  constexpr int kScan = 4096;
  double best = -std::numeric_limits<double>::infinity();
  int best_i = 0;
  for (int i = 0; i <= kScan; ++i) {
    const double u = lo + (hi - lo) * i / kScan;
    const double v = fn(u);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  // golden-section refinement of the bracketing cell
  double a = lo + (hi - lo) * std::max(0, best_i - 1) / kScan;
  double b = lo + (hi - lo) * std::min(kScan, best_i + 1) / kScan;
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
  double f1 = fn(x1), f2 = fn(x2);
  for (int it = 0; it < 80 && (b - a) > 1e-14 * (1.0 + std::abs(a)); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = fn(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = fn(x1);
    }
  }
  return std::max({best, f1, f2});
}

ReactionDecomposition make_linear(const GridFunction& g,
                                  const GridFunction& m) {
  require_same_domain(g.domain, m.domain, "make_linear");
  ReactionDecomposition rd;
  rd.g = g;
  rd.m = m;
  rd.L = GridFunction::constant(g.domain, 0.0);
  rd.f0 = [](int, double) { return 0.0; };
  rd.df0 = [](int, double) { return 0.0; };
  rd.lipschitz = [](int, double) { return 0.0; };
  rd.f0_zero = true;
  rd.name = "linear";
  return rd;
}

ReactionDecomposition make_logistic(const GridFunction& n, double rho,
                                    GridFunction g, GridFunction m) {
  require_same_domain(n.domain, g.domain, "make_logistic");
  require_same_domain(n.domain, m.domain, "make_logistic");
  if (!(rho > 1.0)) throw Error("logistic: rho must exceed 1");
  bool any_positive = false;
  for (int i = 0; i < n.size(); ++i) {
    if (n.values[i] < 0.0)
      throw Error("logistic: coefficient n has a negative node (node " +
                  std::to_string(i) + ")");
    any_positive |= n.values[i] > 0.0;
  }
  if (!any_positive)
    throw Error("logistic: coefficient n is identically zero");

  ReactionDecomposition rd;
  rd.g = std::move(g);
  rd.m = std::move(m);
  rd.L = GridFunction::constant(n.domain, 0.0);
  Eigen::VectorXd nv = n.values;
  rd.f0 = [nv, rho](int i, double u) { return -nv[i] * signed_power(u, rho); };
  rd.df0 = [nv, rho](int i, double u) {
    return -nv[i] * signed_power_deriv(u, rho);
  };
  rd.lipschitz = [nv, rho](int i, double R) {
    return rho * std::pow(R, rho - 1.0) * nv[i];
  };
  rd.name = "logistic";
  rd.metadata["rho"] = std::to_string(rho);
  require_normalized(rd);
  return rd;
}

ReactionDecomposition make_monotone_polynomial(
    const std::vector<GridFunction>& coeff, GridFunction g, GridFunction m) {
  if (coeff.empty()) throw Error("monotone polynomial: no coefficients");
  const int k = static_cast<int>(coeff.size()) + 1;  // powers j = 2..k
  if (k % 2 == 0)
    throw Error("monotone polynomial: leading power k = " + std::to_string(k) +
                " must be odd");
  const DomainSpec& d = coeff.front().domain;
  for (const auto& c : coeff)
    require_same_domain(c.domain, d, "make_monotone_polynomial");
  require_same_domain(g.domain, d, "make_monotone_polynomial");
  require_same_domain(m.domain, d, "make_monotone_polynomial");
  const GridFunction& lead = coeff.back();
  for (int i = 0; i < lead.size(); ++i)
    if (!(lead.values[i] < 0.0))
      throw Error("monotone polynomial: leading coefficient n_" +
                  std::to_string(k) + " must be strictly negative (node " +
                  std::to_string(i) + ")");

  const int n_nodes = d.node_count();
  std::vector<Eigen::VectorXd> nj;
  for (const auto& c : coeff) nj.push_back(c.values);

  // L(x) = k [max_u sum_j n_j(x) u^{j-1}]^+ on the bracket [-B, B],
  // B = 1 + sum |n_j| / |n_k| (the leading even power dominates outside).
  Eigen::VectorXd Lv(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    double bound = 1.0;
    for (const auto& c : nj) bound += std::abs(c[i]) / std::abs(nj.back()[i]);
    const auto poly = [&](double u) {
      double acc = 0.0;
      for (int j = 2; j <= k; ++j)
        acc += nj[j - 2][i] * std::pow(u, j - 1);
      return acc;
    };
    Lv[i] = k * std::max(0.0, maximize_on_bracket(poly, -bound, bound));
  }

  ReactionDecomposition rd;
  rd.g = std::move(g);
  rd.m = std::move(m);
  rd.L = GridFunction(d, std::move(Lv));
  rd.f0 = [nj, k](int i, double u) {
    double acc = 0.0;
    for (int j = 2; j <= k; ++j) acc += nj[j - 2][i] * std::pow(u, j);
    return acc;
  };
  rd.df0 = [nj, k](int i, double u) {
    double acc = 0.0;
    for (int j = 2; j <= k; ++j) acc += j * nj[j - 2][i] * std::pow(u, j - 1);
    return acc;
  };
  // |u^j - v^j| <= j R^{j-1} |u - v| on [-R, R]
  rd.lipschitz = [nj, k](int i, double R) {
    double acc = 0.0;
    for (int j = 2; j <= k; ++j)
      acc += j * std::pow(R, j - 1) * std::abs(nj[j - 2][i]);
    return acc;
  };
  rd.name = "monotone_poly";
  rd.metadata["k"] = std::to_string(k);
  require_normalized(rd);
  require_majorant_nonnegative(rd.L);
  return rd;
}

ReactionDecomposition make_fractional_polynomial(
    const std::vector<GridFunction>& coeff, const std::vector<double>& rho,
    GridFunction g, GridFunction m) {
  if (coeff.empty() || coeff.size() != rho.size())
    throw Error("fractional polynomial: coefficient/exponent count mismatch");
  for (std::size_t j = 0; j < rho.size(); ++j) {
    if (!(rho[j] > 1.0))
      throw Error("fractional polynomial: exponents must exceed 1");
    if (j > 0 && !(rho[j] > rho[j - 1]))
      throw Error("fractional polynomial: exponents must be increasing");
  }
  const DomainSpec& d = coeff.front().domain;
  for (const auto& c : coeff)
    require_same_domain(c.domain, d, "make_fractional_polynomial");
  require_same_domain(g.domain, d, "make_fractional_polynomial");
  require_same_domain(m.domain, d, "make_fractional_polynomial");
  const GridFunction& lead = coeff.back();
  for (int i = 0; i < lead.size(); ++i)
    if (!(lead.values[i] < 0.0))
      throw Error(
          "fractional polynomial: leading coefficient must be strictly "
          "negative (node " +
          std::to_string(i) + ")");

  const int n_nodes = d.node_count();
  std::vector<Eigen::VectorXd> nj;
  for (const auto& c : coeff) nj.push_back(c.values);
  const double rho_top = rho.back();

  // literal analogue of the monotone recipe: structural factor rho_k times
  // the positive part of max_u sum_j n_j(x) |u|^{rho_j - 1}
  Eigen::VectorXd Lv(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    double bound = 1.0;
    for (const auto& c : nj) bound += std::abs(c[i]) / std::abs(nj.back()[i]);
    const auto sum_abs_pow = [&](double u) {
      double acc = 0.0;
      for (std::size_t j = 0; j < rho.size(); ++j)
        acc += nj[j][i] * std::pow(std::abs(u), rho[j] - 1.0);
      return acc;
    };
    Lv[i] =
        rho_top * std::max(0.0, maximize_on_bracket(sum_abs_pow, -bound, bound));
  }

  ReactionDecomposition rd;
  rd.g = std::move(g);
  rd.m = std::move(m);
  rd.L = GridFunction(d, std::move(Lv));
  std::vector<double> rho_copy = rho;
  rd.f0 = [nj, rho_copy](int i, double u) {
    double acc = 0.0;
    for (std::size_t j = 0; j < rho_copy.size(); ++j)
      acc += nj[j][i] * signed_power(u, rho_copy[j]);
    return acc;
  };
  rd.df0 = [nj, rho_copy](int i, double u) {
    double acc = 0.0;
    for (std::size_t j = 0; j < rho_copy.size(); ++j)
      acc += nj[j][i] * signed_power_deriv(u, rho_copy[j]);
    return acc;
  };
  rd.lipschitz = [nj, rho_copy](int i, double R) {
    double acc = 0.0;
    for (std::size_t j = 0; j < rho_copy.size(); ++j)
      acc += rho_copy[j] * std::pow(R, rho_copy[j] - 1.0) * std::abs(nj[j][i]);
    return acc;
  };
  rd.name = "fractional_poly";
  rd.metadata["L_rule"] = "rho_k_max_rule";
  require_normalized(rd);
  require_majorant_nonnegative(rd.L);
  return rd;
}

ReactionDecomposition make_custom(GridFunction g, GridFunction m,
                                  GridFunction L,
                                  std::function<double(int, double)> f0,
                                  std::function<double(int, double)> df0,
                                  std::function<double(int, double)> lipschitz,
                                  std::string name) {
  require_same_domain(g.domain, m.domain, "make_custom");
  require_same_domain(g.domain, L.domain, "make_custom");
  ReactionDecomposition rd;
  rd.g = std::move(g);
  rd.m = std::move(m);
  rd.L = std::move(L);
  rd.f0 = std::move(f0);
  rd.df0 = std::move(df0);
  rd.lipschitz = std::move(lipschitz);
  rd.name = std::move(name);
  require_normalized(rd);
  require_majorant_nonnegative(rd.L);
  return rd;
}

BoundReport admissibility_check(const ReactionDecomposition& rd, double u_max,
                                int samples) {
  if (!(u_max > 0.0)) throw Error("admissibility: U_max must be positive");
  if (samples < 100) throw Error("admissibility: at least 100 u-samples");

  BoundReport rep;
  rep.name = "almost_monotonicity";
  double worst = -std::numeric_limits<double>::infinity();
  Witness witness;
  const int n = rd.g.size();
  for (int i = 0; i < n; ++i) {
    const double Li = rd.L.values[i];
    for (int s = 0; s <= samples; ++s) {
      const double u = -u_max + 2.0 * u_max * s / samples;
      const double margin = (rd.f0_zero ? 0.0 : rd.df0(i, u)) - Li;
      if (margin > worst) {
        worst = margin;
        witness = {0.0, i, u};
      }
    }
  }
  rep.worst_margin = worst;
  rep.pass = worst <= 1e-12;
  if (!rep.pass) rep.witnesses.push_back(witness);
  rep.constants["u_max"] = u_max;
  return rep;
}

SignConditionFields sign_condition_fields(const ReactionDecomposition& rd) {
  SignConditionFields out;
  out.C = GridFunction(rd.m.domain, rd.m.values + rd.L.values);
  out.D = GridFunction(rd.g.domain, rd.g.values.cwiseAbs());

  // spot check u f(x,u) <= C u^2 + D |u| on a deterministic sample grid
  const int n = rd.g.size();
  const int node_stride = std::max(1, n / 256);
  for (int i = 0; i < n; i += node_stride) {
    for (int s = 0; s <= 160; ++s) {
      const double u = -8.0 + 16.0 * s / 160.0;
      const double lhs = u * rd.full_f(i, u);
      const double rhs = out.C.values[i] * u * u +
                         out.D.values[i] * std::abs(u);
      if (lhs > rhs + 1e-9 * (1.0 + std::abs(rhs)))
        throw Error(
            "sign condition: u f(x,u) <= C u^2 + D|u| violated at node " +
            std::to_string(i) + ", u = " + std::to_string(u) +
            " (broken custom f0?)");
    }
  }
  return out;
}

}  // namespace rdlab
