#pragma once

#include <functional>
#include <map>
#include <string>

#include "rdlab/grid.hpp"
#include "rdlab/report.hpp"

namespace rdlab {

// Structural data of the reaction term f(x,u) = g(x) + m(x) u + f0(x,u)
// together with its certificates: the almost-monotonicity majorant L
// (d_u f0 <= L nodewise for all u) and the local Lipschitz majorant L0.
// f0 and its u-derivative are evaluated per node index.
struct ReactionDecomposition {
  GridFunction g;
  GridFunction m;
  GridFunction L;
  std::function<double(int, double)> f0;
  std::function<double(int, double)> df0;
  std::function<double(int, double)> lipschitz;  // L0(node, R)
  bool f0_zero = false;  // lets linear flows skip the nonlinear stage
  std::string name = "custom";
  std::map<std::string, std::string> metadata;  // exponent bookkeeping only

  double full_f(int node, double u) const {
    return g.values[node] + m.values[node] * u + (f0_zero ? 0.0 : f0(node, u));
  }
};

struct SignConditionFields {
  GridFunction C;  // m + L
  GridFunction D;  // |g|
};

// f0 == 0: the purely linear problem u_t = Laplace u + m u + g.
ReactionDecomposition make_linear(const GridFunction& g, const GridFunction& m);

// f0 = -n(x) |u|^{rho-1} u, n >= 0 not identically zero, rho > 1. L == 0.
ReactionDecomposition make_logistic(const GridFunction& n, double rho,
                                    GridFunction g, GridFunction m);

// f0 = sum_{j=2}^{k} n_j(x) u^j with k odd and n_k < 0 nodewise.
// L(x) = k * [max_u sum n_j(x) u^{j-1}]^+ by bracketed maximization.
// coeff[j-2] is the field n_j, so coeff.size() + 1 = k.
ReactionDecomposition make_monotone_polynomial(
    const std::vector<GridFunction>& coeff, GridFunction g, GridFunction m);

// f0 = sum_j n_j(x) |u|^{rho_j - 1} u with 1 < rho_1 < ... < rho_k and
// n_k < 0 nodewise; L mirrors the monotone recipe with factor rho_k.
ReactionDecomposition make_fractional_polynomial(
    const std::vector<GridFunction>& coeff, const std::vector<double>& rho,
    GridFunction g, GridFunction m);

// User-supplied f0/df0/L/L0 are verified (normalisation at u = 0, L >= 0),
// never inferred.
ReactionDecomposition make_custom(GridFunction g, GridFunction m,
                                  GridFunction L,
                                  std::function<double(int, double)> f0,
                                  std::function<double(int, double)> df0,
                                  std::function<double(int, double)> lipschitz,
                                  std::string name = "custom");

// Evaluates d_u f0(x,u) - L(x) over nodes x sample points in [-U_max, U_max].
// A violation is a verdict, not an exception.
BoundReport admissibility_check(const ReactionDecomposition& rd, double u_max,
                                int samples);

// C = m + L and D = |g|, with a spot check of u f(x,u) <= C u^2 + D |u| on a
// deterministic sample grid. A spot-check violation indicates a broken custom
// f0 and throws.
SignConditionFields sign_condition_fields(const ReactionDecomposition& rd);

// max of fn over [lo, hi]: coarse scan plus golden-section refinement of the
// best cell (no unimodality assumed).
double maximize_on_bracket(const std::function<double(double)>& fn, double lo,
                           double hi);

}  // namespace rdlab
