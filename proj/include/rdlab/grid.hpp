#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <vector>

#include "rdlab/errors.hpp"

namespace rdlab {

// Rectangle (0,l1) or (0,l1)x(0,l2) sampled at uniformly spaced interior
// nodes. Dirichlet values at the boundary are identically zero and never
// stored; composite trapezoid over the interior nodes is then a plain
// weighted sum with weight dx (dx*dy in 2D).
struct DomainSpec {
  int dim = 1;
  std::array<double, 2> extent{1.0, 1.0};
  std::array<int, 2> nodes{8, 1};

  static DomainSpec interval(double length, int n);
  static DomainSpec rectangle(double lx, double ly, int nx, int ny);

  int node_count() const { return dim == 1 ? nodes[0] : nodes[0] * nodes[1]; }
  double spacing(int axis) const { return extent[axis] / (nodes[axis] + 1); }
  double quad_weight() const {
    return dim == 1 ? spacing(0) : spacing(0) * spacing(1);
  }
  double volume() const { return dim == 1 ? extent[0] : extent[0] * extent[1]; }

  // flat index -> coordinates (y = 0 in 1D); x varies fastest
  std::array<double, 2> coords(int i) const;

  bool operator==(const DomainSpec& o) const {
    return dim == o.dim && extent == o.extent && nodes == o.nodes;
  }
};

// Real field sampled at a domain's interior quadrature nodes.
struct GridFunction {
  DomainSpec domain;
  Eigen::VectorXd values;

  GridFunction() = default;
  GridFunction(const DomainSpec& d, Eigen::VectorXd v);

  static GridFunction constant(const DomainSpec& d, double value);
  static GridFunction sample(const DomainSpec& d,
                             const std::function<double(double, double)>& f);

  int size() const { return static_cast<int>(values.size()); }
  bool all_finite() const { return values.allFinite(); }
};

void require_same_domain(const DomainSpec& a, const DomainSpec& b,
                         const char* what);

// ||f||_{L^q} by composite trapezoid; q = infinity gives max |f| over nodes.
// q < 1 is a domain error.
double lq_norm(const GridFunction& f, double q);

// L^q norm of a pointwise difference without materialising it.
double lq_dist(const GridFunction& a, const GridFunction& b, double q);

// --- refined closed-form quadrature -----------------------------------------
//
// For integrands given as formulas (possibly unbounded near finitely many
// points) the trapezoid grid is the wrong tool; these evaluate integrals on
// panels graded geometrically toward each listed singular point, with
// Gauss-Legendre nodes that never touch the singularity itself.

struct RefinedQuadOptions {
  int base_panels = 256;     // uniform background resolution per axis
  int grading_levels = 96;   // dyadic shells stacked against each singularity
  double grading_width = 0.25;  // fraction of the axis graded per singularity
};

double integrate_interval(const std::function<double(double)>& f, double a,
                          double b, const std::vector<double>& singular,
                          const RefinedQuadOptions& opt = {});

// The graded Gauss rule itself (points strictly inside (a,b)); building block
// for the modal projection of closed-form data.
void refined_axis_rule(double a, double b, const std::vector<double>& singular,
                       const RefinedQuadOptions& opt,
                       std::vector<double>& points,
                       std::vector<double>& weights);

// ( integral |f|^q )^{1/q} over the domain; 2D uses a tensor product of the
// same graded panels. q = infinity scans the graded node set.
double refined_lq_norm(const DomainSpec& domain,
                       const std::function<double(double, double)>& f, double q,
                       const std::vector<std::array<double, 2>>& singular = {},
                       const RefinedQuadOptions& opt = {});

}  // namespace rdlab
