#pragma once

#include "rdlab/integrate.hpp"

namespace rdlab {

// How far a computed trajectory is from satisfying the Duhamel identity
//   u(t) = e^{(t-eps)A} u(eps) + int_eps^t e^{(t-s)A} (g + f0(., u(s))) ds,
// the defining property of the solution. The integral is evaluated by
// composite Gauss quadrature with the trajectory interpolated linearly in
// its native coordinates between stored instants.
struct ResidualTrace {
  std::vector<double> times;       // evaluation instants, all > epsilon
  std::vector<double> residual_q;  // run's declared norm
  std::vector<double> residual_l2;
  double epsilon = 0.0;
  int quad_nodes = 0;

  double max_q() const;
};

// epsilon snaps to the nearest stored instant >= the request; quad_nodes is
// the composite Gauss budget per evaluation (>= 8). At most max_eval
// residual instants are sampled, geometrically spaced over (epsilon, T].
ResidualTrace vcf_residual(const Trajectory& u, const OperatorPtr& op,
                           const ReactionDecomposition& rd, double epsilon,
                           int quad_nodes, int max_eval = 32);

}  // namespace rdlab
