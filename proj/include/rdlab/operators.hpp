#pragma once

#include <memory>

#include "rdlab/basis.hpp"
#include "rdlab/grid.hpp"

namespace rdlab {

enum class Backend { spectral, finite_difference };

// Discretization of Laplace + c(x) I with Dirichlet conditions, factorized
// once (symmetric eigendecomposition) so that semigroup and phi-function
// actions amortize over many time steps. The spectral backend works in the
// retained sine-mode coordinates; the finite-difference backend works
// directly in nodal values and exists as an independent cross-check.
//
// "native" coordinates below mean: modal coefficients (spectral) or nodal
// values (finite difference).
class PerturbedOperator {
 public:
  Backend backend = Backend::spectral;
  DomainSpec domain;
  GridFunction potential;
  BasisPtr basis;  // spectral only

  int state_dim() const { return static_cast<int>(evals_.size()); }
  double spectral_bound() const { return nu_max_; }  // largest eigenvalue of A
  double asymmetry() const { return asymmetry_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  const Eigen::VectorXd& eigenvalues() const { return evals_; }

  Eigen::VectorXd to_native(const GridFunction& f) const;
  GridFunction to_grid(const Eigen::VectorXd& state) const;

  // e^{tA}, phi1(hA) = (e^z-1)/z, phi2(hA) = (e^z-1-z)/z^2, (I-hA)^{-1}
  Eigen::VectorXd apply_expm(double t, const Eigen::VectorXd& s) const;
  Eigen::VectorXd apply_phi1(double h, const Eigen::VectorXd& s) const;
  Eigen::VectorXd apply_phi2(double h, const Eigen::VectorXd& s) const;
  Eigen::VectorXd solve_shifted(double h, const Eigen::VectorXd& rhs) const;

  // diag(fn(evals)) conjugated by the eigenvector frame
  Eigen::VectorXd apply_spectral_fn(const std::function<double(double)>& fn,
                                    const Eigen::VectorXd& s) const;

  friend std::shared_ptr<const PerturbedOperator> assemble(
      const BasisPtr& basis, const GridFunction& c);
  friend std::shared_ptr<const PerturbedOperator> assemble_fd(
      const DomainSpec& domain, const GridFunction& c);

 private:
  bool diagonal_ = false;       // c == 0 spectral fast path: A = -diag(mu)
  Eigen::VectorXd evals_;       // ascending
  Eigen::MatrixXd evecs_;       // empty when diagonal_
  double nu_max_ = 0.0;
  double asymmetry_ = 0.0;
  double factorization_residual_ = 0.0;
  std::vector<std::string> warnings_;

 public:
  double factorization_residual() const { return factorization_residual_; }
};

using OperatorPtr = std::shared_ptr<const PerturbedOperator>;

// Galerkin projection: entry (j,k) = -mu_j delta_jk + <c phi_k, phi_j> under
// quadrature, symmetrized; asymmetry beyond 1e-8 is recorded as a warning.
OperatorPtr assemble(const BasisPtr& basis, const GridFunction& c);
OperatorPtr assemble(const DomainSpec& domain, const GridFunction& c, int K);

// Second-order finite differences on the interior grid (cross-check backend).
OperatorPtr assemble_fd(const DomainSpec& domain, const GridFunction& c);

// Forward-time semigroup action e^{tA} v; t = 0 returns v unchanged,
// t < 0 is a domain error.
GridFunction apply_semigroup(const PerturbedOperator& op, double t,
                             const GridFunction& v);

// phi1(hA) v, the Duhamel quadrature kernel; h > 0.
GridFunction phi1_apply(const PerturbedOperator& op, double h,
                        const GridFunction& v);

struct PrincipalEigenvalue {
  double value;             // first eigenvalue of -Laplace - c(x) I
  double refinement_error;  // |lambda_K - lambda_2K|
};

// lambda = -(largest eigenvalue of A), checked against a 2K-mode refinement;
// disagreement beyond 1e-4 (1+|lambda|) is a resolution error.
PrincipalEigenvalue principal_eigenvalue(const DomainSpec& domain,
                                         const GridFunction& c, int K);

// scalar phi functions with series fallback near the removable singularity
double phi1_scalar(double z);
double phi2_scalar(double z);

}  // namespace rdlab
