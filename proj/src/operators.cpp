#include "rdlab/operators.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace rdlab {

double phi1_scalar(double z) {
  if (std::abs(z) < 1e-5)
    return 1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0;
  return std::expm1(z) / z;
}

double phi2_scalar(double z) {
  if (std::abs(z) < 1e-4)
    return 0.5 + z / 6.0 + z * z / 24.0 + z * z * z / 120.0;
  return (std::expm1(z) - z) / (z * z);
}

Eigen::VectorXd PerturbedOperator::to_native(const GridFunction& f) const {
  require_same_domain(f.domain, domain, "operator state");
  if (backend == Backend::finite_difference) return f.values;
  return to_modes(f, *basis);
}

GridFunction PerturbedOperator::to_grid(const Eigen::VectorXd& state) const {
  if (backend == Backend::finite_difference) return GridFunction(domain, state);
  return synthesize(state, *basis);
}

Eigen::VectorXd PerturbedOperator::apply_spectral_fn(
    const std::function<double(double)>& fn, const Eigen::VectorXd& s) const {
  if (s.size() != state_dim())
    throw MismatchError("operator action: state dimension mismatch");
  if (diagonal_) {
    // native coordinate i is mode i; its eigenvalue sits mirrored in the
    // ascending list
    const int n = static_cast<int>(s.size());
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i) out[i] = fn(evals_[n - 1 - i]) * s[i];
    return out;
  }
  Eigen::VectorXd tmp = evecs_.transpose() * s;
  for (int i = 0; i < tmp.size(); ++i) tmp[i] *= fn(evals_[i]);
  return evecs_ * tmp;
}

Eigen::VectorXd PerturbedOperator::apply_expm(double t,
                                              const Eigen::VectorXd& s) const {
  if (t < 0.0) throw Error("semigroup: forward time only (t >= 0)");
  if (t == 0.0) return s;
  return apply_spectral_fn([t](double nu) { return std::exp(t * nu); }, s);
}

Eigen::VectorXd PerturbedOperator::apply_phi1(double h,
                                              const Eigen::VectorXd& s) const {
  if (!(h > 0.0)) throw Error("phi1: step must be positive");
  return apply_spectral_fn([h](double nu) { return phi1_scalar(h * nu); }, s);
}

Eigen::VectorXd PerturbedOperator::apply_phi2(double h,
                                              const Eigen::VectorXd& s) const {
  if (!(h > 0.0)) throw Error("phi2: step must be positive");
  return apply_spectral_fn([h](double nu) { return phi2_scalar(h * nu); }, s);
}

Eigen::VectorXd PerturbedOperator::solve_shifted(
    double h, const Eigen::VectorXd& rhs) const {
  if (!(h > 0.0)) throw Error("shifted solve: step must be positive");
  if (!(1.0 - h * nu_max_ > 0.0))
    throw Error("shifted solve: I - hA is not positive definite; reduce h "
                "below 1/max(c)");
  return apply_spectral_fn([h](double nu) { return 1.0 / (1.0 - h * nu); },
                           rhs);
}

OperatorPtr assemble(const BasisPtr& basis, const GridFunction& c) {
  require_same_domain(basis->domain, c.domain, "assemble");
  auto op = std::make_shared<PerturbedOperator>();
  op->backend = Backend::spectral;
  op->domain = basis->domain;
  op->potential = c;
  op->basis = basis;
  const int K = basis->count();

  if (c.values.cwiseAbs().maxCoeff() == 0.0) {
    // pure Laplacian: already diagonal in the sine basis
    op->diagonal_ = true;
    op->evals_ = (-basis->mu).reverse().eval();
    op->nu_max_ = -basis->mu[0];
    return op;
  }

  Eigen::MatrixXd M = basis->phi.transpose() *
                      (c.values.asDiagonal() * basis->phi) *
                      basis->domain.quad_weight();
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  op->asymmetry_ = (M - M.transpose()).cwiseAbs().maxCoeff() / scale;
  if (op->asymmetry_ > 1e-8)
    op->warnings_.push_back(
        "assemble: quadrature asymmetry " + std::to_string(op->asymmetry_) +
        " exceeds 1e-8 before symmetrization; increase nodes");
  Eigen::MatrixXd A = 0.5 * (M + M.transpose());
  A.diagonal() -= basis->mu;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success)
    throw Error("assemble: eigendecomposition failed");
  op->evals_ = es.eigenvalues();
  op->evecs_ = es.eigenvectors();
  op->nu_max_ = op->evals_[K - 1];
  op->factorization_residual_ =
      (A - op->evecs_ * op->evals_.asDiagonal() * op->evecs_.transpose())
          .norm() /
      std::max(1e-300, A.norm());
  if (op->factorization_residual_ > 1e-10)
    throw Error("assemble: factorization residual exceeds 1e-10");
  return op;
}

OperatorPtr assemble(const DomainSpec& domain, const GridFunction& c, int K) {
  return assemble(dirichlet_eigenpairs(domain, K), c);
}

OperatorPtr assemble_fd(const DomainSpec& domain, const GridFunction& c) {
  require_same_domain(domain, c.domain, "assemble_fd");
  auto op = std::make_shared<PerturbedOperator>();
  op->backend = Backend::finite_difference;
  op->domain = domain;
  op->potential = c;
  const int n = domain.node_count();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);

  if (domain.dim == 1) {
    const double idx2 = 1.0 / (domain.spacing(0) * domain.spacing(0));
    for (int i = 0; i < n; ++i) {
      A(i, i) = -2.0 * idx2 + c.values[i];
      if (i > 0) A(i, i - 1) = idx2;
      if (i + 1 < n) A(i, i + 1) = idx2;
    }
  } else {
    const int nx = domain.nodes[0];
    const double ix2 = 1.0 / (domain.spacing(0) * domain.spacing(0));
    const double iy2 = 1.0 / (domain.spacing(1) * domain.spacing(1));
    for (int i = 0; i < n; ++i) {
      const int cx = i % nx, cy = i / nx;
      A(i, i) = -2.0 * (ix2 + iy2) + c.values[i];
      if (cx > 0) A(i, i - 1) = ix2;
      if (cx + 1 < nx) A(i, i + 1) = ix2;
      if (cy > 0) A(i, i - nx) = iy2;
      if (cy + 1 < domain.nodes[1]) A(i, i + nx) = iy2;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success)
    throw Error("assemble_fd: eigendecomposition failed");
  op->evals_ = es.eigenvalues();
  op->evecs_ = es.eigenvectors();
  op->nu_max_ = op->evals_[n - 1];
  op->factorization_residual_ =
      (A - op->evecs_ * op->evals_.asDiagonal() * op->evecs_.transpose())
          .norm() /
      std::max(1e-300, A.norm());
  if (op->factorization_residual_ > 1e-10)
    throw Error("assemble_fd: factorization residual exceeds 1e-10");
  return op;
}

GridFunction apply_semigroup(const PerturbedOperator& op, double t,
                             const GridFunction& v) {
  if (t < 0.0) throw Error("semigroup: forward time only (t >= 0)");
  if (t == 0.0) return v;
  return op.to_grid(op.apply_expm(t, op.to_native(v)));
}

GridFunction phi1_apply(const PerturbedOperator& op, double h,
                        const GridFunction& v) {
  return op.to_grid(op.apply_phi1(h, op.to_native(v)));
}

PrincipalEigenvalue principal_eigenvalue(const DomainSpec& domain,
                                         const GridFunction& c, int K) {
  const auto coarse = assemble(domain, c, K);
  const auto fine = assemble(domain, c, 2 * K);  // throws if unresolvable
  const double lam_k = -coarse->spectral_bound();
  const double lam_2k = -fine->spectral_bound();
  const double err = std::abs(lam_k - lam_2k);
  if (err > 1e-4 * (1.0 + std::abs(lam_2k)))
    throw ResolutionError(
        "principal eigenvalue: K-refinement did not converge (|lambda_K - "
        "lambda_2K| = " +
        std::to_string(err) + ")");
  return {lam_2k, err};
}

}  // namespace rdlab
