#include "rdlab/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rdlab {

namespace {

// sampled sine column: sqrt(2/l) sin(k pi x / l) at interior nodes
Eigen::VectorXd sine_column(double length, int n, int k) {
  Eigen::VectorXd col(n);
  const double scale = std::sqrt(2.0 / length);
  for (int i = 0; i < n; ++i) {
    const double x = (i + 1) * length / (n + 1);
    col[i] = scale * std::sin(k * std::numbers::pi * x / length);
  }
  return col;
}

}  // namespace

BasisPtr dirichlet_eigenpairs(const DomainSpec& domain, int K) {
  if (K < 1) throw Error("eigenbasis: K must be positive");
  auto basis = std::make_shared<EigenBasis>();
  basis->domain = domain;

  if (domain.dim == 1) {
    const int n = domain.nodes[0];
    if (K > n)
      throw ResolutionError("eigenbasis: K = " + std::to_string(K) +
                            " exceeds resolution; at most " +
                            std::to_string(n) + " modes on this grid");
    basis->mu.resize(K);
    basis->phi.resize(n, K);
    basis->mode_index.resize(K);
    const double l = domain.extent[0];
    for (int k = 1; k <= K; ++k) {
      basis->mu[k - 1] = std::pow(k * std::numbers::pi / l, 2);
      basis->phi.col(k - 1) = sine_column(l, n, k);
      basis->mode_index[k - 1] = {k, 0};
    }
    return basis;
  }

  const int nx = domain.nodes[0], ny = domain.nodes[1];
  if (K > nx * ny)
    throw ResolutionError("eigenbasis: K = " + std::to_string(K) +
                          " exceeds resolution; at most " +
                          std::to_string(nx * ny) + " modes on this grid");
  const double lx = domain.extent[0], ly = domain.extent[1];

  struct Mode {
    double mu;
    int jx, jy;
  };
  std::vector<Mode> modes;
  modes.reserve(static_cast<std::size_t>(nx) * ny);
  for (int jx = 1; jx <= nx; ++jx)
    for (int jy = 1; jy <= ny; ++jy)
      modes.push_back({std::pow(jx * std::numbers::pi / lx, 2) +
                           std::pow(jy * std::numbers::pi / ly, 2),
                       jx, jy});
  std::sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) {
    if (a.mu != b.mu) return a.mu < b.mu;
    if (a.jx != b.jx) return a.jx < b.jx;
    return a.jy < b.jy;
  });

  basis->mu.resize(K);
  basis->phi.resize(nx * ny, K);
  basis->mode_index.resize(K);
  // cache per-axis sine tables
  Eigen::MatrixXd sx(nx, nx), sy(ny, ny);
  for (int k = 1; k <= nx; ++k) sx.col(k - 1) = sine_column(lx, nx, k);
  for (int k = 1; k <= ny; ++k) sy.col(k - 1) = sine_column(ly, ny, k);

  for (int k = 0; k < K; ++k) {
    const auto& m = modes[k];
    basis->mu[k] = m.mu;
    basis->mode_index[k] = {m.jx, m.jy};
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix)
        basis->phi(iy * nx + ix, k) = sx(ix, m.jx - 1) * sy(iy, m.jy - 1);
  }
  return basis;
}

Eigen::VectorXd to_modes(const GridFunction& f, const EigenBasis& basis) {
  require_same_domain(f.domain, basis.domain, "to_modes");
  return basis.domain.quad_weight() * (basis.phi.transpose() * f.values);
}

GridFunction synthesize(const Eigen::VectorXd& coeffs,
                        const EigenBasis& basis) {
  if (coeffs.size() != basis.count())
    throw MismatchError("synthesize: coefficient count does not match basis");
  return GridFunction(basis.domain, basis.phi * coeffs);
}

Eigen::VectorXd project_formula(
    const std::function<double(double, double)>& f, const EigenBasis& basis,
    const std::vector<std::array<double, 2>>& singular, int oversample) {
  const DomainSpec& d = basis.domain;
  int kx_max = 1, ky_max = 1;
  for (const auto& idx : basis.mode_index) {
    kx_max = std::max(kx_max, idx[0]);
    ky_max = std::max(ky_max, idx[1]);
  }

  RefinedQuadOptions optx;
  optx.base_panels = std::max(256, oversample * kx_max);
  std::vector<double> sx, sy;
  for (const auto& s : singular) {
    sx.push_back(s[0]);
    sy.push_back(s[1]);
  }
  std::vector<double> px, wx;
  refined_axis_rule(0.0, d.extent[0], sx, optx, px, wx);

  if (d.dim == 1) {
    Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(basis.count());
    const double scale = std::sqrt(2.0 / d.extent[0]);
    for (std::size_t i = 0; i < px.size(); ++i) {
      const double fv = wx[i] * f(px[i], 0.0);
      // sin(k theta) by recurrence across k
      const double theta = std::numbers::pi * px[i] / d.extent[0];
      const double c2 = 2.0 * std::cos(theta);
      double s_prev = 0.0, s_cur = std::sin(theta);
      for (int k = 0; k < kx_max; ++k) {
        if (k + 1 <= basis.count() && basis.mode_index[k][0] == k + 1)
          coeffs[k] += fv * scale * s_cur;
        const double s_next = c2 * s_cur - s_prev;
        s_prev = s_cur;
        s_cur = s_next;
      }
    }
    return coeffs;
  }

  RefinedQuadOptions opty;
  opty.base_panels = std::max(256, oversample * ky_max);
  std::vector<double> py, wy;
  refined_axis_rule(0.0, d.extent[1], sy, opty, py, wy);

  // inner sine transform in x per y-point, then the outer sum in y
  const double sc_x = std::sqrt(2.0 / d.extent[0]);
  const double sc_y = std::sqrt(2.0 / d.extent[1]);
  Eigen::MatrixXd inner(kx_max, py.size());
  for (std::size_t iy = 0; iy < py.size(); ++iy) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(kx_max);
    for (std::size_t ix = 0; ix < px.size(); ++ix) {
      const double fv = wx[ix] * f(px[ix], py[iy]);
      const double theta = std::numbers::pi * px[ix] / d.extent[0];
      const double c2 = 2.0 * std::cos(theta);
      double s_prev = 0.0, s_cur = std::sin(theta);
      for (int k = 0; k < kx_max; ++k) {
        acc[k] += fv * sc_x * s_cur;
        const double s_next = c2 * s_cur - s_prev;
        s_prev = s_cur;
        s_cur = s_next;
      }
    }
    inner.col(iy) = acc;
  }

  Eigen::MatrixXd siny(ky_max, py.size());
  for (std::size_t iy = 0; iy < py.size(); ++iy) {
    const double theta = std::numbers::pi * py[iy] / d.extent[1];
    const double c2 = 2.0 * std::cos(theta);
    double s_prev = 0.0, s_cur = std::sin(theta);
    for (int k = 0; k < ky_max; ++k) {
      siny(k, iy) = sc_y * s_cur;
      const double s_next = c2 * s_cur - s_prev;
      s_prev = s_cur;
      s_cur = s_next;
    }
  }

  Eigen::VectorXd coeffs(basis.count());
  for (int k = 0; k < basis.count(); ++k) {
    const int jx = basis.mode_index[k][0], jy = basis.mode_index[k][1];
    double acc = 0.0;
    for (std::size_t iy = 0; iy < py.size(); ++iy)
      acc += wy[iy] * siny(jy - 1, iy) * inner(jx - 1, iy);
    coeffs[k] = acc;
  }
  return coeffs;
}

}  // namespace rdlab
